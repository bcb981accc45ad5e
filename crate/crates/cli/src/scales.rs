//! Regime scales of a trap and the expansion parameter along the sweep.

use std::io::Write;

use serde::{Deserialize, Serialize};

use schmidt_bec::regime::{regime_report, RegimeLabel, RegimeReport};

use crate::config::RunConfig;
use crate::CliError;

pub const COLUMNS: [&str; 12] = [
    "N",
    "N_over_NT",
    "epsilon",
    "R_L0_m",
    "regime",
    "rho0_m",
    "r0_m",
    "N_L",
    "N_T",
    "aspect_bare",
    "aspect_at_NT",
    "R_L0_at_NT_m",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalesRow {
    pub n: f64,
    pub report: RegimeReport,
}

pub fn cmd_scales(cfg: &RunConfig) -> Result<Vec<ScalesRow>, CliError> {
    cfg.atoms
        .iter()
        .map(|&n| {
            let report = regime_report(&cfg.problem(n)).map_err(|e| CliError::Numerical(e.to_string()))?;
            Ok(ScalesRow { n, report })
        })
        .collect()
}

fn label(l: RegimeLabel) -> &'static str {
    match l {
        RegimeLabel::BelowTF => "below-TF",
        RegimeLabel::ReducedDim => "reduced-dim",
        RegimeLabel::Crossover => "crossover",
    }
}

/// Human-readable summary of the N-independent scales.
pub fn summary(rows: &[ScalesRow]) -> String {
    let Some(r) = rows.first().map(|r| r.report) else {
        return String::new();
    };
    format!(
        "rho0 = {:.4e} m\nr0 = {:.4e} m\nN_L = {:.1}\nN_T = {:.1}\naspect ratio of the bare trap 1:{:.2}\naspect ratio at N_T 1:{:.1}\n",
        r.rho0,
        r.r0,
        r.n_l,
        r.n_t,
        r.aspect_ratio_bare(),
        r.aspect_ratio_at_nt()
    )
}

pub fn write_csv<W: Write>(cfg: &RunConfig, rows: &[ScalesRow], mut out: W) -> Result<(), CliError> {
    writeln!(out, "{}", crate::sweep::header_comment(cfg))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for row in rows {
        let r = &row.report;
        w.write_record([
            format!("{:e}", row.n),
            format!("{:e}", row.n / r.n_t),
            format!("{:e}", r.epsilon),
            format!("{:e}", r.r_l0),
            label(r.regime_label).to_string(),
            format!("{:e}", r.rho0),
            format!("{:e}", r.r0),
            format!("{:e}", r.n_l),
            format!("{:e}", r.n_t),
            format!("{:e}", r.aspect_ratio_bare()),
            format!("{:e}", r.aspect_ratio_at_nt()),
            format!("{:e}", r.r_l0_at_nt),
        ])?;
    }
    w.flush()?;
    Ok(())
}
