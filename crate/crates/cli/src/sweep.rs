//! N-sweeps across methods and their CSV output.
//!
//! Columns, after one `#` comment line carrying the tool version and the
//! config hash:
//!
//! | column                | unit                     |
//! |-----------------------|--------------------------|
//! | `N`                   | atoms                    |
//! | `N_over_NT`           | N/N_T                    |
//! | `method`              | method name              |
//! | `mu_over_hbar_omegaT` | ħω_T                     |
//! | `N_eta`               | (ρ₀²a)⁻¹                 |
//! | `purity`              | dimensionless            |
//! | `R_L`                 | ρ₀                       |
//! | `runtime_s`           | seconds                  |
//! | `error`               | message, empty on success |
//!
//! Missing observables are written as `null`.

use std::io::Write;
use std::time::Instant;

use log::warn;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use schmidt_bec::analytics::{average_density, reduced_model};
use schmidt_bec::grid::Grid;
use schmidt_bec::regime::{classify, lower_critical_n, upper_critical_n, RegimeLabel};
use schmidt_bec::solver::{average_density_of, purity_of, relax_ground_state, schmidt_decompose};
use schmidt_bec::units::ScaledProblem;
use schmidt_bec::variational::{solve_variational, variational_average_density, variational_purity};

use crate::config::{Method, RunConfig};
use crate::CliError;

pub const COLUMNS: [&str; 9] = [
    "N",
    "N_over_NT",
    "method",
    "mu_over_hbar_omegaT",
    "N_eta",
    "purity",
    "R_L",
    "runtime_s",
    "error",
];

pub const NULL: &str = "null";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: f64,
    pub n_over_nt: f64,
    pub method: Method,
    pub mu_over_hbar_omega_t: Option<f64>,
    /// In (ρ₀²a)⁻¹.
    pub n_eta: Option<f64>,
    pub purity: Option<f64>,
    /// In ρ₀.
    pub r_l: Option<f64>,
    pub runtime_s: f64,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, Default)]
struct Observables {
    mu: Option<f64>,
    n_eta: Option<f64>,
    purity: Option<f64>,
    r_l: Option<f64>,
}

fn evaluate(cfg: &RunConfig, p: &ScaledProblem, method: Method) -> Result<Observables, String> {
    let to_csv_density = |v: f64| v * p.a;
    match method {
        Method::FormulaFirstOrder | Method::FormulaExactRl => {
            let m = reduced_model(p, &[]).map_err(|e| e.to_string())?;
            let density = average_density(p).map_err(|e| e.to_string())?;
            let exact = method == Method::FormulaExactRl;
            Ok(Observables {
                mu: Some(if exact { m.mu_total } else { m.mu_total_first_order }),
                n_eta: Some(to_csv_density(if exact { density.exact_rl } else { density.full })),
                purity: Some(m.purity),
                r_l: Some(if exact { m.r_l } else { m.r_l_first_order }),
            })
        }
        Method::Variational => {
            let s = solve_variational(p).map_err(|e| e.to_string())?;
            Ok(Observables {
                mu: Some(s.mu_d),
                n_eta: Some(to_csv_density(variational_average_density(&s, p.n))),
                purity: Some(variational_purity(&s)),
                r_l: Some(s.r_dl),
            })
        }
        Method::Solver3d => {
            let grid = solver_grid(cfg, p).map_err(|e| e.to_string())?;
            let state = relax_ground_state(p, &grid, &cfg.numerics).map_err(|e| e.to_string())?;
            let spectrum = schmidt_decompose(&state.psi, &grid, 0).map_err(|e| e.to_string())?;
            Ok(Observables {
                mu: Some(state.mu),
                n_eta: Some(to_csv_density(average_density_of(&state, p.n))),
                purity: Some(purity_of(&spectrum).purity),
                r_l: None,
            })
        }
    }
}

pub fn solver_grid(cfg: &RunConfig, p: &ScaledProblem) -> schmidt_bec::Result<Grid> {
    match cfg.grid_points {
        Some(points) => Grid::for_problem(p, points),
        None => Grid::default_for(p),
    }
}

/// Refuses solver runs whose working set would exceed `cap` bytes.
pub fn check_memory(cfg: &RunConfig, cap: u64) -> Result<(), CliError> {
    if !cfg.methods.contains(&Method::Solver3d) {
        return Ok(());
    }
    for &n in &cfg.atoms {
        let grid = solver_grid(cfg, &cfg.problem(n)).map_err(|e| CliError::Config(format!("grid: {e}")))?;
        let need = grid.relaxation_memory_bytes();
        if need > cap {
            return Err(CliError::Config(format!(
                "grid.points: solver grid {:?} needs about {:.2} GiB, above the {:.2} GiB cap",
                grid.points,
                need as f64 / GIB,
                cap as f64 / GIB
            )));
        }
    }
    Ok(())
}

pub const GIB: f64 = 1024.0 * 1024.0 * 1024.0;

fn run_point(cfg: &RunConfig, n: f64, n_t: f64, method: Method) -> SweepRow {
    let p = cfg.problem(n);
    let start = Instant::now();
    let result = evaluate(cfg, &p, method);
    let runtime_s = start.elapsed().as_secs_f64();
    let (obs, error) = match result {
        Ok(o) => (o, None),
        Err(e) => {
            warn!("N = {n}, {method}: {e}");
            (Observables::default(), Some(e))
        }
    };
    SweepRow {
        n,
        n_over_nt: n / n_t,
        method,
        mu_over_hbar_omega_t: obs.mu,
        n_eta: obs.n_eta,
        purity: obs.purity,
        r_l: obs.r_l,
        runtime_s,
        error,
    }
}

fn warn_regime(cfg: &RunConfig, n_t: f64) {
    let p = cfg.problem(2.0);
    let Ok(n_l) = lower_critical_n(&p) else { return };
    for &n in &cfg.atoms {
        match classify(n, n_l, n_t) {
            RegimeLabel::BelowTF => warn!("N = {n:.1} is below N_L = {n_l:.1}; Thomas-Fermi formulas are unreliable"),
            RegimeLabel::Crossover => warn!("N = {n:.1} is above N_T = {n_t:.1}; perturbation theory is unreliable"),
            RegimeLabel::ReducedDim => {}
        }
    }
}

/// Runs every (N, method) pair on `workers` threads. Rows come back sorted
/// by N, then method name, whatever the completion order.
pub fn cmd_sweep(cfg: &RunConfig, workers: usize) -> Result<Vec<SweepRow>, CliError> {
    cfg.require_anisotropic()?;
    let n_t = upper_critical_n(&cfg.problem(2.0)).map_err(|e| CliError::Config(e.to_string()))?;
    warn_regime(cfg, n_t);
    let jobs: Vec<(f64, Method)> = cfg
        .atoms
        .iter()
        .flat_map(|&n| cfg.methods.iter().map(move |&m| (n, m)))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| CliError::Config(format!("workers: {e}")))?;
    let mut rows: Vec<SweepRow> = pool.install(|| jobs.par_iter().map(|&(n, m)| run_point(cfg, n, n_t, m)).collect());
    rows.sort_by(|a, b| a.n.total_cmp(&b.n).then(a.method.name().cmp(b.method.name())));
    Ok(rows)
}

pub fn header_comment(cfg: &RunConfig) -> String {
    format!("# schmidt-bec {} config-sha256={}", env!("CARGO_PKG_VERSION"), cfg.hash())
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_else(|| NULL.to_string())
}

pub fn write_csv<W: Write>(cfg: &RunConfig, rows: &[SweepRow], mut out: W) -> Result<(), CliError> {
    writeln!(out, "{}", header_comment(cfg))?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for r in rows {
        w.write_record([
            format!("{:e}", r.n),
            format!("{:e}", r.n_over_nt),
            r.method.name().to_string(),
            opt(r.mu_over_hbar_omega_t),
            opt(r.n_eta),
            opt(r.purity),
            opt(r.r_l),
            format!("{:.6}", r.runtime_s),
            r.error.clone().unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(extra: &str) -> RunConfig {
        RunConfig::from_toml(&format!("[trap]\nomega_t_hz = 175.0\nomega_l_hz = 3.5\nd = 1\n{extra}")).unwrap()
    }

    #[test]
    fn rows_sorted_and_complete() {
        let c = cfg("[sweep]\nrelative = true\nn = [0.1, 0.01]\n");
        let rows = cmd_sweep(&c, 3).unwrap();
        assert_eq!(rows.len(), 6);
        assert!(rows.windows(2).all(|w| w[0].n <= w[1].n));
        assert_eq!(rows[0].method, Method::FormulaExactRl);
        assert_eq!(rows[2].method, Method::Variational);
        assert!(rows.iter().all(|r| r.error.is_none() && r.purity.unwrap() <= 1.0));
    }

    #[test]
    fn failures_are_recorded_per_row() {
        let c = cfg("[sweep]\nn = [1.0, 100.0]\nmethods = [\"formula-first-order\"]\n");
        let rows = cmd_sweep(&c, 1).unwrap();
        assert!(rows[0].error.is_some() && rows[0].mu_over_hbar_omega_t.is_none());
        assert!(rows[1].error.is_none());
        let mut buf = Vec::new();
        write_csv(&c, &rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.lines().nth(2).unwrap().contains(",null,null,null,null,"));
    }

    #[test]
    fn memory_cap_refuses_large_grids() {
        let c = cfg("[sweep]\nn = [1000.0]\nmethods = [\"solver-3d\"]\n");
        assert!(check_memory(&c, 4 * (1 << 30)).is_ok());
        assert!(matches!(check_memory(&c, 1 << 20), Err(CliError::Config(_))));
        let formula_only = cfg("[sweep]\nn = [1000.0]\n");
        assert!(check_memory(&formula_only, 0).is_ok());
    }
}
