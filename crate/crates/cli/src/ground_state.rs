//! Single ground-state runs: the binary field file, its JSON sidecar and
//! the `verify` check.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use schmidt_bec::solver::io::{FieldCheck, FieldFile};
use schmidt_bec::solver::{
    average_density_of, purity_by_quadrature, purity_of, relax_ground_state, schmidt_decompose, EnergyParts, Numerics,
};
use schmidt_bec::units::ProblemSpec;

use crate::config::RunConfig;
use crate::sweep::solver_grid;
use crate::CliError;

/// Scalars written next to a field file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub version: String,
    pub config_sha256: String,
    pub problem_hash: u64,
    pub atom_number: f64,
    pub points: [usize; 3],
    /// Half-widths in ρ₀.
    pub half_width: [f64; 3],
    /// ρ₀ [m].
    pub length_unit: f64,
    /// ħω_T [J].
    pub energy_unit: f64,
    pub mu_over_hbar_omega_t: f64,
    pub energy_parts: EnergyParts,
    pub residual: f64,
    pub iterations: usize,
    /// Nη in (ρ₀²a)⁻¹.
    pub n_eta: f64,
    pub purity_svd: f64,
    pub purity_quadrature: f64,
    pub lambda1: f64,
    pub numerics: Numerics,
    pub runtime_s: f64,
}

pub fn sidecar_path(field: &Path) -> PathBuf {
    let mut name = field.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

/// First eight bytes of SHA-256 over the problem definition.
pub fn problem_hash(spec: &ProblemSpec) -> u64 {
    let bytes = serde_json::to_vec(spec).expect("plain data serializes");
    let digest = Sha256::digest(bytes);
    u64::from_le_bytes(digest[..8].try_into().unwrap())
}

pub fn cmd_ground_state(cfg: &RunConfig, n: f64, out: &Path) -> Result<Sidecar, CliError> {
    cfg.require_anisotropic()?;
    let spec = cfg.problem_spec(n)?;
    let p = cfg.problem(n);
    let grid = solver_grid(cfg, &p).map_err(|e| CliError::Config(format!("grid: {e}")))?;
    let state = relax_ground_state(&p, &grid, &cfg.numerics).map_err(|e| CliError::Numerical(e.to_string()))?;
    let spectrum = schmidt_decompose(&state.psi, &grid, 0).map_err(|e| CliError::Numerical(e.to_string()))?;
    let report = purity_of(&spectrum);
    let hash = problem_hash(&spec);
    let sidecar = Sidecar {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config_sha256: cfg.hash(),
        problem_hash: hash,
        atom_number: n,
        points: grid.points,
        half_width: grid.half_width,
        length_unit: p.length_unit,
        energy_unit: p.energy_unit,
        mu_over_hbar_omega_t: state.mu,
        energy_parts: state.energy_parts,
        residual: state.residual,
        iterations: state.iterations,
        n_eta: average_density_of(&state, n) * p.a,
        purity_svd: report.purity,
        purity_quadrature: purity_by_quadrature(&state.psi, &grid).map_err(|e| CliError::Numerical(e.to_string()))?,
        lambda1: report.lambda1_estimate,
        numerics: cfg.numerics.clone(),
        runtime_s: state.runtime_s,
    };
    FieldFile {
        grid,
        length_unit: p.length_unit,
        problem_hash: hash,
        psi: state.psi,
    }
    .write(out)
    .map_err(|e| CliError::Io(e.to_string()))?;
    std::fs::write(sidecar_path(out), serde_json::to_string_pretty(&sidecar)?)?;
    Ok(sidecar)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub check: FieldCheck,
    pub problem_hash: u64,
    /// Whether a sidecar was found and its hash matched.
    pub sidecar_matches: Option<bool>,
}

pub const NORM_TOLERANCE: f64 = 1e-8;
pub const SYMMETRY_TOLERANCE: f64 = 1e-6;

/// Reads a field file and checks norm, reflection symmetry and sidecar.
pub fn cmd_verify(path: &Path) -> Result<VerifyReport, CliError> {
    let field = FieldFile::read(path).map_err(|e| CliError::Io(e.to_string()))?;
    let check = field.check();
    let sidecar_matches = match std::fs::read_to_string(sidecar_path(path)) {
        Ok(text) => {
            let s: Sidecar = serde_json::from_str(&text)?;
            Some(s.problem_hash == field.problem_hash && s.points == field.grid.points)
        }
        Err(_) => None,
    };
    let report = VerifyReport {
        check,
        problem_hash: field.problem_hash,
        sidecar_matches,
    };
    if (check.norm - 1.0).abs() > NORM_TOLERANCE
        || check.max_asymmetry > SYMMETRY_TOLERANCE
        || sidecar_matches == Some(false)
    {
        return Err(CliError::Numerical(format!(
            "field check failed: norm {:.12}, asymmetry {:.3e}, sidecar match {:?}",
            check.norm, check.max_asymmetry, sidecar_matches
        )));
    }
    Ok(report)
}
