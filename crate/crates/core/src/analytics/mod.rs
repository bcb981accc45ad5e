//! First-order Schmidt perturbation theory for tightly confined condensates.

pub mod assemble;
pub mod geometry;
pub mod modes;
pub mod tf;

use serde::{Deserialize, Serialize};

pub use assemble::assemble_wavefunction;
pub use geometry::{geometry_constants, transverse_overlaps, upsilon_series, GeometryConstants};
pub use modes::{
    lambda1_closed, purity_first_order, transverse_schmidt, Basis, ModeExpansion, TransverseSchmidt,
    DEFAULT_N_MAX,
};
pub use tf::{
    average_density, chemical_potential, longitudinal_profiles, solve_rl, AverageDensity, LongitudinalProfiles,
    RlMode,
};

use crate::error::Result;
use crate::regime::tf_radius_zero;
use crate::units::ScaledProblem;

/// Every first-order output for one problem, in trap units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedModel {
    pub r_l0: f64,
    pub r_l: f64,
    pub r_l_first_order: f64,
    pub mu_l: f64,
    pub mu_l_first_order: f64,
    /// E₀ + μ_L on the exact root.
    pub mu_total: f64,
    pub mu_total_first_order: f64,
    pub lambda1: f64,
    pub purity: f64,
    /// Per-atom average density η (first order).
    pub eta: f64,
    pub eta_dominant: f64,
    pub eta_l_tilde: f64,
    pub constants: GeometryConstants,
    pub transverse: TransverseSchmidt,
    pub profiles: LongitudinalProfiles,
}

/// Builds the model and samples the longitudinal profiles at `r_samples`.
pub fn reduced_model(p: &ScaledProblem, r_samples: &[f64]) -> Result<ReducedModel> {
    p.require_interacting()?;
    let constants = geometry_constants(p)?;
    let r_l0 = tf_radius_zero(p)?;
    let (r_l, mu_l) = solve_rl(p, RlMode::Exact)?;
    let (r_l_first_order, _) = solve_rl(p, RlMode::FirstOrder)?;
    let mu_l_first_order = tf::mu_l_first_order(p)?;
    let e0 = p.transverse_ground_energy();
    let transverse = transverse_schmidt(p, DEFAULT_N_MAX)?;
    let lambda1 = if p.is_harmonic() {
        lambda1_closed(p)?
    } else {
        transverse.lambda1
    };
    let density = average_density(p)?;
    let d = p.geometry.df();
    let eta_l_tilde = constants.eta_l
        * (1.0 - 3.0 * p.geometry.upsilon_scaled() * p.q / (p.q + d) * p.k * r_l0.powf(p.q));
    Ok(ReducedModel {
        r_l0,
        r_l,
        r_l_first_order,
        mu_l,
        mu_l_first_order,
        mu_total: e0 + mu_l,
        mu_total_first_order: e0 + mu_l_first_order,
        lambda1,
        purity: (1.0 - 2.0 * lambda1).clamp(0.0, 1.0),
        eta: density.full / p.n,
        eta_dominant: density.dominant / p.n,
        eta_l_tilde,
        constants,
        transverse,
        profiles: longitudinal_profiles(p, r_samples)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::Geometry;

    #[test]
    fn model_fields_are_consistent() {
        let p = ScaledProblem::harmonic(Geometry::Cigar, 0.02, 0.0074, 2000.0);
        let m = reduced_model(&p, &[0.0, 10.0]).unwrap();
        assert!(m.r_l < m.r_l0 && m.r_l_first_order < m.r_l0);
        assert!(m.mu_l > 0.0);
        assert!((m.mu_total - chemical_potential(&p, RlMode::Exact).unwrap()).abs() < 1e-15);
        assert!((m.purity - purity_first_order(&p).unwrap()).abs() < 1e-15);
        assert!((m.transverse.lambda1 / m.lambda1 - 1.0).abs() < 1e-8);
        assert!(m.eta_l_tilde < m.constants.eta_l);
        assert_eq!(m.profiles.r.len(), 2);
    }

    #[test]
    fn single_atom_is_degenerate() {
        let p = ScaledProblem::harmonic(Geometry::Pancake, 0.02, 0.0074, 1.0);
        assert!(reduced_model(&p, &[]).is_err());
    }
}
