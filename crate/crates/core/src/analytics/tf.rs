//! Longitudinal Thomas-Fermi solution of the reduced equation: the radius
//! R_L, the chemical potential, the sampled profiles and the average
//! density. Everything here is in trap units and uses ε = 1.

use std::f64::consts::PI;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::analytics::geometry::longitudinal_etas;
use crate::error::Result;
use crate::regime::{lower_critical_n, tf_radius_zero};
use crate::roots::expanding_root;
use crate::units::ScaledProblem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RlMode {
    /// Root of the full normalization condition.
    Exact,
    /// R_L0 + R_L1.
    FirstOrder,
}

/// 3(Υ_T/η_T²)·q/(2q+d): coefficient of k R^q in the normalization bracket.
fn quintic_weight(p: &ScaledProblem) -> f64 {
    let d = p.geometry.df();
    3.0 * p.geometry.upsilon_scaled() * p.q / (2.0 * p.q + d)
}

/// Normalization residual (R/R_L0)^{q+d}(1 + c·kR^q) − 1.
pub fn rl_residual(p: &ScaledProblem, r_l0: f64, r: f64) -> f64 {
    let d = p.geometry.df();
    (r / r_l0).powf(p.q + d) * (1.0 + quintic_weight(p) * p.k * r.powf(p.q)) - 1.0
}

/// R_L1/R_L0 = −3(Υ_T/η_T²)·q/((2q+d)(q+d))·kR_L0^q.
pub fn rl_first_order_ratio(p: &ScaledProblem, r_l0: f64) -> f64 {
    let d = p.geometry.df();
    -quintic_weight(p) / (p.q + d) * p.k * r_l0.powf(p.q)
}

/// (R_L, μ_L) in trap units.
pub fn solve_rl(p: &ScaledProblem, mode: RlMode) -> Result<(f64, f64)> {
    let r_l0 = tf_radius_zero(p)?;
    let r = match mode {
        RlMode::FirstOrder => r_l0 * (1.0 + rl_first_order_ratio(p, r_l0)),
        RlMode::Exact => expanding_root(|r| rl_residual(p, r_l0, r), 0.5 * r_l0, 2.0 * r_l0, 1e-15)?,
    };
    Ok((r, p.v_l(r)))
}

/// Longitudinal chemical potential without the quintic correction.
pub fn mu_l_zero_order(p: &ScaledProblem) -> Result<f64> {
    Ok(p.v_l(tf_radius_zero(p)?))
}

/// μ_L = ½kR_L0^q(1 − 3(Υ_T/η_T²)·q²/((2q+d)(q+d))·kR_L0^q).
pub fn mu_l_first_order(p: &ScaledProblem) -> Result<f64> {
    let r_l0 = tf_radius_zero(p)?;
    let mu0 = p.v_l(r_l0);
    Ok(mu0 * (1.0 + p.q * rl_first_order_ratio(p, r_l0)))
}

/// μ = E₀ + μ_L in units of ħω_T, where E₀ = D/2.
///
/// At N = 1 there is no interaction and μ_L vanishes.
pub fn chemical_potential(p: &ScaledProblem, mode: RlMode) -> Result<f64> {
    let e0 = p.transverse_ground_energy();
    if p.n <= 1.0 {
        return Ok(e0);
    }
    let mu_l = match mode {
        RlMode::Exact => solve_rl(p, RlMode::Exact)?.1,
        RlMode::FirstOrder => mu_l_first_order(p)?,
    };
    Ok(e0 + mu_l)
}

/// Sampled longitudinal profiles, one row per requested radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LongitudinalProfiles {
    pub r: Vec<f64>,
    pub phi0_sq: Vec<f64>,
    pub phi00_sq: Vec<f64>,
    pub phi1: Vec<f64>,
    /// η_T − 3g̃Υ_Tφ₀²(r)
    pub eta_t_rectified: Vec<f64>,
}

impl LongitudinalProfiles {
    pub const COLUMNS: [&'static str; 5] = ["r", "phi0_sq", "phi00_sq", "phi1", "eta_t_rectified"];

    pub fn rows(&self) -> impl Iterator<Item = [f64; 5]> + '_ {
        (0..self.r.len()).map(move |i| {
            [
                self.r[i],
                self.phi0_sq[i],
                self.phi00_sq[i],
                self.phi1[i],
                self.eta_t_rectified[i],
            ]
        })
    }
}

/// Pointwise profile evaluator, shared by the sampler and the wavefunction
/// assembly.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ProfileModel {
    p: ScaledProblem,
    mu_l: f64,
    mu_l0: f64,
    g_eta_t: f64,
    eta_l: f64,
    delta_eta_l: f64,
}

impl ProfileModel {
    pub(crate) fn new(p: &ScaledProblem) -> Result<Self> {
        let r_l0 = tf_radius_zero(p)?;
        let (_, mu_l) = solve_rl(p, RlMode::Exact)?;
        let (eta_l, delta_eta_l) = longitudinal_etas(p)?;
        Ok(Self {
            p: *p,
            mu_l,
            mu_l0: p.v_l(r_l0),
            g_eta_t: p.g_tilde() * p.eta_t(),
            eta_l,
            delta_eta_l,
        })
    }

    /// φ₀² with the first-order quintic correction, zero beyond R_L.
    pub(crate) fn phi0_sq(&self, r: f64) -> f64 {
        let x = ((self.mu_l - self.p.v_l(r)) / self.g_eta_t).max(0.0);
        let three_body = 3.0 * self.p.g_tilde() * self.p.geometry.upsilon_scaled() * self.p.eta_t();
        x + three_body * x * x
    }

    pub(crate) fn phi00_sq(&self, r: f64) -> f64 {
        ((self.mu_l0 - self.p.v_l(r)) / self.g_eta_t).max(0.0)
    }

    pub(crate) fn phi1(&self, r: f64) -> f64 {
        let s = self.phi00_sq(r);
        (s - self.eta_l) * s.sqrt() / self.delta_eta_l
    }

    fn eta_t_rectified(&self, r: f64) -> f64 {
        let eta_t = self.p.eta_t();
        let upsilon = self.p.geometry.upsilon_scaled() * eta_t * eta_t;
        eta_t - 3.0 * self.p.g_tilde() * upsilon * self.phi0_sq(r)
    }
}

/// Profiles at the given radii, using the exact R_L root for φ₀².
pub fn longitudinal_profiles(p: &ScaledProblem, r_samples: &[f64]) -> Result<LongitudinalProfiles> {
    if let Ok(n_l) = lower_critical_n(p) {
        if p.n < n_l {
            warn!("N = {} is below N_L = {n_l:.1}; Thomas-Fermi profiles are unreliable", p.n);
        }
    }
    let m = ProfileModel::new(p)?;
    let r: Vec<f64> = r_samples.iter().map(|r| r.abs()).collect();
    Ok(LongitudinalProfiles {
        phi0_sq: r.iter().map(|&x| m.phi0_sq(x)).collect(),
        phi00_sq: r.iter().map(|&x| m.phi00_sq(x)).collect(),
        phi1: r.iter().map(|&x| m.phi1(x)).collect(),
        eta_t_rectified: r.iter().map(|&x| m.eta_t_rectified(x)).collect(),
        r,
    })
}

/// Average densities Nη in trap units (ρ₀⁻³).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AverageDensity {
    /// First order, both Schmidt terms.
    pub full: f64,
    /// First order, dominant Schmidt term only.
    pub dominant: f64,
    /// Nη_Tη_L.
    pub zero_order: f64,
    /// Like `full` but with η̃_L = η_L(R_L/R_L0)^{2q+d} from the exact root.
    pub exact_rl: f64,
}

impl AverageDensity {
    /// Converts a trap-unit density to units of (ρ₀²a)⁻¹.
    pub fn in_rho0_sq_a(value: f64, p: &ScaledProblem) -> f64 {
        value * p.a
    }
}

pub fn average_density(p: &ScaledProblem) -> Result<AverageDensity> {
    let r_l0 = tf_radius_zero(p)?;
    let (eta_l, delta_eta_l) = longitudinal_etas(p)?;
    let d = p.geometry.df();
    let q = p.q;
    let eta_t = p.eta_t();
    let ups_scaled = p.geometry.upsilon_scaled();
    let upsilon = ups_scaled * eta_t * eta_t;
    let g_tilde = p.g_tilde();

    let eta_l_tilde = eta_l * (1.0 - ups_scaled * 3.0 * q / (q + d) * p.k * r_l0.powf(q));
    let coupling = 2.0 * g_tilde * upsilon * (eta_l * eta_l + delta_eta_l * delta_eta_l);
    let eta = eta_t * eta_l_tilde + coupling;
    let dominant = eta + 4.0 * g_tilde * upsilon * delta_eta_l * delta_eta_l;

    let (r_l, _) = solve_rl(p, RlMode::Exact)?;
    let eta_exact = eta_t * eta_l * (r_l / r_l0).powf(2.0 * q + d) + coupling;

    Ok(AverageDensity {
        full: p.n * eta,
        dominant: p.n * dominant,
        zero_order: p.n * eta_t * eta_l,
        exact_rl: p.n * eta_exact,
    })
}

/// Harmonic closed form Nη_Tη_L(1 − 24/((d+2)(d+6))·(Υ_Tħω_T/η_T²)(ρ₀R_L0/r₀²)²).
pub fn average_density_harmonic_closed(p: &ScaledProblem) -> Result<f64> {
    p.require_harmonic()?;
    let d = p.geometry.df();
    let r_l0 = tf_radius_zero(p)?;
    let x = r_l0 / p.r0().powi(2);
    let zero = p.n * (2.0 * PI).powf(-p.geometry.big_df() / 2.0) * d * (d + 2.0)
        / ((d + 4.0) * PI.powf(d - 1.0))
        / r_l0.powf(d);
    Ok(zero * (1.0 - 24.0 / ((d + 2.0) * (d + 6.0)) * p.geometry.upsilon_scaled() * x * x))
}
