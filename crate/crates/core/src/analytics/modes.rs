//! Transverse Schmidt functions χ₀, χ₁ as expansions in the bare
//! transverse eigenmodes, and the Schmidt coefficient λ₁.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::analytics::geometry::{longitudinal_etas, transverse_overlaps};
use crate::error::Result;
use crate::special::{hypergeometric_pfq, polylog};
use crate::units::{Geometry, ScaledProblem};

/// Mode-sum truncation used unless the caller asks otherwise.
pub const DEFAULT_N_MAX: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Basis {
    /// Hermite functions of the single tight coordinate (pancakes).
    Hermite1D,
    /// m = 0 radial Laguerre modes of the tight plane (cigars).
    RadialLaguerre2D,
}

impl Basis {
    pub fn for_geometry(g: Geometry) -> Self {
        match g {
            Geometry::Cigar => Basis::RadialLaguerre2D,
            Geometry::Pancake => Basis::Hermite1D,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeExpansion {
    pub coefficients: Vec<f64>,
    pub basis_label: Basis,
}

impl ModeExpansion {
    /// Value at transverse coordinate ρ (signed z for Hermite1D, radius
    /// for RadialLaguerre2D), in trap units.
    pub fn evaluate(&self, rho: f64) -> f64 {
        let n_max = self.coefficients.len().saturating_sub(1);
        let modes = match self.basis_label {
            Basis::Hermite1D => hermite_functions(rho, n_max),
            Basis::RadialLaguerre2D => radial_modes(rho, n_max),
        };
        modes.iter().zip(&self.coefficients).map(|(m, c)| m * c).sum()
    }

    /// ⟨χ|χ⟩ from orthonormality of the basis.
    pub fn norm_squared(&self) -> f64 {
        self.coefficients.iter().map(|c| c * c).sum()
    }
}

/// Normalized Hermite functions h_0..=h_{n_max} at x (unit oscillator length).
pub fn hermite_functions(x: f64, n_max: usize) -> Vec<f64> {
    let mut h = Vec::with_capacity(n_max + 1);
    h.push(PI.powf(-0.25) * (-0.5 * x * x).exp());
    if n_max >= 1 {
        h.push(2f64.sqrt() * x * h[0]);
    }
    for n in 1..n_max {
        let nf = n as f64;
        let next = (2.0 / (nf + 1.0)).sqrt() * x * h[n] - (nf / (nf + 1.0)).sqrt() * h[n - 1];
        h.push(next);
    }
    h
}

/// Normalized m = 0 modes L_{n_r}(ρ²)e^{−ρ²/2}/√π of the 2D oscillator.
pub fn radial_modes(rho: f64, n_max: usize) -> Vec<f64> {
    let t = rho * rho;
    let pref = (-0.5 * t).exp() / PI.sqrt();
    let mut l = Vec::with_capacity(n_max + 1);
    l.push(1.0);
    if n_max >= 1 {
        l.push(1.0 - t);
    }
    for n in 1..n_max {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0 - t) * l[n] - nf * l[n - 1]) / (nf + 1.0);
        l.push(next);
    }
    l.into_iter().map(|v| v * pref).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransverseSchmidt {
    pub chi0: ModeExpansion,
    /// Carries √λ₁ in its normalization: ⟨χ₁|χ₁⟩ = λ₁.
    pub chi1: ModeExpansion,
    pub lambda1: f64,
}

/// First-order χ₀ and χ₁ with ε = 1.
pub fn transverse_schmidt(p: &ScaledProblem, n_max: usize) -> Result<TransverseSchmidt> {
    let basis = Basis::for_geometry(p.geometry);
    let mut chi0 = vec![0.0; n_max + 1];
    let mut chi1 = vec![0.0; n_max + 1];
    chi0[0] = 1.0;
    if p.n > 1.0 {
        let (eta_l, delta_eta_l) = longitudinal_etas(p)?;
        let g_tilde = p.g_tilde();
        for (n, (overlap, gap)) in transverse_overlaps(p.geometry, n_max).into_iter().enumerate().skip(1) {
            let c = overlap / gap;
            chi0[n] = -g_tilde * eta_l * c;
            chi1[n] = -g_tilde * delta_eta_l * c;
        }
    }
    let chi1 = ModeExpansion {
        coefficients: chi1,
        basis_label: basis,
    };
    let lambda1 = chi1.norm_squared();
    Ok(TransverseSchmidt {
        chi0: ModeExpansion {
            coefficients: chi0,
            basis_label: basis,
        },
        chi1,
        lambda1,
    })
}

/// λ₁ = a²(N−1)²Δη_L² × {Li₂(1/4) cigar; (π/4)ρ₀²·₄F₃(1,1,1,3/2;2,2,2;1/4) pancake}.
pub fn lambda1_closed(p: &ScaledProblem) -> Result<f64> {
    p.require_harmonic()?;
    if p.n <= 1.0 {
        return Ok(0.0);
    }
    let (_, delta_eta_l) = longitudinal_etas(p)?;
    let series = match p.geometry {
        Geometry::Cigar => polylog(2.0, 0.25, 1e-15)?.value,
        Geometry::Pancake => {
            PI / 4.0
                * hypergeometric_pfq(&[1.0, 1.0, 1.0, 1.5], &[2.0, 2.0, 2.0], 0.25, 1e-15)?.value
        }
    };
    let an = p.a * (p.n - 1.0);
    Ok(an * an * delta_eta_l * delta_eta_l * series)
}

/// Π ≃ 1 − 2λ₁, clamped to [0, 1].
pub fn purity_first_order(p: &ScaledProblem) -> Result<f64> {
    Ok((1.0 - 2.0 * lambda1_closed(p)?).clamp(0.0, 1.0))
}
