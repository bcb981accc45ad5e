//! Variational Gaussian ansatz with a longitudinally varying transverse
//! width, solved in the Thomas-Fermi regime to first order in ã|f|².
//!
//! ψ(ρ, r) = f(r)·G_σ(r)(ρ), where G_σ is a unit-norm transverse Gaussian of
//! width σ (2D for cigars, 1D for pancakes). All quantities in trap units.

use std::f64::consts::PI;

use log::warn;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::quadrature::GaussLegendre;
use crate::roots::expanding_root;
use crate::solver::purity_by_quadrature;
use crate::units::{Geometry, ScaledProblem};

/// ã|f|² above this anywhere triggers a regime warning.
pub const REGIME_WARNING_THRESHOLD: f64 = 0.3;
const QUADRATURE_POINTS: usize = 160;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariationalSolution {
    pub geometry: Geometry,
    /// ã = a(N−1).
    pub a_tilde: f64,
    pub omega_ratio: f64,
    /// R_1L or R_2L.
    pub r_dl: f64,
    /// Root of the normalization condition without its higher-order term.
    pub r_leading: f64,
    /// μ_1L or μ_2L.
    pub mu_dl: f64,
    /// μ₁ or μ₂.
    pub mu_d: f64,
}

impl VariationalSolution {
    /// u(r) = (μ_dL − V_L)/c_d, clamped at the radius.
    fn u(&self, r: f64) -> f64 {
        let v = 0.5 * self.omega_ratio.powi(2) * r * r;
        let c = match self.geometry {
            Geometry::Cigar => 2.0 * self.a_tilde,
            Geometry::Pancake => 2.0 * (2.0 * PI).sqrt() * self.a_tilde,
        };
        ((self.mu_dl - v) / c).max(0.0)
    }

    /// |f_d(r)|².
    pub fn f_sq(&self, r: f64) -> f64 {
        let u = self.u(r.abs());
        let c = match self.geometry {
            Geometry::Cigar => 0.75 * self.a_tilde,
            Geometry::Pancake => 3.0 * PI.sqrt() * self.a_tilde / (4.0 * 2f64.sqrt()),
        };
        u + c * u * u
    }

    /// σ_d(r) in ρ₀.
    pub fn sigma(&self, r: f64) -> f64 {
        let f2 = self.f_sq(r);
        match self.geometry {
            Geometry::Cigar => (1.0 + 2.0 * self.a_tilde * f2).powf(0.25),
            Geometry::Pancake => 1.0 + (PI / 2.0).sqrt() * self.a_tilde * f2,
        }
    }

    /// Longitudinal measure weight of radius r: 1 for d = 1 (the line is
    /// integrated over both signs separately), 2πr for d = 2.
    fn measure(&self, r: f64) -> f64 {
        match self.geometry {
            Geometry::Cigar => 1.0,
            Geometry::Pancake => 2.0 * PI * r,
        }
    }

    /// Nodes and weights covering the longitudinal support (|z| ≤ R for
    /// cigars, 0 ≤ ϱ ≤ R for pancakes), measure included.
    fn nodes(&self) -> Vec<(f64, f64)> {
        let rule = GaussLegendre::new(QUADRATURE_POINTS);
        let lo = match self.geometry {
            Geometry::Cigar => -self.r_dl,
            Geometry::Pancake => 0.0,
        };
        rule.on_interval(lo, self.r_dl)
            .map(|(x, w)| (x, w * self.measure(x)))
            .collect()
    }

    /// ∫|f_d|² dᵈr.
    pub fn norm(&self) -> f64 {
        self.nodes().iter().map(|&(r, w)| w * self.f_sq(r)).sum()
    }

    /// Peak of ã|f_d|², reached at the centre.
    pub fn peak_coupling(&self) -> f64 {
        self.a_tilde * self.f_sq(0.0)
    }

    /// Transverse overlap ⟨G_σ(r)|G_σ(r′)⟩.
    fn transverse_overlap(&self, s1: f64, s2: f64) -> f64 {
        match self.geometry {
            Geometry::Cigar => 2.0 * s1 * s2 / (s1 * s1 + s2 * s2),
            Geometry::Pancake => (2.0 * s1 * s2).sqrt() / (s1 * s1 + s2 * s2).sqrt(),
        }
    }

    /// n_L(r, r′) = f(r)f(r′)⟨G_σ(r)|G_σ(r′)⟩.
    pub fn kernel(&self, r1: f64, r2: f64) -> f64 {
        let f1 = self.f_sq(r1).sqrt();
        let f2 = self.f_sq(r2).sqrt();
        f1 * f2 * self.transverse_overlap(self.sigma(r1), self.sigma(r2))
    }

    /// Sampled profiles (r, σ_d, f_d) in trap units.
    pub fn profiles(&self, samples: &[f64]) -> Vec<[f64; 3]> {
        samples
            .iter()
            .map(|&r| [r, self.sigma(r), self.f_sq(r).sqrt()])
            .collect()
    }

    /// ψ on a grid in memory order, built from the ansatz.
    pub fn sample_on(&self, grid: &Grid) -> Vec<f64> {
        let coords = grid.all_coords();
        let big_d = self.geometry.big_d() as i32;
        let mut psi = vec![0.0; grid.len()];
        grid.for_each_index(|flat, idx| {
            let (rho, r) = grid.radii(&coords, idx);
            let s = self.sigma(r);
            let g = (-0.5 * rho * rho / (s * s)).exp() / (PI.sqrt() * s).powi(big_d).sqrt();
            psi[flat] = self.f_sq(r).sqrt() * g;
        });
        psi
    }
}

/// Variational solution for the geometry of `p`.
pub fn solve_variational(p: &ScaledProblem) -> Result<VariationalSolution> {
    match p.geometry {
        Geometry::Cigar => solve_quasi1d(p),
        Geometry::Pancake => solve_quasi2d(p),
    }
}

fn prepare(p: &ScaledProblem, want: Geometry) -> Result<(f64, f64)> {
    if p.geometry != want {
        return Err(Error::InvalidInput(format!("expected a {want:?} trap, got {:?}", p.geometry)));
    }
    p.require_harmonic()?;
    p.require_interacting()?;
    Ok((p.a * (p.n - 1.0), p.omega_ratio()))
}

fn finish(p: &ScaledProblem, sol: VariationalSolution) -> VariationalSolution {
    if sol.peak_coupling() > REGIME_WARNING_THRESHOLD {
        warn!(
            "ã|f|² reaches {:.3} at N = {}; the perturbative variational solution is leaving its regime",
            sol.peak_coupling(),
            p.n
        );
    }
    sol
}

/// Cigar: 1 = ω_L²R³/(3ã) + ω_L⁴R⁵/(20ã).
pub fn solve_quasi1d(p: &ScaledProblem) -> Result<VariationalSolution> {
    let (at, w) = prepare(p, Geometry::Cigar)?;
    let leading = (3.0 * at / (w * w)).cbrt();
    let residual = |r: f64| w * w * r.powi(3) / (3.0 * at) + w.powi(4) * r.powi(5) / (20.0 * at) - 1.0;
    let r = expanding_root(residual, 0.5 * leading, 2.0 * leading, 1e-15)?;
    let mu_dl = 0.5 * w * w * r * r;
    Ok(finish(
        p,
        VariationalSolution {
            geometry: Geometry::Cigar,
            a_tilde: at,
            omega_ratio: w,
            r_dl: r,
            r_leading: leading,
            mu_dl,
            mu_d: mu_dl + 1.0,
        },
    ))
}

/// Pancake: 1 = √π ω_L²R⁴/(8√2 ã) + √π ω_L⁴R⁶/(128√2 ã).
pub fn solve_quasi2d(p: &ScaledProblem) -> Result<VariationalSolution> {
    let (at, w) = prepare(p, Geometry::Pancake)?;
    let c = PI.sqrt() / (2f64.sqrt() * at);
    let leading = (8.0 / (c * w * w)).powf(0.25);
    let residual = |r: f64| c * w * w * r.powi(4) / 8.0 + c * w.powi(4) * r.powi(6) / 128.0 - 1.0;
    let r = expanding_root(residual, 0.5 * leading, 2.0 * leading, 1e-15)?;
    let mu_dl = 0.5 * w * w * r * r;
    Ok(finish(
        p,
        VariationalSolution {
            geometry: Geometry::Pancake,
            a_tilde: at,
            omega_ratio: w,
            r_dl: r,
            r_leading: leading,
            mu_dl,
            mu_d: mu_dl + 0.5,
        },
    ))
}

/// Kernel n_L(r_i, r_j) on the sample set.
pub fn variational_density_matrix(sol: &VariationalSolution, samples: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(samples.len(), samples.len(), |i, j| sol.kernel(samples[i], samples[j]))
}

/// Π = ∫∫ n_L(r, r′)² with the d-dimensional measure, by Gauss-Legendre
/// quadrature over the support.
pub fn variational_purity(sol: &VariationalSolution) -> f64 {
    let nodes = sol.nodes();
    let mut total = 0.0;
    for &(r1, w1) in &nodes {
        for &(r2, w2) in &nodes {
            total += w1 * w2 * sol.kernel(r1, r2).powi(2);
        }
    }
    total
}

/// Nη = N∫|ψ|⁴ with the transverse Gaussian integral done analytically.
pub fn variational_average_density(sol: &VariationalSolution, n: f64) -> f64 {
    let transverse = |s: f64| match sol.geometry {
        Geometry::Cigar => 1.0 / (2.0 * PI * s * s),
        Geometry::Pancake => 1.0 / ((2.0 * PI).sqrt() * s),
    };
    n * sol
        .nodes()
        .iter()
        .map(|&(r, w)| w * sol.f_sq(r).powi(2) * transverse(sol.sigma(r)))
        .sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariationalObservables {
    pub purity: f64,
    /// Nη in ρ₀⁻³.
    pub average_density: f64,
}

/// Purity and Nη of the ansatz built on a 3D grid.
pub fn variational_observables(sol: &VariationalSolution, grid: &Grid, n: f64) -> Result<VariationalObservables> {
    let psi = sol.sample_on(grid);
    let vol = grid.cell_volume();
    Ok(VariationalObservables {
        purity: purity_by_quadrature(&psi, grid)?,
        average_density: n * psi.iter().map(|v| v.powi(4)).sum::<f64>() * vol,
    })
}
