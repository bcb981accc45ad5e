//! Reduced-dimension Bose-Einstein condensates: first-order Schmidt
//! perturbation theory, a 3D Gross-Pitaevskii ground-state solver, and the
//! variational Gaussian baseline.
//!
//! Internally everything uses trap units ħ = M = ω_T = 1, so lengths are in
//! ρ₀ = √(ħ/Mω_T) and energies in ħω_T. [`units::ProblemSpec`] converts from SI.

pub mod analytics;
pub mod error;
pub mod grid;
pub mod quadrature;
pub mod regime;
pub mod roots;
pub mod solver;
pub mod special;
pub mod units;
pub mod variational;

pub use error::{Error, Result};
