//! Imaginary-time split-step relaxation to the GP ground state.

use std::time::Instant;

use log::{debug, info};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::assemble_wavefunction;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::solver::fft::C64;
use crate::solver::hamiltonian::{det_sum, EnergyParts, Operators};
use crate::units::ScaledProblem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialGuess {
    /// Product of the bare transverse and longitudinal oscillator ground states.
    Gaussian,
    /// First-order two-term Schmidt wavefunction (needs N > 1).
    Analytic,
    /// Analytic when interacting, Gaussian otherwise.
    Auto,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Numerics {
    /// Imaginary time step in 1/ω_T.
    pub dt: f64,
    /// Stop once the per-step relative change of μ falls below this.
    pub tol: f64,
    pub max_iters: usize,
    /// Steps between evaluations of the energy functional.
    pub check_every: usize,
    pub initial: InitialGuess,
    /// Coarse step for a warm-up stage run before `dt`; ignored if not
    /// larger than `dt` or in fixed-iteration mode.
    pub warmup_dt: Option<f64>,
    /// Run exactly this many steps at `dt`, ignoring `tol`.
    pub fixed_iterations: Option<usize>,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            dt: 0.05,
            tol: 1e-10,
            max_iters: 200_000,
            check_every: 200,
            initial: InitialGuess::Gaussian,
            warmup_dt: Some(0.1),
            fixed_iterations: None,
        }
    }
}

impl Numerics {
    fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidInput(format!("dt must be positive, got {}", self.dt)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidInput(format!("tol must be positive, got {}", self.tol)));
        }
        if self.check_every == 0 || self.max_iters == 0 {
            return Err(Error::InvalidInput("check_every and max_iters must be ≥ 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundState {
    pub grid: Grid,
    /// Unit-norm field in memory order of `grid`, in ρ₀^{-3/2}.
    pub psi: Vec<f64>,
    /// μ in ħω_T from the energy functional.
    pub mu: f64,
    pub energy_parts: EnergyParts,
    /// ‖Hψ − μψ‖/μ.
    pub residual: f64,
    pub iterations: usize,
    /// Last per-step μ estimate from the norm decay.
    pub mu_decay: f64,
    /// GP energy at each functional evaluation.
    pub energy_history: Vec<f64>,
    pub runtime_s: f64,
}

fn initial_state(p: &ScaledProblem, grid: &Grid, guess: InitialGuess) -> Result<Vec<f64>> {
    let analytic = match guess {
        InitialGuess::Gaussian => false,
        InitialGuess::Analytic => true,
        InitialGuess::Auto => p.n > 1.0 && p.a > 0.0,
    };
    if analytic {
        let mut psi = assemble_wavefunction(p, grid)?;
        // keep every point populated so no region starts frozen
        let floor = 1e-6 * psi.iter().cloned().fold(0.0, f64::max);
        psi.iter_mut().for_each(|v| *v = v.max(floor));
        return Ok(psi);
    }
    let coords = grid.all_coords();
    let r0 = p.r0();
    let mut psi = vec![0.0; grid.len()];
    grid.for_each_index(|flat, idx| {
        let (rho, r) = grid.radii(&coords, idx);
        psi[flat] = (-0.5 * rho * rho - 0.5 * (r / r0).powi(2)).exp();
    });
    Ok(psi)
}

struct Stage {
    psi: Vec<f64>,
    parts: EnergyParts,
    iterations: usize,
    mu_decay: f64,
}

/// Strang splitting K(dt/2)·N(dt)·K(dt/2) with renormalization after each
/// step. Adjacent half kinetic steps are fused, so each step costs one
/// forward and one inverse transform; the norm of the true Strang iterate
/// comes from Parseval.
fn run_stage(
    ops: &mut Operators,
    mut w: Vec<f64>,
    dt: f64,
    numerics: &Numerics,
    budget: usize,
    history: &mut Vec<f64>,
) -> Result<Stage> {
    let g = ops.g_tilde;
    let full: Vec<f64> = ops
        .kin_t
        .par_iter()
        .zip(ops.kin_l.par_iter())
        .map(|(t, l)| (-(t + l) * dt).exp())
        .collect();
    let half_potential: Vec<f64> = ops
        .v_t
        .par_iter()
        .zip(ops.v_l.par_iter())
        .map(|(t, l)| (-(t + l) * dt / 2.0).exp())
        .collect();
    let vol = ops.grid.cell_volume();
    let scale = ops.parseval_scale();
    let mut predictor = vec![0.0; w.len()];
    let norm0 = ops.norm_sq(&w).sqrt();
    w.iter_mut().for_each(|v| *v /= norm0);

    let mut spec = vec![C64::default(); ops.fft.spectrum_len()];
    let mut psi_spec = spec.clone();
    let mut psi = vec![0.0; w.len()];
    let mut mu_prev = f64::NAN;
    let mut mu_decay = f64::NAN;
    let mut last_change = f64::INFINITY;

    for it in 0..=budget {
        ops.fft.forward(&mut w, &mut spec);
        // ‖K(dt/2)w‖², the norm of the Strang iterate before renormalizing
        let s2 = det_sum(spec.len(), |i| ops.mult[i] * full[i] * spec[i].norm_sqr()) * scale;
        if !s2.is_finite() || s2 <= 0.0 {
            return Err(Error::StepSize { iterations: it, dt });
        }
        let s = s2.sqrt();
        if it > 0 {
            mu_decay = -s2.ln() / (2.0 * dt);
            last_change = ((mu_decay - mu_prev) / mu_decay).abs();
            mu_prev = mu_decay;
        }
        let converged = match numerics.fixed_iterations {
            Some(_) => it == budget,
            None => it > 2 && last_change < numerics.tol,
        };
        let out_of_budget = it == budget;
        if converged || out_of_budget || it % numerics.check_every == 0 {
            psi_spec
                .par_iter_mut()
                .zip(spec.par_iter().zip(full.par_iter()))
                .for_each(|(y, (x, e))| *y = x * (e.sqrt() / s));
            let parts_spec = psi_spec.clone();
            ops.fft.inverse(&mut psi_spec, &mut psi);
            let parts = ops.energy_parts(&psi, &parts_spec);
            history.push(parts.energy());
            debug!(
                "dt {dt}, step {it}: μ = {:.12}, decay μ = {mu_decay:.12}, change {last_change:.3e}",
                parts.chemical_potential()
            );
            if converged {
                return Ok(Stage {
                    psi,
                    parts,
                    iterations: it,
                    mu_decay,
                });
            }
            if out_of_budget {
                return Err(Error::Convergence {
                    iterations: it,
                    residual: last_change,
                });
            }
        }
        spec.par_iter_mut()
            .zip(full.par_iter())
            .for_each(|(x, e)| *x *= e / s);
        ops.fft.inverse(&mut spec, &mut w);
        // Potential and nonlinear substep. The density is taken from the
        // unit-norm field at the substep midpoint (one predictor pass), which
        // keeps the splitting second order despite the decaying norm.
        let n_start = det_sum(w.len(), |i| w[i] * w[i]) * vol;
        predictor
            .par_iter_mut()
            .zip(w.par_iter().zip(half_potential.par_iter()))
            .for_each(|(u, (v, e))| *u = v * e * (-0.5 * g * v * v / n_start * dt).exp());
        let n_mid = det_sum(predictor.len(), |i| predictor[i] * predictor[i]) * vol;
        w.par_iter_mut()
            .zip(predictor.par_iter().zip(half_potential.par_iter()))
            .for_each(|(v, (u, e))| *v *= e * e * (-g * u * u / n_mid * dt).exp());
    }
    unreachable!("loop returns at the budget")
}

/// Relaxes from the configured initial guess: an optional coarse-step
/// warm-up, then the production step `numerics.dt`, each run until the
/// per-step relative change of μ drops below `numerics.tol`.
pub fn relax_ground_state(p: &ScaledProblem, grid: &Grid, numerics: &Numerics) -> Result<GroundState> {
    let psi0 = initial_state(p, grid, numerics.initial)?;
    relax_from(p, grid, numerics, psi0)
}

/// Like [`relax_ground_state`] but starting from a caller-supplied field.
pub fn relax_from(p: &ScaledProblem, grid: &Grid, numerics: &Numerics, psi0: Vec<f64>) -> Result<GroundState> {
    numerics.validate()?;
    grid.check_covers(p)?;
    if p.a < 0.0 {
        return Err(Error::InvalidInput("attractive interactions are not supported".into()));
    }
    if psi0.len() != grid.len() {
        return Err(Error::InvalidInput("initial field does not match the grid".into()));
    }
    let start = Instant::now();
    let mut ops = Operators::new(p, grid);
    let mut history = Vec::new();
    let mut psi = psi0;
    let mut iterations = 0;
    let mut budget = numerics.fixed_iterations.unwrap_or(numerics.max_iters);
    if let Some(coarse) = numerics.warmup_dt.filter(|&c| c > numerics.dt && numerics.fixed_iterations.is_none()) {
        let stage = run_stage(&mut ops, psi, coarse, numerics, budget, &mut history)?;
        iterations += stage.iterations;
        budget -= stage.iterations.min(budget - 1);
        psi = stage.psi;
    }
    let stage = run_stage(&mut ops, psi, numerics.dt, numerics, budget, &mut history).map_err(|e| match e {
        Error::Convergence { iterations: i, residual } => Error::Convergence {
            iterations: iterations + i,
            residual,
        },
        other => other,
    })?;
    iterations += stage.iterations;
    let mu = stage.parts.chemical_potential();
    let hpsi = ops.apply_h(&stage.psi);
    let psi = &stage.psi;
    let res = det_sum(psi.len(), |i| (hpsi[i] - mu * psi[i]).powi(2)) * grid.cell_volume();
    info!("relaxed in {iterations} steps, μ = {mu:.10}");
    Ok(GroundState {
        grid: grid.clone(),
        psi: stage.psi,
        mu,
        energy_parts: stage.parts,
        residual: res.sqrt() / mu,
        iterations,
        mu_decay: stage.mu_decay,
        energy_history: history,
        runtime_s: start.elapsed().as_secs_f64(),
    })
}

/// μ = ∫ψ(H_T + H_L + g̃ψ²)ψ, with H applied in position space.
pub fn chemical_potential_of(state: &GroundState, p: &ScaledProblem) -> f64 {
    let mut ops = Operators::new(p, &state.grid);
    let h = ops.apply_h(&state.psi);
    det_sum(h.len(), |i| h[i] * state.psi[i]) * state.grid.cell_volume()
}

/// Nη = N∫ψ⁴ in ρ₀⁻³.
pub fn average_density_of(state: &GroundState, n: f64) -> f64 {
    n * det_sum(state.psi.len(), |i| state.psi[i].powi(4)) * state.grid.cell_volume()
}

/// Energy parts recomputed from a stored field.
pub fn energy_parts_of(state: &GroundState, p: &ScaledProblem) -> EnergyParts {
    let mut ops = Operators::new(p, &state.grid);
    let mut work = state.psi.clone();
    let mut spec = vec![C64::default(); ops.fft.spectrum_len()];
    ops.fft.forward(&mut work, &mut spec);
    ops.energy_parts(&state.psi, &spec)
}
