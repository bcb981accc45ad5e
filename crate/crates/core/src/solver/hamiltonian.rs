//! Discretized GP operator pieces: potential, spectral kinetic energy and
//! the energy bookkeeping shared by the relaxation and the observables.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::grid::{AxisRole, Grid};
use crate::solver::fft::{wavenumbers, Fft3, C64};
use crate::units::ScaledProblem;

/// Energy functional pieces in ħω_T, for a unit-norm field.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyParts {
    pub kinetic_t: f64,
    pub kinetic_l: f64,
    pub potential_t: f64,
    pub potential_l: f64,
    /// ½g̃∫ψ⁴
    pub interaction: f64,
}

impl EnergyParts {
    pub fn kinetic(&self) -> f64 {
        self.kinetic_t + self.kinetic_l
    }

    pub fn potential(&self) -> f64 {
        self.potential_t + self.potential_l
    }

    /// GP energy per particle.
    pub fn energy(&self) -> f64 {
        self.kinetic() + self.potential() + self.interaction
    }

    /// μ = E_kin + E_pot + 2E_int.
    pub fn chemical_potential(&self) -> f64 {
        self.kinetic() + self.potential() + 2.0 * self.interaction
    }
}

/// Sums of `f(i)` over 0..n in fixed-size chunks, so the result does not
/// depend on the thread count or scheduling.
pub(crate) fn det_sums<const K: usize, F>(n: usize, f: F) -> [f64; K]
where
    F: Fn(usize) -> [f64; K] + Sync,
{
    const CHUNK: usize = 4096;
    let parts: Vec<[f64; K]> = (0..n.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut acc = [0.0; K];
            for i in c * CHUNK..((c + 1) * CHUNK).min(n) {
                let v = f(i);
                for k in 0..K {
                    acc[k] += v[k];
                }
            }
            acc
        })
        .collect();
    let mut total = [0.0; K];
    for p in parts {
        for k in 0..K {
            total[k] += p[k];
        }
    }
    total
}

pub(crate) fn det_sum<F: Fn(usize) -> f64 + Sync>(n: usize, f: F) -> f64 {
    det_sums(n, |i| [f(i)])[0]
}

pub(crate) struct Operators {
    pub(crate) grid: Grid,
    pub(crate) g_tilde: f64,
    pub(crate) fft: Fft3,
    pub(crate) v_t: Vec<f64>,
    pub(crate) v_l: Vec<f64>,
    /// ½k² split into transverse and longitudinal parts, per spectrum entry.
    pub(crate) kin_t: Vec<f64>,
    pub(crate) kin_l: Vec<f64>,
    /// Parseval multiplicity of each half-spectrum entry (1 or 2).
    pub(crate) mult: Vec<f64>,
}

impl Operators {
    pub(crate) fn new(p: &ScaledProblem, grid: &Grid) -> Self {
        let coords = grid.all_coords();
        let mut v_t = vec![0.0; grid.len()];
        let mut v_l = vec![0.0; grid.len()];
        grid.for_each_index(|flat, idx| {
            let (rho, r) = grid.radii(&coords, idx);
            v_t[flat] = 0.5 * rho * rho;
            v_l[flat] = p.v_l(r);
        });

        let fft = Fft3::new(grid.points);
        let [nx, ny, _] = grid.points;
        let nzh = fft.half_len();
        let k: Vec<Vec<f64>> = (0..3).map(|a| wavenumbers(grid.points[a], grid.half_width[a])).collect();
        let len = fft.spectrum_len();
        let mut kin_t = vec![0.0; len];
        let mut kin_l = vec![0.0; len];
        let mut mult = vec![0.0; len];
        for kz in 0..nzh {
            for i in 0..nx {
                for j in 0..ny {
                    let s = (kz * nx + i) * ny + j;
                    for (axis, kk) in [(0, k[0][i]), (1, k[1][j]), (2, k[2][kz])] {
                        let e = 0.5 * kk * kk;
                        match grid.roles[axis] {
                            AxisRole::Transverse => kin_t[s] += e,
                            AxisRole::Longitudinal => kin_l[s] += e,
                        }
                    }
                    let nyquist = grid.points[2] % 2 == 0 && kz == nzh - 1;
                    mult[s] = if kz == 0 || nyquist { 1.0 } else { 2.0 };
                }
            }
        }
        Self {
            grid: grid.clone(),
            g_tilde: p.g_tilde(),
            fft,
            v_t,
            v_l,
            kin_t,
            kin_l,
            mult,
        }
    }

    /// Converts a half-spectrum sum Σ mult·|X|²·f into a quadrature integral.
    pub(crate) fn parseval_scale(&self) -> f64 {
        self.grid.cell_volume() / self.grid.len() as f64
    }

    pub(crate) fn norm_sq(&self, psi: &[f64]) -> f64 {
        det_sum(psi.len(), |i| psi[i] * psi[i]) * self.grid.cell_volume()
    }

    /// Energy parts of `psi` given its (unnormalized) spectrum.
    pub(crate) fn energy_parts(&self, psi: &[f64], spectrum: &[C64]) -> EnergyParts {
        let scale = self.parseval_scale();
        let [kt, kl] = det_sums(spectrum.len(), |i| {
            let w = self.mult[i] * spectrum[i].norm_sqr();
            [w * self.kin_t[i], w * self.kin_l[i]]
        });
        let vol = self.grid.cell_volume();
        let [pt, pl, q] = det_sums(psi.len(), |i| {
            let d = psi[i] * psi[i];
            [d * self.v_t[i], d * self.v_l[i], d * d]
        });
        EnergyParts {
            kinetic_t: kt * scale,
            kinetic_l: kl * scale,
            potential_t: pt * vol,
            potential_l: pl * vol,
            interaction: 0.5 * self.g_tilde * q * vol,
        }
    }

    /// Hψ = −½∇²ψ + Vψ + g̃ψ³, with the Laplacian applied spectrally.
    pub(crate) fn apply_h(&mut self, psi: &[f64]) -> Vec<f64> {
        let mut work = psi.to_vec();
        let mut spec = vec![C64::default(); self.fft.spectrum_len()];
        self.fft.forward(&mut work, &mut spec);
        spec.par_iter_mut()
            .zip(self.kin_t.par_iter().zip(self.kin_l.par_iter()))
            .for_each(|(x, (t, l))| *x *= t + l);
        let mut out = vec![0.0; psi.len()];
        self.fft.inverse(&mut spec, &mut out);
        let g = self.g_tilde;
        out.par_iter_mut()
            .zip(psi.par_iter())
            .zip(self.v_t.par_iter().zip(self.v_l.par_iter()))
            .for_each(|((h, v), (t, l))| *h += (t + l + g * v * v) * v);
        out
    }
}
