//! Two-term Schmidt wavefunction √λ₀χ₀φ₀ + χ₁φ₁ sampled on a grid.

use crate::analytics::modes::{transverse_schmidt, DEFAULT_N_MAX};
use crate::analytics::tf::ProfileModel;
use crate::error::Result;
use crate::grid::{AxisRole, Grid};
use crate::units::{Geometry, ScaledProblem};

/// Samples the first-order wavefunction on `grid` (memory order) and
/// renormalizes it under midpoint quadrature.
pub fn assemble_wavefunction(p: &ScaledProblem, grid: &Grid) -> Result<Vec<f64>> {
    grid.check_covers(p)?;
    p.require_interacting()?;
    let schmidt = transverse_schmidt(p, DEFAULT_N_MAX)?;
    let profile = ProfileModel::new(p)?;
    let lambda0 = 1.0 - schmidt.lambda1;

    let coords = grid.all_coords();
    let n_t = grid.subspace_len(AxisRole::Transverse);
    let n_l = grid.subspace_len(AxisRole::Longitudinal);
    let mut chi = vec![(f64::NAN, 0.0); n_t];
    let mut phi = vec![(f64::NAN, 0.0); n_l];
    let t_axes = grid.transverse_axes();

    let mut psi = vec![0.0; grid.len()];
    grid.for_each_index(|flat, idx| {
        let it = grid.subspace_index(idx, AxisRole::Transverse);
        let il = grid.subspace_index(idx, AxisRole::Longitudinal);
        if chi[it].0.is_nan() {
            let (rho, _) = grid.radii(&coords, idx);
            // the Hermite basis takes the signed tight coordinate
            let x = match p.geometry {
                Geometry::Pancake => coords[t_axes[0]][idx[t_axes[0]]],
                Geometry::Cigar => rho,
            };
            chi[it] = (schmidt.chi0.evaluate(x), schmidt.chi1.evaluate(x));
        }
        if phi[il].0.is_nan() {
            let (_, r) = grid.radii(&coords, idx);
            phi[il] = (profile.phi0_sq(r).sqrt(), profile.phi1(r));
        }
        psi[flat] = lambda0.sqrt() * chi[it].0 * phi[il].0 + chi[it].1 * phi[il].1;
    });

    let norm = (psi.iter().map(|v| v * v).sum::<f64>() * grid.cell_volume()).sqrt();
    psi.iter_mut().for_each(|v| *v /= norm);
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn unit_norm_and_refuses_small_box() {
        let p = ScaledProblem::harmonic(Geometry::Cigar, 0.02, 0.0074, 1000.0);
        let g = Grid::for_problem(&p, [16, 16, 64]).unwrap();
        let psi = assemble_wavefunction(&p, &g).unwrap();
        let norm: f64 = psi.iter().map(|v| v * v).sum::<f64>() * g.cell_volume();
        assert!((norm - 1.0).abs() < 1e-12);
        let small = Grid { half_width: [6.0, 6.0, 1.0], ..g };
        assert!(matches!(assemble_wavefunction(&p, &small), Err(Error::GridTooSmall(_))));
    }

    #[test]
    fn pancake_is_even_in_the_tight_axis() {
        let p = ScaledProblem::harmonic(Geometry::Pancake, 0.02, 0.0074, 20000.0);
        let g = Grid::for_problem(&p, [16, 16, 32]).unwrap();
        let psi = assemble_wavefunction(&p, &g).unwrap();
        let nz = g.points[2];
        for i in 0..16 {
            for j in 0..16 {
                for k in 0..nz / 2 {
                    let a = psi[g.index(i, j, k)];
                    let b = psi[g.index(i, j, nz - 1 - k)];
                    assert!((a - b).abs() < 1e-14);
                }
            }
        }
    }
}
