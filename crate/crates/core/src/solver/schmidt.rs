//! Schmidt decomposition of a gridded field across the transverse /
//! longitudinal split, and the purity of its reduced density matrices.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{AxisRole, Grid};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtSpectrum {
    /// Descending λ_n = s_n².
    pub lambdas: Vec<f64>,
    /// Transverse functions, orthonormal under midpoint quadrature, indexed
    /// by the transverse subspace index of the grid.
    pub chi_modes: Vec<Vec<f64>>,
    pub phi_modes: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PurityReport {
    pub purity: f64,
    /// Second Schmidt coefficient.
    pub lambda1_estimate: f64,
}

fn subspace_weights(grid: &Grid) -> (f64, f64) {
    let w = |role| grid.axes_with(role).iter().map(|&i| grid.spacing(i)).product::<f64>();
    (w(AxisRole::Transverse), w(AxisRole::Longitudinal))
}

/// ψ rearranged as a (transverse × longitudinal) matrix, unweighted.
fn field_matrix(psi: &[f64], grid: &Grid) -> Result<DMatrix<f64>> {
    if psi.len() != grid.len() {
        return Err(Error::InvalidInput(format!(
            "field has {} values but the grid has {}",
            psi.len(),
            grid.len()
        )));
    }
    let n_t = grid.subspace_len(AxisRole::Transverse);
    let n_l = grid.subspace_len(AxisRole::Longitudinal);
    let mut m = DMatrix::<f64>::zeros(n_t, n_l);
    grid.for_each_index(|flat, idx| {
        let t = grid.subspace_index(idx, AxisRole::Transverse);
        let l = grid.subspace_index(idx, AxisRole::Longitudinal);
        m[(t, l)] = psi[flat];
    });
    Ok(m)
}

/// SVD of √(w_T w_L)·ψ; singular vectors are divided by √w afterwards so the
/// returned modes approximate the continuous Schmidt functions. Only the
/// leading `n_modes` function pairs are kept; all coefficients are returned.
pub fn schmidt_decompose(psi: &[f64], grid: &Grid, n_modes: usize) -> Result<SchmidtSpectrum> {
    let (w_t, w_l) = subspace_weights(grid);
    let mut m = field_matrix(psi, grid)?;
    m *= (w_t * w_l).sqrt();
    let want_vectors = n_modes > 0;
    let svd = m.svd(want_vectors, want_vectors);
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let lambdas: Vec<f64> = order.iter().map(|&i| svd.singular_values[i].powi(2)).collect();

    let mut chi_modes = Vec::new();
    let mut phi_modes = Vec::new();
    if let (Some(u), Some(v_t)) = (&svd.u, &svd.v_t) {
        for &i in order.iter().take(n_modes) {
            let mut chi: Vec<f64> = u.column(i).iter().map(|x| x / w_t.sqrt()).collect();
            let mut phi: Vec<f64> = v_t.row(i).iter().map(|x| x / w_l.sqrt()).collect();
            // fix the overall sign so χ has positive mean
            if chi.iter().sum::<f64>() < 0.0 {
                chi.iter_mut().for_each(|x| *x = -*x);
                phi.iter_mut().for_each(|x| *x = -*x);
            }
            chi_modes.push(chi);
            phi_modes.push(phi);
        }
    }
    Ok(SchmidtSpectrum {
        lambdas,
        chi_modes,
        phi_modes,
    })
}

/// Π = Σλ_n².
pub fn purity_of(spectrum: &SchmidtSpectrum) -> PurityReport {
    PurityReport {
        purity: spectrum.lambdas.iter().map(|l| l * l).sum(),
        lambda1_estimate: spectrum.lambdas.get(1).copied().unwrap_or(0.0),
    }
}

/// Π = ∫∫ n(x, x′)² by direct quadrature of the reduced density matrix of the
/// smaller subspace (the two reduced matrices share their purity).
pub fn purity_by_quadrature(psi: &[f64], grid: &Grid) -> Result<f64> {
    let (w_t, w_l) = subspace_weights(grid);
    let m = field_matrix(psi, grid)?;
    let (kernel, w) = if m.ncols() <= m.nrows() {
        // n_L(r, r′) = ∫ψ(ρ, r)ψ(ρ, r′)dρ
        (m.transpose() * &m * w_t, w_l)
    } else {
        (&m * m.transpose() * w_l, w_t)
    };
    Ok(kernel.iter().map(|k| k * k).sum::<f64>() * w * w)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Grid {
        let (t, l) = (AxisRole::Transverse, AxisRole::Longitudinal);
        Grid::new([8, 8, 16], [5.0, 5.0, 8.0], [t, t, l]).unwrap()
    }

    fn sample<F: Fn(f64, f64) -> f64>(g: &Grid, f: F) -> Vec<f64> {
        let c = g.all_coords();
        let mut psi = vec![0.0; g.len()];
        g.for_each_index(|flat, idx| {
            let (rho, r) = g.radii(&c, idx);
            psi[flat] = f(rho, r);
        });
        let norm: f64 = psi.iter().map(|v| v * v).sum::<f64>() * g.cell_volume();
        psi.iter().map(|v| v / norm.sqrt()).collect()
    }

    #[test]
    fn separable_field_has_rank_one() {
        let g = grid();
        let psi = sample(&g, |rho, r| (-rho * rho / 2.0).exp() * (-r * r / 8.0).exp());
        let s = schmidt_decompose(&psi, &g, 2).unwrap();
        assert!((s.lambdas[0] - 1.0).abs() < 1e-12);
        assert!(s.lambdas[1..].iter().all(|&l| l < 1e-10));
        assert!((purity_of(&s).purity - 1.0).abs() < 1e-12);
        assert!((purity_by_quadrature(&psi, &g).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entangled_field_routes_agree() {
        let g = grid();
        let psi = sample(&g, |rho, r| (-rho * rho / (2.0 + 0.1 * r * r)).exp() * (-r * r / 8.0).exp());
        let s = schmidt_decompose(&psi, &g, 3).unwrap();
        let sum: f64 = s.lambdas.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!(s.lambdas.windows(2).all(|w| w[0] >= w[1]));
        let p = purity_of(&s).purity;
        assert!(p < 0.999);
        assert!((p - purity_by_quadrature(&psi, &g).unwrap()).abs() < 1e-12);
        // modes are orthonormal under quadrature
        let w_t = g.spacing(0) * g.spacing(1);
        let w_l = g.spacing(2);
        for a in 0..3 {
            for b in 0..3 {
                let want = if a == b { 1.0 } else { 0.0 };
                let ct: f64 = s.chi_modes[a].iter().zip(&s.chi_modes[b]).map(|(x, y)| x * y).sum::<f64>() * w_t;
                let cl: f64 = s.phi_modes[a].iter().zip(&s.phi_modes[b]).map(|(x, y)| x * y).sum::<f64>() * w_l;
                assert!((ct - want).abs() < 1e-10 && (cl - want).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn two_equal_terms_give_half() {
        let s = SchmidtSpectrum {
            lambdas: vec![0.5, 0.5],
            chi_modes: vec![],
            phi_modes: vec![],
        };
        assert_eq!(purity_of(&s).purity, 0.5);
        let one = SchmidtSpectrum {
            lambdas: vec![1.0],
            ..s
        };
        assert_eq!(purity_of(&one).purity, 1.0);
        assert_eq!(purity_of(&one).lambda1_estimate, 0.0);
    }
}
