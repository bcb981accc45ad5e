//! Geometry-renormalized interaction constants η_T, η_L, Δη_L and Υ_T.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::quadrature::{ball_integral, GaussLegendre};
use crate::regime::tf_radius_zero;
use crate::units::{Geometry, ScaledProblem};

/// All values in trap units (ħ = M = ω_T = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryConstants {
    /// ⟨ξ₀|ξ₀³⟩, inverse transverse volume.
    pub eta_t: f64,
    /// ⟨φ₀₀|φ₀₀³⟩, inverse longitudinal volume.
    pub eta_l: f64,
    /// Standard deviation of φ₀₀² under φ₀₀².
    pub delta_eta_l: f64,
    pub upsilon_t: f64,
    /// g·η_T
    pub g_eta_t: f64,
    /// 3g²Υ_T
    pub three_body_coupling: f64,
    /// g̃η_Tη_L
    pub combo_con: f64,
}

/// Transverse overlap ⟨ξ_n|ξ₀³⟩ and excitation gap E_n − E₀ of the bare
/// harmonic transverse modes n = 0..=n_max.
///
/// Pancakes (D = 1) use Hermite functions indexed by n, where odd overlaps
/// vanish; cigars (D = 2) use the m = 0 radial modes indexed by n_r.
pub fn transverse_overlaps(geometry: Geometry, n_max: usize) -> Vec<(f64, f64)> {
    let eta_t = (2.0 * PI).powf(-geometry.big_df() / 2.0);
    match geometry {
        Geometry::Cigar => (0..=n_max)
            .map(|nr| (eta_t * 0.5f64.powi(nr as i32), 2.0 * nr as f64))
            .collect(),
        Geometry::Pancake => {
            let mut out = Vec::with_capacity(n_max + 1);
            // o_{n+2} = −o_n √(n+1) / (2√(n+2))
            let mut even = eta_t;
            for n in 0..=n_max {
                if n % 2 == 1 {
                    out.push((0.0, n as f64));
                } else {
                    out.push((even, n as f64));
                    let nf = n as f64;
                    even *= -(nf + 1.0).sqrt() / (2.0 * (nf + 2.0).sqrt());
                }
            }
            out
        }
    }
}

/// Partial sum Σ_{n=1}^{n_max} ⟨ξ_n|ξ₀³⟩²/(E_n − E₀).
pub fn upsilon_series(p: &ScaledProblem, n_max: usize) -> f64 {
    transverse_overlaps(p.geometry, n_max)
        .into_iter()
        .skip(1)
        .map(|(o, gap)| o * o / gap)
        .sum()
}

/// η_L and Δη_L. Closed form for harmonic traps, quadrature over the
/// Thomas-Fermi profile otherwise.
pub(crate) fn longitudinal_etas(p: &ScaledProblem) -> Result<(f64, f64)> {
    let r_l0 = tf_radius_zero(p)?;
    let d = p.geometry.df();
    if p.is_harmonic() {
        let eta_l = d * (d + 2.0) / ((d + 4.0) * PI.powf(d - 1.0)) / r_l0.powf(d);
        let delta = (d / (2.0 * (d + 6.0))).sqrt() * eta_l;
        return Ok((eta_l, delta));
    }
    let (eta_l, sixth) = longitudinal_moments_by_quadrature(p, r_l0);
    Ok((eta_l, (sixth - eta_l * eta_l).max(0.0).sqrt()))
}

/// (∫φ₀₀⁴, ∫φ₀₀⁶) for the zero-order Thomas-Fermi profile.
pub(crate) fn longitudinal_moments_by_quadrature(p: &ScaledProblem, r_l0: f64) -> (f64, f64) {
    let rule = GaussLegendre::new(96);
    let mu_l0 = p.v_l(r_l0);
    let scale = p.g_tilde() * p.eta_t();
    let dens = |r: f64| ((mu_l0 - p.v_l(r)) / scale).max(0.0);
    let d = p.d();
    let fourth = ball_integral(&rule, d, r_l0, |r| dens(r).powi(2));
    let sixth = ball_integral(&rule, d, r_l0, |r| dens(r).powi(3));
    (fourth, sixth)
}

pub fn geometry_constants(p: &ScaledProblem) -> Result<GeometryConstants> {
    let (eta_l, delta_eta_l) = longitudinal_etas(p)?;
    let eta_t = p.eta_t();
    let upsilon_t = p.geometry.upsilon_scaled() * eta_t * eta_t;
    let g = p.g();
    Ok(GeometryConstants {
        eta_t,
        eta_l,
        delta_eta_l,
        upsilon_t,
        g_eta_t: g * eta_t,
        three_body_coupling: 3.0 * g * g * upsilon_t,
        combo_con: p.g_tilde() * eta_t * eta_l,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytics::modes::{hermite_functions, radial_modes};
    use crate::quadrature::GaussLegendre;

    fn problem(g: Geometry) -> ScaledProblem {
        ScaledProblem::harmonic(g, 0.02, 0.0065, 1000.0)
    }

    #[test]
    fn upsilon_closed_forms() {
        let c = geometry_constants(&problem(Geometry::Cigar)).unwrap();
        assert!((c.upsilon_t / c.eta_t.powi(2) - 0.5 * (4.0f64 / 3.0).ln()).abs() < 1e-15);
        let p = geometry_constants(&problem(Geometry::Pancake)).unwrap();
        assert!((p.upsilon_t / p.eta_t.powi(2) - (8.0 - 4.0 * 3f64.sqrt()).ln()).abs() < 1e-15);
    }

    #[test]
    fn delta_eta_ratio_for_cigar() {
        let c = geometry_constants(&problem(Geometry::Cigar)).unwrap();
        assert!((c.delta_eta_l / c.eta_l - (1.0f64 / 14.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn series_converges_to_closed_form() {
        for g in [Geometry::Cigar, Geometry::Pancake] {
            let p = problem(g);
            let closed = g.upsilon_scaled() * p.eta_t().powi(2);
            let s = upsilon_series(&p, 60);
            assert!((s / closed - 1.0).abs() < 1e-10, "{g:?}: {s} vs {closed}");
        }
    }

    #[test]
    fn first_pancake_term() {
        let p = problem(Geometry::Pancake);
        // Γ(3/2)² = π/4
        let want = p.eta_t().powi(2) * (PI / 4.0) / (PI * 2.0 * 2.0);
        assert!((upsilon_series(&p, 2) - want).abs() < 1e-16);
        assert!((upsilon_series(&p, 3) - want).abs() < 1e-16);
    }

    #[test]
    fn cigar_series_is_log_series() {
        let p = problem(Geometry::Cigar);
        let eta2 = p.eta_t().powi(2);
        let direct: f64 = (1..=60).map(|n| 0.25f64.powi(n) / n as f64).sum::<f64>() * eta2 / 2.0;
        assert!((upsilon_series(&p, 60) - direct).abs() < 1e-15);
    }

    #[test]
    fn overlaps_against_quadrature() {
        // pancake: Hermite functions on a wide interval
        let rule = GaussLegendre::new(200);
        let n_max = 12;
        let ov = transverse_overlaps(Geometry::Pancake, n_max);
        for n in 0..=n_max {
            let q = rule.integrate(-12.0, 12.0, |x| {
                let h = hermite_functions(x, n_max);
                h[n] * h[0].powi(3)
            });
            assert!((q - ov[n].0).abs() < 1e-13, "n = {n}: {q} vs {}", ov[n].0);
        }
        // cigar: radial modes with 2πρ dρ
        let ov = transverse_overlaps(Geometry::Cigar, n_max);
        for n in 0..=n_max {
            let q = rule.integrate(0.0, 12.0, |r| {
                let h = radial_modes(r, n_max);
                2.0 * PI * r * h[n] * h[0].powi(3)
            });
            assert!((q - ov[n].0).abs() < 1e-13, "n_r = {n}: {q} vs {}", ov[n].0);
        }
    }

    #[test]
    fn quadrature_etas_match_harmonic_closed_form() {
        for g in [Geometry::Cigar, Geometry::Pancake] {
            let p = problem(g);
            let (eta_l, delta) = longitudinal_etas(&p).unwrap();
            let r = tf_radius_zero(&p).unwrap();
            let (four, six) = longitudinal_moments_by_quadrature(&p, r);
            assert!((four / eta_l - 1.0).abs() < 1e-12);
            assert!(((six - four * four).sqrt() / delta - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn con_identity() {
        for g in [Geometry::Cigar, Geometry::Pancake] {
            let p = problem(g);
            let c = geometry_constants(&p).unwrap();
            let r = tf_radius_zero(&p).unwrap();
            let x = r / p.r0().powi(2);
            let want = 2.0 / (g.df() + 4.0) * x * x;
            assert!((c.combo_con / want - 1.0).abs() < 1e-12);
            // g·η_T = 2a(2π)^{(d−1)/2}
            let geta = 2.0 * p.a * (2.0 * PI).powf((g.df() - 1.0) / 2.0);
            assert!((c.g_eta_t / geta - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn degenerate_at_single_atom() {
        assert!(geometry_constants(&problem(Geometry::Cigar).with_atoms(1.0)).is_err());
    }
}
