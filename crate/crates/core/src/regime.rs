//! Reduced-dimension regime calculus: oscillator lengths, the critical
//! atom numbers N_L and N_T, the expansion parameter and the zero-order
//! Thomas-Fermi radius.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::units::{AtomSpecies, ScaledProblem, TrapSpec, HBAR};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegimeLabel {
    /// N < N_L: longitudinal kinetic energy still matters.
    BelowTF,
    /// N_L ≤ N ≤ N_T.
    ReducedDim,
    /// N > N_T: the transverse profile deforms appreciably.
    Crossover,
}

/// Derived scales of a problem. Lengths are in metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    pub rho0: f64,
    pub r0: f64,
    pub n_l: f64,
    pub n_t: f64,
    pub epsilon: f64,
    pub r_l0: f64,
    pub r_l0_at_nt: f64,
    pub regime_label: RegimeLabel,
}

impl RegimeReport {
    pub fn aspect_ratio_bare(&self) -> f64 {
        self.r0 / self.rho0
    }

    /// R̂_L0/ρ₀, the condensate aspect ratio at N = N_T.
    pub fn aspect_ratio_at_nt(&self) -> f64 {
        self.r_l0_at_nt / self.rho0
    }
}

/// Bare widths (ρ₀, r₀) in metres.
pub fn oscillator_lengths(trap: &TrapSpec, species: &AtomSpecies) -> (f64, f64) {
    let rho0 = (HBAR / (species.mass * trap.omega_t)).sqrt();
    let k = trap.stiffness_for(species);
    let r0 = (HBAR * HBAR / (species.mass * k)).powf(1.0 / (2.0 + trap.q));
    (rho0, r0)
}

/// N_L = 1 + d√(π/2)(r₀/2a)(ρ₀/r₀)^D.
pub fn lower_critical_n(p: &ScaledProblem) -> Result<f64> {
    p.require_harmonic()?;
    let d = p.geometry.df();
    let r0 = p.r0();
    Ok(1.0 + d * (PI / 2.0).sqrt() * r0 / (2.0 * p.a) * r0.powf(-p.geometry.big_df()))
}

/// N_T from the transverse energy balance, harmonic traps only.
pub fn upper_critical_n(p: &ScaledProblem) -> Result<f64> {
    p.require_harmonic()?;
    let d = p.geometry.df();
    let big_d = p.geometry.big_df();
    let r0 = p.r0();
    let prefactor = PI.powf((d - 1.0) / 2.0) / 8f64.powf((d + 1.0) / 2.0)
        * (big_d * (d + 4.0)).powf(d / 2.0 + 1.0)
        / (d * (d + 2.0));
    Ok(1.0 + prefactor / p.a * r0.powf(2.0 * d))
}

/// ε = 3(Υ_Tħω_T/η_T²)((N−1)/(N_T−1))^{2/(d+2)}.
pub fn expansion_parameter(p: &ScaledProblem) -> Result<f64> {
    let n_t = upper_critical_n(p)?;
    let d = p.geometry.df();
    let ratio = ((p.n - 1.0) / (n_t - 1.0)).max(0.0);
    Ok(3.0 * p.geometry.upsilon_scaled() * ratio.powf(2.0 / (d + 2.0)))
}

/// Zero-order Thomas-Fermi radius R_L0 (trap units) for any power law.
pub fn tf_radius_zero(p: &ScaledProblem) -> Result<f64> {
    p.require_interacting()?;
    let d = p.geometry.df();
    let q = p.q;
    let base = p.g_tilde() * p.eta_t() / p.k * d * (q + d) / (q * PI.powf(d - 1.0));
    Ok(base.powf(1.0 / (q + d)))
}

/// R̂_L0 = (√(D(d+4))/2) r₀²/ρ₀, the harmonic R_L0 at N = N_T (trap units).
pub fn tf_radius_at_nt(p: &ScaledProblem) -> Result<f64> {
    p.require_harmonic()?;
    let d = p.geometry.df();
    let r0 = p.r0();
    Ok((p.geometry.big_df() * (d + 4.0)).sqrt() / 2.0 * r0 * r0)
}

pub fn classify(n: f64, n_l: f64, n_t: f64) -> RegimeLabel {
    if n < n_l {
        RegimeLabel::BelowTF
    } else if n <= n_t {
        RegimeLabel::ReducedDim
    } else {
        RegimeLabel::Crossover
    }
}

pub fn regime_report(p: &ScaledProblem) -> Result<RegimeReport> {
    let n_l = lower_critical_n(p)?;
    let n_t = upper_critical_n(p)?;
    let rho0 = p.length_unit;
    let r_l0 = if p.n > 1.0 { tf_radius_zero(p)? } else { 0.0 };
    Ok(RegimeReport {
        rho0,
        r0: p.r0() * rho0,
        n_l,
        n_t,
        epsilon: expansion_parameter(p)?,
        r_l0: r_l0 * rho0,
        r_l0_at_nt: tf_radius_at_nt(p)? * rho0,
        regime_label: classify(p.n, n_l, n_t),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{Geometry, ProblemSpec};

    fn rb(f_t: f64, g: Geometry) -> ScaledProblem {
        ProblemSpec::rubidium_harmonic(f_t, 3.5, g, 2).unwrap().scaled()
    }

    #[test]
    fn r0_for_rubidium_at_3_5_hz() {
        let p = ProblemSpec::rubidium_harmonic(35.0, 3.5, Geometry::Cigar, 2).unwrap();
        let (rho0, r0) = oscillator_lengths(&p.trap, &p.species);
        assert!((r0 * 1e6 - 5.8).abs() < 0.05, "r0 = {r0}");
        assert!((r0 / rho0 - 10f64.sqrt()).abs() < 1e-12);
        let p350 = ProblemSpec::rubidium_harmonic(350.0, 3.5, Geometry::Cigar, 2).unwrap();
        let (rho0, r0) = oscillator_lengths(&p350.trap, &p350.species);
        assert!((rho0 / r0 - 0.1).abs() < 1e-12);
    }

    #[test]
    fn isotropic_lengths_coincide() {
        let sp = AtomSpecies::rubidium87();
        let trap = TrapSpec {
            omega_t: 100.0,
            omega_l: 100.0,
            geometry: Geometry::Cigar,
            q: 2.0,
            stiffness: None,
        };
        let (rho0, r0) = oscillator_lengths(&trap, &sp);
        assert!((rho0 - r0).abs() < 1e-15 * rho0);
    }

    #[test]
    fn critical_numbers_match_quoted_values() {
        let cases = [
            (Geometry::Cigar, [70.0, 15.0, 8.0], [4500.0, 10_000.0, 14_000.0]),
            (Geometry::Pancake, [430.0, 190.0, 140.0], [12_000.0, 135_000.0, 380_000.0]),
        ];
        for (g, nl, nt) in cases {
            for (i, f) in [35.0, 175.0, 350.0].into_iter().enumerate() {
                let p = rb(f, g);
                let l = lower_critical_n(&p).unwrap();
                let t = upper_critical_n(&p).unwrap();
                assert!((l / nl[i] - 1.0).abs() < 0.1, "{g:?} {f} N_L {l}");
                assert!((t / nt[i] - 1.0).abs() < 0.1, "{g:?} {f} N_T {t}");
            }
        }
    }

    #[test]
    fn huge_scattering_length_sends_n_l_to_one() {
        let p = rb(175.0, Geometry::Cigar).with_scattering_length(1e12);
        assert!((lower_critical_n(&p).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn doubling_a_halves_n_t_minus_one() {
        let p = rb(175.0, Geometry::Pancake);
        let t1 = upper_critical_n(&p).unwrap() - 1.0;
        let t2 = upper_critical_n(&p.with_scattering_length(2.0 * p.a)).unwrap() - 1.0;
        assert!((t1 / t2 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn epsilon_at_n_t() {
        for (g, want) in [(Geometry::Cigar, 0.43), (Geometry::Pancake, 0.21)] {
            let p = rb(175.0, g);
            let nt = upper_critical_n(&p).unwrap();
            let eps = expansion_parameter(&p.with_atoms(nt)).unwrap();
            assert!((eps - want).abs() < 0.005, "{g:?}: {eps}");
            assert_eq!(expansion_parameter(&p.with_atoms(1.0)).unwrap(), 0.0);
        }
    }

    #[test]
    fn non_harmonic_closed_forms_rejected() {
        let mut p = rb(175.0, Geometry::Cigar);
        p.q = 4.0;
        assert!(lower_critical_n(&p).is_err());
        assert!(upper_critical_n(&p).is_err());
        assert!(tf_radius_zero(&p.with_atoms(100.0)).is_ok());
    }

    #[test]
    fn tf_radius_at_nt_identity() {
        for g in [Geometry::Cigar, Geometry::Pancake] {
            for f in [35.0, 175.0, 350.0] {
                let p = rb(f, g);
                let nt = upper_critical_n(&p).unwrap();
                let direct = tf_radius_zero(&p.with_atoms(nt)).unwrap();
                let hat = tf_radius_at_nt(&p).unwrap();
                assert!((direct / hat - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn tf_radius_needs_interactions() {
        assert!(tf_radius_zero(&rb(35.0, Geometry::Cigar).with_atoms(1.0)).is_err());
    }

    #[test]
    fn labels() {
        assert_eq!(classify(5.0, 10.0, 100.0), RegimeLabel::BelowTF);
        assert_eq!(classify(10.0, 10.0, 100.0), RegimeLabel::ReducedDim);
        assert_eq!(classify(100.0, 10.0, 100.0), RegimeLabel::ReducedDim);
        assert_eq!(classify(100.5, 10.0, 100.0), RegimeLabel::Crossover);
    }
}
