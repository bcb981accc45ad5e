//! Physical constants, problem description and the internal unit system.
//!
//! Everything numerical in this crate runs in trap units: ħ = M = ω_T = 1,
//! so lengths are measured in the transverse oscillator length ρ₀ and
//! energies in ħω_T. [`ScaledProblem`] is the dimensionless image of a
//! [`ProblemSpec`]; SI values only appear at the boundary.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant [J s] (CODATA 2018).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Bohr radius [m] (CODATA 2018).
pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-11;
/// Atomic mass constant [kg] (CODATA 2018).
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;

/// Number of loosely confined (longitudinal) dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    /// Quasi-1D: d = 1 longitudinal, D = 2 transverse dimensions.
    Cigar,
    /// Quasi-2D: d = 2 longitudinal, D = 1 transverse dimension.
    Pancake,
}

impl Geometry {
    pub fn from_longitudinal_dims(d: u32) -> Result<Self> {
        match d {
            1 => Ok(Geometry::Cigar),
            2 => Ok(Geometry::Pancake),
            _ => Err(Error::InvalidInput(format!(
                "longitudinal dimension must be 1 or 2, got {d}"
            ))),
        }
    }

    /// Longitudinal dimension count `d`.
    pub fn d(self) -> u32 {
        match self {
            Geometry::Cigar => 1,
            Geometry::Pancake => 2,
        }
    }

    /// Transverse dimension count `D = 3 - d`.
    pub fn big_d(self) -> u32 {
        3 - self.d()
    }

    pub(crate) fn df(self) -> f64 {
        self.d() as f64
    }

    pub(crate) fn big_df(self) -> f64 {
        self.big_d() as f64
    }

    /// Υ_T ħω_T / η_T² for a harmonic transverse trap.
    pub fn upsilon_scaled(self) -> f64 {
        match self {
            Geometry::Cigar => 0.5 * (4.0f64 / 3.0).ln(),
            Geometry::Pancake => (8.0 - 4.0 * 3f64.sqrt()).ln(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomSpecies {
    /// [kg]
    pub mass: f64,
    /// s-wave scattering length [m]
    pub scattering_length: f64,
}

impl AtomSpecies {
    pub fn new(mass: f64, scattering_length: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidInput(format!("mass must be positive, got {mass}")));
        }
        if !(scattering_length > 0.0 && scattering_length.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "scattering length must be positive, got {scattering_length}"
            )));
        }
        Ok(Self {
            mass,
            scattering_length,
        })
    }

    /// ⁸⁷Rb in |F=1, m_F=-1⟩: 86.909 u, a = 100.4 a₀.
    pub fn rubidium87() -> Self {
        Self {
            mass: 86.909 * ATOMIC_MASS_UNIT,
            scattering_length: 100.4 * BOHR_RADIUS,
        }
    }
}

/// Separable trap: harmonic transverse confinement `½Mω_T²ρ²` and a
/// longitudinal power law `½k|r|^q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrapSpec {
    /// [rad/s]
    pub omega_t: f64,
    /// [rad/s]; for q = 2 this fixes the stiffness `k = Mω_L²`.
    pub omega_l: f64,
    pub geometry: Geometry,
    pub q: f64,
    /// Explicit longitudinal stiffness [J/m^q]; required when q ≠ 2.
    pub stiffness: Option<f64>,
}

impl TrapSpec {
    pub fn harmonic(omega_t: f64, omega_l: f64, geometry: Geometry) -> Result<Self> {
        let trap = Self {
            omega_t,
            omega_l,
            geometry,
            q: 2.0,
            stiffness: None,
        };
        trap.validate()?;
        Ok(trap)
    }

    /// Frequencies given as ω/2π in Hz.
    pub fn harmonic_hz(f_t: f64, f_l: f64, geometry: Geometry) -> Result<Self> {
        Self::harmonic(2.0 * PI * f_t, 2.0 * PI * f_l, geometry)
    }

    /// Power-law longitudinal trap. `omega_l` is kept only as the nominal
    /// longitudinal scale for the ω_T > ω_L check.
    pub fn power_law(
        omega_t: f64,
        omega_l: f64,
        geometry: Geometry,
        q: f64,
        stiffness: f64,
    ) -> Result<Self> {
        let trap = Self {
            omega_t,
            omega_l,
            geometry,
            q,
            stiffness: Some(stiffness),
        };
        trap.validate()?;
        Ok(trap)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega_l > 0.0 && self.omega_t > self.omega_l && self.omega_t.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "need omega_T > omega_L > 0, got omega_T = {}, omega_L = {}",
                self.omega_t, self.omega_l
            )));
        }
        if !(self.q > 0.0 && self.q.is_finite()) {
            return Err(Error::InvalidInput(format!("q must be positive, got {}", self.q)));
        }
        match self.stiffness {
            Some(k) if !(k > 0.0 && k.is_finite()) => Err(Error::InvalidInput(format!(
                "stiffness must be positive, got {k}"
            ))),
            None if !self.is_harmonic() => Err(Error::InvalidInput(
                "power-law trap with q != 2 needs an explicit stiffness".into(),
            )),
            _ => Ok(()),
        }
    }

    pub fn is_harmonic(&self) -> bool {
        self.q == 2.0
    }

    /// Longitudinal stiffness k [J/m^q].
    pub fn stiffness_for(&self, species: &AtomSpecies) -> f64 {
        self.stiffness
            .unwrap_or(species.mass * self.omega_l * self.omega_l)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub species: AtomSpecies,
    pub trap: TrapSpec,
    pub atom_number: u64,
}

impl ProblemSpec {
    pub fn new(species: AtomSpecies, trap: TrapSpec, atom_number: u64) -> Result<Self> {
        if atom_number < 1 {
            return Err(Error::InvalidInput("atom number must be at least 1".into()));
        }
        trap.validate()?;
        Ok(Self {
            species,
            trap,
            atom_number,
        })
    }

    /// ⁸⁷Rb in a harmonic trap: ω_T/2π and ω_L/2π in Hz.
    pub fn rubidium_harmonic(f_t: f64, f_l: f64, geometry: Geometry, atom_number: u64) -> Result<Self> {
        Self::new(
            AtomSpecies::rubidium87(),
            TrapSpec::harmonic_hz(f_t, f_l, geometry)?,
            atom_number,
        )
    }

    /// Bare interaction strength g = 4πħ²a/M [J m³].
    pub fn coupling(&self) -> f64 {
        4.0 * PI * HBAR * HBAR * self.species.scattering_length / self.species.mass
    }

    /// g̃ = (N−1)g [J m³].
    pub fn effective_coupling(&self) -> f64 {
        (self.atom_number as f64 - 1.0) * self.coupling()
    }

    pub fn scaled(&self) -> ScaledProblem {
        ScaledProblem::from_parts(&self.species, &self.trap, self.atom_number as f64)
    }
}

/// Dimensionless problem in trap units (ħ = M = ω_T = 1).
///
/// The atom number is real here so formula paths can trace continuous
/// curves in N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledProblem {
    pub geometry: Geometry,
    pub q: f64,
    /// Longitudinal stiffness in ħω_T/ρ₀^q.
    pub k: f64,
    /// Scattering length in ρ₀.
    pub a: f64,
    pub n: f64,
    /// ρ₀ [m].
    pub length_unit: f64,
    /// ħω_T [J].
    pub energy_unit: f64,
}

impl ScaledProblem {
    pub fn from_parts(species: &AtomSpecies, trap: &TrapSpec, n: f64) -> Self {
        let rho0 = (HBAR / (species.mass * trap.omega_t)).sqrt();
        let energy_unit = HBAR * trap.omega_t;
        let k = trap.stiffness_for(species) * rho0.powf(trap.q) / energy_unit;
        Self {
            geometry: trap.geometry,
            q: trap.q,
            k,
            a: species.scattering_length / rho0,
            n,
            length_unit: rho0,
            energy_unit,
        }
    }

    /// Fully dimensionless harmonic problem: ω_L/ω_T, a/ρ₀ and N.
    pub fn harmonic(geometry: Geometry, omega_ratio: f64, a: f64, n: f64) -> Self {
        Self {
            geometry,
            q: 2.0,
            k: omega_ratio * omega_ratio,
            a,
            n,
            length_unit: 1.0,
            energy_unit: 1.0,
        }
    }

    pub fn with_atoms(mut self, n: f64) -> Self {
        self.n = n;
        self
    }

    pub fn with_scattering_length(mut self, a: f64) -> Self {
        self.a = a;
        self
    }

    pub fn d(&self) -> u32 {
        self.geometry.d()
    }

    pub fn big_d(&self) -> u32 {
        self.geometry.big_d()
    }

    pub fn is_harmonic(&self) -> bool {
        self.q == 2.0
    }

    pub(crate) fn require_harmonic(&self) -> Result<()> {
        if self.is_harmonic() {
            Ok(())
        } else {
            Err(Error::NotHarmonic(self.q))
        }
    }

    /// ω_L/ω_T for harmonic traps (√k).
    pub fn omega_ratio(&self) -> f64 {
        self.k.sqrt()
    }

    /// Longitudinal characteristic length r₀ = (ħ²/Mk)^{1/(2+q)} in ρ₀.
    pub fn r0(&self) -> f64 {
        self.k.powf(-1.0 / (2.0 + self.q))
    }

    /// g = 4πa in trap units.
    pub fn g(&self) -> f64 {
        4.0 * PI * self.a
    }

    /// g̃ = (N−1)g in trap units.
    pub fn g_tilde(&self) -> f64 {
        (self.n - 1.0) * self.g()
    }

    /// η_T = 1/(2π)^{D/2} for the harmonic transverse ground state.
    pub fn eta_t(&self) -> f64 {
        (2.0 * PI).powf(-self.geometry.big_df() / 2.0)
    }

    /// Bare transverse zero-point energy E₀ = D/2.
    pub fn transverse_ground_energy(&self) -> f64 {
        self.geometry.big_df() / 2.0
    }

    /// Bare longitudinal zero-point energy (d/2)(ω_L/ω_T); harmonic only.
    pub fn longitudinal_ground_energy(&self) -> f64 {
        self.geometry.df() / 2.0 * self.omega_ratio()
    }

    /// Longitudinal potential ½k|r|^q at radius `r` (trap units).
    pub fn v_l(&self, r: f64) -> f64 {
        0.5 * self.k * r.abs().powf(self.q)
    }

    pub(crate) fn require_interacting(&self) -> Result<()> {
        if self.n > 1.0 {
            Ok(())
        } else {
            Err(Error::Degenerate(format!(
                "Thomas-Fermi quantities need N > 1, got N = {}",
                self.n
            )))
        }
    }
}
