//! Run configuration, read from TOML.
//!
//! ```toml
//! [species]
//! name = "rb87"            # or mass_amu + scattering_length_a0
//!
//! [trap]
//! omega_t_hz = 175.0
//! omega_l_hz = 3.5
//! d = 1
//!
//! [sweep]
//! relative = true          # N values in units of N_T
//! from = 0.01
//! to = 1.0
//! points = 30
//! # n = [0.02, 0.05, 0.1]  # explicit list instead of a range
//! methods = ["formula-first-order", "formula-exact-RL", "variational"]
//!
//! [grid]
//! points = [64, 64, 512]
//!
//! [numerics]
//! dt = 0.05
//!
//! [output]
//! path = "sweep.csv"
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use schmidt_bec::regime::upper_critical_n;
use schmidt_bec::solver::Numerics;
use schmidt_bec::units::{AtomSpecies, Geometry, ProblemSpec, ScaledProblem, TrapSpec, ATOMIC_MASS_UNIT, BOHR_RADIUS};

use crate::CliError;

pub const DEFAULT_POINTS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "formula-exact-RL")]
    FormulaExactRl,
    #[serde(rename = "formula-first-order")]
    FormulaFirstOrder,
    #[serde(rename = "solver-3d")]
    Solver3d,
    #[serde(rename = "variational")]
    Variational,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::FormulaExactRl,
        Method::FormulaFirstOrder,
        Method::Solver3d,
        Method::Variational,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::FormulaExactRl => "formula-exact-RL",
            Method::FormulaFirstOrder => "formula-first-order",
            Method::Solver3d => "solver-3d",
            Method::Variational => "variational",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesConfig {
    pub name: Option<String>,
    pub mass_amu: Option<f64>,
    pub scattering_length_a0: Option<f64>,
}

impl Default for SpeciesConfig {
    fn default() -> Self {
        Self {
            name: Some("rb87".into()),
            mass_amu: None,
            scattering_length_a0: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrapConfig {
    pub omega_t_hz: f64,
    pub omega_l_hz: f64,
    pub d: u32,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Explicit N values.
    pub n: Option<Vec<f64>>,
    /// Interpret N values and range ends in units of N_T.
    #[serde(default)]
    pub relative: bool,
    pub from: Option<f64>,
    pub to: Option<f64>,
    pub points: Option<usize>,
    pub methods: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub points: Option<[usize; 3]>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundStateConfig {
    pub n: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    #[serde(default)]
    pub species: SpeciesConfig,
    pub trap: TrapConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub ground_state: GroundStateConfig,
}

/// Validated configuration with every default resolved.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub species: AtomSpecies,
    pub trap: TrapSpec,
    /// Absolute atom numbers, ascending.
    pub atoms: Vec<f64>,
    /// Sorted by name.
    pub methods: Vec<Method>,
    pub grid_points: Option<[usize; 3]>,
    pub numerics: Numerics,
    pub output: Option<PathBuf>,
    pub ground_state_n: Option<f64>,
}

/// The fields that change results; hashed for the CSV header.
#[derive(Serialize)]
struct Canonical<'a> {
    mass: f64,
    scattering_length: f64,
    trap: &'a TrapSpec,
    atoms: &'a [f64],
    methods: Vec<&'static str>,
    grid_points: Option<[usize; 3]>,
    numerics: &'a Numerics,
    ground_state_n: Option<f64>,
}

fn field_error(field: &str, msg: impl fmt::Display) -> CliError {
    CliError::Config(format!("{field}: {msg}"))
}

fn resolve_species(s: &SpeciesConfig) -> Result<AtomSpecies, CliError> {
    let base = match s.name.as_deref() {
        None => None,
        Some("rb87") | Some("Rb87") | Some("87Rb") => Some(AtomSpecies::rubidium87()),
        Some(other) => return Err(field_error("species.name", format!("unknown species `{other}`"))),
    };
    let mass = match (s.mass_amu, base) {
        (Some(m), _) => m * ATOMIC_MASS_UNIT,
        (None, Some(b)) => b.mass,
        (None, None) => return Err(field_error("species.mass_amu", "required when no name is given")),
    };
    let a = match (s.scattering_length_a0, base) {
        (Some(a), _) => a * BOHR_RADIUS,
        (None, Some(b)) => b.scattering_length,
        (None, None) => {
            return Err(field_error("species.scattering_length_a0", "required when no name is given"))
        }
    };
    AtomSpecies::new(mass, a).map_err(|e| field_error("species", e))
}

fn log_spaced(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        Self::from_raw(raw)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn from_raw(raw: RawConfig) -> Result<Self, CliError> {
        let species = resolve_species(&raw.species)?;
        let geometry = Geometry::from_longitudinal_dims(raw.trap.d).map_err(|e| field_error("trap.d", e))?;
        if !(raw.trap.omega_t_hz > 0.0 && raw.trap.omega_l_hz > 0.0) {
            return Err(field_error("trap", "frequencies must be positive"));
        }
        let trap = if raw.trap.omega_t_hz == raw.trap.omega_l_hz {
            // only `scales` accepts an isotropic trap
            let w = 2.0 * std::f64::consts::PI * raw.trap.omega_t_hz;
            TrapSpec {
                omega_t: w,
                omega_l: w,
                geometry,
                q: 2.0,
                stiffness: None,
            }
        } else {
            TrapSpec::harmonic_hz(raw.trap.omega_t_hz, raw.trap.omega_l_hz, geometry)
                .map_err(|e| field_error("trap", e))?
        };
        let n_t = upper_critical_n(&ScaledProblem::from_parts(&species, &trap, 2.0))
            .map_err(|e| field_error("trap", e))?;

        let sweep = &raw.sweep;
        let scale = if sweep.relative { n_t } else { 1.0 };
        let mut atoms = match (&sweep.n, sweep.from, sweep.to) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                return Err(field_error("sweep", "give either `n` or `from`/`to`, not both"))
            }
            (Some(list), None, None) => {
                if list.is_empty() {
                    return Err(field_error("sweep.n", "must not be empty"));
                }
                list.iter().map(|v| v * scale).collect()
            }
            (None, from, to) => {
                let lo = from.map(|v| v * scale).unwrap_or((0.01 * n_t).max(2.0));
                let hi = to.map(|v| v * scale).unwrap_or(n_t);
                if !(lo > 0.0 && hi >= lo) {
                    return Err(field_error("sweep", format!("invalid range [{lo}, {hi}]")));
                }
                let points = sweep.points.unwrap_or(DEFAULT_POINTS);
                if points == 0 {
                    return Err(field_error("sweep.points", "must be at least 1"));
                }
                log_spaced(lo, hi, points)
            }
        };
        if let Some(bad) = atoms.iter().find(|&&n| !(n >= 1.0 && n.is_finite())) {
            return Err(field_error("sweep", format!("atom numbers must be ≥ 1, got {bad}")));
        }
        atoms.sort_by(f64::total_cmp);
        atoms.dedup();

        let mut methods = match &sweep.methods {
            None => vec![Method::FormulaExactRl, Method::FormulaFirstOrder, Method::Variational],
            Some(names) => names
                .iter()
                .map(|s| s.parse::<Method>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| field_error("sweep.methods", e))?,
        };
        if methods.is_empty() {
            return Err(field_error("sweep.methods", "at least one method is required"));
        }
        methods.sort();
        methods.dedup();

        if let Some(points) = raw.grid.points {
            if points.iter().any(|&p| p < 2 || !p.is_power_of_two()) {
                return Err(field_error("grid.points", "each count must be a power of two ≥ 2"));
            }
        }
        if !(raw.numerics.dt > 0.0 && raw.numerics.tol > 0.0 && raw.numerics.max_iters > 0) {
            return Err(field_error("numerics", "dt, tol and max_iters must be positive"));
        }
        if let Some(n) = raw.ground_state.n {
            if !(n >= 1.0) {
                return Err(field_error("ground_state.n", "must be ≥ 1"));
            }
        }
        Ok(Self {
            species,
            trap,
            atoms,
            methods,
            grid_points: raw.grid.points,
            numerics: raw.numerics,
            output: raw.output.path,
            ground_state_n: raw.ground_state.n,
        })
    }

    pub fn is_isotropic(&self) -> bool {
        self.trap.omega_t == self.trap.omega_l
    }

    /// Sweeps and ground states need a strictly anisotropic trap.
    pub fn require_anisotropic(&self) -> Result<(), CliError> {
        if self.is_isotropic() {
            return Err(field_error("trap", "omega_t_hz must exceed omega_l_hz"));
        }
        Ok(())
    }

    pub fn geometry(&self) -> Geometry {
        self.trap.geometry
    }

    pub fn problem(&self, n: f64) -> ScaledProblem {
        ScaledProblem::from_parts(&self.species, &self.trap, n)
    }

    /// Integer-N problem spec, for hashing field files.
    pub fn problem_spec(&self, n: f64) -> Result<ProblemSpec, CliError> {
        ProblemSpec::new(self.species, self.trap, n.round() as u64).map_err(|e| field_error("ground_state.n", e))
    }

    pub fn upper_critical_n(&self) -> f64 {
        upper_critical_n(&self.problem(2.0)).expect("validated harmonic trap")
    }

    /// SHA-256 over the result-relevant fields, hex encoded.
    pub fn hash(&self) -> String {
        let canonical = Canonical {
            mass: self.species.mass,
            scattering_length: self.species.scattering_length,
            trap: &self.trap,
            atoms: &self.atoms,
            methods: self.methods.iter().map(|m| m.name()).collect(),
            grid_points: self.grid_points,
            numerics: &self.numerics,
            ground_state_n: self.ground_state_n,
        };
        let bytes = serde_json::to_vec(&canonical).expect("plain data serializes");
        hex::encode(Sha256::digest(bytes))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
[trap]
omega_t_hz = 175.0
omega_l_hz = 3.5
d = 1
"#;

    #[test]
    fn defaults() {
        let c = RunConfig::from_toml(BASE).unwrap();
        assert_eq!(c.atoms.len(), DEFAULT_POINTS);
        let n_t = c.upper_critical_n();
        assert!((c.atoms[0] - 0.01 * n_t).abs() < 1e-9 * n_t);
        assert!((c.atoms[DEFAULT_POINTS - 1] / n_t - 1.0).abs() < 1e-12);
        assert_eq!(c.methods, vec![Method::FormulaExactRl, Method::FormulaFirstOrder, Method::Variational]);
        assert_eq!(c.species, AtomSpecies::rubidium87());
    }

    #[test]
    fn small_traps_start_at_two_atoms() {
        let strong = format!("[species]\nmass_amu = 86.909\nscattering_length_a0 = 1e5\n{BASE}");
        let c = RunConfig::from_toml(&strong).unwrap();
        assert!(0.01 * c.upper_critical_n() < 2.0);
        assert_eq!(c.atoms[0], 2.0);
        let iso = RunConfig::from_toml(&BASE.replace("175.0", "3.5")).unwrap();
        assert!(iso.require_anisotropic().is_err());
        assert!(RunConfig::from_toml(&BASE.replace("175.0", "3.0")).is_err());
    }

    #[test]
    fn diagnostics_name_the_field() {
        let err = RunConfig::from_toml(&BASE.replace("d = 1", "d = 3")).unwrap_err();
        assert!(err.to_string().contains("trap.d"), "{err}");
        let err = RunConfig::from_toml(&BASE.replace("d = 1", "d = \"one\"")).unwrap_err();
        assert!(err.to_string().contains("line 5"), "{err}");
        let err = RunConfig::from_toml(&format!("{BASE}\n[sweep]\nmethods = [\"magic\"]\n")).unwrap_err();
        assert!(err.to_string().contains("sweep.methods"), "{err}");
        let err = RunConfig::from_toml(&format!("{BASE}\n[sweep]\nn = [0.5]\n")).unwrap_err();
        assert!(err.to_string().contains("≥ 1"), "{err}");
        let err = RunConfig::from_toml(&format!("{BASE}\n[sweep]\nmethods = []\n")).unwrap_err();
        assert!(err.to_string().contains("at least one"), "{err}");
        assert!(RunConfig::from_toml(&format!("{BASE}\nbogus = 1\n")).is_err());
    }

    #[test]
    fn hash_tracks_meaningful_fields_only() {
        let base = RunConfig::from_toml(BASE).unwrap().hash();
        let reformatted = "# comment\n[trap]\nd = 1\nomega_l_hz = 3.5\nomega_t_hz = 175.0\n\n[output]\npath = \"x.csv\"\n";
        assert_eq!(RunConfig::from_toml(reformatted).unwrap().hash(), base);
        let named_out = "[species]\nmass_amu = 86.909\nscattering_length_a0 = 100.4\n".to_string() + BASE;
        assert_eq!(RunConfig::from_toml(&named_out).unwrap().hash(), base);
        for changed in [
            BASE.replace("175.0", "175.5"),
            format!("{BASE}\n[numerics]\ndt = 0.02\n"),
            format!("{BASE}\n[sweep]\npoints = 29\n"),
            format!("{BASE}\n[grid]\npoints = [32, 32, 256]\n"),
            format!("{BASE}\n[sweep]\nmethods = [\"variational\"]\n"),
        ] {
            assert_ne!(RunConfig::from_toml(&changed).unwrap().hash(), base, "{changed}");
        }
    }

    #[test]
    fn relative_list_and_method_order() {
        let text = format!(
            "{BASE}\n[sweep]\nrelative = true\nn = [0.1, 0.02, 0.05]\nmethods = [\"variational\", \"solver-3d\", \"formula-first-order\"]\n"
        );
        let c = RunConfig::from_toml(&text).unwrap();
        let n_t = c.upper_critical_n();
        assert_eq!(c.atoms, vec![0.02 * n_t, 0.05 * n_t, 0.1 * n_t]);
        assert_eq!(c.methods, vec![Method::FormulaFirstOrder, Method::Solver3d, Method::Variational]);
    }
}
