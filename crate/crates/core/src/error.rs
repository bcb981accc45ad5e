use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The input is valid but the requested quantity is undefined for it,
    /// e.g. a Thomas-Fermi radius at N = 1.
    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("closed form requires a harmonic longitudinal trap (q = 2), got q = {0}")]
    NotHarmonic(f64),

    #[error("argument outside the domain of {function}: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("series did not converge after {terms} terms (last term {last_term:e})")]
    SeriesDivergence { terms: usize, last_term: f64 },

    #[error("no sign change in bracket [{lo}, {hi}]")]
    NoBracket { lo: f64, hi: f64 },

    #[error("relaxation did not converge in {iterations} iterations (relative mu change {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("non-finite field after {iterations} iterations; retry with a smaller dt than {dt}")]
    StepSize { iterations: usize, dt: f64 },

    #[error("grid too small: {0}")]
    GridTooSmall(String),

    #[error("malformed field file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
