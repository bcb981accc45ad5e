//! Series evaluation of the polylogarithm and generalized hypergeometric
//! functions for real arguments well inside the unit disk.
//!
//! Both are plain forward sums driven by a term-ratio recurrence; every
//! argument this crate needs has |z| ≤ 1/4, so convergence is geometric.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-13;
const MAX_TERMS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    /// Estimated relative size of the neglected tail.
    pub truncation_bound: f64,
}

/// Li_s(z) = Σ_{n≥1} zⁿ/nˢ for s ≥ 1 and |z| < 1.
///
/// The tail after term n is bounded by |t_{n+1}|/(1−|z|), which is what the
/// stopping rule uses.
pub fn polylog(s: f64, z: f64, tol: f64) -> Result<SeriesResult> {
    if !(z.abs() < 1.0) {
        return Err(Error::Domain {
            function: "polylog",
            detail: format!("|z| must be < 1, got z = {z}"),
        });
    }
    if !(s >= 1.0) {
        return Err(Error::Domain {
            function: "polylog",
            detail: format!("order s must be >= 1, got {s}"),
        });
    }
    if z == 0.0 {
        return Ok(SeriesResult {
            value: 0.0,
            terms_used: 0,
            truncation_bound: 0.0,
        });
    }
    let mut sum = 0.0;
    let mut zn = 1.0;
    for n in 1..=MAX_TERMS {
        zn *= z;
        sum += zn / (n as f64).powf(s);
        // |z|^{n+1}/(n+1)^s bounds every later term's leading factor
        let next = (zn * z).abs() / ((n + 1) as f64).powf(s);
        let tail = next / (1.0 - z.abs());
        if tail <= tol * sum.abs() {
            return Ok(SeriesResult {
                value: sum,
                terms_used: n,
                truncation_bound: tail / sum.abs(),
            });
        }
    }
    Err(Error::SeriesDivergence {
        terms: MAX_TERMS,
        last_term: zn,
    })
}

/// Rising factorial (α)_n = α(α+1)…(α+n−1), with (α)₀ = 1.
pub fn pochhammer(alpha: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, k| acc * (alpha + k as f64))
}

fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x.fract() == 0.0
}

/// ₚF_q(upper; lower; z) by forward summation.
///
/// Stops once |term| < tol·|partial sum| for three consecutive terms.
/// Terminating series (a nonpositive-integer upper parameter) are summed
/// exactly.
pub fn hypergeometric_pfq(upper: &[f64], lower: &[f64], z: f64, tol: f64) -> Result<SeriesResult> {
    if let Some(b) = lower.iter().find(|b| is_nonpositive_integer(**b)) {
        return Err(Error::Domain {
            function: "hypergeometric_pfq",
            detail: format!("lower parameter {b} is a nonpositive integer"),
        });
    }
    let terminating = upper.iter().any(|a| is_nonpositive_integer(*a));
    let (p, q) = (upper.len(), lower.len());
    if !terminating && z != 0.0 {
        if p > q + 1 {
            return Err(Error::Domain {
                function: "hypergeometric_pfq",
                detail: format!("{p}F{q} series diverges for z != 0"),
            });
        }
        if p == q + 1 && !(z.abs() < 1.0) {
            return Err(Error::Domain {
                function: "hypergeometric_pfq",
                detail: format!("{p}F{q} needs |z| < 1, got {z}"),
            });
        }
    }

    let mut sum = 1.0;
    let mut term = 1.0;
    let mut small_run = 0;
    let mut last_ratio = z.abs();
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let num: f64 = upper.iter().map(|a| a + nf).product();
        let den: f64 = lower.iter().map(|b| b + nf).product::<f64>() * (nf + 1.0);
        let next = term * num / den * z;
        if term != 0.0 {
            last_ratio = (next / term).abs();
        }
        term = next;
        sum += term;
        if term == 0.0 {
            return Ok(SeriesResult {
                value: sum,
                terms_used: n + 2,
                truncation_bound: 0.0,
            });
        }
        if term.abs() < tol * sum.abs() {
            small_run += 1;
            if small_run == 3 {
                let r = last_ratio.max(z.abs()).min(0.999);
                return Ok(SeriesResult {
                    value: sum,
                    terms_used: n + 2,
                    truncation_bound: term.abs() * r / (1.0 - r) / sum.abs(),
                });
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::SeriesDivergence {
        terms: MAX_TERMS,
        last_term: term,
    })
}
