//! Safeguarded secant / bisection root finding on a sign-changing bracket.

use crate::error::{Error, Result};

const MAX_ITER: usize = 500;

/// Root of `f` in `[lo, hi]`, which must bracket a sign change.
///
/// Takes a secant step whenever it lands strictly inside the current
/// bracket and otherwise bisects. Returns once the bracket width is below
/// `rel_tol·|x|` or `f` is exactly zero.
pub fn bracketed_root<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, rel_tol: f64) -> Result<f64> {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::NoBracket { lo: a, hi: b });
    }
    let mut bisect_next = false;
    for _ in 0..MAX_ITER {
        let mut x = if bisect_next {
            0.5 * (a + b)
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        if !(x > a && x < b) {
            x = 0.5 * (a + b);
        }
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        let width_before = b - a;
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        // force a bisection when the secant stalls on one side
        bisect_next = (b - a) > 0.5 * width_before;
        let scale = a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
        if b - a <= rel_tol * scale {
            return Ok(if fa.abs() < fb.abs() { a } else { b });
        }
    }
    Ok(if fa.abs() < fb.abs() { a } else { b })
}

/// Widens `[lo, hi]` geometrically about its midpoint until `f` changes
/// sign (positive arguments only), then returns the root.
pub fn expanding_root<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> Result<f64> {
    for _ in 0..60 {
        if f(lo).signum() != f(hi).signum() {
            return bracketed_root(&f, lo, hi, rel_tol);
        }
        lo *= 0.5;
        hi *= 2.0;
    }
    Err(Error::NoBracket { lo, hi })
}
