//! Bisection root finding for monotone functions.

use crate::error::{Error, Result};

/// Root of a nondecreasing function bracketed by `f(lo) <= 0 <= f(hi)`,
/// bisected until the bracket is narrower than `tol`. Deterministic.
pub fn find_root_monotone<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tol must be > 0, got {tol}")));
    }
    let f_lo = f(lo);
    let f_hi = f(hi);
    if !(f_lo <= 0.0 && 0.0 <= f_hi) {
        return Err(Error::BracketViolation { lo, hi, f_lo, f_hi });
    }
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    let (mut a, mut b) = (lo, hi);
    // 200 halvings exhaust f64 resolution on any realistic bracket.
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if f(mid) < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}
