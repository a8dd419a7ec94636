//! Bracketed, Newton-accelerated root finding for monotone functions.

use crate::error::{Error, Result};

/// Solve `f(x) = 0` on a bracket `[lo, hi]` with `f(lo) ≤ 0 ≤ f(hi)`.
///
/// Newton steps (using `df`) are taken whenever they stay inside the current
/// bracket; otherwise the step falls back to bisection. Convergence is
/// declared when `|f| ≤ ftol` or the bracket width drops below `xtol`.
pub fn newton_bisect(
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    ftol: f64,
    xtol: f64,
    max_iter: usize,
) -> Result<f64> {
    let (mut lo, mut hi) = (lo, hi);
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo.abs() <= ftol {
        return Ok(lo);
    }
    if fhi.abs() <= ftol {
        return Ok(hi);
    }
    if flo > 0.0 || fhi < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "root not bracketed: f({lo}) = {flo}, f({hi}) = {fhi}"
        )));
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..max_iter {
        let fx = f(x);
        if fx.abs() <= ftol {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        if hi - lo <= xtol {
            // interpolate linearly inside the final bracket
            let fh = f(hi);
            let denom = fh - flo;
            let t = if denom.abs() > 0.0 { -flo / denom } else { 0.5 };
            return Ok(lo + t.clamp(0.0, 1.0) * (hi - lo));
        }
        let d = df(x);
        let newton = x - fx / d;
        x = if d.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
    }
    Err(Error::InternalInvariant(format!(
        "root solve did not converge within {max_iter} iterations (bracket [{lo}, {hi}])"
    )))
}
