//! Bracketed scalar root refinement.

use crate::error::{Error, Result};

/// Root of `f` in `[lo, hi]`, where `f(lo)` and `f(hi)` have opposite signs
/// (or one is zero).
///
/// A few bisection steps shrink the bracket, then secant steps on the
/// bracket take over (Illinois variant: the end kept twice in a row has its
/// function value halved, so the bracket closes from both sides). Stops once
/// the bracket is within `rel_tol · |x|`.
pub fn bisect_secant<F>(mut f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    const BISECTIONS: usize = 8;
    const MAX_ITER: usize = 200;

    let mut f_lo = f(lo)?;
    let mut f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Config(format!(
            "root not bracketed in [{lo}, {hi}] (f = {f_lo}, {f_hi})"
        )));
    }
    // -1 when the high end survived the last step, +1 for the low end
    let mut kept = 0i8;
    for iter in 0..MAX_ITER {
        if (hi - lo).abs() <= rel_tol * lo.abs().max(hi.abs()) {
            break;
        }
        let x = if iter < BISECTIONS {
            0.5 * (lo + hi)
        } else {
            hi - f_hi * (hi - lo) / (f_hi - f_lo)
        };
        let fx = f(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
            f_lo = fx;
            if kept == -1 && iter >= BISECTIONS {
                f_hi *= 0.5;
            }
            kept = -1;
        } else {
            hi = x;
            f_hi = fx;
            if kept == 1 && iter >= BISECTIONS {
                f_lo *= 0.5;
            }
            kept = 1;
        }
    }
    Ok(lo - f_lo * (hi - lo) / (f_hi - f_lo))
}
