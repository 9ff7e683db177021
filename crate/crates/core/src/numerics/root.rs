use crate::error::{Error, Result};

const MAX_BISECTIONS: usize = 2000;

/// Bisection on a monotone function with a sign change over `[lo, hi]`.
///
/// Stops once the bracket is no wider than `tol` (or an exact zero is hit) and
/// returns the bracket midpoint. Finding the bracket is the caller's job.
pub fn find_root_monotone<G>(g: G, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::InvalidBracket {
            lo,
            hi,
            reason: "endpoints must be finite with lo <= hi",
        });
    }
    let (mut lo, mut hi) = (lo, hi);
    let g_lo = g(lo);
    let g_hi = g(hi);
    if g_lo.is_nan() || g_hi.is_nan() {
        return Err(Error::InvalidBracket {
            lo,
            hi,
            reason: "function is NaN at an endpoint",
        });
    }
    if g_lo == 0.0 {
        return Ok(lo);
    }
    if g_hi == 0.0 {
        return Ok(hi);
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::InvalidBracket {
            lo,
            hi,
            reason: "function has the same sign at both endpoints",
        });
    }
    let lo_negative = g_lo < 0.0;

    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let g_mid = g(mid);
        if g_mid == 0.0 {
            return Ok(mid);
        }
        if (g_mid < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
