use crate::error::{Error, Result};

// 1/φ and 1/φ²
const INV_PHI: f64 = 0.618_033_988_749_894_9;
const INV_PHI2: f64 = 0.381_966_011_250_105_1;

const MAX_ITERATIONS: usize = 500;

/// Golden-section search for the minimum of a unimodal `g` on `[lo, hi]`.
///
/// Returns `(argmin, g(argmin))`. The endpoints are legitimate answers: after
/// the bracket shrinks below `tol`, the final point is compared with `g(lo)`
/// and `g(hi)` and the smallest of the three wins. Non-finite values are
/// treated as `+∞`; ties keep the left part of the bracket.
pub fn minimize_unimodal<G>(g: G, lo: f64, hi: f64, tol: f64) -> Result<(f64, f64)>
where
    G: Fn(f64) -> f64,
{
    if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
        return Err(Error::InvalidBracket {
            lo,
            hi,
            reason: "need finite endpoints with lo < hi",
        });
    }
    if !(tol > 0.0) {
        return Err(Error::invalid(format!("tolerance must be positive, got {tol}")));
    }
    let eval = |t: f64| {
        let v = g(t);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let (mut a, mut b) = (lo, hi);
    let mut c = a + INV_PHI2 * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval(c);
    let mut fd = eval(d);

    for _ in 0..MAX_ITERATIONS {
        if b - a <= tol {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = a + INV_PHI2 * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d);
        }
    }

    let (mut best_t, mut best_v) = if fc <= fd { (c, fc) } else { (d, fd) };
    for t in [lo, hi] {
        let v = eval(t);
        if v <= best_v {
            best_t = t;
            best_v = v;
        }
    }
    Ok((best_t, best_v))
}
