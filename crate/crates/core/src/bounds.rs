//! Tail bounds of the form `E(φ(X))/φ(ν)` and their restricted counterparts
//! `E(φ(X)·1{X > ν})/φ(ν)` for `φ ∈ {x, x^k, e^{tx}}`.
//!
//! Every comparison is reported raw. Traditional bounds routinely exceed 1
//! for `ν` below the mean; clamping belongs to the presentation layer.

use std::cell::RefCell;
use std::fmt;

use crate::distribution::{Distribution, MomentOrder};
use crate::error::{Error, Result};
use crate::numerics::minimize_unimodal;

/// Relative slack used when checking `tail ≤ enhanced ≤ traditional` on
/// numerically computed values.
pub const SANDWICH_SLACK: f64 = 1e-9;

const EXPONENTIAL_BRACKET_MARGIN: f64 = 1e-6;
const GENERIC_T_MAX_SCALE: f64 = 50.0;
const CHERNOFF_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundKind {
    TraditionalMarkov,
    EnhancedMarkov,
    TraditionalMoment(MomentOrder),
    EnhancedMoment(MomentOrder),
    TraditionalChernoff(f64),
    EnhancedChernoff(f64),
}

impl BoundKind {
    /// Value of this bound on `Pr{X > ν}`.
    pub fn evaluate(&self, dist: &Distribution, nu: f64) -> Result<f64> {
        check_nu(nu)?;
        match *self {
            BoundKind::TraditionalMarkov => traditional_moment(dist, nu, MomentOrder::FIRST),
            BoundKind::EnhancedMarkov => enhanced_moment(dist, nu, MomentOrder::FIRST),
            BoundKind::TraditionalMoment(k) => traditional_moment(dist, nu, k),
            BoundKind::EnhancedMoment(k) => enhanced_moment(dist, nu, k),
            BoundKind::TraditionalChernoff(t) => {
                check_exponent(dist, t)?;
                dist.restricted_mgf_shifted(0.0, t, nu)
            }
            BoundKind::EnhancedChernoff(t) => {
                check_exponent(dist, t)?;
                dist.restricted_mgf_shifted(nu, t, nu)
            }
        }
    }

    pub fn is_enhanced(&self) -> bool {
        matches!(
            self,
            BoundKind::EnhancedMarkov | BoundKind::EnhancedMoment(_) | BoundKind::EnhancedChernoff(_)
        )
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundKind::TraditionalMarkov => write!(f, "markov"),
            BoundKind::EnhancedMarkov => write!(f, "enhanced-markov"),
            BoundKind::TraditionalMoment(k) => write!(f, "moment:k={k}"),
            BoundKind::EnhancedMoment(k) => write!(f, "enhanced-moment:k={k}"),
            BoundKind::TraditionalChernoff(t) => write!(f, "chernoff:t={t}"),
            BoundKind::EnhancedChernoff(t) => write!(f, "enhanced-chernoff:t={t}"),
        }
    }
}

/// Tail probability next to an enhanced and a traditional bound at one threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComparisonRow {
    pub nu: f64,
    pub tail: f64,
    pub enhanced: f64,
    pub traditional: f64,
}

impl ComparisonRow {
    /// Numerical slack `1e-9·max(1, traditional)` allowed in sandwich checks.
    pub fn slack(&self) -> f64 {
        SANDWICH_SLACK * self.traditional.max(1.0)
    }

    /// `tail ≤ enhanced ≤ traditional`, each up to [`ComparisonRow::slack`].
    pub fn sandwich_holds(&self) -> bool {
        let s = self.slack();
        self.tail <= self.enhanced + s && self.enhanced <= self.traditional + s
    }

    /// Bounds capped at 1. The tail is never touched.
    pub fn clamped(&self) -> Self {
        Self {
            enhanced: self.enhanced.min(1.0),
            traditional: self.traditional.min(1.0),
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChernoffVariant {
    Traditional,
    Enhanced,
}

impl fmt::Display for ChernoffVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChernoffVariant::Traditional => f.write_str("traditional"),
            ChernoffVariant::Enhanced => f.write_str("enhanced"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChernoffResult {
    pub t_star: f64,
    pub bound: f64,
    pub variant: ChernoffVariant,
    pub at_boundary: bool,
}

fn check_nu(nu: f64) -> Result<()> {
    if nu.is_finite() && nu > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("threshold nu must be positive and finite, got {nu}")))
    }
}

fn check_exponent(dist: &Distribution, t: f64) -> Result<()> {
    if !t.is_finite() {
        return Err(Error::domain(format!("exponent t must be finite, got {t}")));
    }
    if t < 0.0 {
        return Err(Error::domain(format!(
            "Chernoff exponent must be nonnegative (e^(tx) nondecreasing), got t = {t}"
        )));
    }
    if let Some(limit) = dist.mgf_limit() {
        if t >= limit {
            return Err(Error::domain(format!(
                "MGF of {dist} is finite only for t < {limit}, got t = {t}"
            )));
        }
    }
    Ok(())
}

fn enhanced_moment(dist: &Distribution, nu: f64, k: MomentOrder) -> Result<f64> {
    Ok(dist.restricted_moment(nu, k)? / nu.powi(k.get() as i32))
}

fn traditional_moment(dist: &Distribution, nu: f64, k: MomentOrder) -> Result<f64> {
    Ok(dist.moment(k)? / nu.powi(k.get() as i32))
}

/// `(Pr{X > ν}, E_ν(X)/ν, E(X)/ν)`.
pub fn markov_bounds(dist: &Distribution, nu: f64) -> Result<ComparisonRow> {
    moment_bounds(dist, nu, MomentOrder::FIRST)
}

/// `(Pr{X > ν}, E_ν(X^k)/ν^k, E(X^k)/ν^k)`.
pub fn moment_bounds(dist: &Distribution, nu: f64, order: MomentOrder) -> Result<ComparisonRow> {
    check_nu(nu)?;
    Ok(ComparisonRow {
        nu,
        tail: dist.tail(nu)?,
        enhanced: enhanced_moment(dist, nu, order)?,
        traditional: traditional_moment(dist, nu, order)?,
    })
}

/// `(Pr{X > ν}, E_ν(e^{tX})e^{-tν}, E(e^{tX})e^{-tν})` for `t ≥ 0` inside the MGF domain.
pub fn chernoff_bounds(dist: &Distribution, nu: f64, t: f64) -> Result<ComparisonRow> {
    check_nu(nu)?;
    check_exponent(dist, t)?;
    Ok(ComparisonRow {
        nu,
        tail: dist.tail(nu)?,
        enhanced: BoundKind::EnhancedChernoff(t).evaluate(dist, nu)?,
        traditional: BoundKind::TraditionalChernoff(t).evaluate(dist, nu)?,
    })
}

/// Search interval for the Chernoff exponent.
///
/// Exponential(rate) uses `[0, rate·(1 − 1e-6)]`, capped by `t_max` when given.
/// Other shapes use `[0, t_max]` with `t_max` defaulting to `50/ν`.
pub fn chernoff_bracket(dist: &Distribution, nu: f64, t_max: Option<f64>) -> Result<(f64, f64)> {
    check_nu(nu)?;
    if let Some(t) = t_max {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::invalid(format!("t_max must be positive and finite, got {t}")));
        }
    }
    let hi = match dist.mgf_limit() {
        Some(limit) => {
            let edge = limit * (1.0 - EXPONENTIAL_BRACKET_MARGIN);
            t_max.map_or(edge, |t| t.min(edge))
        }
        None => t_max.unwrap_or(GENERIC_T_MAX_SCALE / nu),
    };
    Ok((0.0, hi))
}

/// Minimizes the chosen Chernoff bound over `t` by golden-section search.
///
/// Points where the objective cannot be evaluated (MGF overflow at large `t`,
/// quadrature failure) count as `+∞`; the first such error is returned only
/// if no finite value was found at all.
pub fn optimize_chernoff(
    dist: &Distribution,
    nu: f64,
    variant: ChernoffVariant,
    t_max: Option<f64>,
) -> Result<ChernoffResult> {
    let (lo, hi) = chernoff_bracket(dist, nu, t_max)?;
    let kind = |t: f64| match variant {
        ChernoffVariant::Traditional => BoundKind::TraditionalChernoff(t),
        ChernoffVariant::Enhanced => BoundKind::EnhancedChernoff(t),
    };
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let objective = |t: f64| match kind(t).evaluate(dist, nu) {
        Ok(v) if v.is_finite() => v,
        Ok(_) => f64::INFINITY,
        Err(e) => {
            failure.borrow_mut().get_or_insert(e);
            f64::INFINITY
        }
    };

    let tol = CHERNOFF_TOL * hi.max(1.0);
    let (t_star, bound) = minimize_unimodal(objective, lo, hi, tol)?;
    if !bound.is_finite() {
        return Err(failure.into_inner().unwrap_or_else(|| {
            Error::invalid(format!("Chernoff objective is not finite anywhere on [{lo}, {hi}]"))
        }));
    }
    let at_boundary = (t_star - lo).abs() <= tol || (hi - t_star).abs() <= tol;
    Ok(ChernoffResult {
        t_star,
        bound,
        variant,
        at_boundary,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_exp() -> Distribution {
        Distribution::exponential(1.0).unwrap()
    }

    fn k(order: u32) -> MomentOrder {
        MomentOrder::new(order).unwrap()
    }

    fn sig3(v: f64) -> String {
        format!("{v:.2e}")
    }

    #[test]
    fn markov_exponential_upper_quantile() {
        let row = markov_bounds(&unit_exp(), 6.908).unwrap();
        assert_eq!(sig3(row.tail), "1.00e-3");
        assert_eq!(sig3(row.enhanced), "1.14e-3");
        assert_eq!(format!("{:.3}", row.traditional), "0.145");
        assert!(row.sandwich_holds());
    }

    #[test]
    fn markov_table_rows() {
        let h = markov_bounds(&Distribution::unit_half_normal(), 5.0).unwrap();
        assert_eq!(format!("{:.1e}", h.tail), "6.6e-5");
        assert_eq!(format!("{:.1e}", h.enhanced), "7.0e-5");
        assert_eq!(format!("{:.3}", h.traditional), "0.200");

        let e = markov_bounds(&unit_exp(), 1.0).unwrap();
        assert_eq!(format!("{:.3}", e.tail), "0.368");
        assert_eq!(format!("{:.3}", e.enhanced), "0.736");
        assert_eq!(format!("{:.3}", e.traditional), "1.000");
    }

    #[test]
    fn nonpositive_threshold_rejected() {
        for nu in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(markov_bounds(&unit_exp(), nu), Err(Error::InvalidInput(_))));
        }
    }

    #[test]
    fn moment_k1_is_markov() {
        for d in [unit_exp(), Distribution::unit_half_normal()] {
            for nu in [0.3, 1.0, 4.5] {
                assert_eq!(markov_bounds(&d, nu).unwrap(), moment_bounds(&d, nu, k(1)).unwrap());
            }
        }
    }

    #[test]
    fn second_moment_exponential() {
        let row = moment_bounds(&unit_exp(), 4.0, k(2)).unwrap();
        let enhanced = 26.0 * (-4.0f64).exp() / 16.0;
        assert!((row.enhanced - enhanced).abs() < 1e-15);
        assert!((row.enhanced - 0.02976).abs() < 1e-5);
        assert!((row.traditional - 0.125).abs() < 1e-14);
        assert!((row.tail - 0.0183).abs() < 1e-4);
        assert!(row.tail <= row.enhanced && row.enhanced <= row.traditional);
    }

    #[test]
    fn chernoff_at_zero_collapses_to_tail() {
        for d in [unit_exp(), Distribution::unit_half_normal()] {
            let row = chernoff_bounds(&d, 2.0, 0.0).unwrap();
            assert_eq!(row.enhanced, row.tail);
            assert_eq!(row.traditional, 1.0);
        }
    }

    #[test]
    fn chernoff_exponential_values() {
        let e = unit_exp();
        let row = chernoff_bounds(&e, 3.0, 2.0 / 3.0).unwrap();
        assert!((row.traditional - 3.0 * (-2.0f64).exp()).abs() < 1e-14);
        let row = chernoff_bounds(&e, 3.0, 0.5).unwrap();
        assert!((row.enhanced - (-3.0f64).exp() / 0.5).abs() < 1e-15);
        assert!((row.enhanced - 0.0996).abs() < 1e-4);
    }

    #[test]
    fn chernoff_domain_errors() {
        let e = unit_exp();
        assert!(matches!(chernoff_bounds(&e, 3.0, 1.5), Err(Error::DomainError(_))));
        assert!(matches!(chernoff_bounds(&e, 3.0, 1.0), Err(Error::DomainError(_))));
        assert!(matches!(chernoff_bounds(&e, 3.0, -0.1), Err(Error::DomainError(_))));
        let h = Distribution::unit_half_normal();
        assert!(matches!(chernoff_bounds(&h, 3.0, -0.1), Err(Error::DomainError(_))));
        assert!(chernoff_bounds(&h, 3.0, 5.0).is_ok());
    }

    #[test]
    fn optimize_traditional_exponential() {
        let r = optimize_chernoff(&unit_exp(), 3.0, ChernoffVariant::Traditional, None).unwrap();
        assert!((r.t_star - 2.0 / 3.0).abs() < 1e-7);
        assert!((r.bound - 3.0 * (-2.0f64).exp()).abs() < 1e-12);
        assert!(!r.at_boundary);
    }

    #[test]
    fn optimize_enhanced_exponential_sits_at_zero() {
        let e = unit_exp();
        let r = optimize_chernoff(&e, 3.0, ChernoffVariant::Enhanced, None).unwrap();
        assert_eq!(r.t_star, 0.0);
        assert!(r.at_boundary);
        assert!((r.bound - e.tail(3.0).unwrap()).abs() < 1e-9);
        assert!((r.bound - 0.0498).abs() < 1e-4);
    }

    #[test]
    fn optimize_half_normal_both_variants() {
        let h = Distribution::unit_half_normal();
        for nu in [0.5, 2.0, 4.0] {
            let trad = optimize_chernoff(&h, nu, ChernoffVariant::Traditional, None).unwrap();
            let enh = optimize_chernoff(&h, nu, ChernoffVariant::Enhanced, None).unwrap();
            let tail = h.tail(nu).unwrap();
            assert!(enh.bound <= trad.bound + 1e-9);
            assert!(enh.bound >= tail - 1e-9);
            assert!(trad.bound >= tail - 1e-9);
            // Below the mean the classical objective rises from t = 0.
            if nu > 1.0 {
                assert!(trad.t_star > 0.0 && trad.t_star < 50.0 / nu && !trad.at_boundary);
            } else {
                assert_eq!(trad.t_star, 0.0);
                assert!(trad.at_boundary);
            }
        }
    }

    #[test]
    fn bracket_rules() {
        let e = Distribution::exponential(2.0).unwrap();
        assert_eq!(chernoff_bracket(&e, 1.0, None).unwrap(), (0.0, 2.0 * (1.0 - 1e-6)));
        assert_eq!(chernoff_bracket(&e, 1.0, Some(0.5)).unwrap(), (0.0, 0.5));
        let h = Distribution::unit_half_normal();
        assert_eq!(chernoff_bracket(&h, 5.0, None).unwrap(), (0.0, 10.0));
        assert_eq!(chernoff_bracket(&h, 5.0, Some(3.0)).unwrap(), (0.0, 3.0));
        assert!(chernoff_bracket(&h, 5.0, Some(-1.0)).is_err());
    }

    #[test]
    fn clamp_only_touches_bounds() {
        let row = markov_bounds(&unit_exp(), 0.5).unwrap();
        let c = row.clamped();
        assert_eq!(c.tail, row.tail);
        assert_eq!(c.traditional, 1.0);
        assert_eq!(c.enhanced, row.enhanced.min(1.0));
        let far = markov_bounds(&unit_exp(), 5.0).unwrap();
        assert_eq!(far.clamped(), far);
    }

    #[test]
    fn bound_kind_matches_rows() {
        let d = Distribution::unit_half_normal();
        let nu = 2.0;
        let m = markov_bounds(&d, nu).unwrap();
        assert_eq!(BoundKind::EnhancedMarkov.evaluate(&d, nu).unwrap(), m.enhanced);
        assert_eq!(BoundKind::TraditionalMarkov.evaluate(&d, nu).unwrap(), m.traditional);
        let c = chernoff_bounds(&d, nu, 0.8).unwrap();
        assert_eq!(BoundKind::EnhancedChernoff(0.8).evaluate(&d, nu).unwrap(), c.enhanced);
        assert_eq!(BoundKind::TraditionalChernoff(0.8).evaluate(&d, nu).unwrap(), c.traditional);
        assert!(BoundKind::EnhancedMoment(k(2)).is_enhanced());
        assert!(!BoundKind::TraditionalChernoff(1.0).is_enhanced());
        assert_eq!(BoundKind::EnhancedMoment(k(3)).to_string(), "enhanced-moment:k=3");
    }

    #[test]
    fn scale_equivariance() {
        let r = 3.7;
        let scaled = Distribution::exponential(r).unwrap();
        let unit = unit_exp();
        for nu in [0.1, 0.5, 1.0, 2.0] {
            let a = markov_bounds(&scaled, nu).unwrap();
            let b = markov_bounds(&unit, r * nu).unwrap();
            assert!((a.tail - b.tail).abs() < 1e-10);
            assert!((a.enhanced - b.enhanced).abs() < 1e-10);
            assert!((a.traditional - b.traditional).abs() < 1e-10);
        }
    }
}
