//! Nonnegative random variables and their restricted moments.
//!
//! Every quantity a bound needs comes from here: the tail `Pr{X > x}`, the
//! restricted moments `E(X^k · 1{X > ν})`, the restricted moment generating
//! function `E(e^{tX} · 1{X > ν})` and quantiles. Built-in families use closed
//! forms where they exist; everything else goes through
//! [`integrate_semi_infinite`].
//!
//! All densities are assumed atomless, so `Pr{X > x} = Pr{X >= x}`.

use std::cell::RefCell;
use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numerics::{find_root_monotone, integrate_semi_infinite, QuadratureConfig};

const NORMALIZATION_TOL: f64 = 1e-6;
const QUANTILE_REL_TOL: f64 = 1e-14;

/// Order `k >= 1` of a moment bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MomentOrder(u32);

impl MomentOrder {
    pub const FIRST: MomentOrder = MomentOrder(1);

    pub fn new(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("moment order must be at least 1"));
        }
        Ok(Self(k))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl fmt::Display for MomentOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

pub type DensityFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A user-supplied density on `[0, ∞)`, normalized by its computed mass.
#[derive(Clone)]
pub struct GenericDensity {
    density: DensityFn,
    mass: f64,
    mean_hint: Option<f64>,
}

impl GenericDensity {
    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn mean_hint(&self) -> Option<f64> {
        self.mean_hint
    }

    fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            (self.density)(x) / self.mass
        }
    }
}

impl fmt::Debug for GenericDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GenericDensity")
            .field("mass", &self.mass)
            .field("mean_hint", &self.mean_hint)
            .finish_non_exhaustive()
    }
}

#[derive(Debug, Clone)]
pub enum Shape {
    Exponential { rate: f64 },
    HalfNormal { sigma: f64 },
    Generic(GenericDensity),
}

/// A nonnegative random variable. Immutable once built.
#[derive(Debug, Clone)]
pub struct Distribution {
    shape: Shape,
    quadrature: QuadratureConfig,
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be positive and finite, got {v}")))
    }
}

fn check_threshold(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be finite and nonnegative, got {v}")))
    }
}

/// `E(Y^k · 1{Y > ν})` for the unit-rate exponential: `k! e^{-ν} Σ_{j≤k} ν^j / j!`.
fn unit_exponential_restricted_moment(nu: f64, k: u32) -> f64 {
    if k == 1 {
        return (-nu).exp() * (1.0 + nu);
    }
    let ln_k_fact = libm::lgamma(f64::from(k) + 1.0);
    if nu == 0.0 {
        return ln_k_fact.exp();
    }
    let ln_nu = nu.ln();
    (0..=k)
        .map(|j| {
            let j = f64::from(j);
            (ln_k_fact - libm::lgamma(j + 1.0) + j * ln_nu - nu).exp()
        })
        .sum()
}

impl Distribution {
    pub fn exponential(rate: f64) -> Result<Self> {
        check_positive("exponential rate", rate)?;
        Ok(Self {
            shape: Shape::Exponential { rate },
            quadrature: QuadratureConfig::default(),
        })
    }

    pub fn half_normal(sigma: f64) -> Result<Self> {
        check_positive("half-normal sigma", sigma)?;
        Ok(Self {
            shape: Shape::HalfNormal { sigma },
            quadrature: QuadratureConfig::default(),
        })
    }

    /// Half-normal with unit mean, `σ = √(π/2)`.
    pub fn unit_half_normal() -> Self {
        Self::half_normal((PI / 2.0).sqrt()).expect("σ = √(π/2) is positive")
    }

    /// Wraps a density on `[0, ∞)`.
    ///
    /// The density must integrate to 1 within `1e-6`; it is then divided by
    /// its computed mass. A `mean_hint`, if given, must agree with the computed
    /// mean to `1e-6` relative, but is never used in place of it.
    pub fn generic<F>(density: F, mean_hint: Option<f64>) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self::generic_with(density, mean_hint, QuadratureConfig::default())
    }

    pub fn generic_with<F>(density: F, mean_hint: Option<f64>, cfg: QuadratureConfig) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        cfg.validate()?;
        if let Some(m) = mean_hint {
            check_positive("mean hint", m)?;
        }
        let density: DensityFn = Arc::new(density);
        let probe = density.clone();
        let mass = integrate_semi_infinite(
            move |x| {
                let v = probe(x);
                if v < 0.0 {
                    f64::NAN
                } else {
                    v
                }
            },
            0.0,
            &cfg,
        )?;
        if (mass - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::invalid(format!(
                "density integrates to {mass}, not 1 (tolerance {NORMALIZATION_TOL:e})"
            )));
        }
        let dist = Self {
            shape: Shape::Generic(GenericDensity {
                density,
                mass,
                mean_hint,
            }),
            quadrature: cfg,
        };
        if let Some(hint) = mean_hint {
            let mean = dist.mean()?;
            if (mean - hint).abs() > NORMALIZATION_TOL * hint.max(1.0) {
                return Err(Error::invalid(format!(
                    "mean hint {hint} disagrees with computed mean {mean}"
                )));
            }
        }
        Ok(dist)
    }

    /// Replaces the quadrature settings used by the numerical paths.
    pub fn with_quadrature(mut self, cfg: QuadratureConfig) -> Result<Self> {
        cfg.validate()?;
        self.quadrature = cfg;
        Ok(self)
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn quadrature(&self) -> &QuadratureConfig {
        &self.quadrature
    }

    /// Upper end of the MGF domain when it is known to be finite.
    pub fn mgf_limit(&self) -> Option<f64> {
        match self.shape {
            Shape::Exponential { rate } => Some(rate),
            _ => None,
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return 0.0;
        }
        match &self.shape {
            Shape::Exponential { rate } => rate * (-rate * x).exp(),
            Shape::HalfNormal { sigma } => {
                (2.0 / (sigma * (2.0 * PI).sqrt())) * (-x * x / (2.0 * sigma * sigma)).exp()
            }
            Shape::Generic(g) => g.pdf(x),
        }
    }

    fn ln_pdf(&self, x: f64) -> f64 {
        if x < 0.0 {
            return f64::NEG_INFINITY;
        }
        match &self.shape {
            Shape::Exponential { rate } => rate.ln() - rate * x,
            Shape::HalfNormal { sigma } => {
                (2.0 / (sigma * (2.0 * PI).sqrt())).ln() - x * x / (2.0 * sigma * sigma)
            }
            Shape::Generic(g) => g.pdf(x).ln(),
        }
    }

    /// `Pr{X > x}`.
    pub fn tail(&self, x: f64) -> Result<f64> {
        check_threshold("x", x)?;
        if x == 0.0 {
            return Ok(1.0);
        }
        match &self.shape {
            Shape::Exponential { rate } => Ok((-rate * x).exp()),
            // 2(1 − Φ(x/σ)) without the cancellation in 1 − Φ.
            Shape::HalfNormal { sigma } => Ok(libm::erfc(x / (sigma * SQRT_2))),
            Shape::Generic(g) => {
                let v = integrate_semi_infinite(|y| g.pdf(y), x, &self.quadrature)?;
                Ok(v.clamp(0.0, 1.0))
            }
        }
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        Ok(1.0 - self.tail(x)?)
    }

    /// `E(X^k · 1{X > ν})`, closed form where one is available.
    pub fn restricted_moment(&self, nu: f64, order: MomentOrder) -> Result<f64> {
        check_threshold("nu", nu)?;
        let k = order.get();
        match &self.shape {
            Shape::Exponential { rate } => {
                Ok(unit_exponential_restricted_moment(rate * nu, k) / rate.powi(k as i32))
            }
            Shape::HalfNormal { sigma } if k == 1 => {
                Ok(sigma * (2.0 / PI).sqrt() * (-nu * nu / (2.0 * sigma * sigma)).exp())
            }
            _ => self.restricted_moment_by_quadrature(nu, order),
        }
    }

    /// `E(X^k · 1{X > ν})` by direct quadrature of `x^k f(x)`, for every shape.
    pub fn restricted_moment_by_quadrature(&self, nu: f64, order: MomentOrder) -> Result<f64> {
        check_threshold("nu", nu)?;
        let k = order.get() as i32;
        integrate_semi_infinite(
            |x| {
                let p = self.pdf(x);
                if p == 0.0 {
                    0.0
                } else {
                    x.powi(k) * p
                }
            },
            nu,
            &self.quadrature,
        )
    }

    /// `E(X^k)`.
    pub fn moment(&self, order: MomentOrder) -> Result<f64> {
        self.restricted_moment(0.0, order)
    }

    pub fn mean(&self) -> Result<f64> {
        self.moment(MomentOrder::FIRST)
    }

    /// `E(e^{tX} · 1{X > ν})`.
    pub fn restricted_mgf(&self, nu: f64, t: f64) -> Result<f64> {
        self.restricted_mgf_shifted(nu, t, 0.0)
    }

    /// `E(e^{t(X − shift)} · 1{X > ν})`. Folding the shift into the exponent
    /// keeps Chernoff objectives finite where the bare MGF would overflow.
    pub(crate) fn restricted_mgf_shifted(&self, nu: f64, t: f64, shift: f64) -> Result<f64> {
        check_threshold("nu", nu)?;
        if !t.is_finite() {
            return Err(Error::invalid(format!("exponent t must be finite, got {t}")));
        }
        if let Shape::Exponential { rate } = self.shape {
            if t >= rate {
                return Err(Error::domain(format!(
                    "MGF of exponential(rate={rate}) requires t < {rate}, got t = {t}"
                )));
            }
        }
        if t == 0.0 {
            return self.tail(nu);
        }
        match self.shape {
            Shape::Exponential { rate } => {
                Ok(rate * (-(rate - t) * nu - t * shift).exp() / (rate - t))
            }
            _ => integrate_semi_infinite(
                |x| (t * (x - shift) + self.ln_pdf(x)).exp(),
                nu,
                &self.quadrature,
            ),
        }
    }

    /// Smallest `x` with `F(x) = p`, by bisection on the tail after doubling
    /// the bracket out from `[0, 1]`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::invalid(format!("probability must lie in (0, 1), got {p}")));
        }
        let target = 1.0 - p;
        let failure: RefCell<Option<Error>> = RefCell::new(None);
        let tail = |x: f64| match self.tail(x) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        };

        let mut lo = 0.0;
        let mut hi = 1.0;
        while tail(hi) > target {
            if let Some(e) = failure.borrow_mut().take() {
                return Err(e);
            }
            lo = hi;
            hi *= 2.0;
            if !hi.is_finite() {
                return Err(Error::invalid(format!("no finite quantile for p = {p}")));
            }
        }
        if let Some(e) = failure.borrow_mut().take() {
            return Err(e);
        }

        let x = find_root_monotone(|x| target - tail(x), lo, hi, QUANTILE_REL_TOL * hi)?;
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        Ok(x)
    }

    /// Short human-readable description, e.g. `exponential(rate=1)`.
    pub fn label(&self) -> String {
        match &self.shape {
            Shape::Exponential { rate } => format!("exponential(rate={rate})"),
            Shape::HalfNormal { sigma } => format!("halfnormal(sigma={sigma})"),
            Shape::Generic(g) => match g.mean_hint {
                Some(m) => format!("generic(mean≈{m})"),
                None => "generic".to_string(),
            },
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}
