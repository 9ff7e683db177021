//! Adaptive Gauss-Kronrod quadrature on `[a, ∞)`.
//!
//! The half line is mapped onto `[0, 1)` with `x = a + u / (1 - u)`, so the
//! integrand seen by the panels is `f(a + u/(1-u)) / (1-u)^2`. Panels are
//! refined worst-error-first with a 10-point Gauss / 21-point Kronrod pair,
//! using the QUADPACK error rescaling.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// Tolerances and subdivision budget for [`integrate_semi_infinite`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            max_subdivisions: 200,
        }
    }
}

impl QuadratureConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let cfg = Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol >= 0.0 && self.abs_tol.is_finite())
            || !(self.rel_tol >= 0.0 && self.rel_tol.is_finite())
        {
            return Err(Error::invalid(format!(
                "tolerances must be finite and nonnegative (abs_tol={}, rel_tol={})",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.abs_tol == 0.0 && self.rel_tol == 0.0 {
            return Err(Error::invalid("abs_tol and rel_tol cannot both be zero"));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::invalid("max_subdivisions must be at least 1"));
        }
        Ok(())
    }

    /// Same budget, both tolerances scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            abs_tol: self.abs_tol * factor,
            rel_tol: self.rel_tol * factor,
            max_subdivisions: self.max_subdivisions,
        }
    }

    fn target(&self, estimate: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * estimate.abs())
    }
}

// Kronrod abscissae on [-1, 1]; odd indices are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_931_619_940,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    // Max-heap on error; ties broken by position so the refinement order is deterministic.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.lo.total_cmp(&self.lo))
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn kronrod_panel<F>(h: &F, lo: f64, hi: f64) -> Result<Panel>
where
    F: Fn(f64) -> Result<f64>,
{
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);

    let f_center = h(center)?;
    let mut res_k = f_center * WGK[10];
    let mut res_g = 0.0;
    let mut res_abs = res_k.abs();
    let mut f1 = [0.0; 10];
    let mut f2 = [0.0; 10];

    for j in 0..10 {
        let dx = half * XGK[j];
        let a = h(center - dx)?;
        let b = h(center + dx)?;
        f1[j] = a;
        f2[j] = b;
        res_k += WGK[j] * (a + b);
        res_abs += WGK[j] * (a.abs() + b.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (a + b);
        }
    }

    let mean = 0.5 * res_k;
    let mut res_asc = WGK[10] * (f_center - mean).abs();
    for j in 0..10 {
        res_asc += WGK[j] * ((f1[j] - mean).abs() + (f2[j] - mean).abs());
    }

    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let error = rescale_error((res_k - res_g) * half, res_abs, res_asc);
    Ok(Panel {
        lo,
        hi,
        value,
        error,
    })
}

/// Integrates `f` over `[a, ∞)`.
///
/// Converges when the summed panel error estimate drops to
/// `max(abs_tol, rel_tol·|I|)`. Fails with [`Error::NonConvergence`] once
/// `max_subdivisions` panels are in play without meeting that target, and with
/// [`Error::InvalidInput`] if `f` produces a non-finite value.
pub fn integrate_semi_infinite<F>(f: F, a: f64, cfg: &QuadratureConfig) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    cfg.validate()?;
    if !a.is_finite() {
        return Err(Error::invalid(format!("lower limit must be finite, got {a}")));
    }

    let mapped = |u: f64| -> Result<f64> {
        let w = 1.0 - u;
        let x = a + u / w;
        let fx = f(x);
        if !fx.is_finite() {
            return Err(Error::invalid(format!(
                "integrand is not finite at x = {x} (value {fx})"
            )));
        }
        if fx == 0.0 {
            return Ok(0.0);
        }
        Ok(fx / (w * w))
    };

    let mut heap = BinaryHeap::with_capacity(cfg.max_subdivisions + 1);
    heap.push(kronrod_panel(&mapped, 0.0, 1.0)?);

    loop {
        let (estimate, error) = totals(&heap);
        if error <= cfg.target(estimate) {
            return Ok(estimate);
        }
        if heap.len() >= cfg.max_subdivisions {
            return Err(Error::NonConvergence {
                subdivisions: heap.len(),
                estimate,
                error,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            // Panel can no longer be split in double precision.
            heap.push(worst);
            let (estimate, error) = totals(&heap);
            return Err(Error::NonConvergence {
                subdivisions: heap.len(),
                estimate,
                error,
            });
        }
        heap.push(kronrod_panel(&mapped, worst.lo, mid)?);
        heap.push(kronrod_panel(&mapped, mid, worst.hi)?);
    }
}

fn totals(heap: &BinaryHeap<Panel>) -> (f64, f64) {
    let mut panels: Vec<&Panel> = heap.iter().collect();
    panels.sort_by(|p, q| p.lo.total_cmp(&q.lo));
    panels
        .iter()
        .fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn kronrod_weights_integrate_constants_and_polynomials() {
        // Both rules integrate 1 over [-1, 1] to 2.
        let k: f64 = 2.0 * WGK[..10].iter().sum::<f64>() + WGK[10];
        let g: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-14);
        assert!((g - 2.0).abs() < 1e-14);

        // K21 is exact through degree 31: check x^30 on [-1, 1] = 2/31.
        let k30: f64 = (0..10).map(|j| 2.0 * WGK[j] * XGK[j].powi(30)).sum();
        assert!((k30 - 2.0 / 31.0).abs() < 1e-14);
        // G10 is exact through degree 19.
        let g18: f64 = (0..5).map(|j| 2.0 * WG[j] * XGK[2 * j + 1].powi(18)).sum();
        assert!((g18 - 2.0 / 19.0).abs() < 1e-14);
    }

    #[test]
    fn unit_exponential_integrates_to_one() {
        let v = integrate_semi_infinite(|x| (-x).exp(), 0.0, &cfg()).unwrap();
        assert!((v - 1.0).abs() < 1e-9, "{v}");
    }

    #[test]
    fn first_moment_tail_at_upper_quantile() {
        let nu = 6.908_f64;
        let v = integrate_semi_infinite(|x| x * (-x).exp(), nu, &cfg()).unwrap();
        let exact = (-nu).exp() * (1.0 + nu);
        assert!((v - exact).abs() <= 1e-9 * exact, "{v} vs {exact}");
        assert!((v - 7.905e-3).abs() < 2e-6);
    }

    #[test]
    fn second_moment_tail_matches_antiderivative() {
        // d/dx[-e^{-x}(x^2+2x+2)] = x^2 e^{-x}
        let antider = |x: f64| -(-x).exp() * (x * x + 2.0 * x + 2.0);
        let h = 1e-5;
        for &x in &[0.5, 2.0, 5.0] {
            let fd = (antider(x + h) - antider(x - h)) / (2.0 * h);
            assert!((fd - x * x * (-x).exp()).abs() < 1e-8);
        }
        let exact = -antider(2.0);
        let v = integrate_semi_infinite(|x| x * x * (-x).exp(), 2.0, &cfg()).unwrap();
        assert!((v - exact).abs() <= 1e-9 * exact);
        assert!((v - 10.0 * (-2.0f64).exp()).abs() < 1e-12);
        assert!((v - 1.3534).abs() < 1e-4);
    }

    #[test]
    fn non_finite_integrand_is_rejected() {
        let err = integrate_semi_infinite(|x| if x > 1.0 { f64::NAN } else { 1.0 }, 0.0, &cfg())
            .unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn exhausted_budget_reports_non_convergence() {
        let tight = QuadratureConfig::new(1e-300, 0.0, 3).unwrap();
        let err = integrate_semi_infinite(|x| (-x * x).exp() * (10.0 * x).sin().abs(), 0.0, &tight)
            .unwrap_err();
        assert!(matches!(err, Error::NonConvergence { .. }));
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::new(0.0, 0.0, 10).is_err());
        assert!(QuadratureConfig::new(-1.0, 1e-9, 10).is_err());
        assert!(QuadratureConfig::new(1e-10, 1e-9, 0).is_err());
        assert!(QuadratureConfig::new(0.0, 1e-9, 1).is_ok());
        assert!(integrate_semi_infinite(|x| x, f64::INFINITY, &cfg()).is_err());
    }

    #[test]
    fn shifted_lower_limit() {
        let v = integrate_semi_infinite(|x| (-(x + 3.0)).exp(), -3.0, &cfg()).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
    }
}
