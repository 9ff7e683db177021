//! Plug-in bounds from observed data and seeded Monte Carlo verification.
//!
//! On a sample the enhanced Markov inequality holds exactly, not just in
//! expectation: `x·1{x > ν} >= ν·1{x > ν}` term by term. The estimators here
//! keep that ordering intact in floating point as well.

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::distribution::{Distribution, MomentOrder};
use crate::error::{Error, Result};
use crate::ComparisonRow;

/// Draws per RNG stream. Stream `i` of seed `s` always produces draws
/// `i·DRAWS_PER_STREAM ..`, whatever the number of worker threads.
pub const DRAWS_PER_STREAM: usize = 1 << 16;

/// Nonnegative observations, sorted ascending, with suffix sums.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
    // suffix[i] = values[i] + values[i+1] + ... accumulated from the largest value down.
    suffix: Vec<f64>,
}

impl Sample {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("sample must contain at least one value"));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::invalid(format!(
                "sample value #{} is {v}; values must be finite and nonnegative",
                i + 1
            )));
        }
        values.sort_by(f64::total_cmp);
        let mut suffix = vec![0.0; values.len() + 1];
        for i in (0..values.len()).rev() {
            suffix[i] = suffix[i + 1] + values[i];
        }
        Ok(Self { values, suffix })
    }

    /// Parses one number per line. Blank lines and lines starting with `#`
    /// are skipped; errors name the 1-based line number.
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let v: f64 = line.parse().map_err(|_| {
                Error::invalid(format!("line {}: cannot parse {line:?} as a number", idx + 1))
            })?;
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(format!(
                    "line {}: value {line} must be finite and nonnegative",
                    idx + 1
                )));
            }
            values.push(v);
        }
        if values.is_empty() {
            return Err(Error::invalid("sample file contains no values"));
        }
        Self::new(values)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max(&self) -> f64 {
        *self.values.last().expect("sample is nonempty")
    }

    pub fn mean(&self) -> f64 {
        self.suffix[0] / self.len() as f64
    }

    // Index of the first value strictly above nu.
    fn cut(&self, nu: f64) -> usize {
        self.values.partition_point(|&x| x <= nu)
    }

    /// Number of values strictly above `nu`.
    pub fn count_above(&self, nu: f64) -> usize {
        self.len() - self.cut(nu)
    }
}

fn check_nonnegative(nu: f64) -> Result<()> {
    if nu.is_finite() && nu >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("threshold nu must be finite and nonnegative, got {nu}")))
    }
}

/// `(1/n)·Σ x_i^k·1{x_i > ν}`.
pub fn empirical_restricted_moment(sample: &Sample, nu: f64, order: MomentOrder) -> Result<f64> {
    check_nonnegative(nu)?;
    let cut = sample.cut(nu);
    let n = sample.len() as f64;
    let sum = match order.get() {
        1 => sample.suffix[cut],
        k => sample.values[cut..]
            .iter()
            .rev()
            .fold(0.0, |acc, x| acc + x.powi(k as i32)),
    };
    Ok(sum / n)
}

/// Empirical `(tail, E_ν/ν, mean/ν)`; the sandwich holds with no slack.
pub fn empirical_bounds(sample: &Sample, nu: f64) -> Result<ComparisonRow> {
    if !(nu.is_finite() && nu > 0.0) {
        return Err(Error::invalid(format!("threshold nu must be positive and finite, got {nu}")));
    }
    let n = sample.len() as f64;
    let cut = sample.cut(nu);
    let above = (sample.len() - cut) as f64;

    // Every summand exceeds nu, so Σ/ν >= count in exact arithmetic; summation
    // rounding can land a few ulps under it and is lifted back.
    let restricted = (sample.suffix[cut] / nu).max(above);
    let total = (sample.suffix[0] / nu).max(restricted);

    Ok(ComparisonRow {
        nu,
        tail: above / n,
        enhanced: restricted / n,
        traditional: total / n,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationRow {
    pub nu: f64,
    pub empirical: ComparisonRow,
    pub analytic_tail: Option<f64>,
    pub analytic_enhanced: Option<f64>,
    /// Failed links in `tail ≤ enhanced ≤ traditional` (0, 1 or 2).
    pub violations: u32,
}

impl VerificationRow {
    /// `traditional / enhanced` on the sample.
    pub fn improvement_ratio(&self) -> f64 {
        self.empirical.traditional / self.empirical.enhanced
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub n: usize,
    pub seed: Option<u64>,
    pub rows: Vec<VerificationRow>,
    /// Largest amount by which any sandwich link failed; 0 when none did.
    pub max_violation: f64,
    /// Largest `|empirical tail − analytic tail|` over the grid.
    pub max_tail_deviation: Option<f64>,
}

impl VerificationReport {
    pub fn total_violations(&self) -> u64 {
        self.rows.iter().map(|r| u64::from(r.violations)).sum()
    }

    pub fn passed(&self) -> bool {
        self.total_violations() == 0
    }
}

fn check_grid(nu_grid: &[f64]) -> Result<()> {
    if nu_grid.is_empty() {
        return Err(Error::invalid("threshold grid is empty"));
    }
    if let Some(nu) = nu_grid.iter().find(|nu| !(nu.is_finite() && **nu > 0.0)) {
        return Err(Error::invalid(format!("grid thresholds must be positive, got {nu}")));
    }
    Ok(())
}

fn build_report(
    sample: &Sample,
    dist: Option<&Distribution>,
    seed: Option<u64>,
    nu_grid: &[f64],
) -> Result<VerificationReport> {
    check_grid(nu_grid)?;
    let mut rows = Vec::with_capacity(nu_grid.len());
    let mut max_violation: f64 = 0.0;
    let mut max_tail_deviation: Option<f64> = None;

    for &nu in nu_grid {
        let row = empirical_bounds(sample, nu)?;
        let gaps = [row.tail - row.enhanced, row.enhanced - row.traditional];
        let violations = gaps.iter().filter(|g| **g > 0.0).count() as u32;
        max_violation = gaps.iter().fold(max_violation, |m, g| m.max(*g));

        let (analytic_tail, analytic_enhanced) = match dist {
            Some(d) => {
                let tail = d.tail(nu)?;
                let dev = (row.tail - tail).abs();
                max_tail_deviation = Some(max_tail_deviation.map_or(dev, |m| m.max(dev)));
                (Some(tail), Some(d.restricted_moment(nu, MomentOrder::FIRST)? / nu))
            }
            None => (None, None),
        };
        rows.push(VerificationRow {
            nu,
            empirical: row,
            analytic_tail,
            analytic_enhanced,
            violations,
        });
    }

    Ok(VerificationReport {
        n: sample.len(),
        seed,
        rows,
        max_violation,
        max_tail_deviation,
    })
}

/// Draws `n` variates by inverse-CDF sampling with a ChaCha8 generator.
///
/// Draw `j` comes from stream `j / DRAWS_PER_STREAM` of `seed`, so the output
/// is identical whether the streams run sequentially or in parallel.
pub fn draw(dist: &Distribution, n: usize, seed: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::invalid("sample size must be at least 1"));
    }
    let streams = n.div_ceil(DRAWS_PER_STREAM);
    let chunks: Result<Vec<Vec<f64>>> = (0..streams)
        .into_par_iter()
        .map(|stream| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream as u64);
            let start = stream * DRAWS_PER_STREAM;
            let len = DRAWS_PER_STREAM.min(n - start);
            (0..len)
                .map(|_| {
                    let u: f64 = rng.sample(Open01);
                    dist.quantile(u)
                })
                .collect()
        })
        .collect();
    Ok(chunks?.concat())
}

/// Samples `dist` and checks the empirical sandwich at every grid threshold.
pub fn monte_carlo_verify(
    dist: &Distribution,
    n: usize,
    seed: u64,
    nu_grid: &[f64],
) -> Result<VerificationReport> {
    check_grid(nu_grid)?;
    let sample = Sample::new(draw(dist, n, seed)?)?;
    build_report(&sample, Some(dist), Some(seed), nu_grid)
}

/// Same report for data with no reference distribution.
pub fn verify_sample(sample: &Sample, nu_grid: &[f64]) -> Result<VerificationReport> {
    build_report(sample, None, None, nu_grid)
}
