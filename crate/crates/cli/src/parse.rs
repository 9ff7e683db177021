//! Parsers for the `--dist`, `--nu` and `--method` flag values.

use std::f64::consts::PI;

use tailbound::{ChernoffVariant, Distribution, MomentOrder};

use crate::error::CliError;

fn number(what: &str, raw: &str) -> Result<f64, CliError> {
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("{what}: cannot parse {raw:?} as a number")))?;
    if !v.is_finite() {
        return Err(CliError::usage(format!("{what}: {raw} is not finite")));
    }
    Ok(v)
}

/// A parsed `--dist` value, e.g. `exponential:mean=1` or `halfnormal:sigma=2`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistSpec {
    pub family: Family,
    pub param: f64,
    pub text: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Exponential,
    HalfNormal,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Exponential => "exponential",
            Family::HalfNormal => "halfnormal",
        }
    }
}

impl DistSpec {
    pub fn parse(raw: &str) -> Result<Self, CliError> {
        let text = raw.trim();
        let (family, rest) = text.split_once(':').ok_or_else(|| {
            CliError::usage(format!(
                "distribution {text:?}: expected <family>:<key>=<value>, e.g. exponential:mean=1"
            ))
        })?;
        let (key, value) = rest.split_once('=').ok_or_else(|| {
            CliError::usage(format!("distribution {text:?}: expected <key>=<value> after ':'"))
        })?;
        let value = number(&format!("distribution {text:?}"), value)?;
        if value <= 0.0 {
            return Err(CliError::usage(format!(
                "distribution {text:?}: {key} must be positive"
            )));
        }
        let (family, param) = match (family.trim(), key.trim()) {
            ("exponential", "rate") => (Family::Exponential, value),
            ("exponential", "mean") => (Family::Exponential, 1.0 / value),
            ("halfnormal", "sigma") => (Family::HalfNormal, value),
            // mean = σ√(2/π)
            ("halfnormal", "mean") => (Family::HalfNormal, value * (PI / 2.0).sqrt()),
            ("exponential" | "halfnormal", other) => {
                return Err(CliError::usage(format!(
                    "distribution {text:?}: unknown parameter {other:?}"
                )))
            }
            (other, _) => {
                return Err(CliError::usage(format!(
                    "distribution {text:?}: unknown family {other:?} (expected exponential or halfnormal)"
                )))
            }
        };
        Ok(Self {
            family,
            param,
            text: text.to_string(),
        })
    }

    pub fn build(&self) -> Result<Distribution, CliError> {
        let d = match self.family {
            Family::Exponential => Distribution::exponential(self.param),
            Family::HalfNormal => Distribution::half_normal(self.param),
        };
        d.map_err(CliError::from)
    }
}

/// `--nu` as given: one value, a comma list, or `start:stop:step`.
#[derive(Debug, Clone, PartialEq)]
pub struct NuSpec(Vec<f64>);

// Values generated from a range are rounded to 12 significant digits so that
// 0.05·3 prints as 0.15.
fn tidy(v: f64) -> f64 {
    format!("{v:.11e}").parse().unwrap_or(v)
}

impl NuSpec {
    pub fn parse(raw: &str) -> Result<Self, CliError> {
        let raw = raw.trim();
        if raw.is_empty() {
            return Err(CliError::usage("--nu: empty value"));
        }
        let parts: Vec<&str> = raw.split(':').collect();
        let values = match parts.as_slice() {
            [start, stop, step] => {
                let start = number("--nu range start", start)?;
                let stop = number("--nu range stop", stop)?;
                let step = number("--nu range step", step)?;
                if step <= 0.0 {
                    return Err(CliError::usage(format!("--nu {raw}: step must be positive")));
                }
                if start > stop {
                    return Err(CliError::usage(format!("--nu {raw}: start exceeds stop")));
                }
                let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
                if count > 10_000_000 {
                    return Err(CliError::usage(format!("--nu {raw}: range has too many points")));
                }
                (0..count).map(|i| tidy(start + i as f64 * step)).collect()
            }
            [_] => raw
                .split(',')
                .map(|p| number("--nu", p))
                .collect::<Result<Vec<_>, _>>()?,
            _ => {
                return Err(CliError::usage(format!(
                    "--nu {raw}: expected a value, a comma list or start:stop:step"
                )))
            }
        };
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// Every threshold must be strictly positive.
    pub fn require_positive(&self) -> Result<(), CliError> {
        match self.0.iter().find(|v| **v <= 0.0) {
            Some(v) => Err(CliError::usage(format!(
                "--nu: thresholds must be strictly positive, got {v}"
            ))),
            None => Ok(()),
        }
    }
}

/// Selector given by `--method`.
#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    Compare,
    Markov,
    EnhancedMarkov,
    Moment(Vec<MomentOrder>),
    EnhancedMoment(Vec<MomentOrder>),
    Chernoff(f64),
    EnhancedChernoff(f64),
    ChernoffOpt(ChernoffVariant),
}

impl Method {
    pub fn parse(raw: &str) -> Result<Self, CliError> {
        let raw = raw.trim();
        let (name, param) = match raw.split_once(':') {
            Some((n, p)) => (n, Some(p)),
            None => (raw, None),
        };
        let orders = |p: &str| -> Result<Vec<MomentOrder>, CliError> {
            let list = p.strip_prefix("k=").ok_or_else(|| {
                CliError::usage(format!("--method {raw}: expected k=<order>"))
            })?;
            list.split(',')
                .map(|s| {
                    let k: u32 = s.trim().parse().map_err(|_| {
                        CliError::usage(format!("--method {raw}: {s:?} is not a positive integer"))
                    })?;
                    MomentOrder::new(k).map_err(|_| {
                        CliError::usage(format!("--method {raw}: moment order must be at least 1"))
                    })
                })
                .collect()
        };
        let exponent = |p: &str| -> Result<f64, CliError> {
            let t = p.strip_prefix("t=").ok_or_else(|| {
                CliError::usage(format!("--method {raw}: expected t=<exponent> or opt"))
            })?;
            number(&format!("--method {raw}"), t)
        };
        match (name, param) {
            ("compare", None) => Ok(Method::Compare),
            ("markov", None) => Ok(Method::Markov),
            ("enhanced-markov", None) => Ok(Method::EnhancedMarkov),
            ("moment", Some(p)) => Ok(Method::Moment(orders(p)?)),
            ("enhanced-moment", Some(p)) => Ok(Method::EnhancedMoment(orders(p)?)),
            ("chernoff", Some("opt")) => Ok(Method::ChernoffOpt(ChernoffVariant::Traditional)),
            ("enhanced-chernoff", Some("opt")) => Ok(Method::ChernoffOpt(ChernoffVariant::Enhanced)),
            ("chernoff", Some(p)) => Ok(Method::Chernoff(exponent(p)?)),
            ("enhanced-chernoff", Some(p)) => Ok(Method::EnhancedChernoff(exponent(p)?)),
            _ => Err(CliError::usage(format!(
                "--method {raw}: expected one of compare, markov, enhanced-markov, moment:k=K, \
                 enhanced-moment:k=K, chernoff:t=T, enhanced-chernoff:t=T, chernoff:opt, \
                 enhanced-chernoff:opt"
            ))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dist_specs() {
        let e = DistSpec::parse("exponential:mean=2").unwrap();
        assert_eq!((e.family, e.param), (Family::Exponential, 0.5));
        let e = DistSpec::parse("exponential:rate=3").unwrap();
        assert_eq!(e.param, 3.0);
        let h = DistSpec::parse("halfnormal:mean=1").unwrap();
        assert_eq!(h.param, (PI / 2.0).sqrt());
        let h = DistSpec::parse("halfnormal:sigma=0.7").unwrap();
        assert_eq!(h.param, 0.7);
        let mean = h.build().unwrap().mean().unwrap();
        assert!((mean - 0.7 * (2.0 / PI).sqrt()).abs() < 1e-15);

        for bad in [
            "exponential",
            "exponential:mean",
            "exponential:mean=0",
            "exponential:mean=-1",
            "exponential:sigma=1",
            "gamma:shape=2",
            "halfnormal:sigma=abc",
            "halfnormal:sigma=inf",
        ] {
            assert!(DistSpec::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn nu_specs() {
        assert_eq!(NuSpec::parse("8").unwrap().values(), &[8.0]);
        assert_eq!(NuSpec::parse("1,2.5, 4").unwrap().values(), &[1.0, 2.5, 4.0]);
        let r = NuSpec::parse("1:8:1").unwrap();
        assert_eq!(r.values(), &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0]);
        let fine = NuSpec::parse("0.05:8:0.05").unwrap();
        assert_eq!(fine.values().len(), 160);
        assert_eq!(fine.values()[2], 0.15);
        assert_eq!(*fine.values().last().unwrap(), 8.0);
        assert_eq!(NuSpec::parse("2:2:1").unwrap().values(), &[2.0]);

        assert!(NuSpec::parse("5:1:1").is_err());
        assert!(NuSpec::parse("1:5:0").is_err());
        assert!(NuSpec::parse("1:5:-1").is_err());
        assert!(NuSpec::parse("1:5").is_err());
        assert!(NuSpec::parse("a,b").is_err());
        assert!(NuSpec::parse("").is_err());
        assert!(NuSpec::parse("0").unwrap().require_positive().is_err());
        assert!(NuSpec::parse("1,-2").unwrap().require_positive().is_err());
    }

    #[test]
    fn methods() {
        assert_eq!(Method::parse("compare").unwrap(), Method::Compare);
        assert_eq!(Method::parse("enhanced-markov").unwrap(), Method::EnhancedMarkov);
        assert_eq!(
            Method::parse("moment:k=2").unwrap(),
            Method::Moment(vec![MomentOrder::new(2).unwrap()])
        );
        assert_eq!(
            Method::parse("enhanced-moment:k=1,3").unwrap(),
            Method::EnhancedMoment(vec![MomentOrder::new(1).unwrap(), MomentOrder::new(3).unwrap()])
        );
        assert_eq!(Method::parse("chernoff:t=1.5").unwrap(), Method::Chernoff(1.5));
        assert_eq!(
            Method::parse("enhanced-chernoff:opt").unwrap(),
            Method::ChernoffOpt(ChernoffVariant::Enhanced)
        );
        for bad in ["", "markov:k=1", "moment", "moment:k=0", "moment:2", "chernoff", "chernoff:x=1", "foo"] {
            assert!(Method::parse(bad).is_err(), "{bad}");
        }
    }
}
