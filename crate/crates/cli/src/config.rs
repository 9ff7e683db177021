//! Flag parsing and the `key = value` config file.
//!
//! Precedence: command-line flags, then the file named by `--config`, then
//! built-in defaults. The config file is never looked up implicitly.

use std::path::{Path, PathBuf};

use clap::Args;
use tailbound::QuadratureConfig;

use crate::error::CliError;
use crate::format::{Display, Layout};
use crate::parse::{DistSpec, Method, NuSpec};

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Distribution, e.g. exponential:mean=1 or halfnormal:sigma=2 (repeatable for sweep)
    #[arg(long = "dist", value_name = "SPEC")]
    pub dist: Vec<String>,

    /// Threshold(s): v, v1,v2,... or start:stop:step
    #[arg(long, value_name = "NU")]
    pub nu: Option<String>,

    /// compare | markov | enhanced-markov | moment:k=K | enhanced-moment:k=K |
    /// chernoff:t=T | enhanced-chernoff:t=T | chernoff:opt | enhanced-chernoff:opt
    #[arg(long, value_name = "METHOD")]
    pub method: Option<String>,

    /// Output layout: csv or table
    #[arg(long, value_name = "FORMAT")]
    pub format: Option<String>,

    /// Significant digits for every numeric cell (overrides the default display rule)
    #[arg(long, value_name = "N")]
    pub digits: Option<usize>,

    /// Cap reported bounds at 1 (tail values are never changed)
    #[arg(long)]
    pub clamp: bool,

    /// Number of Monte Carlo draws for verify
    #[arg(long = "n", value_name = "COUNT")]
    pub n: Option<usize>,

    /// Seed for the ChaCha8 generator used by verify
    #[arg(long, value_name = "U64")]
    pub seed: Option<u64>,

    /// Verify against observations from a file (one value per line)
    #[arg(long = "sample-file", value_name = "PATH")]
    pub sample_file: Option<PathBuf>,

    /// Absolute quadrature tolerance
    #[arg(long = "abs-tol", value_name = "TOL")]
    pub abs_tol: Option<f64>,

    /// Relative quadrature tolerance
    #[arg(long = "rel-tol", value_name = "TOL")]
    pub rel_tol: Option<f64>,

    /// Read defaults from a key = value file
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

/// Fully resolved settings for one command.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub dists: Vec<DistSpec>,
    pub nu: Option<NuSpec>,
    pub method: Option<Method>,
    pub layout: Layout,
    pub digits: Option<usize>,
    pub clamp: bool,
    pub n: usize,
    pub seed: u64,
    pub sample_file: Option<PathBuf>,
    pub quadrature: QuadratureConfig,
}

pub const DEFAULT_DRAWS: usize = 100_000;

impl RunConfig {
    pub fn from_flags(flags: &Flags) -> Result<Self, CliError> {
        let mut merged = match &flags.config {
            Some(path) => read_config_file(path)?,
            None => Flags::default(),
        };
        overlay(&mut merged, flags);
        Self::resolve(&merged)
    }

    fn resolve(f: &Flags) -> Result<Self, CliError> {
        let dists = f
            .dist
            .iter()
            .map(|s| DistSpec::parse(s))
            .collect::<Result<Vec<_>, _>>()?;
        let nu = f.nu.as_deref().map(NuSpec::parse).transpose()?;
        let method = f.method.as_deref().map(Method::parse).transpose()?;
        let layout = match f.format.as_deref() {
            None | Some("csv") => Layout::Csv,
            Some("table") => Layout::Aligned,
            Some(other) => {
                return Err(CliError::usage(format!(
                    "--format {other}: expected csv or table"
                )))
            }
        };
        if f.digits == Some(0) {
            return Err(CliError::usage("--digits must be at least 1"));
        }
        let n = f.n.unwrap_or(DEFAULT_DRAWS);
        if n == 0 {
            return Err(CliError::usage("--n must be at least 1"));
        }
        let defaults = QuadratureConfig::default();
        let quadrature = QuadratureConfig::new(
            f.abs_tol.unwrap_or(defaults.abs_tol),
            f.rel_tol.unwrap_or(defaults.rel_tol),
            defaults.max_subdivisions,
        )
        .map_err(|e| CliError::usage(format!("quadrature tolerances: {e}")))?;

        Ok(Self {
            dists,
            nu,
            method,
            layout,
            digits: f.digits,
            clamp: f.clamp,
            n,
            seed: f.seed.unwrap_or(0),
            sample_file: f.sample_file.clone(),
            quadrature,
        })
    }

    /// Display rule: `--digits` when given, otherwise the command's default.
    pub fn display(&self, default: Display) -> Display {
        self.digits.map_or(default, Display::Significant)
    }
}

fn overlay(base: &mut Flags, top: &Flags) {
    if !top.dist.is_empty() {
        base.dist = top.dist.clone();
    }
    macro_rules! take {
        ($($field:ident),*) => {$(
            if top.$field.is_some() {
                base.$field = top.$field.clone();
            }
        )*};
    }
    take!(nu, method, format, digits, n, seed, sample_file, abs_tol, rel_tol);
    base.clamp |= top.clamp;
}

fn read_config_file(path: &Path) -> Result<Flags, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text).map_err(|e| match e {
        CliError::Usage(msg) => CliError::usage(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Parses `key = value` lines; keys match the long flag names.
pub fn parse_config(text: &str) -> Result<Flags, CliError> {
    let mut flags = Flags::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::usage(format!("line {lineno}: expected key = value")))?;
        let key = key.trim();
        let value = value.trim().to_string();
        let bad = |what: &str| CliError::usage(format!("line {lineno}: {key}: {what}"));
        match key {
            "dist" => flags.dist.push(value),
            "nu" => flags.nu = Some(value),
            "method" => flags.method = Some(value),
            "format" => flags.format = Some(value),
            "digits" => flags.digits = Some(value.parse().map_err(|_| bad("expected an integer"))?),
            "clamp" => {
                flags.clamp = match value.as_str() {
                    "true" | "yes" | "1" => true,
                    "false" | "no" | "0" => false,
                    _ => return Err(bad("expected true or false")),
                }
            }
            "n" => flags.n = Some(value.parse().map_err(|_| bad("expected an integer"))?),
            "seed" => flags.seed = Some(value.parse().map_err(|_| bad("expected a u64"))?),
            "sample-file" => flags.sample_file = Some(PathBuf::from(value)),
            "abs-tol" => flags.abs_tol = Some(value.parse().map_err(|_| bad("expected a number"))?),
            "rel-tol" => flags.rel_tol = Some(value.parse().map_err(|_| bad("expected a number"))?),
            _ => return Err(CliError::usage(format!("line {lineno}: unknown key {key:?}"))),
        }
    }
    Ok(flags)
}
