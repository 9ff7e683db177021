//! The four subcommands. Each returns its full stdout text.

use tailbound::empirical::verify_sample;
use tailbound::{
    chernoff_bounds, moment_bounds, monte_carlo_verify, optimize_chernoff, BoundKind,
    ComparisonRow, Distribution, MomentOrder, Sample, VerificationReport,
};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::format::{layout, threshold, Display};
use crate::parse::{DistSpec, Method, NuSpec};

pub const TABLE_GRID: &str = "1:8:1";
pub const SWEEP_GRID: &str = "0.05:8:0.05";
pub const SWEEP_DISTS: [&str; 2] = ["halfnormal:mean=1", "exponential:mean=1"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    /// False only when verify found a sandwich violation.
    pub success: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Self {
            text,
            success: true,
        }
    }
}

fn single_dist(cfg: &RunConfig) -> Result<Distribution, CliError> {
    match cfg.dists.as_slice() {
        [one] => Ok(one.build()?.with_quadrature(cfg.quadrature)?),
        [] => Err(CliError::usage("--dist is required")),
        _ => Err(CliError::usage("this command takes exactly one --dist")),
    }
}

fn grid(cfg: &RunConfig, default: Option<&str>) -> Result<NuSpec, CliError> {
    let spec = match (&cfg.nu, default) {
        (Some(nu), _) => nu.clone(),
        (None, Some(d)) => NuSpec::parse(d)?,
        (None, None) => return Err(CliError::usage("--nu is required")),
    };
    spec.require_positive()?;
    Ok(spec)
}

fn maybe_clamp(cfg: &RunConfig, row: ComparisonRow) -> ComparisonRow {
    if cfg.clamp {
        row.clamped()
    } else {
        row
    }
}

fn clamp_value(cfg: &RunConfig, v: f64) -> f64 {
    if cfg.clamp {
        v.min(1.0)
    } else {
        v
    }
}

enum Family3 {
    Markov,
    Moment(MomentOrder),
    Chernoff(f64),
}

/// `table`: tail next to an enhanced and a traditional bound for each threshold.
pub fn cmd_table(cfg: &RunConfig) -> Result<Output, CliError> {
    let dist = single_dist(cfg)?;
    let nus = grid(cfg, Some(TABLE_GRID))?;
    let family = match cfg.method.clone().unwrap_or(Method::Compare) {
        Method::Compare | Method::Markov | Method::EnhancedMarkov => Family3::Markov,
        Method::Moment(ks) | Method::EnhancedMoment(ks) => match ks.as_slice() {
            [k] => Family3::Moment(*k),
            _ => return Err(CliError::usage("table takes a single moment order")),
        },
        Method::Chernoff(t) | Method::EnhancedChernoff(t) => Family3::Chernoff(t),
        Method::ChernoffOpt(_) => {
            return Err(CliError::usage("table needs a fixed exponent, not chernoff:opt"))
        }
    };
    let (enhanced_col, traditional_col) = match family {
        Family3::Markov => ("enhanced_markov".to_string(), "traditional_markov".to_string()),
        Family3::Moment(k) => (format!("enhanced_moment_k{k}"), format!("traditional_moment_k{k}")),
        Family3::Chernoff(_) => ("enhanced_chernoff".to_string(), "traditional_chernoff".to_string()),
    };
    let display = cfg.display(Display::Tabular);

    let mut rows = Vec::with_capacity(nus.values().len());
    for &nu in nus.values() {
        let row = match family {
            Family3::Markov => moment_bounds(&dist, nu, MomentOrder::FIRST),
            Family3::Moment(k) => moment_bounds(&dist, nu, k),
            Family3::Chernoff(t) => chernoff_bounds(&dist, nu, t),
        }
        .map_err(CliError::at(nu))?;
        let row = maybe_clamp(cfg, row);
        rows.push(vec![
            threshold(nu),
            display.render(row.tail),
            display.render(row.enhanced),
            display.render(row.traditional),
        ]);
    }
    let header = ["nu", "tail", enhanced_col.as_str(), traditional_col.as_str()];
    Ok(Output::ok(layout(&header, &rows, cfg.layout)))
}

/// `sweep`: curve data for tail and enhanced Markov bound of one or more
/// distributions, with a single traditional column when all means coincide.
pub fn cmd_sweep(cfg: &RunConfig) -> Result<Output, CliError> {
    match cfg.method {
        None | Some(Method::Compare) => {}
        Some(_) => return Err(CliError::usage("sweep only supports --method compare")),
    }
    let specs = if cfg.dists.is_empty() {
        SWEEP_DISTS
            .iter()
            .map(|s| DistSpec::parse(s))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        cfg.dists.clone()
    };
    let nus = grid(cfg, Some(SWEEP_GRID))?;
    let display = cfg.display(Display::Tabular);

    let mut labels: Vec<String> = Vec::with_capacity(specs.len());
    let mut dists = Vec::with_capacity(specs.len());
    for (i, spec) in specs.iter().enumerate() {
        let base = spec.family.name();
        let repeats = specs[..i].iter().filter(|s| s.family == spec.family).count();
        labels.push(if repeats == 0 {
            base.to_string()
        } else {
            format!("{base}{}", repeats + 1)
        });
        dists.push(spec.build()?.with_quadrature(cfg.quadrature)?);
    }
    let means = dists
        .iter()
        .map(|d| d.mean())
        .collect::<Result<Vec<_>, _>>()?;
    let shared = means
        .iter()
        .all(|m| (m - means[0]).abs() <= 1e-12 * means[0].abs().max(1.0));

    let mut header: Vec<String> = vec!["nu".into()];
    for label in &labels {
        header.push(format!("{label}_tail"));
        header.push(format!("{label}_enhanced"));
        if !shared {
            header.push(format!("{label}_traditional"));
        }
    }
    if shared {
        header.push("traditional_markov".into());
    }

    let mut rows = Vec::with_capacity(nus.values().len());
    for &nu in nus.values() {
        let mut cells = vec![threshold(nu)];
        let mut traditional = 0.0;
        for dist in &dists {
            let row = maybe_clamp(
                cfg,
                moment_bounds(dist, nu, MomentOrder::FIRST).map_err(CliError::at(nu))?,
            );
            cells.push(display.render(row.tail));
            cells.push(display.render(row.enhanced));
            if shared {
                traditional = row.traditional;
            } else {
                cells.push(display.render(row.traditional));
            }
        }
        if shared {
            cells.push(display.render(traditional));
        }
        rows.push(cells);
    }
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    Ok(Output::ok(layout(&header, &rows, cfg.layout)))
}

pub const BOUND_HEADER: [&str; 8] = [
    "nu",
    "method",
    "bound",
    "tail",
    "enhanced",
    "traditional",
    "t_star",
    "at_boundary",
];

/// `bound`: one requested bound per threshold (and per moment order).
pub fn cmd_bound(cfg: &RunConfig) -> Result<Output, CliError> {
    let dist = single_dist(cfg)?;
    let nus = grid(cfg, None)?;
    let method = cfg.method.clone().unwrap_or(Method::Compare);
    let display = cfg.display(Display::Significant(3));
    let r = |v: f64| display.render(v);

    let mut rows = Vec::new();
    for &nu in nus.values() {
        let at = CliError::at(nu);
        let single = |kind: BoundKind| -> Result<Vec<String>, CliError> {
            let v = kind.evaluate(&dist, nu).map_err(CliError::at(nu))?;
            let v = clamp_value(cfg, v);
            Ok(vec![
                threshold(nu),
                kind.to_string(),
                r(v),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ])
        };
        match &method {
            Method::Compare => {
                let row = maybe_clamp(cfg, moment_bounds(&dist, nu, MomentOrder::FIRST).map_err(at)?);
                rows.push(vec![
                    threshold(nu),
                    "compare".into(),
                    r(row.enhanced),
                    r(row.tail),
                    r(row.enhanced),
                    r(row.traditional),
                    String::new(),
                    String::new(),
                ]);
            }
            Method::Markov => rows.push(single(BoundKind::TraditionalMarkov)?),
            Method::EnhancedMarkov => rows.push(single(BoundKind::EnhancedMarkov)?),
            Method::Moment(ks) => {
                for k in ks {
                    rows.push(single(BoundKind::TraditionalMoment(*k))?);
                }
            }
            Method::EnhancedMoment(ks) => {
                for k in ks {
                    rows.push(single(BoundKind::EnhancedMoment(*k))?);
                }
            }
            Method::Chernoff(t) => rows.push(single(BoundKind::TraditionalChernoff(*t))?),
            Method::EnhancedChernoff(t) => rows.push(single(BoundKind::EnhancedChernoff(*t))?),
            Method::ChernoffOpt(variant) => {
                let res = optimize_chernoff(&dist, nu, *variant, None).map_err(at)?;
                let name = match variant {
                    tailbound::ChernoffVariant::Traditional => "chernoff:opt",
                    tailbound::ChernoffVariant::Enhanced => "enhanced-chernoff:opt",
                };
                rows.push(vec![
                    threshold(nu),
                    name.into(),
                    r(clamp_value(cfg, res.bound)),
                    String::new(),
                    String::new(),
                    String::new(),
                    r(res.t_star),
                    res.at_boundary.to_string(),
                ]);
            }
        }
    }
    Ok(Output::ok(layout(&BOUND_HEADER, &rows, cfg.layout)))
}

pub const VERIFY_HEADER: [&str; 8] = [
    "nu",
    "empirical_tail",
    "empirical_enhanced",
    "empirical_traditional",
    "analytic_tail",
    "analytic_enhanced",
    "improvement_ratio",
    "violations",
];

/// Renders a report: CSV block, `#` summary line, then `PASS` or `FAIL`.
pub fn render_report(report: &VerificationReport, source: &str, cfg: &RunConfig) -> Output {
    let display = cfg.display(Display::Significant(6));
    let r = |v: f64| display.render(v);
    let opt = |v: Option<f64>| v.map(r).unwrap_or_default();
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|row| {
            vec![
                threshold(row.nu),
                r(row.empirical.tail),
                r(row.empirical.enhanced),
                r(row.empirical.traditional),
                opt(row.analytic_tail),
                opt(row.analytic_enhanced),
                r(row.improvement_ratio()),
                row.violations.to_string(),
            ]
        })
        .collect();
    let mut text = layout(&VERIFY_HEADER, &rows, cfg.layout);
    let seed = report.seed.map(|s| s.to_string()).unwrap_or_else(|| "-".into());
    let deviation = report
        .max_tail_deviation
        .map(|d| format!("{d:e}"))
        .unwrap_or_else(|| "-".into());
    text.push_str(&format!(
        "# source={source} n={} seed={seed} violations={} max_violation={:e} max_tail_deviation={deviation}\n",
        report.n,
        report.total_violations(),
        report.max_violation,
    ));
    let passed = report.passed();
    text.push_str(if passed { "PASS\n" } else { "FAIL\n" });
    Output {
        text,
        success: passed,
    }
}

/// `verify`: empirical sandwich check on simulated or supplied data.
pub fn cmd_verify(cfg: &RunConfig) -> Result<Output, CliError> {
    if let Some(path) = &cfg.sample_file {
        if !cfg.dists.is_empty() {
            return Err(CliError::usage("use either --sample-file or --dist, not both"));
        }
        let nus = grid(cfg, None)?;
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let sample = Sample::parse(&text)
            .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        let report = verify_sample(&sample, nus.values())?;
        return Ok(render_report(&report, &path.display().to_string(), cfg));
    }
    let dist = single_dist(cfg)?;
    let nus = grid(cfg, Some(TABLE_GRID))?;
    let report = monte_carlo_verify(&dist, cfg.n, cfg.seed, nus.values())?;
    Ok(render_report(&report, &cfg.dists[0].text, cfg))
}
