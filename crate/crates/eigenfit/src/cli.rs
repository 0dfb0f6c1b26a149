//! Command-line front end: `sample`, `fit`, `experiment`, and `verify`
//! subcommands emitting CSV, JSON, and SVG.
//!
//! Exit codes: 0 on success, 1 on numeric failure, 2 on usage errors
//! (including malformed configs and invalid argument combinations).

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::experiments::{
    self, bias_csv, curves_csv, fmt_float, trials_csv, ExperimentConfig, Method,
};
use crate::measure::Measure;
use crate::regression::{self, FitCoeffs, PolyFit};
use crate::rng::RngState;
use crate::sampling;
use crate::svg;
use crate::target::TargetSpec;

#[derive(Parser)]
#[command(
    name = "eigenfit",
    version,
    about = "Polynomial and truncated-Fourier regression from few function evaluations, with unbiased random-matrix node designs"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw node sets: repulsive designs, leverage samples, or Haar unitary eigenvalues.
    Sample(SampleArgs),
    /// Run one regression fit and print a JSON report.
    Fit(FitArgs),
    /// Run a bias study or error curves from a key=value config file.
    Experiment(ExperimentArgs),
    /// Re-check the reported error of a fit JSON report.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SampleArgs {
    /// dpp | leverage | haar
    kind: String,
    #[arg(long, default_value = "uniform")]
    measure: String,
    #[arg(long)]
    d: usize,
    /// Number of leverage nodes (leverage sampling only).
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | json
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args)]
struct FitArgs {
    /// debiased | leverage | fourier
    method: String,
    #[arg(long, default_value = "uniform")]
    measure: String,
    /// indicator:a,b | arc:a,b | poly:c0,c1,...
    #[arg(long)]
    target: String,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// bias | curves
    kind: String,
    #[arg(long)]
    config: PathBuf,
    /// Output directory (default: current directory).
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Override the trial count from the config.
    #[arg(long)]
    trials: Option<usize>,
    /// Worker thread cap (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// csv | svg (svg writes the CSVs plus an SVG plot)
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args)]
struct VerifyArgs {
    /// Fit report JSON produced by `eigenfit fit`.
    input: PathBuf,
}

/// JSON report of one fit; `verify` re-ingests this.
#[derive(Debug, Serialize, Deserialize)]
pub struct FitReport {
    pub method: String,
    pub measure: String,
    pub degree: usize,
    pub n: usize,
    pub seed: u64,
    pub target: String,
    /// Real coefficients, or [re, im] pairs on the circle.
    pub coefficients: Vec<Vec<f64>>,
    /// Nodes used by the fit: [t] rows, or [re, im] rows on the circle.
    pub nodes: Vec<Vec<f64>>,
    /// Expected squared error vs the oracle: relative when the target has
    /// residual, absolute (E|p-f|^2) for in-model targets.
    pub epsilon: f64,
    pub epsilon_kind: String,
}

struct UsageError(String);

enum CmdError {
    Usage(String),
    Numeric(String),
    Io(String),
}

impl From<Error> for CmdError {
    fn from(e: Error) -> Self {
        match e {
            Error::UnsupportedMeasure(_)
            | Error::TooFewNodes { .. }
            | Error::OracleDimension(_)
            | Error::InvalidTarget(_)
            | Error::InvalidConfig(_) => CmdError::Usage(e.to_string()),
            Error::CoincidentNodes { .. }
            | Error::RankDeficient { .. }
            | Error::EigenIterationLimit(_)
            | Error::QuadratureNonConvergence { .. }
            | Error::ZeroResidualTarget => CmdError::Numeric(e.to_string()),
        }
    }
}

impl From<UsageError> for CmdError {
    fn from(e: UsageError) -> Self {
        CmdError::Usage(e.0)
    }
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> Self {
        CmdError::Io(e.to_string())
    }
}

/// Parses argv and runs; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sample(args) => cmd_sample(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Experiment(args) => cmd_experiment(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(()) => 0,
        Err(CmdError::Numeric(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(CmdError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CmdError::Io(msg)) => {
            eprintln!("error: {msg}");
            1
        }
    }
}

fn parse_measure(s: &str) -> Result<Measure, UsageError> {
    Measure::parse(s).ok_or_else(|| {
        UsageError(format!(
            "unknown measure `{s}` (expected gaussian, uniform, or circle)"
        ))
    })
}

/// Writes atomically: temp file in the target directory, then rename.
fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("out")
    ));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn emit(out: Option<&Path>, contents: &str) -> Result<(), CmdError> {
    match out {
        Some(path) => write_atomic(path, contents)?,
        None => print!("{contents}"),
    }
    Ok(())
}

fn cmd_sample(args: SampleArgs) -> Result<(), CmdError> {
    let measure = parse_measure(&args.measure)?;
    let mut rng = RngState::new(args.seed).rng();
    let (header, rows): (&str, Vec<Vec<f64>>) = match args.kind.as_str() {
        "dpp" => {
            let nodes = sampling::sample_dpp_nodes(measure, args.d, &mut rng)?;
            match nodes.points {
                sampling::Points::Real(v) => ("node", v.into_iter().map(|t| vec![t]).collect()),
                sampling::Points::Circle(v) => {
                    ("re,im", v.into_iter().map(|z| vec![z.re, z.im]).collect())
                }
            }
        }
        "leverage" => {
            let count = args.count.ok_or_else(|| {
                UsageError("leverage sampling requires --count".into())
            })?;
            let nodes = sampling::sample_leverage_nodes(measure, args.d, count, &mut rng)?;
            match &nodes.points {
                sampling::Points::Real(v) => (
                    "node,weight",
                    v.iter()
                        .zip(&nodes.weights)
                        .map(|(&t, &w)| vec![t, w])
                        .collect(),
                ),
                sampling::Points::Circle(v) => {
                    ("re,im", v.iter().map(|z| vec![z.re, z.im]).collect())
                }
            }
        }
        "haar" => {
            let eigs = crate::randmat::sample_haar_unitary_eigs(args.d + 1, &mut rng);
            let mut eigs = eigs;
            eigs.sort_by(|a, b| {
                sampling::circle_arg(*a)
                    .partial_cmp(&sampling::circle_arg(*b))
                    .unwrap()
            });
            ("re,im", eigs.into_iter().map(|z| vec![z.re, z.im]).collect())
        }
        other => {
            return Err(UsageError(format!(
                "unknown sample kind `{other}` (expected dpp, leverage, or haar)"
            ))
            .into())
        }
    };
    let contents = match args.format.as_str() {
        "csv" => {
            let mut s = format!("{header}\n");
            for row in &rows {
                let cells: Vec<String> = row.iter().map(|&x| fmt_float(x)).collect();
                s.push_str(&cells.join(","));
                s.push('\n');
            }
            s
        }
        "json" => {
            let mut s = serde_json::to_string_pretty(&serde_json::json!({
                "columns": header.split(',').collect::<Vec<_>>(),
                "rows": rows,
            }))
            .expect("json encoding");
            s.push('\n');
            s
        }
        other => return Err(UsageError(format!("unknown format `{other}`")).into()),
    };
    emit(args.out.as_deref(), &contents)
}

fn fit_report(
    method: &str,
    measure: Measure,
    target: &TargetSpec,
    fit: &PolyFit,
    nodes: Vec<Vec<f64>>,
    seed: u64,
) -> Result<FitReport, Error> {
    let oracle = experiments::ErrorOracle::build(measure, fit.degree, target)?;
    let components = experiments::components_of(fit);
    let (epsilon, epsilon_kind) = if oracle.residual <= 1e-14 {
        (oracle.squared_error(&components), "absolute")
    } else {
        (oracle.epsilon(&components)?, "relative")
    };
    let coefficients = match &fit.coeffs {
        FitCoeffs::Real(c) => c.iter().map(|&x| vec![x]).collect(),
        FitCoeffs::Complex(c) => c.iter().map(|z| vec![z.re, z.im]).collect(),
    };
    Ok(FitReport {
        method: method.to_string(),
        measure: measure.name().to_string(),
        degree: fit.degree,
        n: fit.nodes_used,
        seed,
        target: target.to_spec_string(),
        coefficients,
        nodes,
        epsilon,
        epsilon_kind: epsilon_kind.to_string(),
    })
}

fn cmd_fit(args: FitArgs) -> Result<(), CmdError> {
    let target = TargetSpec::parse(&args.target)?;
    if args.n < args.d + 1 {
        return Err(Error::TooFewNodes {
            degree: args.d,
            n: args.n,
        }
        .into());
    }
    let mut rng = RngState::new(args.seed).rng();
    let (measure, fit, nodes) = match args.method.as_str() {
        "fourier" => {
            let measure = Measure::CircleUniform;
            target.validate(measure, args.d)?;
            let f = target.circle_fn()?;
            let dpp = sampling::sample_dpp_nodes(measure, args.d, &mut rng)?;
            let extra =
                sampling::sample_leverage_nodes(measure, args.d, args.n - args.d - 1, &mut rng)?;
            let nodes = dpp.merged(extra);
            let values: Vec<_> = nodes.circle_points().unwrap().iter().map(|&z| f(z)).collect();
            let fit = regression::circle_ls_fit(args.d, &nodes, &values)?;
            let rows: Vec<Vec<f64>> = nodes
                .circle_points()
                .unwrap()
                .iter()
                .map(|z| vec![z.re, z.im])
                .collect();
            (measure, fit, rows)
        }
        m @ ("debiased" | "leverage") => {
            let measure = parse_measure(&args.measure)?;
            if !measure.is_real() {
                return Err(UsageError(format!(
                    "method `{m}` needs a real measure; use `fourier` on the circle"
                ))
                .into());
            }
            target.validate(measure, args.d)?;
            let basis = crate::orthopoly::build_basis(measure, args.d)?;
            let rt = target.real_target(&basis)?;
            let nodes = if m == "debiased" {
                let dpp = sampling::sample_dpp_nodes(measure, args.d, &mut rng)?;
                let lev =
                    sampling::sample_leverage_nodes(measure, args.d, args.n - args.d - 1, &mut rng)?;
                dpp.merged(lev)
            } else {
                sampling::sample_leverage_nodes(measure, args.d, args.n, &mut rng)?
            };
            let values: Vec<f64> = nodes.real_points().unwrap().iter().map(|&t| rt.eval(t)).collect();
            let fit = regression::weighted_ls_fit(&basis, &nodes, &values)?;
            let rows: Vec<Vec<f64>> = nodes
                .real_points()
                .unwrap()
                .iter()
                .map(|&t| vec![t])
                .collect();
            (measure, fit, rows)
        }
        other => {
            return Err(UsageError(format!(
                "unknown fit method `{other}` (expected debiased, leverage, or fourier)"
            ))
            .into())
        }
    };
    let report = fit_report(&args.method, measure, &target, &fit, nodes, args.seed)?;
    let mut json = serde_json::to_string_pretty(&report).expect("json encoding");
    json.push('\n');
    emit(args.out.as_deref(), &json)
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CmdError> {
    let text = fs::read_to_string(&args.input)?;
    let report: FitReport = serde_json::from_str(&text)
        .map_err(|e| UsageError(format!("malformed fit report: {e}")))?;
    let measure = parse_measure(&report.measure)?;
    let target = TargetSpec::parse(&report.target)?;
    let components: Vec<f64> = report.coefficients.iter().flat_map(|row| row.clone()).collect();
    let oracle = experiments::ErrorOracle::build(measure, report.degree, &target)?;
    let recomputed = match report.epsilon_kind.as_str() {
        "relative" => oracle.epsilon(&components)?,
        "absolute" => oracle.squared_error(&components),
        other => return Err(UsageError(format!("unknown epsilon kind `{other}`")).into()),
    };
    let delta = (recomputed - report.epsilon).abs();
    if delta <= 1e-10 {
        println!(
            "ok: epsilon {} reproduced (delta {:.3e})",
            fmt_float(report.epsilon),
            delta
        );
        Ok(())
    } else {
        Err(CmdError::Numeric(format!(
            "epsilon mismatch: stored {} recomputed {} (delta {:.3e})",
            fmt_float(report.epsilon),
            fmt_float(recomputed),
            delta
        )))
    }
}

/// Parsed key=value config file; remembers line numbers for error messages.
struct KvConfig {
    entries: Vec<(String, String, usize)>,
}

impl KvConfig {
    fn parse(text: &str) -> Result<KvConfig, UsageError> {
        let mut entries: Vec<(String, String, usize)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| UsageError(format!("line {line_no}: expected `key = value`")))?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if value.is_empty() {
                return Err(UsageError(format!("line {line_no}: empty value for `{key}`")));
            }
            if entries.iter().any(|(k, _, _)| *k == key) {
                return Err(UsageError(format!("line {line_no}: duplicate key `{key}`")));
            }
            entries.push((key, value, line_no));
        }
        Ok(KvConfig { entries })
    }

    fn get(&self, key: &str) -> Option<(&str, usize)> {
        self.entries
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, v, l)| (v.as_str(), *l))
    }

    fn require(&self, key: &str) -> Result<(&str, usize), UsageError> {
        self.get(key)
            .ok_or_else(|| UsageError(format!("missing required config key `{key}`")))
    }

    fn parse_num<T: std::str::FromStr>(&self, key: &str) -> Result<T, UsageError> {
        let (v, line) = self.require(key)?;
        v.parse::<T>()
            .map_err(|_| UsageError(format!("line {line}: invalid value for `{key}`: `{v}`")))
    }
}

const KNOWN_KEYS: &[&str] = &[
    "measure", "d", "n", "n_list", "trials", "target", "seed", "methods", "dump_trials",
];

fn experiment_config(kv: &KvConfig, kind: &str, trials_override: Option<usize>) -> Result<ExperimentConfig, CmdError> {
    for (key, _, line) in &kv.entries {
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(UsageError(format!("line {line}: unknown config key `{key}`")).into());
        }
    }
    let (measure_str, measure_line) = kv.require("measure")?;
    let measure = Measure::parse(measure_str)
        .ok_or_else(|| UsageError(format!("line {measure_line}: unknown measure `{measure_str}`")))?;
    let degree: usize = kv.parse_num("d")?;
    let n_values: Vec<usize> = match kind {
        "bias" => vec![kv.parse_num("n")?],
        "curves" => {
            let (v, line) = kv.require("n_list")?;
            v.split(',')
                .map(|p| {
                    p.trim()
                        .parse::<usize>()
                        .map_err(|_| UsageError(format!("line {line}: invalid n_list entry `{p}`")))
                })
                .collect::<Result<_, _>>()?
        }
        other => {
            return Err(UsageError(format!(
                "unknown experiment kind `{other}` (expected bias or curves)"
            ))
            .into())
        }
    };
    let trials = match trials_override {
        Some(t) => t,
        None => kv.parse_num("trials")?,
    };
    let (target_str, target_line) = kv.require("target")?;
    let target = TargetSpec::parse(target_str)
        .map_err(|e| UsageError(format!("line {target_line}: {e}")))?;
    let seed: u64 = kv.parse_num("seed")?;
    let (methods_str, methods_line) = kv.require("methods")?;
    let methods: Vec<Method> = methods_str
        .split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            Method::parse(p.trim())
                .ok_or_else(|| UsageError(format!("line {methods_line}: unknown method `{p}`")))
        })
        .collect::<Result<_, _>>()?;
    if methods.is_empty() {
        return Err(UsageError(format!("line {methods_line}: empty method list")).into());
    }
    let config = ExperimentConfig {
        measure,
        degree,
        n_values,
        trials,
        target,
        seed,
        methods,
    };
    config.validate()?;
    Ok(config)
}

fn cmd_experiment(args: ExperimentArgs) -> Result<(), CmdError> {
    let text = fs::read_to_string(&args.config)?;
    let kv = KvConfig::parse(&text)?;
    let config = experiment_config(&kv, &args.kind, args.trials)?;
    let dump_trials = match kv.get("dump_trials") {
        Some(("true", _)) => true,
        Some(("false", _)) | None => false,
        Some((v, line)) => {
            return Err(UsageError(format!("line {line}: dump_trials must be true or false, got `{v}`")).into())
        }
    };
    let want_svg = match args.format.as_str() {
        "csv" => false,
        "svg" => true,
        other => return Err(UsageError(format!("unknown format `{other}`")).into()),
    };
    fs::create_dir_all(&args.out)?;

    let run = || -> Result<Vec<(PathBuf, String)>, Error> {
        let mut outputs = Vec::new();
        match args.kind.as_str() {
            "bias" => {
                let study = experiments::run_bias_study(&config)?;
                outputs.push((args.out.join("bias.csv"), bias_csv(&study)));
                if want_svg {
                    outputs.push((args.out.join("bias.svg"), svg::bias_svg(&study)));
                }
            }
            _ => {
                let curves = experiments::run_error_curves(&config)?;
                outputs.push((args.out.join("curves.csv"), curves_csv(&curves)));
                if dump_trials {
                    outputs.push((args.out.join("trials.csv"), trials_csv(&curves)));
                }
                if want_svg {
                    outputs.push((args.out.join("curves.svg"), svg::curves_svg(&curves)));
                }
            }
        }
        Ok(outputs)
    };
    let outputs = match args.threads {
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| CmdError::Usage(format!("bad --threads value: {e}")))?;
            pool.install(run)?
        }
        None => run()?,
    };
    for (path, contents) in &outputs {
        write_atomic(path, contents)?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}
