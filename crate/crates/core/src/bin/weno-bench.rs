//! Command-line front end: refinement studies and one-off interpolation.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 configuration error, 3 linear-weight
//! fallback under `--strict`.

use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use progressive_weno::bench::{
    run_refinement_1d, run_refinement_2d, GridKind, RefinementReport, Refinement1D, Refinement2D,
    TestFunction,
};
use progressive_weno::{interpolate_batch, GridFunction, Method, WenoError, WenoParams};
use serde::{Deserialize, Serialize};

#[derive(Parser)]
#[command(name = "weno-bench", version, about = "Progressive WENO interpolation benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// 1-D refinement study around the jump of f1 or f2.
    Bench1d(Bench1d),
    /// 2-D refinement study of f3, f4 or f5 on [-1, 1]^2.
    Bench2d(Bench2d),
    /// Interpolate a grid function at a list of points.
    Interp(Interp),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Progressive,
    Classical,
    Linear,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Progressive => Method::Progressive,
            MethodArg::Classical => Method::Classical,
            MethodArg::Linear => Method::Linear,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Function1d {
    F1,
    F2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Function2d {
    F3,
    F4,
    F5,
}

#[derive(Clone, Copy, ValueEnum)]
enum Grid1dArg {
    Uniform,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum Grid2dArg {
    Uniform,
    Perturbed,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 3)]
    r: usize,
    #[arg(long, value_enum, default_value = "progressive")]
    method: MethodArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Inclusive level range, e.g. `5..9`.
    #[arg(long, value_parser = parse_levels)]
    levels: Option<RangeInclusive<u32>>,
    /// Weight exponent; defaults to (r + 1) / 2.
    #[arg(long)]
    t: Option<f64>,
    /// Output file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Fail with exit code 3 if any weight computation fell back to linear weights.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct Bench1d {
    #[arg(long, value_enum)]
    function: Function1d,
    #[arg(long, value_enum, default_value = "uniform")]
    grid: Grid1dArg,
    /// Points in the nine-cell evaluation window.
    #[arg(long, default_value_t = 10_000)]
    eval_points: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Bench2d {
    #[arg(long, value_enum)]
    function: Function2d,
    #[arg(long, value_enum, default_value = "uniform")]
    grid: Grid2dArg,
    /// Points per cell: 25 uses tau = 0.3..0.7 in steps of 0.1, 9 uses 0.3, 0.5, 0.7.
    #[arg(long, default_value_t = 25)]
    eval_points: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Interp {
    /// Grid function JSON: {"axes": [[...], ...], "values": nested arrays}.
    #[arg(long)]
    data: PathBuf,
    /// JSON list of points; bare numbers are accepted for 1-D data.
    #[arg(long)]
    query: PathBuf,
    #[arg(long, default_value_t = 3)]
    r: usize,
    #[arg(long, value_enum, default_value = "progressive")]
    method: MethodArg,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    strict: bool,
}

fn parse_levels(s: &str) -> Result<RangeInclusive<u32>, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected LMIN..LMAX, got `{s}`"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let lo: u32 = a.trim().parse().map_err(|e| format!("bad LMIN: {e}"))?;
    let hi: u32 = b.trim().parse().map_err(|e| format!("bad LMAX: {e}"))?;
    if lo > hi {
        return Err(format!("LMIN {lo} exceeds LMAX {hi}"));
    }
    Ok(lo..=hi)
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        let code = if error.downcast_ref::<WenoError>().is_some() {
            2
        } else {
            1
        };
        Failure { code, error }
    }
}

impl From<WenoError> for Failure {
    fn from(e: WenoError) -> Self {
        Failure {
            code: 2,
            error: e.into(),
        }
    }
}

fn write_output(out: &Option<PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

fn emit(report: &RefinementReport, common: &Common) -> Result<(), Failure> {
    let text = match common.format {
        Format::Csv => report.to_csv(),
        Format::Json => report.to_json() + "\n",
    };
    write_output(&common.out, &text)?;
    check_strict(common.strict, report.fallback)
}

fn check_strict(strict: bool, fallback: bool) -> Result<(), Failure> {
    if strict && fallback {
        return Err(Failure {
            code: 3,
            error: anyhow::anyhow!("nonlinear weights underflowed; linear weights were used"),
        });
    }
    Ok(())
}

fn bench1d(args: Bench1d) -> Result<(), Failure> {
    let function = match args.function {
        Function1d::F1 => TestFunction::F1,
        Function1d::F2 => TestFunction::F2,
    };
    let mut config = Refinement1D::new(function, args.common.r, args.common.method.into());
    config.grid = match args.grid {
        Grid1dArg::Uniform => GridKind::Uniform,
        Grid1dArg::Random => GridKind::Random,
    };
    config.seed = args.common.seed;
    if let Some(levels) = args.common.levels.clone() {
        config.levels = levels;
    }
    config.eval_points = args.eval_points;
    config.t = args.common.t;
    let report = run_refinement_1d(&config)?;
    emit(&report, &args.common)
}

fn bench2d(args: Bench2d) -> Result<(), Failure> {
    let function = match args.function {
        Function2d::F3 => TestFunction::F3,
        Function2d::F4 => TestFunction::F4,
        Function2d::F5 => TestFunction::F5,
    };
    let mut config = Refinement2D::new(function, args.common.r, args.common.method.into());
    config.grid = match args.grid {
        Grid2dArg::Uniform => GridKind::Uniform,
        Grid2dArg::Perturbed => GridKind::Perturbed,
    };
    config.seed = args.common.seed;
    if let Some(levels) = args.common.levels.clone() {
        config.levels = levels;
    }
    config.taus = match args.eval_points {
        25 => progressive_weno::bench::default_taus(),
        9 => progressive_weno::bench::reduced_taus(),
        n => {
            return Err(WenoError::Config(format!(
                "--eval-points for 2-D studies must be 9 or 25, got {n}"
            ))
            .into())
        }
    };
    config.t = args.common.t;
    let report = run_refinement_2d(&config)?;
    emit(&report, &args.common)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum QueryPoint {
    Scalar(f64),
    Vector(Vec<f64>),
}

#[derive(Serialize)]
struct Answer {
    point: Vec<f64>,
    value: f64,
}

fn interp(args: Interp) -> Result<(), Failure> {
    let data = fs::read_to_string(&args.data)
        .with_context(|| format!("reading {}", args.data.display()))?;
    let gf = GridFunction::from_json(&data)?;
    let query = fs::read_to_string(&args.query)
        .with_context(|| format!("reading {}", args.query.display()))?;
    let points: Vec<QueryPoint> = serde_json::from_str(&query)
        .map_err(|e| WenoError::Config(format!("query file: {e}")))?;
    let points: Vec<Vec<f64>> = points
        .into_iter()
        .map(|p| match p {
            QueryPoint::Scalar(x) => vec![x],
            QueryPoint::Vector(v) => v,
        })
        .collect();
    let mut params = WenoParams::new(args.r, args.method.into());
    if let Some(t) = args.t {
        params.t = t;
    }
    let results = interpolate_batch(&gf, &points, &params)?;
    let fallback = results.iter().any(|r| r.fallback);
    let answers: Vec<Answer> = points
        .into_iter()
        .zip(&results)
        .map(|(point, r)| Answer {
            point,
            value: r.value,
        })
        .collect();
    let text = serde_json::to_string_pretty(&answers).map_err(anyhow::Error::from)? + "\n";
    write_output(&args.out, &text)?;
    check_strict(args.strict, fallback)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Bench1d(a) => bench1d(a),
        Command::Bench2d(a) => bench2d(a),
        Command::Interp(a) => interp(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
