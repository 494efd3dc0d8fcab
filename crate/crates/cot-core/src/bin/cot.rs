//! Command-line front end: transport distances, goodness-of-fit tests,
//! limit-law simulation, and batch experiments over plain-text angle files.
//!
//! Exit codes follow a scriptable protocol: 0 means success (for tests:
//! fail to reject), 3 means the test rejected, 4 is a command-line parse
//! error, and 5 any other failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cot_core::distributions::Family;
use cot_core::experiments::{run_experiment, ExperimentConfig};
use cot_core::inference::{
    bootstrap_distribution, cott_one_sample, cott_two_sample, BootstrapMode, BootstrapReference,
    BootstrapSpec, QuantileSource, TestResult,
};
use cot_core::{
    cot_exact, cot_grid, discretize_distribution, discretize_measure, mc_limit_sample, mc_quantile,
    read_angle_file, AngleUnit, CotError, DiscreteCircularMeasure,
};

const EXIT_REJECT: u8 = 3;
const EXIT_USAGE: u8 = 4;
const EXIT_RUNTIME: u8 = 5;

#[derive(Parser)]
#[command(
    name = "cot",
    version,
    about = "Circular optimal transport distances and goodness-of-fit tests"
)]
struct Cli {
    /// Worker threads for Monte Carlo runs (default: all cores). Results do
    /// not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Unit of the values in angle files: turns, radians, or degrees.
    #[arg(long, global = true, default_value = "turns", value_parser = parse_unit)]
    unit: AngleUnit,

    #[command(subcommand)]
    command: Command,
}

fn parse_unit(s: &str) -> Result<AngleUnit, String> {
    s.parse().map_err(|e: CotError| e.to_string())
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: CotError| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Transport distance between two samples, or a sample and a named law.
    Distance(DistanceArgs),
    /// One-sample goodness-of-fit test against a named law.
    Test(TestArgs),
    /// Two-sample test of equal law via the pooled reduced-size bootstrap.
    Test2(Test2Args),
    /// Draws from the limit law of the scaled empirical distance.
    Simulate(SimulateArgs),
    /// Limit-law quantiles for a named null.
    Quantiles(QuantilesArgs),
    /// Batch experiment runs emitting CSV artifacts.
    Experiment(ExperimentArgs),
    /// Bootstrap draws of the scaled distance for one sample.
    Bootstrap(BootstrapArgs),
}

#[derive(Args)]
struct DistanceArgs {
    /// Angle file of the first sample.
    file_x: PathBuf,
    /// Angle file of the second sample (omit when testing against --null).
    file_y: Option<PathBuf>,
    /// Named law to compare against instead of a second file, e.g.
    /// "uniform" or "vonmises:0.5,2".
    #[arg(long, value_parser = parse_family)]
    null: Option<Family>,
    /// Grid resolution for the discretized distance.
    #[arg(long, default_value_t = 1000)]
    grid: usize,
    /// Exact distance between the two empirical measures.
    #[arg(long)]
    exact: bool,
}

#[derive(Args)]
struct TestArgs {
    /// Angle file of the sample.
    file: PathBuf,
    /// Null law, e.g. "uniform" or "stephens:2,3".
    #[arg(long, default_value = "uniform", value_parser = parse_family)]
    null: Family,
    /// Significance level.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Grid resolution.
    #[arg(long = "D", default_value_t = 1000)]
    resolution: usize,
    /// Monte Carlo replicates for the limit-law quantile.
    #[arg(long = "N", default_value_t = 100_000)]
    replicates: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct Test2Args {
    file_x: PathBuf,
    file_y: PathBuf,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Bootstrap replicates.
    #[arg(long = "B", default_value_t = 2000)]
    replicates: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, default_value = "uniform", value_parser = parse_family)]
    null: Family,
    #[arg(long = "D", default_value_t = 1000)]
    resolution: usize,
    /// Number of draws.
    #[arg(long = "N", default_value_t = 100_000)]
    replicates: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct QuantilesArgs {
    #[arg(long, default_value = "uniform", value_parser = parse_family)]
    null: Family,
    /// Comma-separated significance levels.
    #[arg(long, default_value = "0.1,0.05,0.01")]
    alphas: String,
    #[arg(long = "N", default_value_t = 100_000)]
    replicates: usize,
    #[arg(long = "D", default_value_t = 1000)]
    resolution: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Experiment id: table1, clt-convergence, power-figures, or cot-curves.
    #[arg(long)]
    id: Option<String>,
    /// JSON configuration file; defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Publication-scale replicate counts instead of desk scale.
    #[arg(long)]
    full: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BootstrapArgs {
    file: PathBuf,
    /// Resampling scheme: m_of_n or n_of_n.
    #[arg(long, default_value = "m_of_n")]
    mode: String,
    /// Subsample size for m_of_n (default: ceil(n^0.8)).
    #[arg(long)]
    m: Option<usize>,
    /// Bootstrap replicates.
    #[arg(long = "B", default_value_t = 2000)]
    replicates: usize,
    /// Reference law for the full-size scheme.
    #[arg(long, default_value = "uniform", value_parser = parse_family)]
    null: Family,
    #[arg(long = "D", default_value_t = 1000)]
    resolution: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            // Help and --version are successful exits, not usage errors.
            return match err.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };

    if let Some(threads) = cli.threads {
        if let Err(err) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: {err}");
            return ExitCode::from(EXIT_RUNTIME);
        }
    }

    match run(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}

fn run(cli: &Cli) -> cot_core::Result<ExitCode> {
    match &cli.command {
        Command::Distance(args) => cmd_distance(cli, args),
        Command::Test(args) => cmd_test(cli, args),
        Command::Test2(args) => cmd_test2(cli, args),
        Command::Simulate(args) => cmd_simulate(cli, args),
        Command::Quantiles(args) => cmd_quantiles(cli, args),
        Command::Experiment(args) => cmd_experiment(cli, args),
        Command::Bootstrap(args) => cmd_bootstrap(cli, args),
    }
}

fn emit(cli: &Cli, content: &str) -> cot_core::Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(path, content).map_err(|e| file_err(path, e))?,
        None => print!("{content}"),
    }
    Ok(())
}

fn usage(msg: &str) -> CotError {
    CotError::InvalidParameter(msg.to_string())
}

fn file_err(path: impl AsRef<Path>, source: std::io::Error) -> CotError {
    CotError::File {
        path: path.as_ref().display().to_string(),
        source,
    }
}

fn emit_test_result(cli: &Cli, result: &TestResult) -> cot_core::Result<ExitCode> {
    let mut value = serde_json::to_value(result).expect("test result serializes");
    value["schema"] = serde_json::json!(1);
    emit(cli, &format!("{value}\n"))?;
    Ok(if result.reject {
        ExitCode::from(EXIT_REJECT)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_distance(cli: &Cli, args: &DistanceArgs) -> cot_core::Result<ExitCode> {
    let xs = read_angle_file(&args.file_x, cli.unit)?;
    let mu = DiscreteCircularMeasure::from_points(&xs)?;
    let report = match (&args.file_y, &args.null) {
        (Some(_), Some(_)) => {
            return Err(usage("give either a second file or --null, not both"));
        }
        (None, None) => {
            return Err(usage("need a second file or --null to compare against"));
        }
        (Some(file_y), None) => {
            let ys = read_angle_file(file_y, cli.unit)?;
            let nu = DiscreteCircularMeasure::from_points(&ys)?;
            if args.exact {
                serde_json::json!({
                    "schema": 1,
                    "cot": cot_exact(&mu, &nu),
                    "method": "exact",
                    "resolution": null,
                    "n_x": xs.len(),
                    "n_y": ys.len(),
                })
            } else {
                let d = args.grid;
                let value = cot_grid(&discretize_measure(&mu, d)?, &discretize_measure(&nu, d)?)?;
                serde_json::json!({
                    "schema": 1,
                    "cot": value,
                    "method": "grid",
                    "resolution": d,
                    "n_x": xs.len(),
                    "n_y": ys.len(),
                })
            }
        }
        (None, Some(family)) => {
            if args.exact {
                return Err(usage(
                    "--exact needs two sample files; a named law is compared on a grid",
                ));
            }
            let d = args.grid;
            let null = family.build()?;
            let value = cot_grid(
                &discretize_measure(&mu, d)?,
                &discretize_distribution(null.as_ref(), d)?,
            )?;
            serde_json::json!({
                "schema": 1,
                "cot": value,
                "method": "grid",
                "resolution": d,
                "n_x": xs.len(),
                "n_y": null,
                "null": family.label(),
            })
        }
    };
    emit(cli, &format!("{report}\n"))?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_test(cli: &Cli, args: &TestArgs) -> cot_core::Result<ExitCode> {
    let sample = read_angle_file(&args.file, cli.unit)?;
    let null = args.null.build()?;
    let source = QuantileSource::Generate {
        resolution: args.resolution,
        replicates: args.replicates,
        seed: args.seed,
    };
    let result = cott_one_sample(&sample, null.as_ref(), args.alpha, &source)?;
    emit_test_result(cli, &result)
}

fn cmd_test2(cli: &Cli, args: &Test2Args) -> cot_core::Result<ExitCode> {
    let xs = read_angle_file(&args.file_x, cli.unit)?;
    let ys = read_angle_file(&args.file_y, cli.unit)?;
    let spec = BootstrapSpec::m_of_n(args.replicates, args.seed);
    let result = cott_two_sample(&xs, &ys, args.alpha, &spec)?;
    emit_test_result(cli, &result)
}

fn cmd_simulate(cli: &Cli, args: &SimulateArgs) -> cot_core::Result<ExitCode> {
    let null = args.null.build()?;
    let draws = mc_limit_sample(null.as_ref(), args.resolution, args.replicates, args.seed)?;
    let mut out = format!(
        "# cot simulate\n# null: {}\n# D: {}\n# N: {}\n# seed: {}\nvalue\n",
        args.null.label(),
        args.resolution,
        args.replicates,
        args.seed
    );
    for draw in draws {
        out.push_str(&format!("{draw:.9e}\n"));
    }
    emit(cli, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_quantiles(cli: &Cli, args: &QuantilesArgs) -> cot_core::Result<ExitCode> {
    let alphas: Vec<f64> = args
        .alphas
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| usage(&format!("bad significance level {s:?}")))
        })
        .collect::<cot_core::Result<_>>()?;
    let null = args.null.build()?;
    let draws = mc_limit_sample(null.as_ref(), args.resolution, args.replicates, args.seed)?;
    let mut out = format!(
        "# cot quantiles\n# null: {}\n# alphas: {}\n# N: {}\n# D: {}\n# seed: {}\nalpha,quantile\n",
        args.null.label(),
        args.alphas,
        args.replicates,
        args.resolution,
        args.seed
    );
    for alpha in alphas {
        let q = mc_quantile(&draws, alpha)?;
        out.push_str(&format!("{alpha},{q:.9e}\n"));
    }
    emit(cli, &out)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_experiment(cli: &Cli, args: &ExperimentArgs) -> cot_core::Result<ExitCode> {
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| file_err(path, e))?;
            serde_json::from_str::<ExperimentConfig>(&text)
                .map_err(|e| usage(&format!("bad config {}: {e}", path.display())))?
        }
        None => {
            let id = args
                .id
                .as_deref()
                .ok_or_else(|| usage("need --id or --config"))?;
            if args.full {
                ExperimentConfig::full(id, args.seed)
            } else {
                ExperimentConfig::desk(id, args.seed)
            }
        }
    };
    if let Some(id) = &args.id {
        config.id = id.clone();
    }
    let csv = run_experiment(&config)?;
    match (&cli.out, &config.out) {
        (Some(_), _) => emit(cli, &csv)?,
        (None, Some(path)) => std::fs::write(path, &csv).map_err(|e| file_err(path, e))?,
        (None, None) => print!("{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bootstrap(cli: &Cli, args: &BootstrapArgs) -> cot_core::Result<ExitCode> {
    let sample = read_angle_file(&args.file, cli.unit)?;
    let mode = match args.mode.replace('-', "_").to_ascii_lowercase().as_str() {
        "m_of_n" => BootstrapMode::MOfN,
        "n_of_n" => BootstrapMode::NOfN,
        other => {
            return Err(usage(&format!(
                "unknown mode {other:?}; expected m_of_n or n_of_n"
            )))
        }
    };
    let mut spec = match mode {
        BootstrapMode::MOfN => BootstrapSpec::m_of_n(args.replicates, args.seed),
        BootstrapMode::NOfN => BootstrapSpec::n_of_n(args.replicates, args.seed),
    }
    .with_resolution(args.resolution);
    if let Some(m) = args.m {
        spec = spec.with_m(m);
    }
    let null = args.null.build()?;
    let reference = match mode {
        BootstrapMode::MOfN => BootstrapReference::Empirical,
        BootstrapMode::NOfN => BootstrapReference::FixedNull(null.as_ref()),
    };
    let draws = bootstrap_distribution(&sample, &spec, reference)?;
    let mut out = format!(
        "# cot bootstrap\n# mode: {}\n# n: {}\n# m: {}\n# B: {}\n# D: {}\n# seed: {}\nvalue\n",
        args.mode,
        sample.len(),
        match mode {
            BootstrapMode::MOfN => spec.resolved_m(sample.len()).to_string(),
            BootstrapMode::NOfN => sample.len().to_string(),
        },
        args.replicates,
        args.resolution,
        args.seed
    );
    for draw in draws {
        out.push_str(&format!("{draw:.9e}\n"));
    }
    emit(cli, &out)?;
    Ok(ExitCode::SUCCESS)
}
