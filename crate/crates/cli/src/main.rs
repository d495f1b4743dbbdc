//! `kcode`: train dictionaries, encode data, evaluate deviation bounds and run
//! Monte-Carlo experiments.
//!
//! Set `KCODE_THREADS` to fix the worker thread count. Results do not depend
//! on it.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use kcode_core::bounds::{bound_report, BoundRequest, BoundScheme};
use kcode_core::harness::{
    run_bound_curve, run_deviation_experiment, write_curve_csv, write_trials_csv, CurveSpec, DeviationConfig,
};
use kcode_core::{load_dataset, train, Dictionary, Encoder, Init, SchemeKind, SchemeSpec, TrainConfig};
use serde::Serialize;

const THREADS_ENV: &str = "KCODE_THREADS";

#[derive(Parser)]
#[command(name = "kcode", version, about = "K-dimensional coding schemes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train a dictionary; the training report is written next to it.
    Train(TrainArgs),
    /// Encode every point of a dataset with a saved dictionary.
    Encode(EncodeArgs),
    /// Evaluate the deviation bounds for one parameter set.
    Bound(BoundArgs),
    /// Monte-Carlo experiments and bound tables.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum TrainScheme {
    Pca,
    Kmeans,
    Nmf,
    Sparse,
}

#[derive(Clone, Copy, ValueEnum)]
enum InitArg {
    RandomData,
    Gaussian,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long, value_enum)]
    scheme: TrainScheme,
    #[arg(long)]
    k: usize,
    /// Exponent of the sparse codebook.
    #[arg(long)]
    p: Option<f64>,
    /// Center norm cap for K-means.
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    data: PathBuf,
    /// Scale the data by its largest norm instead of rejecting points outside the unit ball.
    #[arg(long)]
    normalize: bool,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    restarts: usize,
    #[arg(long, default_value_t = 500)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = InitArg::RandomData)]
    init: InitArg,
}

#[derive(Args)]
struct EncodeArgs {
    #[arg(long)]
    dict: PathBuf,
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    normalize: bool,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    scheme: BoundScheme,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    delta: f64,
    #[command(flatten)]
    overrides: BoundOverrides,
}

#[derive(Args)]
struct BoundOverrides {
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    class_norm: Option<f64>,
    /// Ambient dimension; enables the finite-dimensional bound.
    #[arg(long)]
    d: Option<usize>,
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Repeated train/holdout runs compared against a deviation bound.
    Deviation {
        #[arg(long)]
        config: PathBuf,
        /// Directory for `trials.csv` and `summary.json`. Without it the CSV
        /// goes to stdout and the summary to stderr.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Table of every applicable bound over a (K, m) grid, as CSV.
    Curve {
        #[arg(long)]
        scheme: BoundScheme,
        /// Comma-separated K values.
        #[arg(long, value_delimiter = ',', required = true)]
        k: Vec<usize>,
        /// Comma-separated sample sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        m: Vec<usize>,
        #[arg(long)]
        delta: f64,
        #[command(flatten)]
        overrides: BoundOverrides,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn scheme_spec(args: &TrainArgs) -> Result<SchemeSpec> {
    let spec = match args.scheme {
        TrainScheme::Pca => SchemeSpec::pca(args.k),
        TrainScheme::Kmeans => SchemeSpec::kmeans_capped(args.k, args.c.unwrap_or(1.0)),
        TrainScheme::Nmf => SchemeSpec::nmf(args.k),
        TrainScheme::Sparse => {
            let Some(p) = args.p else {
                bail!("--scheme sparse needs --p")
            };
            SchemeSpec::sparse(args.k, p)
        }
    };
    if args.c.is_some() && spec.kind != SchemeKind::KMeans {
        bail!("--c only applies to kmeans");
    }
    if args.p.is_some() && spec.kind != SchemeKind::SparseLp {
        bail!("--p only applies to sparse");
    }
    Ok(spec)
}

/// `DICT.json` -> `DICT.report.json`.
fn report_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    out.with_file_name(format!("{stem}.report.json"))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

#[derive(Serialize)]
struct TrainSummary<'a> {
    dictionary: &'a Path,
    report: &'a Path,
    final_risk: f64,
    outer_iterations: usize,
    converged: bool,
    restart: usize,
}

fn run_train(args: &TrainArgs) -> Result<()> {
    let scheme = scheme_spec(args)?;
    let data = load_dataset(&args.data, args.normalize)?;
    let cfg = TrainConfig {
        max_outer_iters: args.max_iters,
        tol: args.tol,
        seed: args.seed,
        init: match args.init {
            InitArg::RandomData => Init::RandomData,
            InitArg::Gaussian => Init::RandomGaussianNormalized,
        },
        restarts: args.restarts,
    };
    let report = train(&scheme, &data, &cfg)?;
    report.dict.save_json(&args.out)?;
    let report_file = report_path(&args.out);
    write_json(&report_file, &report)?;
    print_json(&TrainSummary {
        dictionary: &args.out,
        report: &report_file,
        final_risk: report.final_risk(),
        outer_iterations: report.risk_trace.len() - 1,
        converged: report.converged,
        restart: report.restart,
    })
}

fn run_encode(args: &EncodeArgs) -> Result<()> {
    let dict = Dictionary::load_json(&args.dict)?;
    let data = load_dataset(&args.data, args.normalize)?;
    let results = Encoder::new(&dict).encode_all(&data)?;
    let mut out = output(args.out.as_deref())?;
    serde_json::to_writer_pretty(&mut out, &results)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn bound_request(scheme: BoundScheme, k: usize, m: usize, delta: f64, o: &BoundOverrides) -> Result<BoundRequest> {
    let mut req = BoundRequest::for_scheme(scheme, k, m, delta, o.p)?;
    if let Some(c) = o.c {
        req.set_c(scheme, c);
    }
    if let Some(b) = o.b {
        req.b = b;
    }
    if let Some(n) = o.class_norm {
        req.class_norm = n;
    }
    req.p = o.p.or(req.p);
    req.d = o.d;
    req.validate()?;
    Ok(req)
}

fn run_bound(args: &BoundArgs) -> Result<()> {
    let req = bound_request(args.scheme, args.k, args.m, args.delta, &args.overrides)?;
    print_json(&bound_report(&req, args.scheme)?)
}

fn run_experiment(cmd: &ExperimentCommand) -> Result<()> {
    match cmd {
        ExperimentCommand::Deviation { config, out_dir } => {
            let text = fs::read_to_string(config).with_context(|| format!("reading {}", config.display()))?;
            let cfg: DeviationConfig =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", config.display()))?;
            let result = run_deviation_experiment(&cfg)?;
            match out_dir {
                Some(dir) => {
                    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                    write_trials_csv(&result, output(Some(&dir.join("trials.csv")))?)?;
                    write_json(&dir.join("summary.json"), &result)?;
                }
                None => {
                    write_trials_csv(&result, io::stdout().lock())?;
                    let mut err = io::stderr().lock();
                    serde_json::to_writer_pretty(&mut err, &result)?;
                    writeln!(err)?;
                }
            }
            Ok(())
        }
        ExperimentCommand::Curve {
            scheme,
            k,
            m,
            delta,
            overrides,
            out,
        } => {
            let spec = CurveSpec {
                scheme: *scheme,
                ks: k.clone(),
                ms: m.clone(),
                delta: *delta,
                p: overrides.p,
                c: overrides.c,
                b: overrides.b,
                class_norm: overrides.class_norm,
                d: overrides.d,
            };
            // Validate the override combination once up front.
            bound_request(*scheme, k[0], m[0], *delta, overrides)?;
            let rows = run_bound_curve(&spec)?;
            write_curve_csv(&rows, output(out.as_deref())?)?;
            Ok(())
        }
    }
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .with_context(|| format!("{THREADS_ENV} must be a positive integer, got {value:?}"))?;
    if n == 0 {
        bail!("{THREADS_ENV} must be a positive integer, got 0");
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    configure_threads()?;
    match &cli.command {
        Command::Train(args) => run_train(args),
        Command::Encode(args) => run_encode(args),
        Command::Bound(args) => run_bound(args),
        Command::Experiment(cmd) => run_experiment(cmd),
    }
}
