//! Experiment runner and verification entry point.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dampen::harness::{
    emit, load_dataset, run_checks, run_on_model, AppParams, Application, CheckOptions, CheckSuite,
    DatasetRef, ExperimentSpec, OutputFormat,
};
use dampen::Error;

#[derive(Parser)]
#[command(
    name = "dampen",
    version,
    about = "Differentially private selection experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Percentile selection over a file of values in [0, lambda].
    Percentile {
        /// One value per line, or a single-column CSV with a header.
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        lambda: f64,
        /// Percentile in 1..=100.
        #[arg(long, default_value_t = 50)]
        p: u32,
        /// Distance beyond which the sensitivity is capped at lambda.
        #[arg(long, default_value_t = 16)]
        horizon: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Private top-k influential nodes by egocentric betweenness.
    Topk {
        #[arg(long, alias = "data")]
        graph: PathBuf,
        #[arg(long, default_value_t = 10)]
        k: usize,
        /// Cap every node degree at this value.
        #[arg(long)]
        degree_bound: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Private ID3 trees scored by cross-validation.
    Tree {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        schema: PathBuf,
        #[arg(long, default_value_t = 5)]
        depth: usize,
        /// Variants: global, local, shifted.
        #[arg(long, value_delimiter = ',', default_value = "global,local,shifted")]
        variant: Vec<String>,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Single-pick error of each mechanism on values or a graph.
    MechanismCompare {
        /// Values file; requires --lambda.
        #[arg(long, conflicts_with = "graph", required_unless_present = "graph")]
        data: Option<PathBuf>,
        #[arg(long, requires = "data")]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 50)]
        p: u32,
        /// Edge list; picks one node by egocentric betweenness.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        degree_bound: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Verification suites comparing closed forms against brute force.
    Check {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random instances per check.
        #[arg(long, default_value_t = 25)]
        cases: usize,
        /// Replace the sensitivity function under test by zero.
        #[arg(long)]
        inject_zero_delta: bool,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 1.0, 10.0])]
    epsilon: Vec<f64>,
    /// Mechanisms: em, pf, ld, sld.
    #[arg(long, value_delimiter = ',', default_value = "em,pf,ld,sld")]
    mechanism: Vec<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Repetitions per cell; defaults depend on the application.
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long, default_value = "json")]
    output: String,
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall-clock milliseconds per cell.
    #[arg(long)]
    timing: bool,
}

enum Failure {
    Validation(String),
    Check,
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io { .. } => Failure::Io(e.to_string()),
            other => Failure::Validation(other.to_string()),
        }
    }
}

fn spec_from(
    application: Application,
    dataset: DatasetRef,
    params: AppParams,
    mechanisms: Vec<String>,
    common: &Common,
) -> ExperimentSpec {
    ExperimentSpec {
        application,
        dataset,
        epsilons: common.epsilon.clone(),
        mechanisms,
        seed: common.seed,
        runs: common.runs,
        params,
        timing: common.timing,
    }
}

fn run_grid(spec: ExperimentSpec, common: &Common) -> Result<(), Failure> {
    let format: OutputFormat = common.output.parse()?;
    let selectors = spec.validate()?;
    let (model, report) = load_dataset(&spec.dataset)?;
    for warning in &report.warnings {
        eprintln!("warning: {warning}");
    }
    let rows = run_on_model(&spec, &selectors, &model)?;
    emit(&rows, &spec, format, common.out.as_deref())?;
    Ok(())
}

fn execute(command: Command) -> Result<(), Failure> {
    let (spec, common) = match command {
        Command::Percentile {
            data,
            lambda,
            p,
            horizon,
            common,
        } => {
            let params = AppParams {
                percentile: p,
                horizon,
                ..AppParams::default()
            };
            let dataset = DatasetRef::Values { path: data, lambda };
            (
                spec_from(
                    Application::Percentile,
                    dataset,
                    params,
                    common.mechanism.clone(),
                    &common,
                ),
                common,
            )
        }
        Command::Topk {
            graph,
            k,
            degree_bound,
            common,
        } => {
            let params = AppParams {
                k,
                ..AppParams::default()
            };
            let dataset = DatasetRef::EdgeList {
                path: graph,
                degree_bound,
            };
            (
                spec_from(
                    Application::Topk,
                    dataset,
                    params,
                    common.mechanism.clone(),
                    &common,
                ),
                common,
            )
        }
        Command::Tree {
            data,
            schema,
            depth,
            variant,
            folds,
            common,
        } => {
            let params = AppParams {
                depth,
                folds,
                ..AppParams::default()
            };
            let dataset = DatasetRef::Table { data, schema };
            (
                spec_from(Application::Tree, dataset, params, variant, &common),
                common,
            )
        }
        Command::MechanismCompare {
            data,
            lambda,
            p,
            graph,
            degree_bound,
            common,
        } => {
            let dataset = match (data, graph) {
                (Some(path), _) => {
                    let lambda = lambda
                        .ok_or_else(|| Failure::Validation("--data requires --lambda".into()))?;
                    DatasetRef::Values { path, lambda }
                }
                (None, Some(path)) => DatasetRef::EdgeList { path, degree_bound },
                (None, None) => return Err(Failure::Validation("give --data or --graph".into())),
            };
            let params = AppParams {
                percentile: p,
                ..AppParams::default()
            };
            (
                spec_from(
                    Application::MechanismCompare,
                    dataset,
                    params,
                    common.mechanism.clone(),
                    &common,
                ),
                common,
            )
        }
        Command::Check {
            suite,
            seed,
            cases,
            inject_zero_delta,
        } => {
            let suite: CheckSuite = suite.parse()?;
            let report = run_checks(
                suite,
                CheckOptions {
                    seed,
                    cases,
                    inject_zero_delta,
                },
            );
            for outcome in &report.outcomes {
                println!("{outcome}");
            }
            return if report.passed() {
                Ok(())
            } else {
                Err(Failure::Check)
            };
        }
    };
    run_grid(spec, &common)
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("DAMPEN_THREADS") else {
        return Ok(());
    };
    let threads: usize = value.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::Validation(format!(
            "DAMPEN_THREADS must be a positive integer, got {value:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Validation(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| execute(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Check) => ExitCode::from(2),
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
