//! `tkbench`: run, benchmark, and stress-test the clusterers.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or format error, 3 a
//! numerical failure in at least one cell.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tkmeans::harness::{
    self, Algorithm, BenchReport, DataSource, DataSpec, InitKind, OutputFormat, Overrides, RobustnessSpec, RunSpec,
};
use tkmeans::Error;

#[derive(Parser)]
#[command(name = "tkbench", version, about = "Benchmark t-k-means against baseline clusterers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit one algorithm once and print the result as JSON.
    Run(RunArgs),
    /// Run every cell of a TOML config and write a report.
    Bench(BenchArgs),
    /// Contamination sweep: ARI on the original points as outliers are added.
    Robust(RobustArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// iris, wine, a .csv file (label last), or a whitespace-delimited text file.
    #[arg(long)]
    data: Option<String>,
    /// Generator spec, e.g. blobs:K=15,n=300,p=2,std=0.5,box=10,seed=1 (n is per blob).
    #[arg(long)]
    gen: Option<String>,
}

#[derive(Args)]
struct DataArgs {
    #[command(flatten)]
    source: Source,
    /// Partition file for text data.
    #[arg(long)]
    labels: Option<PathBuf>,
    /// Force standardization on or off (default: on for real-world data).
    #[arg(long)]
    standardize: Option<bool>,
}

impl DataArgs {
    fn spec(&self) -> Result<DataSpec, Error> {
        let text = self.source.data.as_deref().or(self.source.gen.as_deref()).unwrap_or_default();
        let mut source: DataSource = text.parse()?;
        if let Some(l) = &self.labels {
            match &mut source {
                DataSource::Text { labels, .. } => *labels = Some(l.clone()),
                _ => return Err(Error::Usage("--labels only applies to text data files".into())),
            }
        }
        Ok(DataSpec {
            source,
            standardize: self.standardize,
        })
    }
}

#[derive(Args)]
struct OverrideArgs {
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Fix the degrees of freedom (t-k-means variants and TMM).
    #[arg(long)]
    nu: Option<f64>,
    /// random or kmeanspp.
    #[arg(long)]
    init: Option<String>,
    /// Covariance ridge for GMM and TMM; 0 disables it.
    #[arg(long)]
    ridge: Option<f64>,
    #[arg(long)]
    alpha_fast: Option<f64>,
}

impl OverrideArgs {
    fn overrides(&self) -> Result<Overrides, Error> {
        Ok(Overrides {
            max_iter: self.max_iter,
            tol: self.tol,
            nu: self.nu,
            init: self.init.as_deref().map(str::parse::<InitKind>).transpose()?,
            ridge: self.ridge,
            alpha_fast: self.alpha_fast,
        })
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    algo: String,
    #[command(flatten)]
    data: DataArgs,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    overrides: OverrideArgs,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    config: PathBuf,
    /// csv, md, or json.
    #[arg(long, default_value = "md")]
    format: String,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RobustArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Comma-separated outlier fractions in [0, 1).
    #[arg(long, value_delimiter = ',', default_value = "0,0.05,0.1")]
    fractions: Vec<f64>,
    /// Comma-separated algorithm names.
    #[arg(long, value_delimiter = ',', default_value = "kmeans,tkmeans")]
    algos: Vec<String>,
    #[arg(long, default_value_t = 20)]
    repeats: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Clusters to fit; defaults to the number of true classes.
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = 2.0)]
    box_expansion: f64,
    #[arg(long, default_value = "md")]
    format: String,
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    overrides: OverrideArgs,
}

fn emit(report: &BenchReport, format: &str, out: Option<&PathBuf>) -> Result<i32, Error> {
    let text = report.render(format.parse::<OutputFormat>()?)?;
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?,
        None => print!("{text}"),
    }
    for c in report.failed() {
        if let harness::CellOutcome::Failed { message, .. } = &c.outcome {
            eprintln!("tkbench: cell {} on {} failed: {message}", c.algorithm, c.dataset);
        }
    }
    Ok(report.exit_code())
}

fn execute(cmd: Command) -> Result<i32, Error> {
    match cmd {
        Command::Run(a) => {
            let mut spec = RunSpec::new(a.algo.parse()?, a.data.spec()?, a.k);
            spec.overrides = a.overrides.overrides()?;
            let outcome = harness::run_once(&spec, a.seed)?;
            let json = serde_json::to_string_pretty(&outcome)
                .map_err(|e| Error::Usage(format!("cannot serialize result: {e}")))?;
            println!("{json}");
            Ok(0)
        }
        Command::Bench(a) => {
            let specs = harness::load_config(&a.config)?;
            let report = harness::run_bench(&specs)?;
            emit(&report, &a.format, a.out.as_ref())
        }
        Command::Robust(a) => {
            let algorithms = a.algos.iter().map(|s| s.parse::<Algorithm>()).collect::<Result<Vec<_>, _>>()?;
            let mut spec = RobustnessSpec::new(a.data.spec()?, a.fractions, algorithms);
            spec.k = a.k;
            spec.repeats = a.repeats;
            spec.base_seed = a.seed;
            spec.box_expansion = a.box_expansion;
            spec.overrides = a.overrides.overrides()?;
            let report = harness::run_robustness(&spec)?;
            emit(&report, &a.format, a.out.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("tkbench: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
