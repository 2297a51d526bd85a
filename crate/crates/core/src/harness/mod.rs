//! Benchmark harness: runs any of the nine algorithms with seeded repeats,
//! aggregates mean ± sample std per cell, and drives the contamination
//! sweep.
//!
//! Run `i` of a cell uses seed `base_seed + i`, so any single run can be
//! reproduced on its own. A failing run fails its cell only; the remaining
//! cells still execute.

mod config;
mod report;

use std::path::PathBuf;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::baselines::{self, BaselineConfig};
use crate::clustering::{ClusteringResult, Init};
use crate::datasets::{self, BlobSpec, ContaminationSpec, Dataset, LabelColumn};
use crate::error::{Error, Result};
use crate::metrics::{self, MetricReport};
use crate::mixtures::{self, MixtureConfig};
use crate::tkmeans::{self, FitConfig};

pub use config::{load_config, parse_config};
pub use report::{BenchReport, BestMarks, Cell, CellOutcome, CellStats, OutputFormat, RunRecord, Summary};

/// The nine methods compared by the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    KMeans,
    KMeansPlusPlus,
    KMedoids,
    KMedians,
    Gmm,
    Tmm,
    TkMeans,
    FastTkMeans,
    FastTkMeansPlusPlus,
}

impl Algorithm {
    pub const ALL: [Algorithm; 9] = [
        Algorithm::KMeans,
        Algorithm::KMeansPlusPlus,
        Algorithm::KMedoids,
        Algorithm::KMedians,
        Algorithm::Gmm,
        Algorithm::Tmm,
        Algorithm::TkMeans,
        Algorithm::FastTkMeans,
        Algorithm::FastTkMeansPlusPlus,
    ];

    /// Command-line name.
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::KMeans => "kmeans",
            Algorithm::KMeansPlusPlus => "kmeans++",
            Algorithm::KMedoids => "kmedoids",
            Algorithm::KMedians => "kmedians",
            Algorithm::Gmm => "gmm",
            Algorithm::Tmm => "tmm",
            Algorithm::TkMeans => "tkmeans",
            Algorithm::FastTkMeans => "fast-tkmeans",
            Algorithm::FastTkMeansPlusPlus => "fast-tkmeans++",
        }
    }

    /// Name used in rendered tables.
    pub fn label(self) -> &'static str {
        match self {
            Algorithm::KMeans => "k-means",
            Algorithm::KMeansPlusPlus => "k-means++",
            Algorithm::KMedoids => "k-medoids",
            Algorithm::KMedians => "k-medians",
            Algorithm::Gmm => "GMM",
            Algorithm::Tmm => "TMM",
            Algorithm::TkMeans => "t-k-means",
            Algorithm::FastTkMeans => "fast t-k-means",
            Algorithm::FastTkMeansPlusPlus => "fast t-k-means++",
        }
    }

    /// Seeding used unless overridden.
    pub fn default_init(self) -> InitKind {
        match self {
            Algorithm::KMeansPlusPlus | Algorithm::Gmm | Algorithm::Tmm | Algorithm::FastTkMeansPlusPlus => {
                InitKind::KMeansPlusPlus
            }
            _ => InitKind::Random,
        }
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Algorithm::ALL.iter().map(|a| a.name()).collect();
                Error::Usage(format!("unknown algorithm {s:?}; expected one of {}", names.join(", ")))
            })
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Algorithm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InitKind {
    Random,
    #[serde(rename = "kmeanspp")]
    KMeansPlusPlus,
}

impl FromStr for InitKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "random" => Ok(InitKind::Random),
            "kmeanspp" | "kmeans++" => Ok(InitKind::KMeansPlusPlus),
            other => Err(Error::Usage(format!("init must be random or kmeanspp, got {other:?}"))),
        }
    }
}

impl InitKind {
    fn to_init(self) -> Init<f64> {
        match self {
            InitKind::Random => Init::RandomPoints,
            InitKind::KMeansPlusPlus => Init::KMeansPlusPlus,
        }
    }
}

/// Per-run settings that replace an algorithm's defaults. Settings that do
/// not apply to an algorithm are ignored by it: `nu` fixes ν for t-k-means,
/// its fast variants, and TMM; `ridge` applies to the mixtures;
/// `alpha_fast` to the fast variants.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Overrides {
    pub max_iter: Option<usize>,
    pub tol: Option<f64>,
    pub nu: Option<f64>,
    pub init: Option<InitKind>,
    pub ridge: Option<f64>,
    pub alpha_fast: Option<f64>,
}

/// Where a dataset comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum DataSource {
    Iris,
    Wine,
    Blobs(BlobSpec),
    Csv { path: PathBuf, label: LabelColumn },
    /// Whitespace-separated coordinates with an optional partition file.
    Text { path: PathBuf, labels: Option<PathBuf> },
}

impl DataSource {
    fn is_real_world(&self) -> bool {
        matches!(self, DataSource::Iris | DataSource::Wine | DataSource::Csv { .. })
    }
}

/// Parses `blobs:K=15,n=300,p=2,std=0.5,box=10,seed=1`. `n` counts points
/// per blob; omitted keys keep the 15-blob defaults of [`BlobSpec::s_like`].
pub fn parse_blob_spec(s: &str) -> Result<BlobSpec> {
    let body = s
        .strip_prefix("blobs")
        .ok_or_else(|| Error::Usage(format!("generator spec must start with \"blobs\": {s:?}")))?;
    let body = body.strip_prefix(':').unwrap_or(body);
    let mut spec = BlobSpec::s_like(0);
    for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, val) = part
            .split_once('=')
            .ok_or_else(|| Error::Usage(format!("expected key=value in generator spec, got {part:?}")))?;
        let bad = || Error::Usage(format!("bad value for {key} in generator spec: {val:?}"));
        match key.trim() {
            "K" | "k" => spec.k = val.parse().map_err(|_| bad())?,
            "n" => spec.per_cluster = val.parse().map_err(|_| bad())?,
            "p" => spec.p = val.parse().map_err(|_| bad())?,
            "std" => spec.cluster_std = val.parse().map_err(|_| bad())?,
            "box" => spec.center_box = val.parse().map_err(|_| bad())?,
            "seed" => spec.seed = val.parse().map_err(|_| bad())?,
            other => return Err(Error::Usage(format!("unknown generator key {other:?}"))),
        }
    }
    Ok(spec)
}

impl FromStr for DataSource {
    type Err = Error;

    /// `iris`, `wine`, `blobs:...`, `csv:PATH`, any `*.csv` path (label in the
    /// last column), or a whitespace-delimited text file.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Usage("empty data source".into()));
        }
        Ok(match s {
            "iris" => DataSource::Iris,
            "wine" => DataSource::Wine,
            _ if s.starts_with("blobs") => DataSource::Blobs(parse_blob_spec(s)?),
            _ => {
                if let Some(path) = s.strip_prefix("csv:") {
                    DataSource::Csv { path: path.into(), label: LabelColumn::Last }
                } else if s.to_ascii_lowercase().ends_with(".csv") {
                    DataSource::Csv { path: s.into(), label: LabelColumn::Last }
                } else {
                    DataSource::Text { path: s.into(), labels: None }
                }
            }
        })
    }
}

/// A data source plus preprocessing.
#[derive(Debug, Clone, PartialEq)]
pub struct DataSpec {
    pub source: DataSource,
    /// `None` standardizes real-world sets (bundled or CSV) and leaves
    /// synthetic ones in raw coordinates.
    pub standardize: Option<bool>,
}

impl DataSpec {
    pub fn new(source: DataSource) -> Self {
        Self { source, standardize: None }
    }

    pub fn standardizes(&self) -> bool {
        self.standardize.unwrap_or_else(|| self.source.is_real_world())
    }

    pub fn load(&self) -> Result<Dataset<f64>> {
        let d = match &self.source {
            DataSource::Iris => datasets::iris(),
            DataSource::Wine => datasets::wine(),
            DataSource::Blobs(spec) => datasets::generate_gaussian_blobs(spec)?,
            DataSource::Csv { path, label } => datasets::load_csv_labeled(path, *label)?,
            DataSource::Text { path, labels } => datasets::load_benchmark_text(path, labels.as_deref())?,
        };
        if self.standardizes() {
            Ok(datasets::standardize(&d)?.0)
        } else {
            Ok(d)
        }
    }
}

impl FromStr for DataSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(DataSpec::new(s.parse()?))
    }
}

/// One benchmark cell: an algorithm on a dataset, repeated with
/// consecutive seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub algorithm: Algorithm,
    pub data: DataSpec,
    pub k: usize,
    pub repeats: usize,
    pub base_seed: u64,
    pub overrides: Overrides,
}

impl RunSpec {
    pub fn new(algorithm: Algorithm, data: DataSpec, k: usize) -> Self {
        Self {
            algorithm,
            data,
            k,
            repeats: 1,
            base_seed: 0,
            overrides: Overrides::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.repeats == 0 {
            return Err(Error::Usage("repeats must be at least 1".into()));
        }
        if self.k == 0 {
            return Err(Error::Usage("K must be at least 1".into()));
        }
        Ok(())
    }

    pub fn seed(&self, run: usize) -> u64 {
        self.base_seed.wrapping_add(run as u64)
    }
}

/// A single fit with its metrics.
#[derive(Debug, Clone, Serialize)]
pub struct RunOutcome {
    pub algorithm: Algorithm,
    pub dataset: String,
    pub k: usize,
    pub seed: u64,
    pub metrics: MetricReport,
    pub result: ClusteringResult<f64>,
}

/// Fits `algorithm` once. Only the fit itself is timed.
pub fn fit(
    data: &Dataset<f64>,
    algorithm: Algorithm,
    k: usize,
    seed: u64,
    o: &Overrides,
) -> Result<ClusteringResult<f64>> {
    let init = o.init.unwrap_or(algorithm.default_init()).to_init();
    let mut base = BaselineConfig { seed, init, ..BaselineConfig::default() };
    if let Some(m) = o.max_iter {
        base.max_iter = m;
    }
    if let Some(t) = o.tol {
        base.tol = t;
    }
    match algorithm {
        Algorithm::KMeans | Algorithm::KMeansPlusPlus => baselines::kmeans_fit(data, k, &base),
        Algorithm::KMedoids => baselines::kmedoids_fit(data, k, &base),
        Algorithm::KMedians => baselines::kmedians_fit(data, k, &base),
        Algorithm::Gmm | Algorithm::Tmm => {
            let cfg = MixtureConfig {
                base,
                ridge: o.ridge,
                fixed_nu: o.nu,
                ..MixtureConfig::default()
            };
            let fit = if algorithm == Algorithm::Gmm {
                mixtures::gmm_fit(data, k, &cfg)?
            } else {
                mixtures::tmm_fit(data, k, &cfg)?
            };
            Ok(fit.result)
        }
        Algorithm::TkMeans | Algorithm::FastTkMeans | Algorithm::FastTkMeansPlusPlus => {
            let mut cfg = if algorithm == Algorithm::TkMeans {
                FitConfig::default()
            } else {
                FitConfig::fast()
            };
            cfg.max_iter = base.max_iter;
            cfg.tol = base.tol;
            cfg.seed = seed;
            cfg.init = base.init;
            if o.nu.is_some() {
                cfg.fixed_nu = o.nu;
            }
            if let Some(a) = o.alpha_fast {
                cfg.alpha_fast = a;
            }
            Ok(tkmeans::fit(data, k, &cfg)?.result)
        }
    }
}

fn with_context(e: Error, ctx: &str) -> Error {
    match e {
        Error::Domain(m) => Error::Domain(format!("{ctx}: {m}")),
        Error::Usage(m) => Error::Usage(format!("{ctx}: {m}")),
        Error::DegenerateMetric(m) => Error::DegenerateMetric(format!("{ctx}: {m}")),
        Error::Numerical { component, message } => Error::Numerical {
            component,
            message: format!("{ctx}: {message}"),
        },
        other => other,
    }
}

/// Fits and scores one run on an already loaded dataset.
pub fn run_on(data: &Dataset<f64>, spec: &RunSpec, seed: u64) -> Result<RunOutcome> {
    let ctx = format!("{} on {} (seed {seed})", spec.algorithm, data.name());
    let result = fit(data, spec.algorithm, spec.k, seed, &spec.overrides).map_err(|e| with_context(e, &ctx))?;
    let metrics = metrics::evaluate(data, &result.centers, &result.labels, data.labels())
        .map_err(|e| with_context(e, &ctx))?;
    Ok(RunOutcome {
        algorithm: spec.algorithm,
        dataset: data.name().to_string(),
        k: spec.k,
        seed,
        metrics,
        result,
    })
}

/// Loads the spec's dataset and performs a single run.
pub fn run_once(spec: &RunSpec, seed: u64) -> Result<RunOutcome> {
    spec.validate()?;
    let data = spec.data.load()?;
    run_on(&data, spec, seed)
}

fn record(outcome: &RunOutcome, ari: Option<f64>) -> RunRecord {
    RunRecord {
        seed: outcome.seed,
        ari,
        mse: outcome.metrics.mse,
        wb: outcome.metrics.wb,
        iterations: outcome.result.iterations,
        converged: outcome.result.converged,
        wall_time: outcome.result.wall_time,
        loss_trace: outcome.result.loss_trace.clone(),
    }
}

fn failed(seed: u64, e: &Error) -> CellOutcome {
    CellOutcome::Failed {
        seed,
        exit_code: e.exit_code(),
        message: e.to_string(),
    }
}

fn run_cell(data: &Dataset<f64>, spec: &RunSpec) -> CellOutcome {
    let mut runs = Vec::with_capacity(spec.repeats);
    for i in 0..spec.repeats {
        let seed = spec.seed(i);
        match run_on(data, spec, seed) {
            Ok(o) => runs.push(record(&o, o.metrics.ari)),
            Err(e) => return failed(seed, &e),
        }
    }
    CellOutcome::Ok(CellStats::from_runs(runs))
}

/// Runs every spec. Each dataset is loaded once; a dataset that fails to
/// load fails all of its cells.
pub fn run_bench(specs: &[RunSpec]) -> Result<BenchReport> {
    if specs.is_empty() {
        return Err(Error::Usage("no runs to benchmark".into()));
    }
    for s in specs {
        s.validate()?;
    }
    let mut cache: Vec<(&DataSpec, std::result::Result<Dataset<f64>, Error>)> = Vec::new();
    let mut cells = Vec::with_capacity(specs.len());
    for spec in specs {
        let pos = match cache.iter().position(|(d, _)| **d == spec.data) {
            Some(pos) => pos,
            None => {
                cache.push((&spec.data, spec.data.load()));
                cache.len() - 1
            }
        };
        let (dataset, outcome) = match &cache[pos].1 {
            Ok(data) => (data.name().to_string(), run_cell(data, spec)),
            Err(e) => (format!("{:?}", spec.data.source), failed(spec.base_seed, e)),
        };
        cells.push(Cell {
            algorithm: spec.algorithm,
            dataset,
            fraction: None,
            k: spec.k,
            repeats: spec.repeats,
            base_seed: spec.base_seed,
            outcome,
            best: BestMarks::default(),
        });
    }
    Ok(BenchReport::new(cells))
}

/// Settings for the contamination sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct RobustnessSpec {
    pub data: DataSpec,
    pub fractions: Vec<f64>,
    pub algorithms: Vec<Algorithm>,
    /// Defaults to the number of ground-truth classes.
    pub k: Option<usize>,
    pub repeats: usize,
    pub base_seed: u64,
    pub box_expansion: f64,
    pub overrides: Overrides,
}

impl RobustnessSpec {
    pub fn new(data: DataSpec, fractions: Vec<f64>, algorithms: Vec<Algorithm>) -> Self {
        Self {
            data,
            fractions,
            algorithms,
            k: None,
            repeats: 20,
            base_seed: 0,
            box_expansion: 2.0,
            overrides: Overrides::default(),
        }
    }
}

/// For each fraction and algorithm, contaminates the labelled dataset with
/// the run's seed, fits, and scores ARI on the original points only. MSE
/// and W/B cover all points. One cell per (algorithm, fraction).
pub fn run_robustness(spec: &RobustnessSpec) -> Result<BenchReport> {
    if spec.fractions.is_empty() || spec.algorithms.is_empty() {
        return Err(Error::Usage("robustness sweep needs fractions and algorithms".into()));
    }
    if spec.repeats == 0 {
        return Err(Error::Usage("repeats must be at least 1".into()));
    }
    for &f in &spec.fractions {
        ContaminationSpec { outlier_fraction: f, box_expansion: spec.box_expansion, seed: 0 }.validate()?;
    }
    let clean = spec.data.load()?;
    let truth = clean
        .labels()
        .ok_or_else(|| Error::Usage(format!("{} has no ground-truth labels", clean.name())))?
        .to_vec();
    let k = spec.k.unwrap_or_else(|| clean.n_classes().unwrap_or(1));
    let n0 = clean.n();

    let mut cells = Vec::new();
    for &fraction in &spec.fractions {
        for &algorithm in &spec.algorithms {
            let run = RunSpec {
                algorithm,
                data: spec.data.clone(),
                k,
                repeats: spec.repeats,
                base_seed: spec.base_seed,
                overrides: spec.overrides,
            };
            let mut runs = Vec::with_capacity(spec.repeats);
            let mut outcome = None;
            for i in 0..spec.repeats {
                let seed = run.seed(i);
                let c = ContaminationSpec { outlier_fraction: fraction, box_expansion: spec.box_expansion, seed };
                let scored = datasets::contaminate(&clean, &c).and_then(|data| {
                    let o = run_on(&data, &run, seed)?;
                    let ari = metrics::adjusted_rand_index(&truth, &o.result.labels[..n0])?;
                    Ok(record(&o, Some(ari)))
                });
                match scored {
                    Ok(r) => runs.push(r),
                    Err(e) => {
                        outcome = Some(failed(seed, &e));
                        break;
                    }
                }
            }
            cells.push(Cell {
                algorithm,
                dataset: clean.name().to_string(),
                fraction: Some(fraction),
                k,
                repeats: spec.repeats,
                base_seed: spec.base_seed,
                outcome: outcome.unwrap_or_else(|| CellOutcome::Ok(CellStats::from_runs(runs))),
                best: BestMarks::default(),
            });
        }
    }
    Ok(BenchReport::new(cells))
}
