//! The [`Dataset`] model plus loaders, generators, and transforms.
//!
//! Two on-disk formats are supported:
//!
//! * benchmark text: one point per line, columns separated by runs of
//!   spaces or tabs, with an optional partition file holding one integer
//!   label per line. Lines that do not parse as numbers (headers, comments)
//!   and blank lines are skipped in both files.
//! * CSV: comma-separated, optional header row (detected when every feature
//!   cell of the first row is non-numeric), with a configurable label column whose
//!   values may be arbitrary strings.
//!
//! Labels are always remapped to a dense `0..C` range in order of first
//! occurrence.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use rand::RngExt;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng::seeded;
use crate::Scalar;

/// An immutable N×p sample matrix with optional ground-truth labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T> {
    samples: Matrix<T>,
    labels: Option<Vec<usize>>,
    name: String,
}

impl<T: Scalar> Dataset<T> {
    /// Validates and wraps a sample matrix. Labels, when given, must already
    /// be dense ids; use [`remap_dense`] first if they are not.
    pub fn new(name: impl Into<String>, samples: Matrix<T>, labels: Option<Vec<usize>>) -> Result<Self> {
        if samples.rows() == 0 || samples.cols() == 0 {
            return Err(Error::domain("dataset needs at least one sample and one feature"));
        }
        if let Some(i) = samples.as_slice().iter().position(|v| !v.is_finite()) {
            return Err(Error::domain(format!(
                "non-finite value at sample {}, feature {}",
                i / samples.cols(),
                i % samples.cols()
            )));
        }
        if let Some(l) = &labels {
            if l.len() != samples.rows() {
                return Err(Error::domain(format!(
                    "{} labels for {} samples",
                    l.len(),
                    samples.rows()
                )));
            }
        }
        Ok(Self {
            samples,
            labels,
            name: name.into(),
        })
    }

    pub fn from_rows<R: AsRef<[T]>>(name: impl Into<String>, rows: &[R], labels: Option<Vec<usize>>) -> Result<Self> {
        Self::new(name, Matrix::from_rows(rows)?, labels)
    }

    pub fn samples(&self) -> &Matrix<T> {
        &self.samples
    }

    pub fn labels(&self) -> Option<&[usize]> {
        self.labels.as_deref()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.samples.rows()
    }

    pub fn p(&self) -> usize {
        self.samples.cols()
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[T] {
        self.samples.row(i)
    }

    /// Number of label classes C (max id + 1), if labelled.
    pub fn n_classes(&self) -> Option<usize> {
        self.labels.as_ref().map(|l| l.iter().max().map_or(0, |m| m + 1))
    }

    /// Same samples and labels, new name.
    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Drops the ground truth; algorithms never look at it anyway.
    pub fn without_labels(mut self) -> Self {
        self.labels = None;
        self
    }

    /// Converts to another scalar type.
    pub fn cast<U: Scalar>(&self) -> Dataset<U> {
        let data = self
            .samples
            .as_slice()
            .iter()
            .map(|&v| U::lit(v.as_f64()))
            .collect();
        Dataset {
            samples: Matrix::from_vec(self.n(), self.p(), data).expect("same shape"),
            labels: self.labels.clone(),
            name: self.name.clone(),
        }
    }
}

/// Remaps arbitrary ids to `0..C` in order of first occurrence.
pub fn remap_dense<K: std::hash::Hash + Eq + Clone>(raw: &[K]) -> Vec<usize> {
    let mut ids: HashMap<K, usize> = HashMap::new();
    raw.iter()
        .map(|k| {
            let next = ids.len();
            *ids.entry(k.clone()).or_insert(next)
        })
        .collect()
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "dataset".into())
}

/// Parses whitespace-delimited rows. Returns (line number, values) for every
/// line whose tokens are all numeric.
fn numeric_rows(text: &str) -> Vec<(usize, Vec<f64>)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, line)| {
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.is_empty() {
                return None;
            }
            let vals: Option<Vec<f64>> = toks.iter().map(|t| t.parse::<f64>().ok()).collect();
            vals.filter(|v| v.iter().all(|x| x.is_finite())).map(|v| (i + 1, v))
        })
        .collect()
}

/// Loads a benchmark-text dataset and optional partition file.
pub fn load_benchmark_text<T: Scalar>(path: impl AsRef<Path>, label_path: Option<&Path>) -> Result<Dataset<T>> {
    let path = path.as_ref();
    let text = read_text(path)?;
    let rows = numeric_rows(&text);
    let Some((_, first)) = rows.first() else {
        return Err(Error::format(1, None, "no numeric rows"));
    };
    let p = first.len();
    let mut data = Vec::with_capacity(rows.len() * p);
    for (line, vals) in &rows {
        if vals.len() != p {
            return Err(Error::format(
                *line,
                None,
                format!("expected {p} columns, found {}", vals.len()),
            ));
        }
        data.extend(vals.iter().map(|&v| T::lit(v)));
    }
    let n = rows.len();

    let labels = match label_path {
        None => None,
        Some(lp) => {
            let ltext = read_text(lp)?;
            let mut raw = Vec::new();
            for (line, s) in ltext.lines().enumerate() {
                let s = s.trim();
                if let Ok(v) = s.parse::<i64>() {
                    raw.push(v);
                } else if !s.is_empty() && s.split_whitespace().count() == 1 && s.parse::<f64>().is_ok() {
                    return Err(Error::format(line + 1, None, format!("label {s:?} is not an integer")));
                }
            }
            if raw.len() != n {
                return Err(Error::format(
                    ltext.lines().count(),
                    None,
                    format!("{} labels for {n} samples", raw.len()),
                ));
            }
            Some(remap_dense(&raw))
        }
    };
    Dataset::new(dataset_name(path), Matrix::from_vec(n, p, data)?, labels)
}

/// Which CSV column carries the class label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelColumn {
    /// 0-based column index.
    Index(usize),
    Last,
}

impl std::str::FromStr for LabelColumn {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("last") {
            return Ok(LabelColumn::Last);
        }
        s.parse()
            .map(LabelColumn::Index)
            .map_err(|_| Error::Usage(format!("label column must be an index or \"last\", got {s:?}")))
    }
}

/// Loads a CSV file with one label column.
pub fn load_csv_labeled<T: Scalar>(path: impl AsRef<Path>, label_column: LabelColumn) -> Result<Dataset<T>> {
    let path = path.as_ref();
    let text = read_text(path)?;
    parse_csv_labeled(&text, label_column, dataset_name(path))
}

pub(crate) fn parse_csv_labeled<T: Scalar>(text: &str, label_column: LabelColumn, name: String) -> Result<Dataset<T>> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .peekable();

    let split = |l: &str| -> Vec<String> { l.split(',').map(|c| c.trim().to_string()).collect() };
    let label_idx = |ncols: usize| match label_column {
        LabelColumn::Last => Ok(ncols.saturating_sub(1)),
        LabelColumn::Index(i) if i < ncols => Ok(i),
        LabelColumn::Index(i) => Err(Error::Usage(format!("label column {i} out of range for {ncols} columns"))),
    };

    // Header detection: a first row whose feature cells are all non-numeric.
    if let Some((_, first)) = lines.peek() {
        let cells = split(first);
        let li = label_idx(cells.len())?;
        let is_header = cells
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != li)
            .all(|(_, c)| c.parse::<f64>().is_err());
        if is_header {
            lines.next();
        }
    }

    let mut ncols = None;
    let mut data = Vec::new();
    let mut raw_labels = Vec::new();
    for (i, line) in lines {
        let row = i + 1;
        let cells = split(line);
        let expected = *ncols.get_or_insert(cells.len());
        if cells.len() != expected {
            return Err(Error::format(
                row,
                None,
                format!("expected {expected} columns, found {}", cells.len()),
            ));
        }
        if expected < 2 {
            return Err(Error::format(row, None, "need at least one feature and a label column"));
        }
        let li = label_idx(expected)?;
        for (j, c) in cells.iter().enumerate() {
            if j == li {
                raw_labels.push(c.clone());
                continue;
            }
            let v: f64 = c
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| Error::format(row, Some(j + 1), format!("non-numeric feature {c:?}")))?;
            data.push(T::lit(v));
        }
    }
    let Some(ncols) = ncols else {
        return Err(Error::format(1, None, "no data rows"));
    };
    let n = raw_labels.len();
    Dataset::new(name, Matrix::from_vec(n, ncols - 1, data)?, Some(remap_dense(&raw_labels)))
}

/// Fisher's Iris data (150 × 4, three classes of 50), bundled with the crate.
/// These are the Bezdek-corrected rows as distributed by scikit-learn.
pub fn iris<T: Scalar>() -> Dataset<T> {
    parse_csv_labeled(include_str!("../data/iris.csv"), LabelColumn::Last, "iris".into())
        .expect("bundled iris parses")
}

/// UCI Wine recognition data (178 × 13, three classes), bundled with the crate.
pub fn wine<T: Scalar>() -> Dataset<T> {
    parse_csv_labeled(include_str!("../data/wine.csv"), LabelColumn::Last, "wine".into())
        .expect("bundled wine parses")
}

/// Per-column statistics removed by [`standardize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnStats<T> {
    pub mean: T,
    /// Sample standard deviation (denominator N−1); 0 for constant columns.
    pub std: T,
}

/// Centers each column and scales it to unit sample standard deviation.
/// Constant columns are centered only.
pub fn standardize<T: Scalar>(d: &Dataset<T>) -> Result<(Dataset<T>, Vec<ColumnStats<T>>)> {
    let (n, p) = (d.n(), d.p());
    if n < 2 {
        return Err(Error::domain("standardize needs at least two samples"));
    }
    let nf = T::from_count(n);
    let mut stats = Vec::with_capacity(p);
    for j in 0..p {
        let mean = d.samples.iter_rows().map(|r| r[j]).sum::<T>() / nf;
        let ss: T = d.samples.iter_rows().map(|r| (r[j] - mean) * (r[j] - mean)).sum();
        let std = (ss / (nf - T::one())).sqrt();
        stats.push(ColumnStats { mean, std });
    }
    let mut out = d.samples.clone();
    for i in 0..n {
        for (v, s) in out.row_mut(i).iter_mut().zip(&stats) {
            let div = if s.std > T::zero() { s.std } else { T::one() };
            *v = (*v - s.mean) / div;
        }
    }
    Ok((Dataset::new(d.name.clone(), out, d.labels.clone())?, stats))
}

/// Isotropic Gaussian blobs around uniformly placed centers.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct BlobSpec {
    pub k: usize,
    pub per_cluster: usize,
    pub p: usize,
    pub center_box: f64,
    pub cluster_std: f64,
    pub seed: u64,
}

impl BlobSpec {
    /// A 15-cluster, 2-D set at the scale of the S-series benchmark files.
    pub fn s_like(seed: u64) -> Self {
        Self {
            k: 15,
            per_cluster: 300,
            p: 2,
            center_box: 10.0,
            cluster_std: 0.5,
            seed,
        }
    }
}

/// Draws `k` centers uniformly in `[-center_box, center_box]^p`, then
/// `per_cluster` points around each. Points are emitted cluster by cluster
/// and labelled with their generating component.
pub fn generate_gaussian_blobs<T: Scalar>(spec: &BlobSpec) -> Result<Dataset<T>> {
    let BlobSpec {
        k,
        per_cluster,
        p,
        center_box,
        cluster_std,
        seed,
    } = *spec;
    if k == 0 || per_cluster == 0 || p == 0 {
        return Err(Error::domain("blobs need k, per_cluster, p >= 1"));
    }
    if !(cluster_std > 0.0) || !cluster_std.is_finite() {
        return Err(Error::domain(format!("cluster_std must be positive, got {cluster_std}")));
    }
    if !(center_box >= 0.0) || !center_box.is_finite() {
        return Err(Error::domain(format!("center_box must be non-negative, got {center_box}")));
    }
    let mut rng = seeded(seed);
    let centers: Vec<Vec<f64>> = (0..k)
        .map(|_| {
            (0..p)
                .map(|_| rng.random_range(-center_box..=center_box))
                .collect()
        })
        .collect();
    let mut data = Vec::with_capacity(k * per_cluster * p);
    let mut labels = Vec::with_capacity(k * per_cluster);
    for (c, center) in centers.iter().enumerate() {
        for _ in 0..per_cluster {
            for &m in center {
                let z: f64 = rng.sample(StandardNormal);
                data.push(T::lit(m + cluster_std * z));
            }
            labels.push(c);
        }
    }
    let name = format!("blobs-k{k}-n{per_cluster}-p{p}-s{seed}");
    Dataset::new(name, Matrix::from_vec(k * per_cluster, p, data)?, Some(labels))
}

/// Uniform outliers appended to a dataset.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ContaminationSpec {
    /// Outliers added, as a fraction of the original N. In `[0, 1)`.
    pub outlier_fraction: f64,
    /// Multiplier on the bounding box, about its center. At least 1.
    pub box_expansion: f64,
    pub seed: u64,
}

impl ContaminationSpec {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.outlier_fraction) {
            return Err(Error::domain(format!(
                "outlier_fraction must lie in [0, 1), got {}",
                self.outlier_fraction
            )));
        }
        if !(self.box_expansion >= 1.0) || !self.box_expansion.is_finite() {
            return Err(Error::domain(format!(
                "box_expansion must be >= 1, got {}",
                self.box_expansion
            )));
        }
        Ok(())
    }
}

/// Appends `round(fraction * N)` points drawn uniformly from the expanded
/// bounding box. The original points are kept verbatim as a prefix; if the
/// dataset is labelled, outliers get the fresh class id C.
pub fn contaminate<T: Scalar>(d: &Dataset<T>, spec: &ContaminationSpec) -> Result<Dataset<T>> {
    spec.validate()?;
    let m = (spec.outlier_fraction * d.n() as f64).round() as usize;
    if m == 0 {
        return Ok(d.clone());
    }
    let p = d.p();
    let mut lo = vec![f64::INFINITY; p];
    let mut hi = vec![f64::NEG_INFINITY; p];
    for r in d.samples.iter_rows() {
        for j in 0..p {
            let v = r[j].as_f64();
            lo[j] = lo[j].min(v);
            hi[j] = hi[j].max(v);
        }
    }
    let bounds: Vec<(f64, f64)> = lo
        .iter()
        .zip(&hi)
        .map(|(&l, &h)| {
            let c = 0.5 * (l + h);
            let half = 0.5 * (h - l) * spec.box_expansion;
            (c - half, c + half)
        })
        .collect();

    let mut rng = seeded(spec.seed);
    let mut data = d.samples.as_slice().to_vec();
    data.reserve(m * p);
    for _ in 0..m {
        for &(a, b) in &bounds {
            let v = if b > a { rng.random_range(a..b) } else { a };
            data.push(T::lit(v));
        }
    }
    let labels = d.labels.as_ref().map(|l| {
        let fresh = d.n_classes().unwrap_or(0);
        let mut out = l.clone();
        out.extend(std::iter::repeat_n(fresh, m));
        out
    });
    let name = format!("{}+{}outliers", d.name, m);
    Dataset::new(name, Matrix::from_vec(d.n() + m, p, data)?, labels)
}
