//! Clustering quality: adjusted Rand index, clustering MSE, and the W/B
//! ratio of within- to between-cluster sums of squares.

use std::collections::HashMap;

use serde::Serialize;

use crate::datasets::Dataset;
use crate::error::{Error, Result};
use crate::matrix::{sq_dist, Matrix};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricReport {
    /// `None` when the dataset carries no ground truth.
    pub ari: Option<f64>,
    pub mse: f64,
    pub wb: f64,
}

#[inline]
fn pairs(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

/// Hubert–Arabie adjusted Rand index from the contingency table.
///
/// Invariant under relabeling of either partition. When the chance-corrected
/// denominator vanishes (both partitions trivial) the result is 1 if the
/// partitions agree and 0 otherwise.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::domain(format!("label vectors differ in length: {} vs {}", a.len(), b.len())));
    }
    if a.len() < 2 {
        return Err(Error::domain("ARI needs at least two samples"));
    }
    let mut table: HashMap<(usize, usize), u64> = HashMap::new();
    let mut rows: HashMap<usize, u64> = HashMap::new();
    let mut cols: HashMap<usize, u64> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *table.entry((x, y)).or_default() += 1;
        *rows.entry(x).or_default() += 1;
        *cols.entry(y).or_default() += 1;
    }
    let index: u64 = table.values().map(|&c| pairs(c)).sum();
    let sum_a: u64 = rows.values().map(|&c| pairs(c)).sum();
    let sum_b: u64 = cols.values().map(|&c| pairs(c)).sum();
    Ok(ari_from_pair_counts(index, sum_a, sum_b, pairs(a.len() as u64)))
}

/// ARI from pair counts: `index` pairs together in both partitions, `sum_a`
/// and `sum_b` pairs together in each, out of `total` pairs.
pub fn ari_from_pair_counts(index: u64, sum_a: u64, sum_b: u64, total: u64) -> f64 {
    // scaled by 2·total so everything stays in integers until the last division
    let (index, sa, sb, total) = (index as i128, sum_a as i128, sum_b as i128, total as i128);
    let num = 2 * (total * index - sa * sb);
    let denom = total * (sa + sb) - 2 * sa * sb;
    if denom == 0 {
        return if 2 * index == sa + sb { 1.0 } else { 0.0 };
    }
    num as f64 / denom as f64
}

fn check_labels(n: usize, labels: &[usize], k: usize) -> Result<()> {
    if labels.len() != n {
        return Err(Error::domain(format!("{} labels for {n} samples", labels.len())));
    }
    if let Some((i, &l)) = labels.iter().enumerate().find(|(_, &l)| l >= k) {
        return Err(Error::domain(format!("label {l} of sample {i} is out of range for {k} centers")));
    }
    Ok(())
}

/// (1/N) Σₙ ‖xₙ − μ_{label(n)}‖².
pub fn clustering_mse<T: Scalar>(data: &Dataset<T>, centers: &Matrix<T>, labels: &[usize]) -> Result<T> {
    check_labels(data.n(), labels, centers.rows())?;
    let total: T = labels
        .iter()
        .enumerate()
        .map(|(i, &l)| sq_dist(data.point(i), centers.row(l)))
        .sum();
    Ok(total / T::from_count(data.n()))
}

/// W/B with W = Σₖ Σ_{n∈k} ‖xₙ − μₖ‖² and B = Σₖ Nₖ ‖μₖ − x̄‖².
pub fn wb_ratio<T: Scalar>(data: &Dataset<T>, centers: &Matrix<T>, labels: &[usize]) -> Result<T> {
    check_labels(data.n(), labels, centers.rows())?;
    let p = data.p();
    let nf = T::from_count(data.n());
    let mut mean = vec![T::zero(); p];
    for x in data.samples().iter_rows() {
        for (m, &v) in mean.iter_mut().zip(x) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= nf);

    let mut counts = vec![0usize; centers.rows()];
    let mut within = T::zero();
    for (i, &l) in labels.iter().enumerate() {
        counts[l] += 1;
        within += sq_dist(data.point(i), centers.row(l));
    }
    let between: T = counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| T::from_count(c) * sq_dist(centers.row(k), &mean))
        .sum();
    if !(between > T::zero()) {
        return Err(Error::DegenerateMetric(
            "between-cluster sum of squares is zero".into(),
        ));
    }
    Ok(within / between)
}

/// All three metrics; ARI only when `truth` is given.
pub fn evaluate<T: Scalar>(
    data: &Dataset<T>,
    centers: &Matrix<T>,
    labels: &[usize],
    truth: Option<&[usize]>,
) -> Result<MetricReport> {
    let ari = truth.map(|t| adjusted_rand_index(t, labels)).transpose()?;
    Ok(MetricReport {
        ari,
        mse: clustering_mse(data, centers, labels)?.as_f64(),
        wb: wb_ratio(data, centers, labels)?.as_f64(),
    })
}
