//! Non-mixture baselines: Lloyd's k-means, k-means++ seeding, k-medoids,
//! and k-medians.
//!
//! k-means and k-means++ work in squared Euclidean distance; k-medoids and
//! k-medians use L1. All four break assignment ties toward the lowest center
//! index and re-seed empty clusters onto the sample farthest from its
//! center, so a fit is a pure function of the data and the config.

use rand::RngExt;

use crate::clustering::{assign, check_k, initial_centers, reseed_empty, ClusteringResult, Init, Stopwatch};
use crate::datasets::Dataset;
use crate::error::{Error, Result};
use crate::matrix::{l1_dist, sq_dist, Matrix};
use crate::rng::{seeded, SeededRng};
use crate::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineConfig<T> {
    pub max_iter: usize,
    /// Used only by the mixture fits' relative log-likelihood stop; the
    /// Lloyd-style methods stop on unchanged assignments.
    pub tol: T,
    pub seed: u64,
    pub init: Init<T>,
}

impl<T: Scalar> Default for BaselineConfig<T> {
    fn default() -> Self {
        Self {
            max_iter: 300,
            tol: T::lit(1e-6),
            seed: 0,
            init: Init::RandomPoints,
        }
    }
}

impl<T: Scalar> BaselineConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return Err(Error::domain("max_iter must be at least 1"));
        }
        if !(self.tol > T::zero()) {
            return Err(Error::domain("tol must be positive"));
        }
        Ok(())
    }
}

/// Sample indices chosen by k-means++ D² seeding.
///
/// The first index is uniform; each next one is drawn with probability
/// proportional to the squared distance to the nearest chosen sample. When
/// that mass is zero (only duplicates remain) the draw falls back to a
/// uniform choice among unchosen indices.
pub fn kmeanspp_indices<T: Scalar>(data: &Dataset<T>, k: usize, rng: &mut SeededRng) -> Vec<usize> {
    let n = data.n();
    let k = k.min(n);
    if k == 0 {
        return Vec::new();
    }
    let mut chosen = Vec::with_capacity(k);
    let mut taken = vec![false; n];
    let first = rng.random_range(0..n);
    chosen.push(first);
    taken[first] = true;
    let mut d2: Vec<T> = (0..n).map(|i| sq_dist(data.point(i), data.point(first))).collect();

    while chosen.len() < k {
        let total: T = d2.iter().zip(&taken).filter(|(_, &t)| !t).map(|(&d, _)| d).sum();
        let next = if total > T::zero() && total.is_finite() {
            let target = T::lit(rng.random::<f64>()) * total;
            let mut acc = T::zero();
            let mut pick = None;
            for i in 0..n {
                if taken[i] || d2[i] <= T::zero() {
                    continue;
                }
                acc += d2[i];
                pick = Some(i);
                if acc > target {
                    break;
                }
            }
            pick.expect("positive mass implies a candidate")
        } else {
            let free: Vec<usize> = (0..n).filter(|&i| !taken[i]).collect();
            free[rng.random_range(0..free.len())]
        };
        chosen.push(next);
        taken[next] = true;
        for i in 0..n {
            let d = sq_dist(data.point(i), data.point(next));
            if d < d2[i] {
                d2[i] = d;
            }
        }
    }
    chosen
}

/// K×p centers from k-means++ seeding.
pub fn kmeanspp_seed<T: Scalar>(data: &Dataset<T>, k: usize, rng: &mut SeededRng) -> Matrix<T> {
    data.samples().select_rows(&kmeanspp_indices(data, k, rng))
}

/// Σₙ ‖xₙ − μ_{label(n)}‖².
pub fn kmeans_objective<T: Scalar>(data: &Dataset<T>, centers: &Matrix<T>, labels: &[usize]) -> T {
    labels
        .iter()
        .enumerate()
        .map(|(i, &l)| sq_dist(data.point(i), centers.row(l)))
        .sum()
}

fn l1_cost<T: Scalar>(data: &Dataset<T>, centers: &Matrix<T>, labels: &[usize]) -> T {
    labels
        .iter()
        .enumerate()
        .map(|(i, &l)| l1_dist(data.point(i), centers.row(l)))
        .sum()
}

fn cluster_means<T: Scalar>(data: &Dataset<T>, labels: &[usize], prev: &Matrix<T>) -> Matrix<T> {
    let (k, p) = (prev.rows(), prev.cols());
    let mut sums = Matrix::zeros(k, p);
    let mut counts = vec![0usize; k];
    for (i, &l) in labels.iter().enumerate() {
        counts[l] += 1;
        for (s, &x) in sums.row_mut(l).iter_mut().zip(data.point(i)) {
            *s += x;
        }
    }
    for j in 0..k {
        if counts[j] == 0 {
            sums.row_mut(j).copy_from_slice(prev.row(j));
        } else {
            let c = T::from_count(counts[j]);
            sums.row_mut(j).iter_mut().for_each(|s| *s /= c);
        }
    }
    sums
}

/// Median of a non-empty slice; even lengths give the midpoint of the
/// middle pair.
pub(crate) fn median<T: Scalar>(v: &mut [T]) -> T {
    v.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) * T::lit(0.5)
    }
}

fn cluster_medians<T: Scalar>(data: &Dataset<T>, labels: &[usize], prev: &Matrix<T>) -> Matrix<T> {
    let (k, p) = (prev.rows(), prev.cols());
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (i, &l) in labels.iter().enumerate() {
        members[l].push(i);
    }
    let mut out = prev.clone();
    let mut col = Vec::new();
    for (j, m) in members.iter().enumerate() {
        if m.is_empty() {
            continue;
        }
        for d in 0..p {
            col.clear();
            col.extend(m.iter().map(|&i| data.point(i)[d]));
            out[(j, d)] = median(&mut col);
        }
    }
    out
}

/// Member of `members` minimizing the summed L1 distance to all members;
/// ties go to the lowest sample index.
fn medoid_of<T: Scalar>(data: &Dataset<T>, members: &[usize]) -> usize {
    let mut best = (members[0], T::infinity());
    for &a in members {
        let cost: T = members.iter().map(|&b| l1_dist(data.point(a), data.point(b))).sum();
        if cost < best.1 || (cost == best.1 && a < best.0) {
            best = (a, cost);
        }
    }
    best.0
}

enum CenterRule {
    Mean,
    Median,
}

/// Shared Lloyd loop for k-means and k-medians: assign, stop if nothing
/// moved, otherwise update centers.
fn lloyd<T: Scalar>(data: &Dataset<T>, k: usize, cfg: &BaselineConfig<T>, rule: CenterRule) -> Result<ClusteringResult<T>> {
    cfg.validate()?;
    check_k(data, k)?;
    let clock = Stopwatch::start();
    let mut rng = seeded(cfg.seed);
    let mut centers = initial_centers(data, k, &cfg.init, &mut rng)?;
    let (dist, objective): (fn(&[T], &[T]) -> T, fn(&Dataset<T>, &Matrix<T>, &[usize]) -> T) = match rule {
        CenterRule::Mean => (sq_dist, kmeans_objective),
        CenterRule::Median => (l1_dist, l1_cost),
    };

    let mut labels: Vec<usize> = Vec::new();
    let mut trace = Vec::new();
    let mut converged = false;
    for _ in 0..cfg.max_iter {
        let (mut next, mut d) = assign(data, &centers, dist);
        let reseeded = reseed_empty(data, &mut centers, &mut next, &mut d) > 0;
        if !reseeded && next == labels {
            trace.push(objective(data, &centers, &labels));
            converged = true;
            break;
        }
        labels = next;
        centers = match rule {
            CenterRule::Mean => cluster_means(data, &labels, &centers),
            CenterRule::Median => cluster_medians(data, &labels, &centers),
        };
        trace.push(objective(data, &centers, &labels));
    }
    Ok(ClusteringResult {
        labels,
        centers,
        iterations: trace.len(),
        loss_trace: trace,
        converged,
        wall_time: clock.seconds(),
    })
}

/// Lloyd's k-means. The loss trace holds Σₙ ‖xₙ − μ_{label(n)}‖² after
/// every iteration; the final iteration is the one that found the
/// assignment unchanged.
pub fn kmeans_fit<T: Scalar>(data: &Dataset<T>, k: usize, cfg: &BaselineConfig<T>) -> Result<ClusteringResult<T>> {
    lloyd(data, k, cfg, CenterRule::Mean)
}

/// k-medians: L1 assignment and coordinate-wise median centers. The loss
/// trace holds the total L1 cost.
pub fn kmedians_fit<T: Scalar>(data: &Dataset<T>, k: usize, cfg: &BaselineConfig<T>) -> Result<ClusteringResult<T>> {
    lloyd(data, k, cfg, CenterRule::Median)
}

/// Alternating (Voronoi-iteration) k-medoids under L1. Each iteration
/// assigns samples to the nearest medoid and then replaces every medoid
/// with the member minimizing the summed L1 distance to its cluster. Stops
/// when the medoid set is unchanged.
pub fn kmedoids_fit<T: Scalar>(data: &Dataset<T>, k: usize, cfg: &BaselineConfig<T>) -> Result<ClusteringResult<T>> {
    cfg.validate()?;
    check_k(data, k)?;
    let clock = Stopwatch::start();
    let mut rng = seeded(cfg.seed);
    let mut centers = initial_centers(data, k, &cfg.init, &mut rng)?;

    let mut labels = Vec::new();
    let mut trace = Vec::new();
    let mut converged = false;
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); k];
    for _ in 0..cfg.max_iter {
        let (next, mut d) = assign(data, &centers, l1_dist);
        labels = next;
        reseed_empty(data, &mut centers, &mut labels, &mut d);
        members.iter_mut().for_each(Vec::clear);
        for (i, &l) in labels.iter().enumerate() {
            members[l].push(i);
        }
        let mut updated = centers.clone();
        for (j, m) in members.iter().enumerate() {
            let medoid = medoid_of(data, m);
            updated.row_mut(j).copy_from_slice(data.point(medoid));
        }
        let unchanged = updated == centers;
        centers = updated;
        trace.push(l1_cost(data, &centers, &labels));
        if unchanged {
            converged = true;
            break;
        }
    }
    if !converged {
        labels = assign(data, &centers, l1_dist).0;
    }
    Ok(ClusteringResult {
        labels,
        centers,
        iterations: trace.len(),
        loss_trace: trace,
        converged,
        wall_time: clock.seconds(),
    })
}
