//! Pieces shared by every clusterer: the result type, center
//! initialization, nearest-center assignment, and the empty-cluster rule.

use std::time::Instant;

use rand::seq::index;
use serde::Serialize;

use crate::baselines::kmeanspp_seed;
use crate::datasets::Dataset;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::rng::SeededRng;
use crate::Scalar;

/// How initial centers are chosen.
#[derive(Debug, Clone, PartialEq)]
pub enum Init<T> {
    /// K distinct data points, uniformly at random.
    RandomPoints,
    /// D²-weighted seeding.
    KMeansPlusPlus,
    /// Caller-supplied K×p centers.
    Explicit(Matrix<T>),
}

/// Outcome of one clustering fit.
#[derive(Debug, Clone, Serialize)]
pub struct ClusteringResult<T> {
    /// Hard assignment of each sample, in `0..K`.
    pub labels: Vec<usize>,
    pub centers: Matrix<T>,
    /// The method's objective after every iteration.
    pub loss_trace: Vec<T>,
    pub iterations: usize,
    /// Whether the stopping rule fired before `max_iter`.
    pub converged: bool,
    /// Seconds spent inside the fit.
    pub wall_time: f64,
}

impl<T: Scalar> ClusteringResult<T> {
    pub fn k(&self) -> usize {
        self.centers.rows()
    }

    /// Bitwise equality of everything but the wall time.
    pub fn same_outcome(&self, other: &Self) -> bool {
        let bits = |a: &[T], b: &[T]| {
            a.len() == b.len()
                && a.iter()
                    .zip(b)
                    .all(|(x, y)| x.as_f64().to_bits() == y.as_f64().to_bits())
        };
        self.labels == other.labels
            && self.iterations == other.iterations
            && self.converged == other.converged
            && self.centers.rows() == other.centers.rows()
            && bits(self.centers.as_slice(), other.centers.as_slice())
            && bits(&self.loss_trace, &other.loss_trace)
    }
}

/// Starts a wall clock for [`ClusteringResult::wall_time`].
pub(crate) struct Stopwatch(Instant);

impl Stopwatch {
    pub(crate) fn start() -> Self {
        Self(Instant::now())
    }

    pub(crate) fn seconds(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

pub(crate) fn check_k<T: Scalar>(data: &Dataset<T>, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::domain("K must be at least 1"));
    }
    if k > data.n() {
        return Err(Error::domain(format!("K = {k} exceeds N = {}", data.n())));
    }
    Ok(())
}

/// Produces K×p starting centers.
pub(crate) fn initial_centers<T: Scalar>(
    data: &Dataset<T>,
    k: usize,
    init: &Init<T>,
    rng: &mut SeededRng,
) -> Result<Matrix<T>> {
    match init {
        Init::RandomPoints => {
            let idx = index::sample(rng, data.n(), k).into_vec();
            Ok(data.samples().select_rows(&idx))
        }
        Init::KMeansPlusPlus => Ok(kmeanspp_seed(data, k, rng)),
        Init::Explicit(c) => {
            if c.rows() != k || c.cols() != data.p() {
                return Err(Error::domain(format!(
                    "explicit centers are {}x{}, expected {k}x{}",
                    c.rows(),
                    c.cols(),
                    data.p()
                )));
            }
            if c.as_slice().iter().any(|v| !v.is_finite()) {
                return Err(Error::domain("explicit centers must be finite"));
            }
            Ok(c.clone())
        }
    }
}

/// Index of the nearest center under `dist`; ties go to the lowest index.
#[inline]
pub(crate) fn nearest<T: Scalar>(x: &[T], centers: &Matrix<T>, dist: impl Fn(&[T], &[T]) -> T) -> (usize, T) {
    let mut best = (0, dist(x, centers.row(0)));
    for k in 1..centers.rows() {
        let d = dist(x, centers.row(k));
        if d < best.1 {
            best = (k, d);
        }
    }
    best
}

/// Assigns every sample to its nearest center. Returns labels and the
/// per-sample distance to the assigned center.
pub(crate) fn assign<T: Scalar>(
    data: &Dataset<T>,
    centers: &Matrix<T>,
    dist: impl Fn(&[T], &[T]) -> T + Copy,
) -> (Vec<usize>, Vec<T>) {
    (0..data.n())
        .map(|n| nearest(data.point(n), centers, dist))
        .unzip()
}

/// Moves the center of every empty cluster onto the sample farthest from
/// its assigned center, taking that sample into the emptied cluster. Only
/// samples whose cluster keeps at least one other member are eligible.
/// Ties go to the lowest sample index. Returns how many centers moved.
pub(crate) fn reseed_empty<T: Scalar>(
    data: &Dataset<T>,
    centers: &mut Matrix<T>,
    labels: &mut [usize],
    dist_to_center: &mut [T],
) -> usize {
    let k = centers.rows();
    let mut counts = vec![0usize; k];
    for &l in labels.iter() {
        counts[l] += 1;
    }
    let mut moved = 0;
    for c in 0..k {
        if counts[c] > 0 {
            continue;
        }
        let pick = (0..data.n())
            .filter(|&n| counts[labels[n]] > 1)
            .fold(None::<(usize, T)>, |best, n| match best {
                Some((_, d)) if dist_to_center[n] <= d => best,
                _ => Some((n, dist_to_center[n])),
            });
        let Some((n, _)) = pick else { break };
        counts[labels[n]] -= 1;
        counts[c] = 1;
        labels[n] = c;
        dist_to_center[n] = T::zero();
        centers.row_mut(c).copy_from_slice(data.point(n));
        moved += 1;
    }
    moved
}

/// Index of the largest entry; ties go to the lowest index.
#[inline]
pub(crate) fn argmax<T: Scalar>(row: &[T]) -> usize {
    let mut best = 0;
    for (j, &v) in row.iter().enumerate().skip(1) {
        if v > row[best] {
            best = j;
        }
    }
    best
}
