//! Fast t-k-means: ν held fixed and α → 0.
//!
//! In that limit the responsibilities collapse onto the nearest center and
//! the product τu, after the α factor cancels in the center ratio, becomes
//! a per-sample weight wₙ = 1 / (c + d²ₙ) with c = ν·α_fast. Centers are
//! weighted means of their members, so a member far from its center moves
//! it far less than it would under an ordinary mean.

use crate::clustering::{assign, check_k, initial_centers, reseed_empty, ClusteringResult, Stopwatch};
use crate::datasets::Dataset;
use crate::error::{Error, Result};
use crate::matrix::{sq_dist, Matrix};
use crate::rng::seeded;
use crate::Scalar;

use super::{FitConfig, TkFit, TkModel};

/// Weighted center update for hard labels; `dist` holds each sample's
/// squared distance to its current center.
pub(crate) fn weighted_centers<T: Scalar>(
    data: &Dataset<T>,
    labels: &[usize],
    dist: &[T],
    prev: &Matrix<T>,
    c: T,
) -> Matrix<T> {
    let (k, p) = (prev.rows(), prev.cols());
    let mut sums = Matrix::zeros(k, p);
    let mut weight = vec![T::zero(); k];
    for (i, (&l, &d2)) in labels.iter().zip(dist).enumerate() {
        let w = (c + d2).recip();
        weight[l] += w;
        for (s, &x) in sums.row_mut(l).iter_mut().zip(data.point(i)) {
            *s += w * x;
        }
    }
    for j in 0..k {
        if weight[j] > T::zero() {
            let w = weight[j];
            sums.row_mut(j).iter_mut().for_each(|s| *s /= w);
        } else {
            sums.row_mut(j).copy_from_slice(prev.row(j));
        }
    }
    sums
}

/// Fast t-k-means. ν comes from `cfg.fixed_nu` (1 when unset) and α stays
/// at `cfg.alpha_fast`. Stops once no center moves by `cfg.tol` or more.
/// Clusters left empty by an assignment are re-seeded onto the sample
/// farthest from its center.
pub fn fit_fast<T: Scalar>(data: &Dataset<T>, k: usize, cfg: &FitConfig<T>) -> Result<TkFit<T>> {
    cfg.validate()?;
    check_k(data, k)?;
    let clock = Stopwatch::start();
    let nu = cfg.fixed_nu.unwrap_or(T::one());
    let c = nu * cfg.alpha_fast;
    if !(c > T::zero()) || !c.is_finite() {
        return Err(Error::domain(format!("fast weight offset nu*alpha_fast = {c} is not usable")));
    }
    let mut rng = seeded(cfg.seed);
    let mut centers = initial_centers(data, k, &cfg.init, &mut rng)?;

    let mut trace = Vec::new();
    let mut converged = false;
    for _ in 0..cfg.max_iter {
        let (mut labels, mut dist) = assign(data, &centers, sq_dist);
        reseed_empty(data, &mut centers, &mut labels, &mut dist);
        let next = weighted_centers(data, &labels, &dist, &centers, c);
        let shift = (0..k)
            .map(|j| sq_dist(centers.row(j), next.row(j)).sqrt())
            .fold(T::zero(), T::max);
        centers = next;
        let cur: T = labels
            .iter()
            .enumerate()
            .map(|(i, &l)| (sq_dist(data.point(i), centers.row(l)) / c).ln_1p())
            .sum();
        if !cur.is_finite() {
            return Err(Error::numerical(None, "fast loss became non-finite"));
        }
        trace.push(cur);
        if shift < cfg.tol {
            converged = true;
            break;
        }
    }
    let (labels, _) = assign(data, &centers, sq_dist);
    let result = ClusteringResult {
        labels,
        centers: centers.clone(),
        iterations: trace.len(),
        loss_trace: trace,
        converged,
        wall_time: clock.seconds(),
    };
    let model = TkModel {
        centers,
        alpha: cfg.alpha_fast,
        nu,
    };
    Ok(TkFit { result, model })
}
