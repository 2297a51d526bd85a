//! t-k-means: EM for a t-mixture whose components share equal weights
//! 1/K, an isotropic scale matrix αI, and one degree-of-freedom ν.
//!
//! Each EM iteration computes, for sample n and component k with
//! d²ₙₖ = ‖xₙ − μₖ‖²:
//!
//! ```text
//! τₙₖ      = tₖ(xₙ) / Σⱼ tⱼ(xₙ)                 responsibility
//! uₙₖ      = (ν + p) / (ν + d²ₙₖ / α)           gamma weight
//! E ln uₙₖ = ln uₙₖ + φ((ν+p)/2) − ln((ν+p)/2)
//!
//! μₖ  ← Σₙ τₙₖ uₙₖ xₙ / Σₙ τₙₖ uₙₖ
//! α   ← Σₖ Σₙ τₙₖ uₙₖ ‖xₙ − μₖ‖² / (p Σₖ Σₙ τₙₖ)     (new centers)
//! η   = 1 + (1/K) Σₖ [Σₙ τₙₖ (E ln uₙₖ − uₙₖ) / Σₙ τₙₖ]
//! ν   ← 1 / (−η)                                   clamped to [ν_min, ν_max]
//! ```
//!
//! Every sample contributes to every center through τu, so a far-away
//! point is down-weighted rather than ignored or allowed to dominate.
//! Progress is tracked with the log-ℓ² loss Σₙ Σₖ τₙₖ ln(1 + d²ₙₖ/(να)).
//!
//! [`fit_fast`] is the α → 0, fixed-ν limit of the same updates.

mod fast;

pub use fast::fit_fast;

use crate::clustering::{argmax, check_k, initial_centers, ClusteringResult, Init, Stopwatch};
use crate::datasets::Dataset;
use crate::error::{Error, Result};
use crate::matrix::{sq_dist, Matrix};
use crate::rng::seeded;
use crate::specialfn::{digamma, log_gamma, log_sum_exp};
use crate::Scalar;

/// Initial ν for the full variant when no fixed value is given.
pub const DEFAULT_INITIAL_NU: f64 = 3.0;

/// Default multiplier for [`AlphaInit::Global`].
pub const DEFAULT_ALPHA_INIT_FACTOR: f64 = 1e3;

/// Starting scale α₀ of the full variant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaInit<T> {
    /// `factor` × (mean squared distance to the data mean) / p. With a large
    /// factor the first responsibilities are close to uniform, every center
    /// starts near the weighted data mean, and the centers separate as α
    /// shrinks, so the result depends little on the initial centers.
    Global(T),
    /// Mean squared distance to the nearest initial center, / p.
    NearestCenter,
}

/// Parameters of a t-k-means model.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct TkModel<T> {
    /// K×p component centers.
    pub centers: Matrix<T>,
    /// Shared isotropic scale.
    pub alpha: T,
    /// Shared degrees of freedom.
    pub nu: T,
}

impl<T: Scalar> TkModel<T> {
    pub fn k(&self) -> usize {
        self.centers.rows()
    }

    pub fn p(&self) -> usize {
        self.centers.cols()
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha > T::zero()) || !self.alpha.is_finite() {
            return Err(Error::domain(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !(self.nu > T::zero()) || !self.nu.is_finite() {
            return Err(Error::domain(format!("nu must be positive, got {}", self.nu)));
        }
        if self.centers.rows() == 0 || self.centers.as_slice().iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("centers must be non-empty and finite"));
        }
        Ok(())
    }
}

/// E-step output; all three matrices are N×K.
#[derive(Debug, Clone, PartialEq)]
pub struct EStepResult<T> {
    pub tau: Matrix<T>,
    pub u: Matrix<T>,
    pub log_u_expect: Matrix<T>,
}

/// Settings for [`fit`] and [`fit_fast`].
#[derive(Debug, Clone, PartialEq)]
pub struct FitConfig<T> {
    pub max_iter: usize,
    /// Relative loss change (full variant) or maximum center shift (fast
    /// variant) below which the fit stops.
    pub tol: T,
    pub seed: u64,
    pub init: Init<T>,
    /// Route [`fit`] to [`fit_fast`].
    pub fast: bool,
    /// Hold ν at this value instead of re-estimating it.
    pub fixed_nu: Option<T>,
    pub alpha_init: AlphaInit<T>,
    pub alpha_floor: T,
    /// Clamp range for the ν update.
    pub nu_bounds: (T, T),
    /// The small constant α stands at in the fast variant.
    pub alpha_fast: T,
}

impl<T: Scalar> Default for FitConfig<T> {
    fn default() -> Self {
        Self {
            max_iter: 300,
            tol: T::lit(1e-6),
            seed: 0,
            init: Init::RandomPoints,
            fast: false,
            fixed_nu: None,
            alpha_init: AlphaInit::Global(T::lit(DEFAULT_ALPHA_INIT_FACTOR)),
            alpha_floor: T::lit(1e-12),
            nu_bounds: (T::one(), T::lit(200.0)),
            alpha_fast: T::lit(1e-8),
        }
    }
}

impl<T: Scalar> FitConfig<T> {
    /// Defaults for the fast variant: ν fixed at 1.
    pub fn fast() -> Self {
        Self {
            fast: true,
            fixed_nu: Some(T::one()),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.nu_bounds;
        if self.max_iter == 0 {
            return Err(Error::domain("max_iter must be at least 1"));
        }
        if !(self.tol > T::zero()) {
            return Err(Error::domain("tol must be positive"));
        }
        if !(lo >= T::one()) || !(hi >= lo) || !hi.is_finite() {
            return Err(Error::domain(format!("nu bounds ({lo}, {hi}) must satisfy 1 <= min <= max < inf")));
        }
        if !(self.alpha_floor > T::zero()) || !(self.alpha_fast > T::zero()) {
            return Err(Error::domain("alpha_floor and alpha_fast must be positive"));
        }
        if let AlphaInit::Global(f) = self.alpha_init {
            if !(f > T::zero()) || !f.is_finite() {
                return Err(Error::domain(format!("alpha_init factor must be positive, got {f}")));
            }
        }
        if let Some(nu) = self.fixed_nu {
            if !(nu > T::zero()) || !nu.is_finite() {
                return Err(Error::domain(format!("fixed nu must be positive, got {nu}")));
            }
        }
        Ok(())
    }
}

/// A fitted model together with its clustering.
#[derive(Debug, Clone)]
pub struct TkFit<T> {
    pub result: ClusteringResult<T>,
    pub model: TkModel<T>,
}

/// ln t(x | ν, μ, αI) for the p-variate t density with scale matrix αI.
pub fn log_t_density<T: Scalar>(x: &[T], center: &[T], alpha: T, nu: T) -> Result<T> {
    if x.len() != center.len() {
        return Err(Error::domain("point and center dimensions differ"));
    }
    if x.iter().chain(center).any(|v| !v.is_finite()) {
        return Err(Error::domain("non-finite point or center"));
    }
    if !(alpha > T::zero()) || !alpha.is_finite() || !(nu > T::zero()) || !nu.is_finite() {
        return Err(Error::domain(format!("alpha ({alpha}) and nu ({nu}) must be positive and finite")));
    }
    let p = T::from_count(x.len());
    let half = T::lit(0.5);
    let d2 = sq_dist(x, center);
    Ok(log_gamma(half * (nu + p))? - log_gamma(half * nu)?
        - half * p * (nu * T::PI()).ln()
        - half * p * alpha.ln()
        - half * (nu + p) * (d2 / (nu * alpha)).ln_1p())
}

fn check_dims<T: Scalar>(data: &Dataset<T>, model: &TkModel<T>) -> Result<()> {
    if data.p() != model.p() {
        return Err(Error::domain(format!(
            "data has {} features, model has {}",
            data.p(),
            model.p()
        )));
    }
    Ok(())
}

/// Responsibilities, gamma weights, and E(ln u) under `model`.
///
/// Responsibilities are normalized in log space. Because every component
/// shares α and ν (and the weights are all 1/K), the density normalizer
/// cancels and only the kernel −((ν+p)/2) ln(1 + d²/(να)) is evaluated.
pub fn e_step<T: Scalar>(data: &Dataset<T>, model: &TkModel<T>) -> Result<EStepResult<T>> {
    model.validate()?;
    check_dims(data, model)?;
    let (n, k) = (data.n(), model.k());
    let p = T::from_count(data.p());
    let (nu, alpha) = (model.nu, model.alpha);
    let half_nu_p = T::lit(0.5) * (nu + p);
    let log_u_shift = digamma(half_nu_p)? - half_nu_p.ln();

    let mut tau = Matrix::zeros(n, k);
    let mut u = Matrix::zeros(n, k);
    let mut log_u_expect = Matrix::zeros(n, k);
    let mut logd = vec![T::zero(); k];
    for i in 0..n {
        let x = data.point(i);
        for j in 0..k {
            let d2 = sq_dist(x, model.centers.row(j));
            logd[j] = -half_nu_p * (d2 / (nu * alpha)).ln_1p();
            let w = (nu + p) * alpha / (nu * alpha + d2);
            u[(i, j)] = w;
            log_u_expect[(i, j)] = w.ln() + log_u_shift;
        }
        let lse = log_sum_exp(&logd)?;
        for j in 0..k {
            tau[(i, j)] = (logd[j] - lse).exp();
        }
    }
    Ok(EStepResult {
        tau,
        u,
        log_u_expect,
    })
}

/// ν = 1/(−η) clamped to `bounds`; a non-negative η maps to the upper bound.
pub fn nu_from_eta<T: Scalar>(eta: T, bounds: (T, T)) -> T {
    if !(eta < T::zero()) {
        return bounds.1;
    }
    (T::one() / -eta).max(bounds.0).min(bounds.1)
}

/// One M-step. Components whose Σₙ τu vanishes are re-seeded onto the
/// sample with the lowest maximum responsibility.
pub fn m_step<T: Scalar>(
    data: &Dataset<T>,
    e: &EStepResult<T>,
    model: &TkModel<T>,
    cfg: &FitConfig<T>,
) -> Result<TkModel<T>> {
    check_dims(data, model)?;
    let (n, k, p) = (data.n(), model.k(), data.p());
    if e.tau.rows() != n || e.tau.cols() != k || e.u.rows() != n || e.u.cols() != k {
        return Err(Error::domain("E-step matrices do not match data and model"));
    }

    let mut centers = Matrix::zeros(k, p);
    let mut weight = vec![T::zero(); k];
    for i in 0..n {
        let x = data.point(i);
        for j in 0..k {
            let w = e.tau[(i, j)] * e.u[(i, j)];
            weight[j] += w;
            for (c, &xv) in centers.row_mut(j).iter_mut().zip(x) {
                *c += w * xv;
            }
        }
    }

    let mut used = Vec::new();
    for j in 0..k {
        if weight[j] > T::zero() && weight[j].is_finite() {
            let w = weight[j];
            centers.row_mut(j).iter_mut().for_each(|c| *c /= w);
        } else {
            let worst = (0..n)
                .filter(|i| !used.contains(i))
                .map(|i| {
                    let row = &e.tau.as_slice()[i * k..(i + 1) * k];
                    (i, row.iter().copied().fold(T::neg_infinity(), T::max))
                })
                .fold(None::<(usize, T)>, |best, (i, m)| match best {
                    Some((_, bm)) if m >= bm => best,
                    _ => Some((i, m)),
                })
                .map(|(i, _)| i)
                .ok_or_else(|| Error::numerical(Some(j), "no sample left to re-seed a degenerate component"))?;
            used.push(worst);
            centers.row_mut(j).copy_from_slice(data.point(worst));
        }
    }

    let mut scatter = T::zero();
    let mut tau_sum = T::zero();
    for i in 0..n {
        let x = data.point(i);
        for j in 0..k {
            let t = e.tau[(i, j)];
            scatter += t * e.u[(i, j)] * sq_dist(x, centers.row(j));
            tau_sum += t;
        }
    }
    let alpha = (scatter / (T::from_count(p) * tau_sum)).max(cfg.alpha_floor);
    if !alpha.is_finite() {
        return Err(Error::numerical(None, "scale update is not finite"));
    }

    let nu = match cfg.fixed_nu {
        Some(nu) => nu,
        None => nu_from_eta(eta(e)?, cfg.nu_bounds),
    };
    Ok(TkModel { centers, alpha, nu })
}

/// The constant η of the ν update. The φ((ν+p)/2) − ln((ν+p)/2) term is
/// already folded into `log_u_expect`. Components with no responsibility
/// mass are skipped.
pub fn eta<T: Scalar>(e: &EStepResult<T>) -> Result<T> {
    let (n, k) = (e.tau.rows(), e.tau.cols());
    let mut acc = T::zero();
    let mut live = 0usize;
    for j in 0..k {
        let mut num = T::zero();
        let mut den = T::zero();
        for i in 0..n {
            let t = e.tau[(i, j)];
            num += t * (e.log_u_expect[(i, j)] - e.u[(i, j)]);
            den += t;
        }
        if den > T::zero() {
            acc += num / den;
            live += 1;
        }
    }
    if live == 0 {
        return Err(Error::numerical(None, "no component carries responsibility mass"));
    }
    Ok(T::one() + acc / T::from_count(live))
}

/// Σₙ Σₖ τₙₖ ln(1 + ‖xₙ − μₖ‖² / (να)).
pub fn loss<T: Scalar>(data: &Dataset<T>, model: &TkModel<T>, tau: &Matrix<T>) -> T {
    let scale = model.nu * model.alpha;
    let k = model.k();
    let mut total = T::zero();
    for i in 0..data.n() {
        let x = data.point(i);
        for j in 0..k {
            let t = tau[(i, j)];
            if t > T::zero() {
                total += t * (sq_dist(x, model.centers.row(j)) / scale).ln_1p();
            }
        }
    }
    total
}

/// Observed-data log-likelihood Σₙ ln Σₖ (1/K) tₖ(xₙ).
pub fn log_likelihood<T: Scalar>(data: &Dataset<T>, model: &TkModel<T>) -> Result<T> {
    model.validate()?;
    check_dims(data, model)?;
    let ln_k = T::from_count(model.k()).ln();
    let mut logs = vec![T::zero(); model.k()];
    let mut total = T::zero();
    for i in 0..data.n() {
        for (j, l) in logs.iter_mut().enumerate() {
            *l = log_t_density(data.point(i), model.centers.row(j), model.alpha, model.nu)?;
        }
        total += log_sum_exp(&logs)? - ln_k;
    }
    Ok(total)
}

/// α₀ = mean over samples of the squared distance to the nearest center, / p.
pub(crate) fn initial_alpha<T: Scalar>(data: &Dataset<T>, centers: &Matrix<T>, floor: T) -> T {
    let total: T = data
        .samples()
        .iter_rows()
        .map(|x| crate::clustering::nearest(x, centers, sq_dist).1)
        .sum();
    (total / (T::from_count(data.n()) * T::from_count(data.p()))).max(floor)
}

/// Mean squared distance to the data mean, / p.
fn global_alpha<T: Scalar>(data: &Dataset<T>, floor: T) -> T {
    let nf = T::from_count(data.n());
    let mut mean = vec![T::zero(); data.p()];
    for x in data.samples().iter_rows() {
        for (m, &v) in mean.iter_mut().zip(x) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= nf);
    let total: T = data.samples().iter_rows().map(|x| sq_dist(x, &mean)).sum();
    (total / (nf * T::from_count(data.p()))).max(floor)
}

fn hard_labels<T: Scalar>(tau: &Matrix<T>) -> Vec<usize> {
    tau.iter_rows().map(argmax).collect()
}

/// Full t-k-means. α starts from `cfg.alpha_init` and ν from `cfg.fixed_nu`
/// or [`DEFAULT_INITIAL_NU`]. Stops when the relative change of the log-ℓ² loss drops
/// below `cfg.tol` or after `cfg.max_iter` iterations. With `cfg.fast` set
/// this delegates to [`fit_fast`].
pub fn fit<T: Scalar>(data: &Dataset<T>, k: usize, cfg: &FitConfig<T>) -> Result<TkFit<T>> {
    if cfg.fast {
        return fit_fast(data, k, cfg);
    }
    cfg.validate()?;
    check_k(data, k)?;
    let clock = Stopwatch::start();
    let mut rng = seeded(cfg.seed);
    let centers = initial_centers(data, k, &cfg.init, &mut rng)?;
    let alpha = match cfg.alpha_init {
        AlphaInit::Global(factor) => global_alpha(data, cfg.alpha_floor) * factor,
        AlphaInit::NearestCenter => initial_alpha(data, &centers, cfg.alpha_floor),
    };
    let nu = cfg.fixed_nu.unwrap_or(T::lit(DEFAULT_INITIAL_NU));
    let mut model = TkModel { centers, alpha, nu };

    let mut e = e_step(data, &model)?;
    let mut prev = loss(data, &model, &e.tau);
    let mut trace = Vec::new();
    let mut converged = false;
    for _ in 0..cfg.max_iter {
        model = m_step(data, &e, &model, cfg)?;
        e = e_step(data, &model)?;
        let cur = loss(data, &model, &e.tau);
        if !cur.is_finite() {
            return Err(Error::numerical(None, "loss became non-finite"));
        }
        trace.push(cur);
        if (prev - cur).abs() <= cfg.tol * prev.abs().max(cur.abs()) {
            converged = true;
            break;
        }
        prev = cur;
    }
    let result = ClusteringResult {
        labels: hard_labels(&e.tau),
        centers: model.centers.clone(),
        iterations: trace.len(),
        loss_trace: trace,
        converged,
        wall_time: clock.seconds(),
    };
    Ok(TkFit { result, model })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_d(points: &[f64]) -> Dataset<f64> {
        let rows: Vec<[f64; 1]> = points.iter().map(|&x| [x]).collect();
        Dataset::from_rows("t", &rows, None).unwrap()
    }

    fn model_1d(centers: &[f64], alpha: f64, nu: f64) -> TkModel<f64> {
        let rows: Vec<[f64; 1]> = centers.iter().map(|&x| [x]).collect();
        TkModel {
            centers: Matrix::from_rows(&rows).unwrap(),
            alpha,
            nu,
        }
    }

    #[test]
    fn cauchy_density_at_center() {
        let v = log_t_density(&[0.0], &[0.0], 1.0, 1.0).unwrap();
        assert!((v - (1.0 / std::f64::consts::PI).ln()).abs() < 1e-12);
        assert!((v - -1.1447298858).abs() < 1e-9);
        let far = log_t_density(&[1.0], &[0.0], 1.0, 1.0).unwrap();
        assert!(v > far);
    }

    #[test]
    fn density_integrates_to_one() {
        // Trapezoid over [-L, L] plus the analytic Student-t tails are
        // negligible at ν = 5, α = 2 for L = 400.
        let (alpha, nu) = (2.0, 5.0);
        let (lo, hi, m) = (-400.0, 400.0, 800_000);
        let h = (hi - lo) / m as f64;
        let mut s = 0.0;
        for i in 0..=m {
            let x = lo + i as f64 * h;
            let w = if i == 0 || i == m { 0.5 } else { 1.0 };
            s += w * log_t_density(&[x], &[0.3], alpha, nu).unwrap().exp();
        }
        assert!((s * h - 1.0).abs() < 1e-4, "{}", s * h);
    }

    #[test]
    fn density_rejects_bad_parameters() {
        assert!(log_t_density(&[0.0], &[0.0], 0.0, 1.0).is_err());
        assert!(log_t_density(&[0.0], &[0.0], 1.0, -1.0).is_err());
        assert!(log_t_density(&[f64::NAN], &[0.0], 1.0, 1.0).is_err());
    }

    #[test]
    fn e_step_symmetric_point() {
        let e = e_step(&one_d(&[0.0]), &model_1d(&[-1.0, 1.0], 0.7, 2.5)).unwrap();
        assert!((e.tau[(0, 0)] - 0.5).abs() < 1e-15);
        assert!((e.tau[(0, 1)] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn e_step_density_ratio() {
        let e = e_step(&one_d(&[0.0]), &model_1d(&[0.0, 2.0], 1.0, 1.0)).unwrap();
        // (1 + d²)^-1 = [1, 0.2]
        assert!((e.tau[(0, 0)] - 1.0 / 1.2).abs() < 1e-12);
        assert!((e.tau[(0, 1)] - 0.2 / 1.2).abs() < 1e-12);
        assert!((e.u[(0, 0)] - 2.0).abs() < 1e-15);
        let e = e_step(&one_d(&[1.0]), &model_1d(&[0.0], 1.0, 1.0)).unwrap();
        assert!((e.u[(0, 0)] - 1.0).abs() < 1e-15);
        // E ln u = ln u + φ(1) − ln 1
        assert!((e.log_u_expect[(0, 0)] - -0.5772156649015329).abs() < 1e-12);
    }

    #[test]
    fn e_step_survives_extreme_distances() {
        let e = e_step(&one_d(&[1e100]), &model_1d(&[0.0, 1.0], 1e-12, 1.0)).unwrap();
        let s = e.tau[(0, 0)] + e.tau[(0, 1)];
        assert!((s - 1.0).abs() < 1e-9);
        assert!(e.u.as_slice().iter().all(|&u| u > 0.0));
    }

    #[test]
    fn e_step_checks_dimension() {
        let d = Dataset::from_rows("t", &[[0.0f64, 0.0]], None).unwrap();
        assert!(e_step(&d, &model_1d(&[0.0], 1.0, 1.0)).is_err());
    }

    fn hard_estep(tau: Vec<f64>, u: Vec<f64>, k: usize) -> EStepResult<f64> {
        let n = tau.len() / k;
        EStepResult {
            tau: Matrix::from_vec(n, k, tau).unwrap(),
            log_u_expect: Matrix::from_vec(n, k, u.iter().map(|v| v.ln()).collect()).unwrap(),
            u: Matrix::from_vec(n, k, u).unwrap(),
        }
    }

    #[test]
    fn m_step_weighted_centers() {
        let cfg = FitConfig {
            fixed_nu: Some(1.0),
            ..FitConfig::default()
        };
        let d = one_d(&[0.0, 3.0]);
        let m = model_1d(&[0.0], 1.0, 1.0);
        let out = m_step(&d, &hard_estep(vec![1.0, 1.0], vec![1.0, 1.0], 1), &m, &cfg).unwrap();
        assert_eq!(out.centers.row(0), &[1.5]);
        let out = m_step(&d, &hard_estep(vec![1.0, 1.0], vec![2.0, 1.0], 1), &m, &cfg).unwrap();
        assert!((out.centers[(0, 0)] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn m_step_alpha_uses_new_centers() {
        let cfg = FitConfig {
            fixed_nu: Some(1.0),
            ..FitConfig::default()
        };
        let d = one_d(&[-1.0, 1.0]);
        let out = m_step(&d, &hard_estep(vec![1.0, 1.0], vec![1.0, 1.0], 1), &model_1d(&[5.0], 1.0, 1.0), &cfg).unwrap();
        assert_eq!(out.centers.row(0), &[0.0]);
        assert!((out.alpha - 1.0).abs() < 1e-15);
        assert_eq!(out.nu, 1.0);
    }

    #[test]
    fn m_step_reseeds_dead_component() {
        let cfg = FitConfig::<f64> {
            fixed_nu: Some(1.0),
            ..FitConfig::default()
        };
        let d = one_d(&[0.0, 1.0, 2.0]);
        // Component 1 gets nothing; sample 1 has the lowest max-responsibility.
        let e = hard_estep(vec![1.0, 0.0, 0.6, 0.0, 1.0, 0.0], vec![1.0; 6], 2);
        let out = m_step(&d, &e, &model_1d(&[0.0, 9.0], 1.0, 1.0), &cfg).unwrap();
        assert_eq!(out.centers.row(1), &[1.0]);
    }

    #[test]
    fn nu_update_arithmetic_and_clamp() {
        let b = (1.0, 200.0);
        assert_eq!(nu_from_eta(-1.0, b), 1.0);
        assert!((nu_from_eta(-0.25f64, b) - 4.0).abs() < 1e-15);
        assert_eq!(nu_from_eta(-0.001, b), 200.0);
        assert_eq!(nu_from_eta(0.3, b), 200.0);
        assert_eq!(nu_from_eta(-5.0, b), 1.0);
    }

    #[test]
    fn loss_values() {
        let d = one_d(&[0.0, 4.0]);
        let m = model_1d(&[0.0, 4.0], 1.0, 1.0);
        let tau = Matrix::from_rows(&[[1.0, 0.0], [0.0, 1.0]]).unwrap();
        assert_eq!(loss(&d, &m, &tau), 0.0);
        // d² = να = 6 → ln 2
        let m = model_1d(&[0.0], 2.0, 3.0);
        let d = one_d(&[6f64.sqrt()]);
        let tau = Matrix::from_rows(&[[1.0]]).unwrap();
        assert!((loss(&d, &m, &tau) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn fit_rejects_bad_k() {
        let d = one_d(&[0.0, 1.0]);
        let cfg = FitConfig::default();
        assert!(matches!(fit(&d, 0, &cfg), Err(Error::Domain(_))));
        assert!(matches!(fit(&d, 3, &cfg), Err(Error::Domain(_))));
    }

    #[test]
    fn single_cluster_converges_to_weighted_mean() {
        // Symmetric about 5, so the t-weighted mean is the sample mean.
        let pts: Vec<f64> = (0..20)
            .flat_map(|i| {
                let o = 0.01 * (i as f64 + 1.0).sqrt();
                [5.0 - o, 5.0 + o]
            })
            .collect();
        let d = one_d(&pts);
        let fit = fit(
            &d,
            1,
            &FitConfig {
                tol: 1e-14,
                max_iter: 2000,
                ..FitConfig::default()
            },
        )
        .unwrap();
        let mean = pts.iter().sum::<f64>() / pts.len() as f64;
        assert!((fit.model.centers[(0, 0)] - mean).abs() < 1e-6);
        assert!(fit.result.labels.iter().all(|&l| l == 0));
        assert_eq!(fit.result.loss_trace.len(), fit.result.iterations);
    }
}
