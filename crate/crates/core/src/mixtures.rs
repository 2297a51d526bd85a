//! Gaussian and Student-t mixture baselines with full covariances, fit by EM.
//!
//! Both fits seed the means (k-means++ by default), start every covariance
//! at the global covariance, and use uniform weights. A ridge is added to
//! each covariance after every M-step; it defaults to 1e-6 times the mean
//! feature variance. The t-mixture shares one ν across components and
//! updates it with the same closed-form approximation as t-k-means.
//!
//! The fits record the negative observed-data log-likelihood as their loss
//! trace, so a healthy fit has a non-increasing trace.

use crate::baselines::BaselineConfig;
use crate::clustering::{argmax, check_k, initial_centers, ClusteringResult, Init, Stopwatch};
use crate::datasets::Dataset;
use crate::error::{Error, Result};
use crate::matrix::{Cholesky, Matrix};
use crate::rng::seeded;
use crate::specialfn::{digamma, log_gamma, log_sum_exp};
use crate::tkmeans::{nu_from_eta, DEFAULT_INITIAL_NU};
use crate::Scalar;

/// Fitted mixture parameters.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct MixtureModel<T> {
    /// Mixing weights on the simplex.
    pub weights: Vec<T>,
    /// K×p component means.
    pub means: Matrix<T>,
    /// One p×p covariance (GMM) or scale matrix (TMM) per component.
    pub covariances: Vec<Matrix<T>>,
    /// Shared degrees of freedom; `None` for a Gaussian mixture.
    pub nu: Option<T>,
}

/// Settings for [`gmm_fit`] and [`tmm_fit`].
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureConfig<T> {
    pub base: BaselineConfig<T>,
    /// Covariance floor added on the diagonal. `None` means
    /// 1e-6 × mean feature variance; `Some(0)` disables it.
    pub ridge: Option<T>,
    /// TMM only: hold ν fixed.
    pub fixed_nu: Option<T>,
    /// TMM only: clamp range for the ν update.
    pub nu_bounds: (T, T),
    /// GMM only: pin π = 1/K and Σₖ = αI and update means alone. This is
    /// the constrained model under which EM reduces to k-means as α → 0.
    pub spherical_alpha: Option<T>,
}

impl<T: Scalar> Default for MixtureConfig<T> {
    fn default() -> Self {
        Self {
            base: BaselineConfig {
                init: Init::KMeansPlusPlus,
                ..BaselineConfig::default()
            },
            ridge: None,
            fixed_nu: None,
            nu_bounds: (T::one(), T::lit(200.0)),
            spherical_alpha: None,
        }
    }
}

/// A fitted mixture together with its clustering.
#[derive(Debug, Clone)]
pub struct MixtureFit<T> {
    pub result: ClusteringResult<T>,
    pub model: MixtureModel<T>,
    /// Final N×K responsibilities.
    pub responsibilities: Matrix<T>,
}

impl<T: Scalar> MixtureFit<T> {
    /// Observed-data log-likelihood after every iteration.
    pub fn log_likelihood_trace(&self) -> Vec<T> {
        self.result.loss_trace.iter().map(|&l| -l).collect()
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Family {
    Gaussian,
    StudentT,
}

fn mean_and_covariance<T: Scalar>(data: &Dataset<T>) -> (Vec<T>, Matrix<T>) {
    let (n, p) = (data.n(), data.p());
    let nf = T::from_count(n);
    let mut mean = vec![T::zero(); p];
    for x in data.samples().iter_rows() {
        for (m, &v) in mean.iter_mut().zip(x) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= nf);
    let mut cov = Matrix::zeros(p, p);
    for x in data.samples().iter_rows() {
        for a in 0..p {
            let da = x[a] - mean[a];
            for b in 0..=a {
                cov[(a, b)] += da * (x[b] - mean[b]);
            }
        }
    }
    for a in 0..p {
        for b in 0..=a {
            let v = cov[(a, b)] / nf;
            cov[(a, b)] = v;
            cov[(b, a)] = v;
        }
    }
    (mean, cov)
}

fn add_ridge<T: Scalar>(m: &mut Matrix<T>, ridge: T) {
    for i in 0..m.rows() {
        m[(i, i)] += ridge;
    }
}

struct Component<T> {
    chol: Cholesky<T>,
    log_det: T,
}

fn factor<T: Scalar>(model: &MixtureModel<T>) -> Result<Vec<Component<T>>> {
    model
        .covariances
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let chol = Cholesky::new(c).ok_or_else(|| Error::numerical(Some(k), "covariance is not positive-definite"))?;
            let log_det = chol.log_det();
            Ok(Component { chol, log_det })
        })
        .collect()
}

/// E-step. Returns the observed log-likelihood; fills responsibilities and,
/// for the t family, the gamma weights u and E(ln u).
fn e_step<T: Scalar>(
    data: &Dataset<T>,
    model: &MixtureModel<T>,
    family: Family,
    resp: &mut Matrix<T>,
    u: &mut Matrix<T>,
    log_u_expect: &mut Matrix<T>,
) -> Result<T> {
    let (n, k, p) = (data.n(), model.weights.len(), data.p());
    let pf = T::from_count(p);
    let half = T::lit(0.5);
    let comps = factor(model)?;
    let log_w: Vec<T> = model.weights.iter().map(|w| w.ln()).collect();
    let (t_const, log_u_shift) = match (family, model.nu) {
        (Family::StudentT, Some(nu)) => {
            let a = half * (nu + pf);
            (
                log_gamma(a)? - log_gamma(half * nu)? - half * pf * (nu * T::PI()).ln(),
                digamma(a)? - a.ln(),
            )
        }
        _ => (-half * pf * T::TAU().ln(), T::zero()),
    };

    let mut diff = vec![T::zero(); p];
    let mut scratch = Vec::with_capacity(p);
    let mut logs = vec![T::zero(); k];
    let mut total = T::zero();
    for i in 0..n {
        let x = data.point(i);
        for j in 0..k {
            for ((d, &xv), &m) in diff.iter_mut().zip(x).zip(model.means.row(j)) {
                *d = xv - m;
            }
            let maha = comps[j].chol.mahalanobis_sq(&diff, &mut scratch);
            let kernel = match (family, model.nu) {
                (Family::StudentT, Some(nu)) => {
                    let w = (nu + pf) / (nu + maha);
                    u[(i, j)] = w;
                    log_u_expect[(i, j)] = w.ln() + log_u_shift;
                    -half * (nu + pf) * (maha / nu).ln_1p()
                }
                _ => -half * maha,
            };
            logs[j] = log_w[j] + t_const - half * comps[j].log_det + kernel;
        }
        let lse = log_sum_exp(&logs).map_err(|_| Error::numerical(None, format!("sample {i} has zero density under every component")))?;
        total += lse;
        for j in 0..k {
            resp[(i, j)] = (logs[j] - lse).exp();
        }
    }
    Ok(total)
}

/// M-step for means, covariances, and weights (unless pinned).
#[allow(clippy::too_many_arguments)]
fn m_step<T: Scalar>(
    data: &Dataset<T>,
    model: &mut MixtureModel<T>,
    family: Family,
    resp: &Matrix<T>,
    u: &Matrix<T>,
    log_u_expect: &Matrix<T>,
    ridge: T,
    cfg: &MixtureConfig<T>,
    fallback_cov: &Matrix<T>,
) -> Result<()> {
    let (n, k, p) = (data.n(), model.weights.len(), data.p());
    let nf = T::from_count(n);
    let pinned = cfg.spherical_alpha.is_some();
    let weight_of = |i: usize, j: usize| match family {
        Family::Gaussian => resp[(i, j)],
        Family::StudentT => resp[(i, j)] * u[(i, j)],
    };

    let mut used = Vec::new();
    for j in 0..k {
        let mass: T = (0..n).map(|i| resp[(i, j)]).sum();
        let wsum: T = (0..n).map(|i| weight_of(i, j)).sum();
        if !(wsum > T::zero()) || !(mass > T::zero()) {
            // Dead component: restart it on the least-explained sample.
            let worst = (0..n)
                .filter(|i| !used.contains(i))
                .map(|i| (i, resp.row(i).iter().copied().fold(T::neg_infinity(), T::max)))
                .fold(None::<(usize, T)>, |best, (i, m)| match best {
                    Some((_, bm)) if m >= bm => best,
                    _ => Some((i, m)),
                })
                .map(|(i, _)| i)
                .ok_or_else(|| Error::numerical(Some(j), "component lost all responsibility"))?;
            used.push(worst);
            model.means.row_mut(j).copy_from_slice(data.point(worst));
            if !pinned {
                model.covariances[j] = fallback_cov.clone();
                model.weights[j] = nf.recip();
            }
            continue;
        }
        let mut mean = vec![T::zero(); p];
        for i in 0..n {
            let w = weight_of(i, j);
            for (m, &x) in mean.iter_mut().zip(data.point(i)) {
                *m += w * x;
            }
        }
        mean.iter_mut().for_each(|m| *m /= wsum);
        model.means.row_mut(j).copy_from_slice(&mean);
        if pinned {
            continue;
        }
        let mut cov = Matrix::zeros(p, p);
        for i in 0..n {
            let w = weight_of(i, j);
            let x = data.point(i);
            for a in 0..p {
                let da = w * (x[a] - mean[a]);
                for b in 0..=a {
                    cov[(a, b)] += da * (x[b] - mean[b]);
                }
            }
        }
        for a in 0..p {
            for b in 0..=a {
                let v = cov[(a, b)] / mass;
                cov[(a, b)] = v;
                cov[(b, a)] = v;
            }
        }
        add_ridge(&mut cov, ridge);
        model.covariances[j] = cov;
        model.weights[j] = mass / nf;
    }
    if !pinned {
        let s: T = model.weights.iter().copied().sum();
        model.weights.iter_mut().for_each(|w| *w /= s);
    }

    if family == Family::StudentT && cfg.fixed_nu.is_none() {
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..k {
                acc += resp[(i, j)] * (log_u_expect[(i, j)] - u[(i, j)]);
            }
        }
        let eta = T::one() + acc / nf;
        model.nu = Some(nu_from_eta(eta, cfg.nu_bounds));
    }
    Ok(())
}

fn fit<T: Scalar>(data: &Dataset<T>, k: usize, cfg: &MixtureConfig<T>, family: Family) -> Result<MixtureFit<T>> {
    cfg.base.validate()?;
    check_k(data, k)?;
    if let Some(a) = cfg.spherical_alpha {
        if family != Family::Gaussian || !(a > T::zero()) {
            return Err(Error::domain("spherical mode needs a Gaussian mixture and alpha > 0"));
        }
    }
    if let Some(r) = cfg.ridge {
        if !(r >= T::zero()) {
            return Err(Error::domain("ridge must be non-negative"));
        }
    }
    let clock = Stopwatch::start();
    let (n, p) = (data.n(), data.p());
    let mut rng = seeded(cfg.base.seed);
    let means = initial_centers(data, k, &cfg.base.init, &mut rng)?;

    let (_, mut global) = mean_and_covariance(data);
    let mean_var = (0..p).map(|a| global[(a, a)]).sum::<T>() / T::from_count(p);
    let ridge = cfg.ridge.unwrap_or_else(|| {
        let r = T::lit(1e-6) * mean_var;
        if r > T::zero() {
            r
        } else {
            T::lit(1e-6)
        }
    });
    add_ridge(&mut global, ridge);

    let (weights, covariances) = match cfg.spherical_alpha {
        Some(alpha) => {
            let mut c = Matrix::zeros(p, p);
            add_ridge(&mut c, alpha);
            (vec![T::from_count(k).recip(); k], vec![c; k])
        }
        None => (vec![T::from_count(k).recip(); k], vec![global.clone(); k]),
    };
    let nu = match family {
        Family::Gaussian => None,
        Family::StudentT => Some(cfg.fixed_nu.unwrap_or(T::lit(DEFAULT_INITIAL_NU))),
    };
    let mut model = MixtureModel {
        weights,
        means,
        covariances,
        nu,
    };

    let mut resp = Matrix::zeros(n, k);
    let mut u = Matrix::zeros(n, k);
    let mut log_u = Matrix::zeros(n, k);
    let mut prev = e_step(data, &model, family, &mut resp, &mut u, &mut log_u)?;
    let mut trace = Vec::new();
    let mut converged = false;
    for _ in 0..cfg.base.max_iter {
        m_step(data, &mut model, family, &resp, &u, &log_u, ridge, cfg, &global)?;
        let ll = e_step(data, &model, family, &mut resp, &mut u, &mut log_u)?;
        if !ll.is_finite() {
            return Err(Error::numerical(None, "log-likelihood became non-finite"));
        }
        trace.push(-ll);
        if (ll - prev).abs() <= cfg.base.tol * prev.abs().max(ll.abs()) {
            converged = true;
            break;
        }
        prev = ll;
    }
    let result = ClusteringResult {
        labels: resp.iter_rows().map(argmax).collect(),
        centers: model.means.clone(),
        iterations: trace.len(),
        loss_trace: trace,
        converged,
        wall_time: clock.seconds(),
    };
    Ok(MixtureFit {
        result,
        model,
        responsibilities: resp,
    })
}

/// Gaussian mixture fit by EM.
pub fn gmm_fit<T: Scalar>(data: &Dataset<T>, k: usize, cfg: &MixtureConfig<T>) -> Result<MixtureFit<T>> {
    fit(data, k, cfg, Family::Gaussian)
}

/// Student-t mixture with a shared ν, fit by EM.
pub fn tmm_fit<T: Scalar>(data: &Dataset<T>, k: usize, cfg: &MixtureConfig<T>) -> Result<MixtureFit<T>> {
    fit(data, k, cfg, Family::StudentT)
}
