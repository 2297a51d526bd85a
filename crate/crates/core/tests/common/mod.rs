#![allow(dead_code)]

use rand::{RngExt, SeedableRng};
use tkmeans::{Dataset, Matrix};

pub type Rng = rand_pcg::Pcg64;

pub fn rng(seed: u64) -> Rng {
    Rng::seed_from_u64(seed)
}

/// Lanczos (g = 7, n = 9) log-gamma, written separately from the crate's
/// Stirling-series version.
pub fn lanczos_ln_gamma(x: f64) -> f64 {
    const G: f64 = 7.0;
    const C: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - lanczos_ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = C[0];
    let t = x + G + 0.5;
    for (i, &c) in C.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// Digamma by shifting to x ≥ 20 and a six-term asymptotic tail.
pub fn oracle_digamma(mut x: f64) -> f64 {
    let mut acc = 0.0;
    while x < 20.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let x2 = 1.0 / (x * x);
    let tail = x2 * (1.0 / 12.0 - x2 * (1.0 / 120.0 - x2 * (1.0 / 252.0 - x2 * (1.0 / 240.0 - x2 * (1.0 / 132.0 - x2 * 691.0 / 32760.0)))));
    acc + x.ln() - 0.5 / x - tail
}

fn sqd(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Multivariate t density with scale αI, evaluated directly.
pub fn t_density(x: &[f64], mu: &[f64], alpha: f64, nu: f64) -> f64 {
    let p = x.len() as f64;
    let norm = (lanczos_ln_gamma((nu + p) / 2.0) - lanczos_ln_gamma(nu / 2.0)).exp()
        / ((nu * std::f64::consts::PI).powf(p / 2.0) * alpha.powf(p / 2.0));
    norm * (1.0 + sqd(x, mu) / (nu * alpha)).powf(-(nu + p) / 2.0)
}

pub struct OracleStep {
    pub tau: Vec<Vec<f64>>,
    pub u: Vec<Vec<f64>>,
    pub log_u: Vec<Vec<f64>>,
    pub centers: Vec<Vec<f64>>,
    pub alpha: f64,
    pub nu: f64,
}

/// One EM iteration of t-k-means, transcribed formula by formula.
pub fn oracle_em_step(x: &[Vec<f64>], centers: &[Vec<f64>], alpha: f64, nu: f64, nu_bounds: (f64, f64)) -> OracleStep {
    let (n, k, p) = (x.len(), centers.len(), x[0].len() as f64);
    let mut tau = vec![vec![0.0; k]; n];
    let mut u = vec![vec![0.0; k]; n];
    let mut log_u = vec![vec![0.0; k]; n];
    let shift = oracle_digamma((nu + p) / 2.0) - ((nu + p) / 2.0).ln();
    for i in 0..n {
        let dens: Vec<f64> = centers.iter().map(|c| t_density(&x[i], c, alpha, nu)).collect();
        let total: f64 = dens.iter().sum();
        for j in 0..k {
            tau[i][j] = dens[j] / total;
            u[i][j] = (nu + p) / (nu + sqd(&x[i], &centers[j]) / alpha);
            log_u[i][j] = u[i][j].ln() + shift;
        }
    }
    let mut new_centers = vec![vec![0.0; x[0].len()]; k];
    for j in 0..k {
        let mut den = 0.0;
        for i in 0..n {
            let w = tau[i][j] * u[i][j];
            den += w;
            for (c, v) in new_centers[j].iter_mut().zip(&x[i]) {
                *c += w * v;
            }
        }
        new_centers[j].iter_mut().for_each(|c| *c /= den);
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..k {
        for i in 0..n {
            num += tau[i][j] * u[i][j] * sqd(&x[i], &new_centers[j]);
            den += tau[i][j];
        }
    }
    let new_alpha = num / (p * den);
    let mut eta = 1.0 + shift;
    for j in 0..k {
        let mass: f64 = (0..n).map(|i| tau[i][j]).sum();
        let s: f64 = (0..n).map(|i| tau[i][j] * (u[i][j].ln() - u[i][j])).sum();
        eta += s / mass / k as f64;
    }
    let new_nu = if eta >= 0.0 { nu_bounds.1 } else { (-1.0 / eta).clamp(nu_bounds.0, nu_bounds.1) };
    OracleStep {
        tau,
        u,
        log_u,
        centers: new_centers,
        alpha: new_alpha,
        nu: new_nu,
    }
}

pub fn dataset(rows: &[Vec<f64>], labels: Option<Vec<usize>>) -> Dataset<f64> {
    Dataset::from_rows("test", rows, labels).unwrap()
}

pub fn matrix(rows: &[Vec<f64>]) -> Matrix<f64> {
    Matrix::from_rows(rows).unwrap()
}

pub fn random_rows(rng: &mut Rng, n: usize, p: usize, lo: f64, hi: f64) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..p).map(|_| rng.random_range(lo..hi)).collect()).collect()
}

/// O(N²) ARI by direct pair enumeration.
pub fn brute_force_pair_counts(a: &[usize], b: &[usize]) -> (u64, u64, u64, u64) {
    let n = a.len();
    let (mut both, mut in_a, mut in_b) = (0u64, 0u64, 0u64);
    for i in 0..n {
        for j in i + 1..n {
            let sa = a[i] == a[j];
            let sb = b[i] == b[j];
            both += (sa && sb) as u64;
            in_a += sa as u64;
            in_b += sb as u64;
        }
    }
    (both, in_a, in_b, (n * (n - 1) / 2) as u64)
}

/// Blobs with well separated, fixed centers: `centers` × `per` points.
pub fn separated_blobs(rng: &mut Rng, centers: &[Vec<f64>], per: usize, spread: f64) -> Dataset<f64> {
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (c, m) in centers.iter().enumerate() {
        for _ in 0..per {
            rows.push(m.iter().map(|v| v + rng.random_range(-spread..spread)).collect());
            labels.push(c);
        }
    }
    dataset(&rows, Some(labels))
}

/// Largest componentwise gap between the crate's E- and M-step and the
/// oracle on one random instance (N ≤ 30, p ≤ 3, K ≤ 3).
pub fn em_oracle_gap(seed: u64) -> f64 {
    use tkmeans::tkmeans::{e_step, m_step, FitConfig, TkModel};
    let mut r = rng(seed);
    let n = r.random_range(4..=30usize);
    let p = r.random_range(1..=3usize);
    let k = r.random_range(1..=3usize);
    let x = random_rows(&mut r, n, p, -5.0, 5.0);
    let centers = random_rows(&mut r, k, p, -5.0, 5.0);
    let alpha = r.random_range(0.2..4.0);
    let nu = r.random_range(1.0..20.0);
    let cfg = FitConfig::<f64>::default();

    let data = dataset(&x, None);
    let model = TkModel { centers: matrix(&centers), alpha, nu };
    let e = e_step(&data, &model).unwrap();
    let next = m_step(&data, &e, &model, &cfg).unwrap();
    let o = oracle_em_step(&x, &centers, alpha, nu, cfg.nu_bounds);

    let mut gap = 0f64;
    let mut see = |a: f64, b: f64| gap = gap.max((a - b).abs());
    for i in 0..n {
        for j in 0..k {
            see(e.tau[(i, j)], o.tau[i][j]);
            see(e.u[(i, j)], o.u[i][j]);
            see(e.log_u_expect[(i, j)], o.log_u[i][j]);
        }
    }
    for j in 0..k {
        for d in 0..p {
            see(next.centers[(j, d)], o.centers[j][d]);
        }
    }
    see(next.alpha, o.alpha);
    see(next.nu, o.nu);
    gap
}
