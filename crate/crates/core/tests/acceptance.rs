//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

mod common;

use std::process::ExitCode;

use common::*;
use rand::RngExt;
use tkmeans::baselines::{kmeans_fit, BaselineConfig};
use tkmeans::datasets::{generate_gaussian_blobs, iris, standardize, BlobSpec};
use tkmeans::harness::{self, run_bench, run_robustness, Algorithm, DataSource, DataSpec, Overrides, RobustnessSpec, RunSpec};
use tkmeans::metrics::{adjusted_rand_index, ari_from_pair_counts};
use tkmeans::mixtures::{gmm_fit, tmm_fit, MixtureConfig};
use tkmeans::tkmeans::{e_step, fit, log_likelihood, m_step, FitConfig, TkModel};
use tkmeans::{Dataset, Init};

const ORACLE_TOL: f64 = 1e-10;
const STABILITY_RATIO: f64 = 0.01;
const MONOTONE_TOL: f64 = 1e-6;
const LINEAGE_TOL: f64 = 1e-4;
const FAST_TIME_FACTOR: f64 = 5.0;

fn oracle_equivalence() -> (bool, String) {
    let gap = (0..50).map(em_oracle_gap).fold(0.0, f64::max);
    (gap <= ORACLE_TOL, format!("50 instances, max componentwise gap {gap:.2e} (tol {ORACLE_TOL:e})"))
}

fn ari_oracle() -> (bool, String) {
    let mut r = rng(2024);
    let mut mismatches = 0;
    for _ in 0..500 {
        let n = r.random_range(2..=200usize);
        let (ca, cb) = (r.random_range(1..=10usize), r.random_range(1..=10usize));
        let a: Vec<usize> = (0..n).map(|_| r.random_range(0..ca)).collect();
        let b: Vec<usize> = (0..n).map(|_| r.random_range(0..cb)).collect();
        let (both, sa, sb, total) = brute_force_pair_counts(&a, &b);
        if adjusted_rand_index(&a, &b).unwrap() != ari_from_pair_counts(both, sa, sb, total) {
            mismatches += 1;
        }
    }
    let half = adjusted_rand_index(&[0, 0, 1, 1], &[0, 1, 0, 1]).unwrap();
    (
        mismatches == 0 && half == -0.5,
        format!("{mismatches}/500 mismatches against pair enumeration, [0,0,1,1]/[0,1,0,1] -> {half}"),
    )
}

fn bench_cell(algorithm: Algorithm, source: DataSource, k: usize, repeats: usize) -> RunSpec {
    RunSpec {
        repeats,
        ..RunSpec::new(algorithm, DataSpec::new(source), k)
    }
}

fn synthetic_ordering() -> (bool, String) {
    let blobs = DataSource::Blobs(BlobSpec::s_like(0));
    let report = run_bench(&[
        bench_cell(Algorithm::FastTkMeansPlusPlus, blobs.clone(), 15, 20),
        bench_cell(Algorithm::KMeans, blobs, 15, 20),
    ])
    .unwrap();
    let ari = |i: usize| report.cells[i].stats().and_then(|s| s.ari);
    let (Some(fast), Some(km)) = (ari(0), ari(1)) else {
        return (false, "a cell failed".into());
    };
    (
        fast.mean >= km.mean && fast.std <= km.std,
        format!(
            "generated 15-blob set, 20 repeats: fast t-k-means++ {:.3} +/- {:.3}, k-means {:.3} +/- {:.3}",
            fast.mean, fast.std, km.mean, km.std
        ),
    )
}

fn iris_stability() -> (bool, String) {
    let report = run_bench(&[bench_cell(Algorithm::TkMeans, DataSource::Iris, 3, 50)]).unwrap();
    let Some(mse) = report.cells[0].stats().map(|s| s.mse) else {
        return (false, "cell failed".into());
    };
    (
        mse.std <= STABILITY_RATIO * mse.mean,
        format!("standardized Iris, 50 random inits: MSE {:.4} +/- {:.2e} (limit {STABILITY_RATIO} x mean)", mse.mean, mse.std),
    )
}

fn robustness() -> (bool, String) {
    let four = BlobSpec {
        k: 4,
        per_cluster: 100,
        p: 2,
        center_box: 10.0,
        cluster_std: 1.0,
        seed: 7,
    };
    let spec = RobustnessSpec::new(
        DataSpec::new(DataSource::Blobs(four)),
        vec![0.0, 0.1],
        vec![Algorithm::KMeans, Algorithm::TkMeans],
    );
    let report = run_robustness(&spec).unwrap();
    let ari = |a, f| report.cell(a, Some(f)).and_then(|c| c.stats()).and_then(|s| s.ari).map(|s| s.mean);
    let (Some(k0), Some(k1), Some(t0), Some(t1)) = (
        ari(Algorithm::KMeans, 0.0),
        ari(Algorithm::KMeans, 0.1),
        ari(Algorithm::TkMeans, 0.0),
        ari(Algorithm::TkMeans, 0.1),
    ) else {
        return (false, "a cell failed".into());
    };
    let (dk, dt) = (k0 - k1, t0 - t1);
    (
        dt <= dk,
        format!("4 blobs + 10% outliers, 20 seeds: ARI drop t-k-means {dt:.4} ({t0:.3} -> {t1:.3}), k-means {dk:.4} ({k0:.3} -> {k1:.3})"),
    )
}

fn monotone_fits() -> Vec<(Dataset<f64>, usize)> {
    let iris = standardize(&iris::<f64>()).unwrap().0;
    let four = generate_gaussian_blobs(&BlobSpec {
        k: 4,
        per_cluster: 60,
        p: 3,
        center_box: 8.0,
        cluster_std: 1.5,
        seed: 3,
    })
    .unwrap();
    let s = generate_gaussian_blobs(&BlobSpec::s_like(0)).unwrap();
    vec![(iris, 3), (four, 4), (s, 15)]
}

fn em_monotonicity() -> (bool, String) {
    let (mut gmm_bad, mut tk_bad, mut lloyd_bad, mut ll_bad) = (0, 0, 0, 0);
    let mut tk_steps = 0;
    let mut worst_rise = 0f64;
    for (data, k) in monotone_fits() {
        for seed in 0..5 {
            let cfg = MixtureConfig { base: BaselineConfig { seed, ..MixtureConfig::<f64>::default().base }, ..MixtureConfig::default() };
            let ll = gmm_fit(&data, k, &cfg).unwrap().log_likelihood_trace();
            gmm_bad += ll.windows(2).filter(|w| w[1] < w[0] - MONOTONE_TOL * w[0].abs()).count();

            let km = kmeans_fit(&data, k, &BaselineConfig { seed, ..BaselineConfig::default() }).unwrap();
            lloyd_bad += km.loss_trace.windows(2).filter(|w| w[1] > w[0]).count();

            for nu in [1.0, 5.0, 50.0] {
                let tk = fit(&data, k, &FitConfig { seed, fixed_nu: Some(nu), ..FitConfig::default() }).unwrap();
                for w in tk.result.loss_trace.windows(2) {
                    tk_steps += 1;
                    if w[1] > w[0] + MONOTONE_TOL * w[0].abs() {
                        tk_bad += 1;
                        worst_rise = worst_rise.max((w[1] - w[0]) / w[0].abs());
                    }
                }
                ll_bad += tk_likelihood_drops(&data, k, nu, seed);
            }
        }
    }
    (
        gmm_bad == 0 && tk_bad == 0 && lloyd_bad == 0,
        format!(
            "GMM log-likelihood drops {gmm_bad}; Lloyd increases {lloyd_bad}; fixed-nu t-k-means loss rises {tk_bad}/{tk_steps} steps (worst {worst_rise:.2e} relative); \
             info: fixed-nu t-k-means log-likelihood drops {ll_bad}"
        ),
    )
}

/// Re-runs a fixed-ν fit step by step and counts log-likelihood decreases.
fn tk_likelihood_drops(data: &Dataset<f64>, k: usize, nu: f64, seed: u64) -> usize {
    let cfg = FitConfig { seed, fixed_nu: Some(nu), ..FitConfig::default() };
    let first = fit(data, k, &FitConfig { max_iter: 1, ..cfg.clone() }).unwrap().model;
    let mut model = TkModel { nu, ..first };
    let mut prev = log_likelihood(data, &model).unwrap();
    let mut drops = 0;
    for _ in 0..100 {
        let e = e_step(data, &model).unwrap();
        model = m_step(data, &e, &model, &cfg).unwrap();
        let ll = log_likelihood(data, &model).unwrap();
        if ll < prev - MONOTONE_TOL * prev.abs() {
            drops += 1;
        }
        prev = ll;
    }
    drops
}

fn lineage() -> (bool, String) {
    let mut r = rng(99);
    let (mut a_ok, mut b_ok, trials) = (0, 0, 20);
    for _ in 0..trials {
        let x = random_rows(&mut r, 40, 2, 0.0, 10.0);
        let data = dataset(&x, None);
        let init = vec![x[0].clone(), x[1].clone(), x[2].clone()];
        let base = BaselineConfig { init: Init::Explicit(matrix(&init)), ..BaselineConfig::default() };
        let km = kmeans_fit(&data, 3, &base).unwrap();
        let sph = gmm_fit(
            &data,
            3,
            &MixtureConfig {
                base: BaselineConfig { tol: 1e-12, ..base.clone() },
                spherical_alpha: Some(1e-4),
                ..MixtureConfig::default()
            },
        )
        .unwrap();
        a_ok += (sph.result.labels == km.labels) as usize;
        let fast = fit(
            &data,
            3,
            &FitConfig { init: Init::Explicit(matrix(&init)), alpha_fast: 1e12, tol: 1e-12, ..FitConfig::fast() },
        )
        .unwrap();
        b_ok += (fast.result.labels == km.labels) as usize;
    }

    let iris = standardize(&iris::<f64>()).unwrap().0;
    let init: Vec<Vec<f64>> = [0, 60, 120].iter().map(|&i| iris.point(i).to_vec()).collect();
    let base = BaselineConfig { init: Init::Explicit(matrix(&init)), max_iter: 1, ..BaselineConfig::default() };
    let g = gmm_fit(&iris, 3, &MixtureConfig { base: base.clone(), ..MixtureConfig::default() }).unwrap();
    let t = tmm_fit(&iris, 3, &MixtureConfig { base, fixed_nu: Some(1e6), ..MixtureConfig::default() }).unwrap();
    let mut gap = 0f64;
    for j in 0..3 {
        gap = gap.max((g.model.weights[j] - t.model.weights[j]).abs());
        for (a, b) in g.model.means.row(j).iter().zip(t.model.means.row(j)) {
            gap = gap.max((a - b).abs());
        }
        for (a, b) in g.model.covariances[j].as_slice().iter().zip(t.model.covariances[j].as_slice()) {
            gap = gap.max((a - b).abs());
        }
    }
    (
        a_ok == trials && b_ok == trials && gap <= LINEAGE_TOL,
        format!("spherical GMM = k-means {a_ok}/{trials}; uniform fast = k-means {b_ok}/{trials}; TMM(nu=1e6) vs GMM one step gap {gap:.2e}"),
    )
}

fn mean_time(data: &Dataset<f64>, algorithm: Algorithm, runs: u64) -> f64 {
    (0..runs).map(|s| harness::fit(data, algorithm, 3, s, &Overrides::default()).unwrap().wall_time).sum::<f64>() / runs as f64
}

fn efficiency() -> (bool, String) {
    let data = standardize(&iris::<f64>()).unwrap().0;
    let all = [Algorithm::KMeans, Algorithm::FastTkMeans, Algorithm::TkMeans, Algorithm::Tmm];
    for a in all {
        mean_time(&data, a, 5);
    }
    let [km, fast, tk, tmm] = all.map(|a| mean_time(&data, a, 100));
    (
        fast <= FAST_TIME_FACTOR * km && tk <= tmm,
        format!("Iris mean seconds: k-means {km:.2e}, fast t-k-means {fast:.2e} ({:.2}x), t-k-means {tk:.2e}, TMM {tmm:.2e}", fast / km),
    )
}

fn determinism() -> (bool, String) {
    let data = standardize(&iris::<f64>()).unwrap().0;
    let mut differing = Vec::new();
    for a in Algorithm::ALL {
        for seed in [0, 17] {
            let x = harness::fit(&data, a, 3, seed, &Overrides::default()).unwrap();
            let y = harness::fit(&data, a, 3, seed, &Overrides::default()).unwrap();
            if !x.same_outcome(&y) {
                differing.push(format!("{a}/{seed}"));
            }
        }
    }
    (
        differing.is_empty(),
        format!("{} algorithms x 2 seeds, non-identical: {differing:?}", Algorithm::ALL.len()),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> (bool, String)); 9] = [
        ("oracle equivalence", oracle_equivalence),
        ("ARI oracle", ari_oracle),
        ("synthetic ARI ordering", synthetic_ordering),
        ("Iris stability", iris_stability),
        ("outlier robustness", robustness),
        ("EM monotonicity", em_monotonicity),
        ("lineage", lineage),
        ("efficiency ordering", efficiency),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = check();
        failed += !ok as usize;
        println!("[{}] {} {name}: {detail}", if ok { "PASS" } else { "FAIL" }, i + 1);
    }
    println!("{}/{} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
