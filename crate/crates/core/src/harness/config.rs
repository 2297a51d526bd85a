//! Bench configuration files.
//!
//! A config is TOML. Top-level `repeats` and `base_seed` set defaults; each
//! `[[run]]` table names one or more algorithms and a dataset:
//!
//! ```toml
//! repeats = 20
//! base_seed = 0
//!
//! [[run]]
//! algos = ["kmeans", "fast-tkmeans++"]
//! data = "blobs:K=15,n=300,p=2,std=0.5,box=10,seed=1"
//! k = 15
//!
//! [[run]]
//! algo = "tkmeans"
//! data = "iris"
//! k = 3
//! repeats = 50
//! max_iter = 500
//! ```
//!
//! Per-run keys: `algo` or `algos`, `data`, `k`, and optionally `labels`
//! (partition file for text data), `label_column` (`last` or an index, CSV
//! only), `standardize`, `repeats`, `base_seed`, `max_iter`, `tol`, `nu`,
//! `init` (`random` or `kmeanspp`), `ridge`, `alpha_fast`. Relative paths
//! are resolved against the config file's directory.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::{DataSource, DataSpec, Overrides, RunSpec};
use crate::error::{Error, Result};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    repeats: Option<usize>,
    base_seed: Option<u64>,
    #[serde(default)]
    run: Vec<RawRun>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRun {
    algo: Option<String>,
    #[serde(default)]
    algos: Vec<String>,
    data: String,
    k: usize,
    labels: Option<String>,
    label_column: Option<String>,
    standardize: Option<bool>,
    repeats: Option<usize>,
    base_seed: Option<u64>,
    max_iter: Option<usize>,
    tol: Option<f64>,
    nu: Option<f64>,
    init: Option<String>,
    ridge: Option<f64>,
    alpha_fast: Option<f64>,
}

fn resolve(base: Option<&Path>, p: PathBuf) -> PathBuf {
    match base {
        Some(b) if p.is_relative() => b.join(p),
        _ => p,
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Parses config text; `base_dir` anchors relative data paths.
pub fn parse_config(text: &str, base_dir: Option<&Path>) -> Result<Vec<RunSpec>> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| line_of(text, s.start)).unwrap_or(1);
        Error::Format {
            line,
            column: None,
            message: e.message().to_string(),
        }
    })?;
    if raw.run.is_empty() {
        return Err(Error::Usage("config has no [[run]] entries".into()));
    }
    let mut specs = Vec::new();
    for (i, r) in raw.run.into_iter().enumerate() {
        let ctx = |e: Error| match e {
            Error::Usage(m) => Error::Usage(format!("run {}: {m}", i + 1)),
            other => other,
        };
        let mut source: DataSource = r.data.parse().map_err(ctx)?;
        match &mut source {
            DataSource::Text { path, labels } => {
                *path = resolve(base_dir, std::mem::take(path));
                *labels = r.labels.map(|l| resolve(base_dir, l.into()));
            }
            DataSource::Csv { path, label } => {
                *path = resolve(base_dir, std::mem::take(path));
                if let Some(c) = &r.label_column {
                    *label = c.parse().map_err(ctx)?;
                }
            }
            _ => {}
        }
        let data = DataSpec {
            source,
            standardize: r.standardize,
        };
        let overrides = Overrides {
            max_iter: r.max_iter,
            tol: r.tol,
            nu: r.nu,
            init: r.init.as_deref().map(str::parse).transpose().map_err(ctx)?,
            ridge: r.ridge,
            alpha_fast: r.alpha_fast,
        };
        let names: Vec<String> = r.algo.into_iter().chain(r.algos).collect();
        if names.is_empty() {
            return Err(Error::Usage(format!("run {}: no algo or algos given", i + 1)));
        }
        for name in names {
            let spec = RunSpec {
                algorithm: name.parse().map_err(ctx)?,
                data: data.clone(),
                k: r.k,
                repeats: r.repeats.or(raw.repeats).unwrap_or(1),
                base_seed: r.base_seed.or(raw.base_seed).unwrap_or(0),
                overrides,
            };
            spec.validate().map_err(ctx)?;
            specs.push(spec);
        }
    }
    Ok(specs)
}

/// Reads and parses a config file.
pub fn load_config(path: impl AsRef<Path>) -> Result<Vec<RunSpec>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text, path.parent())
}
