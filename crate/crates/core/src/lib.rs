//! Robust clustering with t-k-means.
//!
//! t-k-means is the EM algorithm of a Student-t mixture constrained to equal
//! weights, a shared isotropic scale αI, and a shared degree of freedom ν.
//! Its centers are weighted means over *all* samples, with weights that
//! decay for far-away points, which makes it less sensitive to outliers and
//! to the choice of initial centers than Lloyd's k-means.
//!
//! The crate provides:
//!
//! * [`tkmeans`]: the full EM fit and its fast (α → 0, fixed ν) variant,
//! * [`baselines`]: k-means, k-means++ seeding, k-medoids, k-medians,
//! * [`mixtures`]: full-covariance Gaussian and t mixtures,
//! * [`metrics`]: adjusted Rand index, clustering MSE, and W/B,
//! * [`datasets`]: loaders, blob generators, standardization, contamination,
//! * [`harness`]: seeded repeat runs, aggregation, and report rendering.
//!
//! Every algorithm is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the scalar for the common case.
//!
//! ```
//! use tkmeans::{datasets, tkmeans as tk, DatasetF64};
//!
//! let spec = datasets::BlobSpec { k: 3, per_cluster: 40, p: 2, center_box: 20.0, cluster_std: 0.5, seed: 7 };
//! let data: DatasetF64 = datasets::generate_gaussian_blobs(&spec).unwrap();
//! let fit = tk::fit(&data, 3, &tk::FitConfig::default()).unwrap();
//! assert_eq!(fit.result.labels.len(), data.n());
//! ```

pub mod baselines;
pub mod clustering;
pub mod datasets;
pub mod error;
pub mod harness;
pub mod matrix;
pub mod metrics;
pub mod mixtures;
pub mod rng;
mod scalar;
pub mod specialfn;
pub mod tkmeans;

pub use clustering::{ClusteringResult, Init};
pub use datasets::Dataset;
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use scalar::Scalar;

pub type DatasetF64 = Dataset<f64>;
pub type DatasetF32 = Dataset<f32>;
pub type MatrixF64 = Matrix<f64>;
pub type MatrixF32 = Matrix<f32>;
pub type ClusteringResultF64 = ClusteringResult<f64>;
pub type ClusteringResultF32 = ClusteringResult<f32>;
pub type TkModelF64 = tkmeans::TkModel<f64>;
pub type TkModelF32 = tkmeans::TkModel<f32>;
pub type FitConfigF64 = tkmeans::FitConfig<f64>;
pub type FitConfigF32 = tkmeans::FitConfig<f32>;
pub type MixtureModelF64 = mixtures::MixtureModel<f64>;
pub type BaselineConfigF64 = baselines::BaselineConfig<f64>;
