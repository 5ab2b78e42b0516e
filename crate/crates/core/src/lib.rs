//! Oversampling for imbalanced binary classification.
//!
//! The centerpiece is LoRAS: for every minority point, Gaussian
//! shadowsamples are drawn around the members of its neighborhood and new
//! points are emitted as random convex combinations of those shadowsamples.
//! SMOTE, Borderline-SMOTE (both variants) and ADASYN are provided behind the
//! same [`samplers::Sampler`] interface, together with
//!
//! - CSV loading, class split and stratified fold plans ([`dataset`]),
//! - exact nearest-neighbor search, optionally in a t-SNE plane ([`neighbors`], [`embedding`]),
//! - kNN and logistic regression classifiers with a repeated cross-validation
//!   harness that oversamples training folds only ([`evaluate`]),
//! - a Monte Carlo check of the estimator variance law ([`theory`]).
//!
//! Every random step runs on a substream derived from a master seed, so a
//! seeded call returns identical results regardless of thread count.
//!
//! ```
//! use loras::dataset::class_split;
//! use loras::samplers::{loras_oversample, resolve_defaults};
//! use loras::synthetic::two_gaussians;
//!
//! let data = two_gaussians(300, 20, 4, 2.0, 7);
//! let split = class_split(&data);
//! let params = resolve_defaults(&data, &split).unwrap();
//! let synthetic = loras_oversample(&data, &split, &params, 42).unwrap();
//! assert_eq!(synthetic.len(), 20 * params.n_gen);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN fails validation
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dataset;
pub mod embedding;
pub mod error;
pub mod evaluate;
pub mod neighbors;
pub mod rng;
pub mod samplers;
pub mod synthetic;
pub mod theory;

pub use error::{Error, Result};
