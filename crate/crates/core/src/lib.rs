//! Privacy-preserving linear projections.
//!
//! Fits PCA, DCA, MDR, RUCA and random projection matrices, measures how well
//! a utility task and one or more privacy tasks can still be classified on
//! the projected data, and sweeps the number of components and privacy
//! weights to trace utility/privacy trade-off curves.
//!
//! The numerical core ([`linalg`], [`scatter`], [`projection`],
//! [`classify`]) is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below pin the common `f64` instantiations.

pub mod classify;
pub mod dataio;
mod error;
pub mod experiment;
pub mod linalg;
pub mod projection;
pub mod rng;
mod scalar;
pub mod scatter;

/// Library version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use classify::{AccuracyReport, ClassifierKind, ClassifierSpec};
pub use linalg::LinalgError;
pub use projection::{Method, ProjectionConfig};
pub use scatter::LabelSet;

pub type Matrix = linalg::Matrix<f64>;
pub type SymMatrix = linalg::SymMatrix<f64>;
pub type EigenPairs = linalg::EigenPairs<f64>;
pub type Dataset = scatter::Dataset<f64>;
pub type ScatterSet = scatter::ScatterSet<f64>;
pub type ProjectionModel = projection::ProjectionModel<f64>;

pub type Matrix32 = linalg::Matrix<f32>;
pub type SymMatrix32 = linalg::SymMatrix<f32>;
pub type Dataset32 = scatter::Dataset<f32>;
pub type ProjectionModel32 = projection::ProjectionModel<f32>;
