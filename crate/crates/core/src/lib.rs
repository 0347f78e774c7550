//! Direction-of-arrival estimation on a uniform linear array fed by
//! low-resolution ADCs.
//!
//! The crate simulates array snapshots, passes them through either a true
//! Lloyd-Max quantizer or the additive quantization noise model, estimates
//! angles with Root-MUSIC / ESPRIT, and compares the error against a
//! closed-form Cramér-Rao bound and the bit-depth performance-loss factor.
//!
//! Numerical code is generic over [`Real`] (`f32` or `f64`); the `*64` / `*32`
//! aliases below fix the scalar.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod array_model;
pub mod crlb;
pub mod error;
pub mod estimators;
pub mod harness;
pub mod linalg;
pub mod polynomial;
pub mod quantizer;
pub mod rng;
pub mod scalar;

pub use error::{Error, Result};
pub use quantizer::Resolution;
pub use scalar::Real;

pub type CMatrix64 = linalg::CMatrix<f64>;
pub type CMatrix32 = linalg::CMatrix<f32>;
pub type ArrayGeometry64 = array_model::ArrayGeometry<f64>;
pub type ArrayGeometry32 = array_model::ArrayGeometry<f32>;
pub type SourceSet64 = array_model::SourceSet<f64>;
pub type SourceSet32 = array_model::SourceSet<f32>;
pub type SnapshotMatrix64 = array_model::SnapshotMatrix<f64>;
pub type SnapshotMatrix32 = array_model::SnapshotMatrix<f32>;
pub type QuantizerSpec64 = quantizer::QuantizerSpec<f64>;
pub type QuantizerSpec32 = quantizer::QuantizerSpec<f32>;
pub type Codebook64 = quantizer::Codebook<f64>;
pub type Codebook32 = quantizer::Codebook<f32>;
pub type SubspaceDecomposition64 = estimators::SubspaceDecomposition<f64>;
pub type SubspaceDecomposition32 = estimators::SubspaceDecomposition<f32>;
pub type DoaEstimate64 = estimators::DoaEstimate<f64>;
pub type DoaEstimate32 = estimators::DoaEstimate<f32>;
pub type OperatingPoint64 = crlb::OperatingPoint<f64>;
pub type OperatingPoint32 = crlb::OperatingPoint<f32>;
