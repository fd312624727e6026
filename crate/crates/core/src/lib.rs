//! Numerical laboratory for singular-value asymptotics of resolvent
//! differences of Robin realizations of `-Δ` on the unit disk.
//!
//! The crate assembles boundary-reduced operators in a truncated Fourier
//! basis `e^{imθ}/√(2π)`, `|m| <= N`, computes their singular values, fits
//! power-law tails and compares them with symbol-integral constants.

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x <= tol)` deliberately fails on NaN

pub mod error;
pub mod circle_ops;
pub mod disk_model;
pub mod krein_reduction;
pub mod psido_lab;
pub mod runner;
pub mod special_fn;
pub mod spectral;
pub mod symbol_constants;

pub use error::{Error, Result};
