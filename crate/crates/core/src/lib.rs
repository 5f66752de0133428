//! Correlation integrals and correlation-dimension estimation for scalar
//! time series.
//!
//! The pipeline runs signal → low-pass filter → normalization → delay
//! embedding → correlation integral over a threshold grid → log–log slope.
//! Two kernels are available for the integral: the classical Heaviside
//! count and an exponentially weighted variant `exp(-d/r)` that keeps the
//! magnitude of each in-threshold distance.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod corrint;
pub mod dimension;
pub mod embedding;
pub mod error;
pub mod export;
pub mod preprocess;
pub mod signal_io;
pub mod stats;

pub use corrint::{DistanceMetric, Kernel};
pub use error::{Error, ErrorClass, Result};
