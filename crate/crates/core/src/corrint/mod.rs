//! Correlation integrals over delay-vector pairs.
//!
//! For a series of `N` vectors the correlation integral at threshold `r` is
//! the mean kernel value over the `N(N-1)/2` unordered pairs `i < j`:
//!
//! ```text
//! C(r) = 2 / (N (N-1)) · Σ_{i<j} K(d_ij, r)
//! ```
//!
//! with `K = H` (1 inside the ball, the classical count) or `K = P`
//! (`exp(-d/r)` inside the ball). Both kernels include the boundary
//! `d == r` and vanish outside it.
//!
//! [`correlation_integral_naive`] is the reference double loop.
//! [`correlation_integral_fast`] visits each pair once for a whole sorted
//! threshold list and reduces per-block partial sums in a fixed tree, so its
//! output does not depend on the rayon pool size.

mod fast;
mod grid;
mod matrix;
mod sum;

use std::fmt;

use serde::Serialize;

use crate::embedding::EmbeddedSeries;
use crate::error::{Error, Result};

pub use fast::{correlation_integral_fast, correlation_integrals, KernelIntegrals};
pub use grid::{grid, CorrIntegralGrid, GridConfig};
pub use matrix::{distance_matrix, distance_matrix_capped, DistanceMatrix, DEFAULT_MATRIX_CAP};
pub use sum::{tree_reduce, CompensatedSum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Kernel {
    /// Indicator `d <= r` (the Grassberger–Procaccia count).
    #[serde(rename = "cd")]
    Heaviside,
    /// `exp(-d/r)` for `d <= r`, zero beyond.
    #[serde(rename = "mcd")]
    Exponential,
}

impl Kernel {
    pub const ALL: [Kernel; 2] = [Kernel::Heaviside, Kernel::Exponential];

    /// Kernel value without argument checks; `r` must be positive.
    #[inline]
    pub fn eval(self, d: f64, r: f64) -> f64 {
        if d <= r {
            match self {
                Kernel::Heaviside => 1.0,
                Kernel::Exponential => (-d / r).exp(),
            }
        } else {
            0.0
        }
    }

    pub fn short_name(self) -> &'static str {
        match self {
            Kernel::Heaviside => "cd",
            Kernel::Exponential => "mcd",
        }
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceMetric {
    #[default]
    Euclidean,
    Chebyshev,
    Manhattan,
}

impl DistanceMetric {
    /// Distance without a length check. Coordinates are accumulated in
    /// index order, so a longer vector with the same prefix never yields a
    /// smaller distance.
    #[inline]
    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        debug_assert_eq!(a.len(), b.len());
        match self {
            DistanceMetric::Euclidean => {
                let mut s = 0.0;
                for (x, y) in a.iter().zip(b) {
                    let t = x - y;
                    s += t * t;
                }
                s.sqrt()
            }
            DistanceMetric::Chebyshev => a
                .iter()
                .zip(b)
                .fold(0.0f64, |m, (x, y)| m.max((x - y).abs())),
            DistanceMetric::Manhattan => {
                let mut s = 0.0;
                for (x, y) in a.iter().zip(b) {
                    s += (x - y).abs();
                }
                s
            }
        }
    }
}

impl fmt::Display for DistanceMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DistanceMetric::Euclidean => "euclidean",
            DistanceMetric::Chebyshev => "chebyshev",
            DistanceMetric::Manhattan => "manhattan",
        })
    }
}

pub fn kernel_value(kernel: Kernel, d: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("threshold must be positive, got {r}")));
    }
    if !(d >= 0.0) {
        return Err(Error::Domain(format!("distance must be non-negative, got {d}")));
    }
    Ok(kernel.eval(d, r))
}

pub fn pair_distance(a: &[f64], b: &[f64], metric: DistanceMetric) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::Shape {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(metric.distance(a, b))
}

pub(crate) fn check_threshold(r: f64) -> Result<()> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!("threshold must be positive, got {r}")));
    }
    if r > 1.0 {
        log::warn!("threshold {r} lies outside (0, 1]");
    }
    Ok(())
}

pub(crate) fn check_series(series: &EmbeddedSeries) -> Result<()> {
    if series.n_vectors() < 2 {
        return Err(Error::Length {
            what: "correlation integral",
            required: 2,
            actual: series.n_vectors(),
        });
    }
    Ok(())
}

/// Reference implementation: explicit loop over `i < j` in lexicographic
/// order.
pub fn correlation_integral_naive(
    series: &EmbeddedSeries,
    r: f64,
    kernel: Kernel,
    metric: DistanceMetric,
) -> Result<f64> {
    check_series(series)?;
    check_threshold(r)?;
    let n = series.n_vectors();
    let mut acc = CompensatedSum::default();
    for i in 0..n {
        let xi = series.vector(i);
        for j in i + 1..n {
            let d = metric.distance(xi, series.vector(j));
            acc.add(kernel.eval(d, r));
        }
    }
    let nf = n as f64;
    Ok(2.0 / (nf * (nf - 1.0)) * acc.value())
}
