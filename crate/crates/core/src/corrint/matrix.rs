use rayon::prelude::*;

use super::{check_series, DistanceMetric};
use crate::embedding::EmbeddedSeries;
use crate::error::{Error, Result};

/// Largest vector count [`distance_matrix`] will materialize (512 MiB of
/// `f64` at the cap).
pub const DEFAULT_MATRIX_CAP: usize = 8192;

/// Dense symmetric matrix of pair distances, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        let mut d = Vec::with_capacity(n * n);
        for row in &rows {
            if row.len() != n {
                return Err(Error::Shape {
                    expected: n,
                    actual: row.len(),
                });
            }
            d.extend_from_slice(row);
        }
        for i in 0..n {
            if d[i * n + i] != 0.0 {
                return Err(Error::MalformedInput(format!("diagonal entry {i} is not zero")));
            }
            for j in 0..n {
                let v = d[i * n + j];
                if !(v.is_finite() && v >= 0.0) || v != d[j * n + i] {
                    return Err(Error::MalformedInput(format!(
                        "entry ({i}, {j}) breaks symmetry or non-negativity"
                    )));
                }
            }
        }
        Ok(Self { n, d })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.d[i * self.n..(i + 1) * self.n]
    }

    /// Largest entry; the diagonal is zero so this is the largest
    /// off-diagonal distance (or 0 for a matrix of coincident points).
    pub fn max_distance(&self) -> f64 {
        self.d.iter().copied().fold(0.0, f64::max)
    }
}

pub fn distance_matrix(series: &EmbeddedSeries, metric: DistanceMetric) -> Result<DistanceMatrix> {
    distance_matrix_capped(series, metric, DEFAULT_MATRIX_CAP)
}

pub fn distance_matrix_capped(
    series: &EmbeddedSeries,
    metric: DistanceMetric,
    cap: usize,
) -> Result<DistanceMatrix> {
    check_series(series)?;
    let n = series.n_vectors();
    if n > cap {
        return Err(Error::Resource(format!(
            "{n} vectors exceed the distance-matrix cap of {cap}; subsample or shorten the signal"
        )));
    }
    let mut d = vec![0.0; n * n];
    d.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        let xi = series.vector(i);
        for (j, slot) in row.iter_mut().enumerate() {
            if i != j {
                *slot = metric.distance(xi, series.vector(j));
            }
        }
    });
    Ok(DistanceMatrix { n, d })
}
