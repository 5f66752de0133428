//! Time-delay embedding of a scalar series into `m`-dimensional space.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::signal_io::RawSignal;

/// How many vectors an embedding keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum VectorCount {
    /// Every complete delay vector: `N_s - (m-1)·L`.
    #[default]
    Standard,
    /// The first `N_s - (max_dim-1)·L` vectors, so every `m ≤ max_dim`
    /// sees the same set of vector indices.
    Fixed { max_dim: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EmbeddingConfig {
    pub dim: usize,
    pub lag: usize,
    pub count: VectorCount,
}

impl EmbeddingConfig {
    pub fn new(dim: usize, lag: usize) -> Self {
        Self {
            dim,
            lag,
            count: VectorCount::Standard,
        }
    }

    pub fn fixed_count(dim: usize, lag: usize, max_dim: usize) -> Self {
        Self {
            dim,
            lag,
            count: VectorCount::Fixed { max_dim },
        }
    }
}

/// Delay vectors stored row-major, `dim` contiguous coordinates per row.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedSeries {
    data: Vec<f64>,
    dim: usize,
    lag: usize,
    n_vectors: usize,
}

impl EmbeddedSeries {
    /// Build from explicit rows. All rows must share one length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if dim == 0 {
            return Err(Error::MalformedInput("empty vector set".into()));
        }
        let mut data = Vec::with_capacity(rows.len() * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::Shape {
                    expected: dim,
                    actual: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self {
            data,
            dim,
            lag: 1,
            n_vectors: rows.len(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lag(&self) -> usize {
        self.lag
    }

    pub fn n_vectors(&self) -> usize {
        self.n_vectors
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn vectors(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }
}

pub fn embed(signal: &RawSignal, config: &EmbeddingConfig) -> Result<EmbeddedSeries> {
    let EmbeddingConfig { dim, lag, count } = *config;
    if dim == 0 || lag == 0 {
        return Err(Error::Domain(format!(
            "embedding dimension and lag must be ≥ 1 (got m={dim}, L={lag})"
        )));
    }
    let span_dim = match count {
        VectorCount::Standard => dim,
        VectorCount::Fixed { max_dim } => {
            if max_dim < dim {
                return Err(Error::Domain(format!(
                    "fixed-count embedding needs m ≤ m_max (got m={dim}, m_max={max_dim})"
                )));
            }
            max_dim
        }
    };

    let x = signal.samples();
    let required = (span_dim - 1) * lag + 2;
    if x.len() < required {
        return Err(Error::Length {
            what: "delay embedding",
            required,
            actual: x.len(),
        });
    }
    let n_vectors = x.len() - (span_dim - 1) * lag;

    let mut data = Vec::with_capacity(n_vectors * dim);
    for i in 0..n_vectors {
        data.extend((0..dim).map(|k| x[i + k * lag]));
    }
    Ok(EmbeddedSeries {
        data,
        dim,
        lag,
        n_vectors,
    })
}
