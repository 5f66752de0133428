use serde::Serialize;

use super::{correlation_integral_fast, DistanceMetric, Kernel};
use crate::embedding::{embed, EmbeddingConfig};
use crate::error::{Error, Result};
use crate::preprocess::Preprocessing;
use crate::signal_io::RawSignal;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridConfig {
    pub m_values: Vec<usize>,
    pub lag: usize,
    /// Embed every `m` with the vector count of the largest `m`.
    pub fixed_count: bool,
    pub r_values: Vec<f64>,
    pub kernel: Kernel,
    pub metric: DistanceMetric,
    pub preprocessing: Preprocessing,
}

impl GridConfig {
    pub(crate) fn embedding_for(&self, dim: usize) -> Result<EmbeddingConfig> {
        if self.fixed_count {
            let max_dim = self.max_dim()?;
            Ok(EmbeddingConfig::fixed_count(dim, self.lag, max_dim))
        } else {
            Ok(EmbeddingConfig::new(dim, self.lag))
        }
    }

    fn max_dim(&self) -> Result<usize> {
        self.m_values
            .iter()
            .copied()
            .max()
            .ok_or_else(|| Error::Domain("no embedding dimensions requested".into()))
    }
}

/// `c[row][col]` is C(r_values[col]) at embedding dimension m_values[row].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrIntegralGrid {
    pub m_values: Vec<usize>,
    pub r_values: Vec<f64>,
    pub c: Vec<Vec<f64>>,
    pub kernel: Kernel,
    pub metric: DistanceMetric,
    pub n_vectors: Vec<usize>,
}

/// Preprocess, then embed and integrate once per embedding dimension.
pub fn grid(signal: &RawSignal, config: &GridConfig) -> Result<CorrIntegralGrid> {
    config.max_dim()?;
    let prepared = config.preprocessing.apply(signal)?;

    let mut c = Vec::with_capacity(config.m_values.len());
    let mut n_vectors = Vec::with_capacity(config.m_values.len());
    for &m in &config.m_values {
        let series = embed(&prepared, &config.embedding_for(m)?)?;
        log::debug!("m = {m}: {} vectors", series.n_vectors());
        n_vectors.push(series.n_vectors());
        c.push(correlation_integral_fast(
            &series,
            &config.r_values,
            config.kernel,
            config.metric,
        )?);
    }

    Ok(CorrIntegralGrid {
        m_values: config.m_values.clone(),
        r_values: config.r_values.clone(),
        c,
        kernel: config.kernel,
        metric: config.metric,
        n_vectors,
    })
}
