//! JSON run report.
//!
//! Every command writes one of these next to its data files. Keys appear in
//! declaration order and the document carries no timestamps or host details,
//! so identical runs produce identical bytes. The schema ships as
//! `docs/report.schema.json` and is exposed as [`REPORT_SCHEMA`].

use std::path::Path;

use serde::Serialize;

use super::csv::write_bytes;
use crate::corrint::{DistanceMetric, Kernel};
use crate::dimension::{DimensionEstimate, RegionSearch};
use crate::error::{Error, Result};
use crate::preprocess::{NormalizationMode, Preprocessing};
use crate::stats::{ScanRow, SummaryStat};

pub const REPORT_SCHEMA: &str = include_str!("../../docs/report.schema.json");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl Default for ToolInfo {
    fn default() -> Self {
        Self {
            name: "corrdim".into(),
            version: env!("CARGO_PKG_VERSION").into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionLabels {
    pub a: String,
    pub b: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InputRecord {
    Signal { path: String },
    Manifest {
        path: String,
        pairs: usize,
        conditions: ConditionLabels,
    },
    Grid { path: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilterRecord {
    pub cutoff_hz: f64,
    pub transition_hz: f64,
    pub tap_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PreprocessingRecord {
    pub order: Vec<String>,
    pub filter: Option<FilterRecord>,
    pub normalization: NormalizationMode,
}

impl PreprocessingRecord {
    pub fn new(pre: &Preprocessing, sample_rate_hz: f64) -> Self {
        Self {
            order: vec!["filter".into(), "normalize".into()],
            filter: pre.filter.map(|f| FilterRecord {
                cutoff_hz: f.cutoff_hz,
                transition_hz: f.transition_hz,
                tap_count: f.tap_count(sample_rate_hz),
            }),
            normalization: pre.normalization,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingRecord {
    pub m_values: Vec<usize>,
    pub lag: usize,
    pub fixed_count: bool,
}

/// Everything needed to rerun the command. Fields that a command does not
/// use are `null`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub input: InputRecord,
    pub sample_rate_hz: Option<f64>,
    pub preprocessing: Option<PreprocessingRecord>,
    pub embedding: Option<EmbeddingRecord>,
    pub kernels: Vec<Kernel>,
    pub metric: Option<DistanceMetric>,
    pub thresholds: Vec<f64>,
    pub scaling: Option<RegionSearch>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatRecord {
    pub kernel: Kernel,
    pub r: f64,
    pub m: usize,
    /// Direction of the difference, e.g. `"interictal - ictal"`.
    pub difference: String,
    #[serde(flatten)]
    pub stat: SummaryStat,
}

impl StatRecord {
    pub fn from_scan(row: &ScanRow, difference: &str) -> Self {
        Self {
            kernel: row.kernel,
            r: row.r,
            m: row.m,
            difference: difference.to_string(),
            stat: row.stat,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatmapRecord {
    pub n_vectors: usize,
    pub d_max: f64,
    pub inverted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: ToolInfo,
    pub command: String,
    pub config: RunRecord,
    /// `[m, vector count]` for each embedding evaluated.
    pub n_vectors: Vec<[usize; 2]>,
    pub estimates: Vec<DimensionEstimate>,
    pub stats: Vec<StatRecord>,
    pub heatmap: Option<HeatmapRecord>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Default)]
pub struct ReportBuilder {
    command: String,
    config: Option<RunRecord>,
    n_vectors: Vec<[usize; 2]>,
    estimates: Vec<DimensionEstimate>,
    stats: Vec<StatRecord>,
    heatmap: Option<HeatmapRecord>,
}

impl ReportBuilder {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            ..Self::default()
        }
    }

    pub fn config(mut self, config: RunRecord) -> Self {
        self.config = Some(config);
        self
    }

    pub fn n_vectors(mut self, m_values: &[usize], counts: &[usize]) -> Self {
        self.n_vectors = m_values.iter().zip(counts).map(|(&m, &n)| [m, n]).collect();
        self
    }

    pub fn estimates(mut self, estimates: Vec<DimensionEstimate>) -> Self {
        self.estimates = estimates;
        self
    }

    pub fn stats(mut self, stats: Vec<StatRecord>) -> Self {
        self.stats = stats;
        self
    }

    pub fn heatmap(mut self, heatmap: HeatmapRecord) -> Self {
        self.heatmap = Some(heatmap);
        self
    }

    pub fn build(self) -> Result<Report> {
        if self.command.is_empty() {
            return Err(Error::MissingField("command"));
        }
        let config = self.config.ok_or(Error::MissingField("config"))?;
        Ok(Report {
            tool: ToolInfo::default(),
            command: self.command,
            config,
            n_vectors: self.n_vectors,
            estimates: self.estimates,
            stats: self.stats,
            heatmap: self.heatmap,
        })
    }
}

pub fn write_report_json(report: &Report, path: impl AsRef<Path>) -> Result<()> {
    write_bytes(path.as_ref(), report.to_json().as_bytes())
}
