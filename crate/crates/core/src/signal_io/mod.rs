//! Signal ingestion: single-channel ASCII files, paired-dataset manifests and
//! synthetic reference signals.

mod manifest;
mod synth;

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

pub use manifest::{load_manifest, DatasetManifest, SignalPair};
pub use synth::{gen_henon, gen_logistic, gen_sine, HENON_DEFAULT_BURN_IN, HENON_ESCAPE};

/// A sampled amplitude sequence.
///
/// Samples are immutable once constructed; every transform returns a new
/// signal.
#[derive(Debug, Clone, PartialEq)]
pub struct RawSignal {
    samples: Vec<f64>,
    sample_rate_hz: f64,
    label: String,
    source: String,
}

impl RawSignal {
    pub fn new(
        samples: Vec<f64>,
        sample_rate_hz: f64,
        label: impl Into<String>,
        source: impl Into<String>,
    ) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::MalformedInput(format!(
                "a signal needs at least 2 samples, got {}",
                samples.len()
            )));
        }
        if !(sample_rate_hz.is_finite() && sample_rate_hz > 0.0) {
            return Err(Error::Domain(format!(
                "sample rate must be positive, got {sample_rate_hz}"
            )));
        }
        if let Some(k) = samples.iter().position(|x| !x.is_finite()) {
            return Err(Error::MalformedInput(format!(
                "sample {k} is not finite ({})",
                samples[k]
            )));
        }
        Ok(Self {
            samples,
            sample_rate_hz,
            label: label.into(),
            source: source.into(),
        })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Same metadata, new samples. The new samples go through the usual
    /// validation.
    pub fn with_samples(&self, samples: Vec<f64>) -> Result<Self> {
        Self::new(
            samples,
            self.sample_rate_hz,
            self.label.clone(),
            self.source.clone(),
        )
    }
}

/// Load a one-value-per-line text signal.
///
/// Blank lines are skipped; line numbers in parse errors are 1-based and
/// count blank lines. Accepts LF and CRLF endings.
pub fn load_ascii_signal(
    path: impl AsRef<Path>,
    sample_rate_hz: f64,
    label: &str,
) -> Result<RawSignal> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })?;

    let mut samples = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let value: f64 = trimmed.parse().map_err(|_| Error::Parse {
            path: path.to_path_buf(),
            line: idx + 1,
            content: trimmed.to_string(),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: idx + 1,
                content: trimmed.to_string(),
            });
        }
        samples.push(value);
    }

    if samples.len() < 2 {
        return Err(Error::MalformedInput(format!(
            "{} holds {} sample(s), need at least 2",
            path.display(),
            samples.len()
        )));
    }
    RawSignal::new(samples, sample_rate_hz, label, path.display().to_string())
}

/// Render samples one per line using the shortest decimal form that
/// round-trips exactly.
pub fn format_ascii_signal(samples: &[f64]) -> String {
    let mut out = String::with_capacity(samples.len() * 20);
    for x in samples {
        out.push_str(&x.to_string());
        out.push('\n');
    }
    out
}

pub fn write_ascii_signal(signal: &RawSignal, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let write = || -> std::io::Result<()> {
        let mut file = fs::File::create(path)?;
        file.write_all(format_ascii_signal(signal.samples()).as_bytes())?;
        file.flush()
    };
    write().map_err(|source| Error::Write {
        path: path.to_path_buf(),
        source,
    })
}
