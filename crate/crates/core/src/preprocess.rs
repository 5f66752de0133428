//! Band limiting and amplitude normalization applied before embedding.
//!
//! The low-pass stage is a linear-phase FIR: a Hamming-windowed sinc whose
//! length follows the Hamming transition-width rule `N ≈ 3.3 · fs / Δf`.
//! Taps are rescaled to sum to one so the DC gain is exactly unity.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::signal_io::RawSignal;

/// Hamming-window transition-width constant.
const HAMMING_WIDTH_FACTOR: f64 = 3.3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FilterSpec {
    pub cutoff_hz: f64,
    pub transition_hz: f64,
}

impl Default for FilterSpec {
    fn default() -> Self {
        Self {
            cutoff_hz: 60.0,
            transition_hz: 10.0,
        }
    }
}

impl FilterSpec {
    pub fn new(cutoff_hz: f64, transition_hz: f64) -> Self {
        Self {
            cutoff_hz,
            transition_hz,
        }
    }

    /// Check the band edges against the Nyquist frequency of `fs`.
    pub fn validate(&self, sample_rate_hz: f64) -> Result<()> {
        if !(self.cutoff_hz > 0.0 && self.transition_hz > 0.0) {
            return Err(Error::Domain(format!(
                "cutoff ({}) and transition width ({}) must be positive",
                self.cutoff_hz, self.transition_hz
            )));
        }
        let nyquist = sample_rate_hz / 2.0;
        if self.cutoff_hz + self.transition_hz / 2.0 >= nyquist {
            return Err(Error::Domain(format!(
                "stopband edge {} Hz is not below the Nyquist frequency {nyquist} Hz",
                self.cutoff_hz + self.transition_hz / 2.0
            )));
        }
        Ok(())
    }

    /// Smallest odd length ≥ 3.3·fs/Δf, and at least 3.
    pub fn tap_count(&self, sample_rate_hz: f64) -> usize {
        let n = (HAMMING_WIDTH_FACTOR * sample_rate_hz / self.transition_hz).ceil() as usize;
        let n = n.max(3);
        if n.is_multiple_of(2) {
            n + 1
        } else {
            n
        }
    }

    /// Design the filter taps for a given sample rate.
    pub fn design(&self, sample_rate_hz: f64) -> Result<Vec<f64>> {
        self.validate(sample_rate_hz)?;
        let n = self.tap_count(sample_rate_hz);
        let center = (n - 1) as f64 / 2.0;
        let fc = self.cutoff_hz / sample_rate_hz;

        let mut taps = vec![0.0; n];
        for k in 0..=n / 2 {
            let x = k as f64 - center;
            let ideal = if x == 0.0 {
                2.0 * fc
            } else {
                (2.0 * PI * fc * x).sin() / (PI * x)
            };
            let window = 0.54 - 0.46 * (2.0 * PI * k as f64 / (n - 1) as f64).cos();
            // mirror so the taps are exactly symmetric (linear phase)
            taps[k] = ideal * window;
            taps[n - 1 - k] = taps[k];
        }

        let total: f64 = taps.iter().sum();
        for t in &mut taps {
            *t /= total;
        }
        Ok(taps)
    }
}

/// Zero-phase application of `lowpass` taps with mirrored edges.
///
/// Output has the input's length and timing. The mirror excludes the edge
/// sample itself (`x[-k] = x[k]`).
pub fn lowpass_fir(signal: &RawSignal, spec: &FilterSpec) -> Result<RawSignal> {
    let taps = spec.design(signal.sample_rate_hz())?;
    let n = signal.len();
    if n < taps.len() {
        return Err(Error::Length {
            what: "low-pass filter input",
            required: taps.len(),
            actual: n,
        });
    }
    let filtered = apply_symmetric(signal.samples(), &taps);
    signal.with_samples(filtered)
}

fn apply_symmetric(x: &[f64], taps: &[f64]) -> Vec<f64> {
    let half = taps.len() / 2;
    let n = x.len();
    let mut padded = Vec::with_capacity(n + 2 * half);
    padded.extend((1..=half).rev().map(|k| x[k]));
    padded.extend_from_slice(x);
    padded.extend((1..=half).map(|k| x[n - 1 - k]));

    padded
        .windows(taps.len())
        .map(|w| w.iter().zip(taps).map(|(a, b)| a * b).sum())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NormalizationMode {
    /// Divide by the signal's 1-norm `Σ|x|`.
    #[default]
    #[serde(rename = "l1")]
    L1Signal,
    /// Affine map onto [0, 1].
    #[serde(rename = "minmax")]
    MinMax01,
    None,
}

impl fmt::Display for NormalizationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormalizationMode::L1Signal => "l1",
            NormalizationMode::MinMax01 => "minmax",
            NormalizationMode::None => "none",
        })
    }
}

pub fn normalize(signal: &RawSignal, mode: NormalizationMode) -> Result<RawSignal> {
    let x = signal.samples();
    let out = match mode {
        NormalizationMode::None => return Ok(signal.clone()),
        NormalizationMode::L1Signal => {
            let norm: f64 = x.iter().map(|v| v.abs()).sum();
            if norm == 0.0 {
                return Err(Error::DegenerateSignal(format!(
                    "{}: all samples are zero, 1-norm undefined",
                    signal.label()
                )));
            }
            x.iter().map(|v| v / norm).collect()
        }
        NormalizationMode::MinMax01 => {
            let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if hi <= lo {
                return Err(Error::DegenerateSignal(format!(
                    "{}: constant signal cannot be min-max scaled",
                    signal.label()
                )));
            }
            let span = hi - lo;
            x.iter().map(|v| ((v - lo) / span).clamp(0.0, 1.0)).collect()
        }
    };
    signal.with_samples(out)
}

/// Filter (optional) followed by normalization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Preprocessing {
    pub filter: Option<FilterSpec>,
    pub normalization: NormalizationMode,
}

impl Default for Preprocessing {
    fn default() -> Self {
        Self {
            filter: Some(FilterSpec::default()),
            normalization: NormalizationMode::L1Signal,
        }
    }
}

impl Preprocessing {
    pub fn none() -> Self {
        Self {
            filter: None,
            normalization: NormalizationMode::None,
        }
    }

    pub fn apply(&self, signal: &RawSignal) -> Result<RawSignal> {
        let filtered = match &self.filter {
            Some(spec) => lowpass_fir(signal, spec)?,
            None => signal.clone(),
        };
        normalize(&filtered, self.normalization)
    }
}
