//! JSON manifests describing paired two-condition datasets.
//!
//! ```json
//! {
//!   "sample_rate_hz": 173.61,
//!   "pairs": [
//!     { "id": "p01", "path_a": "F/F001.txt", "path_b": "S/S001.txt",
//!       "label_a": "interictal", "label_b": "ictal" }
//!   ]
//! }
//! ```
//!
//! Relative paths resolve against the manifest's directory. An optional
//! free-text `notes` key is accepted; any other key is rejected.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use super::{load_ascii_signal, RawSignal};
use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ManifestFile {
    sample_rate_hz: f64,
    pairs: Vec<PairFile>,
    #[serde(default)]
    notes: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairFile {
    id: String,
    path_a: PathBuf,
    path_b: PathBuf,
    label_a: String,
    label_b: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignalPair {
    pub id: String,
    pub path_a: PathBuf,
    pub path_b: PathBuf,
    pub label_a: String,
    pub label_b: String,
}

impl SignalPair {
    /// Load both signals; failures are tagged with the pair id.
    pub fn load(&self, sample_rate_hz: f64) -> Result<(RawSignal, RawSignal)> {
        let a = load_ascii_signal(&self.path_a, sample_rate_hz, &self.label_a)
            .map_err(|e| e.in_pair(&self.id))?;
        let b = load_ascii_signal(&self.path_b, sample_rate_hz, &self.label_b)
            .map_err(|e| e.in_pair(&self.id))?;
        Ok((a, b))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetManifest {
    pub entries: Vec<SignalPair>,
    pub sample_rate_hz: f64,
    pub notes: Option<String>,
}

impl DatasetManifest {
    /// Human-readable names of the two conditions, `(a, b)`.
    pub fn condition_labels(&self) -> (&str, &str) {
        let first = &self.entries[0];
        (&first.label_a, &first.label_b)
    }
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<DatasetManifest> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let raw: ManifestFile =
        serde_json::from_str(&text).map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;

    if !(raw.sample_rate_hz.is_finite() && raw.sample_rate_hz > 0.0) {
        return Err(Error::Validation(format!(
            "sample_rate_hz must be positive, got {}",
            raw.sample_rate_hz
        )));
    }
    if raw.pairs.is_empty() {
        return Err(Error::Validation("manifest lists no pairs".into()));
    }

    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut seen = HashSet::new();
    let mut entries = Vec::with_capacity(raw.pairs.len());
    for pair in raw.pairs {
        if !seen.insert(pair.id.clone()) {
            return Err(Error::Validation(format!("duplicate pair id {:?}", pair.id)));
        }
        if pair.label_a == pair.label_b {
            return Err(Error::Validation(format!(
                "pair {:?}: both conditions are labelled {:?}",
                pair.id, pair.label_a
            )));
        }
        let path_a = base.join(&pair.path_a);
        let path_b = base.join(&pair.path_b);
        for p in [&path_a, &path_b] {
            if !p.is_file() {
                return Err(Error::Validation(format!(
                    "pair {:?}: signal file {} does not exist",
                    pair.id,
                    p.display()
                )));
            }
        }
        entries.push(SignalPair {
            id: pair.id,
            path_a,
            path_b,
            label_a: pair.label_a,
            label_b: pair.label_b,
        });
    }

    let (la, lb) = (&entries[0].label_a, &entries[0].label_b);
    if let Some(odd) = entries
        .iter()
        .find(|e| &e.label_a != la || &e.label_b != lb)
    {
        return Err(Error::Validation(format!(
            "pair {:?} labels its conditions ({:?}, {:?}) but earlier pairs use ({la:?}, {lb:?})",
            odd.id, odd.label_a, odd.label_b
        )));
    }

    Ok(DatasetManifest {
        entries,
        sample_rate_hz: raw.sample_rate_hz,
        notes: raw.notes,
    })
}
