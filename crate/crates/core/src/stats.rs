//! Paired two-condition comparisons of correlation integrals.

use rayon::prelude::*;
use serde::Serialize;

use crate::corrint::{correlation_integrals, CompensatedSum, DistanceMetric, Kernel, KernelIntegrals};
use crate::embedding::{embed, EmbeddingConfig};
use crate::error::{Error, Result};
use crate::preprocess::Preprocessing;
use crate::signal_io::DatasetManifest;

/// One pair's correlation integrals at a fixed `(m, r, kernel)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedResult {
    pub pair_id: String,
    pub c_a: f64,
    pub c_b: f64,
    /// `c_a - c_b`.
    pub difference: f64,
    pub m: usize,
    pub r: f64,
    pub kernel: Kernel,
}

impl PairedResult {
    pub fn new(pair_id: impl Into<String>, c_a: f64, c_b: f64, m: usize, r: f64, kernel: Kernel) -> Self {
        Self {
            pair_id: pair_id.into(),
            c_a,
            c_b,
            difference: c_a - c_b,
            m,
            r,
            kernel,
        }
    }

    /// Same pair with the conditions exchanged.
    pub fn swapped(&self) -> Self {
        Self::new(self.pair_id.clone(), self.c_b, self.c_a, self.m, self.r, self.kernel)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SummaryStat {
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation (n − 1 denominator).
    pub std_dev: f64,
    pub std_err: f64,
}

/// Differences in input order. All entries must share `(m, r, kernel)`.
pub fn paired_differences(results: &[PairedResult]) -> Result<Vec<f64>> {
    let first = results
        .first()
        .ok_or(Error::SampleSize { needed: 1, got: 0 })?;
    if let Some(odd) = results
        .iter()
        .find(|p| p.m != first.m || p.r != first.r || p.kernel != first.kernel)
    {
        return Err(Error::Consistency(format!(
            "pair {} was computed at (m={}, r={}, {}) but pair {} at (m={}, r={}, {})",
            odd.pair_id, odd.m, odd.r, odd.kernel, first.pair_id, first.m, first.r, first.kernel
        )));
    }
    Ok(results.iter().map(|p| p.difference).collect())
}

pub fn mean_stderr(values: &[f64]) -> Result<SummaryStat> {
    let n = values.len();
    if n < 2 {
        return Err(Error::SampleSize { needed: 2, got: n });
    }
    let nf = n as f64;
    let mean = values.iter().copied().collect::<CompensatedSum>().value() / nf;
    let ss = values
        .iter()
        .map(|v| (v - mean) * (v - mean))
        .collect::<CompensatedSum>()
        .value();
    let std_dev = (ss / (nf - 1.0)).sqrt();
    Ok(SummaryStat {
        n,
        mean,
        std_dev,
        std_err: std_dev / nf.sqrt(),
    })
}

/// Settings shared by [`compare`] and [`threshold_scan`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedConfig {
    pub m: usize,
    pub lag: usize,
    pub r_values: Vec<f64>,
    pub metric: DistanceMetric,
    pub preprocessing: Preprocessing,
}

/// Correlation integrals of both conditions of one pair, both kernels, every
/// threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct PairEvaluation {
    pub pair_id: String,
    pub a: KernelIntegrals,
    pub b: KernelIntegrals,
}

impl PairEvaluation {
    pub fn result(&self, kernel: Kernel, r_index: usize, config: &PairedConfig) -> PairedResult {
        PairedResult::new(
            self.pair_id.clone(),
            self.a.get(kernel)[r_index],
            self.b.get(kernel)[r_index],
            config.m,
            config.r_values[r_index],
            kernel,
        )
    }
}

/// Evaluate every manifest pair. Output follows manifest order.
pub fn evaluate_pairs(manifest: &DatasetManifest, config: &PairedConfig) -> Result<Vec<PairEvaluation>> {
    let embedding = EmbeddingConfig::new(config.m, config.lag);
    let run = |signal: &crate::signal_io::RawSignal| -> Result<KernelIntegrals> {
        let prepared = config.preprocessing.apply(signal)?;
        let series = embed(&prepared, &embedding)?;
        correlation_integrals(&series, &config.r_values, config.metric)
    };
    manifest
        .entries
        .par_iter()
        .map(|pair| {
            log::info!("evaluating pair {}", pair.id);
            let (a, b) = pair.load(manifest.sample_rate_hz)?;
            let a = run(&a).map_err(|e| e.in_pair(&pair.id))?;
            let b = run(&b).map_err(|e| e.in_pair(&pair.id))?;
            Ok(PairEvaluation {
                pair_id: pair.id.clone(),
                a,
                b,
            })
        })
        .collect()
}

/// Per-kernel paired results at a single `(m, r)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelComparison {
    pub kernel: Kernel,
    pub pairs: Vec<PairedResult>,
    pub summary: SummaryStat,
}

/// Both kernels at the first threshold of `config.r_values`.
pub fn compare(manifest: &DatasetManifest, config: &PairedConfig) -> Result<Vec<KernelComparison>> {
    if config.r_values.len() != 1 {
        return Err(Error::Consistency(format!(
            "comparison runs at one threshold, got {}",
            config.r_values.len()
        )));
    }
    let evals = evaluate_pairs(manifest, config)?;
    comparisons_from(&evals, config, 0)
}

fn comparisons_from(
    evals: &[PairEvaluation],
    config: &PairedConfig,
    r_index: usize,
) -> Result<Vec<KernelComparison>> {
    Kernel::ALL
        .iter()
        .map(|&kernel| {
            let pairs: Vec<PairedResult> = evals.iter().map(|e| e.result(kernel, r_index, config)).collect();
            let summary = mean_stderr(&paired_differences(&pairs)?)?;
            Ok(KernelComparison { kernel, pairs, summary })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanRow {
    pub kernel: Kernel,
    pub r: f64,
    pub m: usize,
    #[serde(flatten)]
    pub stat: SummaryStat,
}

/// Summary of paired differences for each kernel and threshold, ordered by
/// kernel (cd first) then ascending r.
pub fn threshold_scan(manifest: &DatasetManifest, config: &PairedConfig) -> Result<Vec<ScanRow>> {
    let evals = evaluate_pairs(manifest, config)?;
    scan_from(&evals, config)
}

pub fn scan_from(evals: &[PairEvaluation], config: &PairedConfig) -> Result<Vec<ScanRow>> {
    let mut rows = Vec::with_capacity(2 * config.r_values.len());
    for kernel in Kernel::ALL {
        for (k, &r) in config.r_values.iter().enumerate() {
            let pairs: Vec<PairedResult> = evals.iter().map(|e| e.result(kernel, k, config)).collect();
            let stat = mean_stderr(&paired_differences(&pairs)?)?;
            rows.push(ScanRow {
                kernel,
                r,
                m: config.m,
                stat,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pr(id: &str, a: f64, b: f64) -> PairedResult {
        PairedResult::new(id, a, b, 15, 0.003, Kernel::Exponential)
    }

    #[test]
    fn differences_in_order() {
        let d = paired_differences(&[pr("x", 0.8, 0.3), pr("y", 0.6, 0.2)]).unwrap();
        assert!((d[0] - 0.5).abs() < 1e-15 && (d[1] - 0.4).abs() < 1e-15);
    }

    #[test]
    fn identical_conditions_give_zero() {
        assert_eq!(paired_differences(&[pr("x", 0.42, 0.42)]).unwrap(), vec![0.0]);
    }

    #[test]
    fn mixed_thresholds_rejected() {
        let mut odd = pr("y", 0.5, 0.1);
        odd.r = 0.004;
        assert!(matches!(
            paired_differences(&[pr("x", 0.8, 0.3), odd]),
            Err(Error::Consistency(_))
        ));
        assert!(paired_differences(&[]).is_err());
    }

    #[test]
    fn hand_cases() {
        let s = mean_stderr(&[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!((s.mean, s.std_err), (1.0, 0.0));
        let s = mean_stderr(&[2.0, 4.0]).unwrap();
        assert_eq!(s.mean, 3.0);
        assert_eq!(s.std_dev, 2f64.sqrt());
        assert_eq!(s.std_err, 1.0);
        assert!(matches!(mean_stderr(&[1.0]), Err(Error::SampleSize { needed: 2, got: 1 })));
    }

    #[test]
    fn seeded_draws_match_two_pass() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        let v: Vec<f64> = (0..1000).map(|_| rng.gen_range(-0.05..0.2)).collect();
        let s = mean_stderr(&v).unwrap();

        let n = v.len() as f64;
        let mut total = 0.0;
        for x in &v {
            total += x;
        }
        let mean = total / n;
        let mut ss = 0.0;
        for x in &v {
            ss += (x - mean).powi(2);
        }
        let se = (ss / (n - 1.0)).sqrt() / n.sqrt();
        assert!((s.mean - mean).abs() <= 1e-12);
        assert!((s.std_err - se).abs() <= 1e-12);
    }

    proptest! {
        #[test]
        fn translation_shifts_mean_only(
            v in prop::collection::vec(-1.0f64..1.0, 2..200),
            c in -10.0f64..10.0,
        ) {
            let a = mean_stderr(&v).unwrap();
            let shifted: Vec<f64> = v.iter().map(|x| x + c).collect();
            let b = mean_stderr(&shifted).unwrap();
            prop_assert!((b.mean - a.mean - c).abs() <= 1e-12);
            prop_assert!((b.std_err - a.std_err).abs() <= 1e-12);
        }

        #[test]
        fn swapping_conditions_negates(
            pairs in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..50),
        ) {
            let fwd: Vec<PairedResult> = pairs.iter().enumerate()
                .map(|(k, (a, b))| pr(&k.to_string(), *a, *b)).collect();
            let back: Vec<PairedResult> = fwd.iter().map(PairedResult::swapped).collect();
            let d1 = paired_differences(&fwd).unwrap();
            let d2 = paired_differences(&back).unwrap();
            for (x, y) in d1.iter().zip(&d2) {
                prop_assert_eq!(*x, -*y);
            }
        }
    }
}
