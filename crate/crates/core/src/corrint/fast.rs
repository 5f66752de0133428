use rayon::prelude::*;

use super::sum::{tree_reduce, CompensatedSum};
use super::{check_series, check_threshold, DistanceMetric, Kernel};
use crate::embedding::EmbeddedSeries;
use crate::error::{Error, Result};

/// Rows `i` per work item. Fixed so the reduction tree never depends on the
/// number of workers.
const ROWS_PER_BLOCK: usize = 32;

/// Correlation integrals for both kernels over one threshold list.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelIntegrals {
    pub heaviside: Vec<f64>,
    pub exponential: Vec<f64>,
}

impl KernelIntegrals {
    pub fn get(&self, kernel: Kernel) -> &[f64] {
        match kernel {
            Kernel::Heaviside => &self.heaviside,
            Kernel::Exponential => &self.exponential,
        }
    }
}

struct Partial {
    // Pair count whose smallest enclosing threshold index is k.
    first_hit: Vec<u64>,
    exp: Option<Vec<CompensatedSum>>,
}

impl Partial {
    fn new(n_r: usize, with_exp: bool) -> Self {
        Self {
            first_hit: vec![0; n_r + 1],
            exp: with_exp.then(|| vec![CompensatedSum::default(); n_r]),
        }
    }

    fn merge(mut self, other: Partial) -> Partial {
        for (a, b) in self.first_hit.iter_mut().zip(&other.first_hit) {
            *a += b;
        }
        if let (Some(a), Some(b)) = (self.exp.as_mut(), other.exp.as_ref()) {
            for (x, y) in a.iter_mut().zip(b) {
                x.merge(y);
            }
        }
        self
    }
}

fn check_thresholds(r_values: &[f64]) -> Result<()> {
    if r_values.is_empty() {
        return Err(Error::Ordering("threshold list is empty".into()));
    }
    for &r in r_values {
        check_threshold(r)?;
    }
    if let Some(w) = r_values.windows(2).find(|w| !(w[0] < w[1])) {
        return Err(Error::Ordering(format!(
            "thresholds must be strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    Ok(())
}

fn accumulate(
    series: &EmbeddedSeries,
    r_values: &[f64],
    metric: DistanceMetric,
    with_exp: bool,
) -> Result<(Vec<f64>, Option<Vec<f64>>)> {
    check_series(series)?;
    check_thresholds(r_values)?;

    let n = series.n_vectors();
    let n_r = r_values.len();
    let n_blocks = n.div_ceil(ROWS_PER_BLOCK);

    let partials: Vec<Partial> = (0..n_blocks)
        .into_par_iter()
        .map(|block| {
            let mut part = Partial::new(n_r, with_exp);
            let rows = block * ROWS_PER_BLOCK..((block + 1) * ROWS_PER_BLOCK).min(n);
            for i in rows {
                let xi = series.vector(i);
                for j in i + 1..n {
                    let d = metric.distance(xi, series.vector(j));
                    let first = r_values.partition_point(|&r| r < d);
                    part.first_hit[first] += 1;
                    if let Some(exp) = part.exp.as_mut() {
                        for (acc, &r) in exp[first..].iter_mut().zip(&r_values[first..]) {
                            acc.add((-d / r).exp());
                        }
                    }
                }
            }
            part
        })
        .collect();

    let total = tree_reduce(partials, Partial::merge).expect("at least one block");
    let n_pairs = (n as u64 * (n as u64 - 1) / 2) as f64;

    let mut running = 0u64;
    let heaviside = total.first_hit[..n_r]
        .iter()
        .map(|&c| {
            running += c;
            running as f64 / n_pairs
        })
        .collect();
    let exponential = total
        .exp
        .map(|e| e.iter().map(|acc| acc.value() / n_pairs).collect());
    Ok((heaviside, exponential))
}

/// Correlation integral at every threshold in `r_values` (strictly
/// increasing). Each pair distance is computed once.
pub fn correlation_integral_fast(
    series: &EmbeddedSeries,
    r_values: &[f64],
    kernel: Kernel,
    metric: DistanceMetric,
) -> Result<Vec<f64>> {
    match kernel {
        Kernel::Heaviside => Ok(accumulate(series, r_values, metric, false)?.0),
        Kernel::Exponential => Ok(accumulate(series, r_values, metric, true)?
            .1
            .expect("exponential sums requested")),
    }
}

/// Both kernels from a single pass over the pairs.
pub fn correlation_integrals(
    series: &EmbeddedSeries,
    r_values: &[f64],
    metric: DistanceMetric,
) -> Result<KernelIntegrals> {
    let (heaviside, exponential) = accumulate(series, r_values, metric, true)?;
    Ok(KernelIntegrals {
        heaviside,
        exponential: exponential.expect("exponential sums requested"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corrint::correlation_integral_naive;
    use crate::embedding::{embed, EmbeddingConfig};
    use crate::signal_io::RawSignal;
    use proptest::prelude::*;

    fn series(x: &[f64], dim: usize) -> EmbeddedSeries {
        let s = RawSignal::new(x.to_vec(), 1.0, "t", "mem").unwrap();
        embed(&s, &EmbeddingConfig::new(dim, 1)).unwrap()
    }

    fn rel_close(a: f64, b: f64) -> bool {
        if b == 0.0 {
            a.abs() <= 1e-15
        } else {
            ((a - b) / b).abs() <= 1e-12
        }
    }

    #[test]
    fn identical_vectors_saturate_everywhere() {
        let s = series(&[0.2; 10], 2);
        let c = correlation_integral_fast(&s, &[0.001, 0.01, 0.1, 1.0], Kernel::Heaviside, DistanceMetric::Euclidean)
            .unwrap();
        assert_eq!(c, vec![1.0; 4]);
        let c = correlation_integral_fast(&s, &[0.001, 1.0], Kernel::Exponential, DistanceMetric::Euclidean)
            .unwrap();
        assert_eq!(c, vec![1.0; 2]);
    }

    #[test]
    fn unsorted_thresholds_rejected() {
        let s = series(&[0.0, 0.1, 0.2], 1);
        for bad in [&[0.2, 0.1][..], &[0.1, 0.1], &[]] {
            assert!(matches!(
                correlation_integral_fast(&s, bad, Kernel::Heaviside, DistanceMetric::Euclidean),
                Err(Error::Ordering(_))
            ));
        }
        assert!(matches!(
            correlation_integral_fast(&s, &[0.0, 0.1], Kernel::Heaviside, DistanceMetric::Euclidean),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn boundary_distance_counts_as_inside() {
        // d = 0.5 exactly between the two samples
        let s = series(&[0.0, 0.5], 1);
        let c = correlation_integrals(&s, &[0.25, 0.5], DistanceMetric::Euclidean).unwrap();
        assert_eq!(c.heaviside, vec![0.0, 1.0]);
        assert_eq!(c.exponential[1], (-1.0f64).exp());
    }

    #[test]
    fn pool_size_does_not_change_bits() {
        let x: Vec<f64> = (0..700).map(|k| ((k as f64) * 0.37).sin() * 0.3).collect();
        let s = series(&x, 3);
        let r: Vec<f64> = (1..=12).map(|k| 0.005 * k as f64).collect();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| correlation_integrals(&s, &r, DistanceMetric::Euclidean).unwrap())
        };
        let one = run(1);
        for threads in [2, 3, 8] {
            let other = run(threads);
            let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
            assert_eq!(bits(&one.heaviside), bits(&other.heaviside));
            assert_eq!(bits(&one.exponential), bits(&other.exponential));
        }
    }

    fn metric_strategy() -> impl Strategy<Value = DistanceMetric> {
        prop_oneof![
            Just(DistanceMetric::Euclidean),
            Just(DistanceMetric::Chebyshev),
            Just(DistanceMetric::Manhattan),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn matches_naive_oracle(
            x in prop::collection::vec(0.0f64..1.0, 4..120),
            dim in 1usize..4,
            mut r in prop::collection::vec(1e-3f64..1.0, 1..6),
            metric in metric_strategy(),
        ) {
            prop_assume!(x.len() > dim);
            r.sort_by(f64::total_cmp);
            r.dedup();
            let s = series(&x, dim);
            let both = correlation_integrals(&s, &r, metric).unwrap();
            for kernel in Kernel::ALL {
                for (k, &rk) in r.iter().enumerate() {
                    let naive = correlation_integral_naive(&s, rk, kernel, metric).unwrap();
                    prop_assert!(rel_close(both.get(kernel)[k], naive));
                }
                let single = correlation_integral_fast(&s, &r, kernel, metric).unwrap();
                prop_assert_eq!(&single[..], both.get(kernel));
            }
        }

        #[test]
        fn permutation_invariant(
            x in prop::collection::vec(0.0f64..1.0, 5..80),
            seed in any::<u64>(),
            r in 0.01f64..0.8,
        ) {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let s = series(&x, 2);
            let mut rows: Vec<Vec<f64>> = s.vectors().map(<[f64]>::to_vec).collect();
            rows.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let p = EmbeddedSeries::from_rows(&rows).unwrap();
            for kernel in Kernel::ALL {
                let a = correlation_integral_fast(&s, &[r], kernel, DistanceMetric::Euclidean).unwrap()[0];
                let b = correlation_integral_fast(&p, &[r], kernel, DistanceMetric::Euclidean).unwrap()[0];
                prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300) || a == b);
            }
        }

        #[test]
        fn heaviside_is_scale_invariant(
            x in prop::collection::vec(0.0f64..1.0, 5..80),
            r in 0.01f64..0.8,
            metric in metric_strategy(),
        ) {
            // power-of-two scale keeps every product exact
            let s = series(&x, 2);
            let scaled: Vec<f64> = x.iter().map(|v| v * 4.0).collect();
            let t = series(&scaled, 2);
            let a = correlation_integral_fast(&s, &[r], Kernel::Heaviside, metric).unwrap();
            let b = correlation_integral_fast(&t, &[r * 4.0], Kernel::Heaviside, metric).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
