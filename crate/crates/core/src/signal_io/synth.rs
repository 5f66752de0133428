//! Deterministic reference signals with known geometry.

use std::f64::consts::PI;

use super::RawSignal;
use crate::error::{Error, Result};

/// Iterations discarded before the Hénon trajectory is recorded.
pub const HENON_DEFAULT_BURN_IN: usize = 1000;

/// Magnitude beyond which a Hénon trajectory counts as escaped.
pub const HENON_ESCAPE: f64 = 1e10;

fn check_len(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Length {
            what: "generated signal",
            required: 2,
            actual: n,
        });
    }
    Ok(())
}

/// Logistic map `x <- mu * x * (1 - x)` started at `x0`.
pub fn gen_logistic(n: usize, mu: f64, x0: f64) -> Result<RawSignal> {
    check_len(n)?;
    if !(x0 > 0.0 && x0 < 1.0) {
        return Err(Error::Domain(format!("logistic x0 must lie in (0, 1), got {x0}")));
    }
    let mut samples = Vec::with_capacity(n);
    let mut x = x0;
    samples.push(x);
    for _ in 1..n {
        x = mu * x * (1.0 - x);
        samples.push(x);
    }
    RawSignal::new(
        samples,
        1.0,
        "logistic",
        format!("logistic(n={n}, mu={mu}, x0={x0})"),
    )
}

/// x-coordinate of the Hénon map after `burn_in` discarded iterations.
pub fn gen_henon(
    n: usize,
    a: f64,
    b: f64,
    x0: f64,
    y0: f64,
    burn_in: usize,
) -> Result<RawSignal> {
    check_len(n)?;
    let (mut x, mut y) = (x0, y0);
    let mut samples = Vec::with_capacity(n);
    for it in 0..burn_in + n {
        if it >= burn_in {
            samples.push(x);
        }
        let next_x = 1.0 - a * x * x + y;
        y = b * x;
        x = next_x;
        if !(x.abs() <= HENON_ESCAPE) {
            return Err(Error::Divergence {
                iteration: it + 1,
                value: x.abs(),
            });
        }
    }
    RawSignal::new(
        samples,
        1.0,
        "henon",
        format!("henon(n={n}, a={a}, b={b}, x0={x0}, y0={y0}, burn_in={burn_in})"),
    )
}

pub fn gen_sine(n: usize, freq_hz: f64, sample_rate_hz: f64, amplitude: f64) -> Result<RawSignal> {
    check_len(n)?;
    if !(sample_rate_hz > 0.0) || !(freq_hz > 0.0) {
        return Err(Error::Domain(format!(
            "frequency and sample rate must be positive (got {freq_hz} Hz at {sample_rate_hz} Hz)"
        )));
    }
    if freq_hz >= sample_rate_hz / 2.0 {
        return Err(Error::Domain(format!(
            "{freq_hz} Hz is at or above the Nyquist frequency of {} Hz",
            sample_rate_hz / 2.0
        )));
    }
    let step = 2.0 * PI * freq_hz / sample_rate_hz;
    let samples = (0..n).map(|k| amplitude * (step * k as f64).sin()).collect();
    RawSignal::new(
        samples,
        sample_rate_hz,
        "sine",
        format!("sine(n={n}, freq_hz={freq_hz}, fs={sample_rate_hz}, amplitude={amplitude})"),
    )
}
