//! Threshold grids, scaling-region selection and log–log slope fits.
//!
//! The correlation dimension is the slope of `ln C(r)` against `ln r` over a
//! range of thresholds where that relation is linear. Below the range the
//! pair counts run out (`C = 0` or a handful of pairs); above it `C` flattens
//! towards 1.

use serde::Serialize;

use crate::corrint::{grid, CorrIntegralGrid, GridConfig};
use crate::error::{Error, Result};
use crate::signal_io::RawSignal;

/// r² values closer than this are treated as tied.
const R2_TIE: f64 = 1e-12;

/// Geometrically spaced thresholds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RGrid {
    pub values: Vec<f64>,
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
}

impl Default for RGrid {
    /// 1e-4 to 1, ten points per decade.
    fn default() -> Self {
        make_log_r_grid(1e-4, 1.0, 41).expect("valid default grid")
    }
}

/// Logarithmically spaced thresholds from `r_min` to `r_max` inclusive.
/// Endpoints are reproduced exactly.
pub fn make_log_r_grid(r_min: f64, r_max: f64, points: usize) -> Result<RGrid> {
    if !(r_min > 0.0 && r_min.is_finite() && r_max.is_finite()) {
        return Err(Error::Domain(format!(
            "threshold range must be positive and finite, got [{r_min}, {r_max}]"
        )));
    }
    if !(r_min < r_max) {
        return Err(Error::Ordering(format!(
            "r_min ({r_min}) must be below r_max ({r_max})"
        )));
    }
    if points < 2 {
        return Err(Error::Domain(format!("a threshold grid needs ≥ 2 points, got {points}")));
    }
    if r_max > 1.0 {
        log::warn!("threshold grid extends beyond 1 (r_max = {r_max})");
    }
    let lo = r_min.log10();
    let step = (r_max.log10() - lo) / (points - 1) as f64;
    let mut values: Vec<f64> = (0..points)
        .map(|k| 10f64.powf(lo + step * k as f64))
        .collect();
    values[0] = r_min;
    values[points - 1] = r_max;
    Ok(RGrid {
        values,
        r_min,
        r_max,
        points,
    })
}

/// Inclusive index range into a threshold grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingRegion {
    pub start_index: usize,
    pub end_index: usize,
    pub r_lo: f64,
    pub r_hi: f64,
}

impl ScalingRegion {
    pub fn new(r_values: &[f64], start_index: usize, end_index: usize) -> Result<Self> {
        if end_index >= r_values.len() || start_index > end_index {
            return Err(Error::Region(format!(
                "indices {start_index}..={end_index} do not fit a grid of {} points",
                r_values.len()
            )));
        }
        if end_index - start_index + 1 < 3 {
            return Err(Error::Region(format!(
                "a scaling region needs ≥ 3 points, got {}",
                end_index - start_index + 1
            )));
        }
        Ok(Self {
            start_index,
            end_index,
            r_lo: r_values[start_index],
            r_hi: r_values[end_index],
        })
    }

    pub fn len(&self) -> usize {
        self.end_index - self.start_index + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Ordinary least-squares line through `(ln r, ln C)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogLogFit {
    pub slope: f64,
    /// Natural-log intercept.
    pub intercept: f64,
    pub r_squared: f64,
    pub region: ScalingRegion,
    pub n_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimensionEstimate {
    pub m: usize,
    #[serde(flatten)]
    pub fit: LogLogFit,
}

pub fn fit_loglog_slope(r_values: &[f64], c_values: &[f64], region: &ScalingRegion) -> Result<LogLogFit> {
    if r_values.len() != c_values.len() {
        return Err(Error::Shape {
            expected: r_values.len(),
            actual: c_values.len(),
        });
    }
    let region = ScalingRegion::new(r_values, region.start_index, region.end_index)?;
    let range = region.start_index..=region.end_index;

    let mut xs = Vec::with_capacity(region.len());
    let mut ys = Vec::with_capacity(region.len());
    for k in range {
        let (r, c) = (r_values[k], c_values[k]);
        if !(c > 0.0) || !(r > 0.0) {
            return Err(Error::DegenerateFit(format!(
                "non-positive value at index {k} (r = {r}, C = {c}); narrow the region"
            )));
        }
        xs.push(r.ln());
        ys.push(c.ln());
    }

    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(&ys) {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("thresholds in the region coincide".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    // A flat window explains nothing; score it as uninformative.
    let r_squared = if syy == 0.0 {
        0.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };

    Ok(LogLogFit {
        slope,
        intercept,
        r_squared,
        region,
        n_points: xs.len(),
    })
}

/// Parameters for [`auto_scaling_region`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionSearch {
    /// Points per candidate window.
    pub window: usize,
    /// Windows whose mean C exceeds this are treated as saturated.
    pub saturation: f64,
}

impl Default for RegionSearch {
    fn default() -> Self {
        Self {
            window: 5,
            saturation: 0.9,
        }
    }
}

/// Pick the contiguous window with the best linear fit in log–log space.
///
/// Candidates contain only positive C and have mean C at or below the
/// saturation level. Ties within 1e-12 in r² go to the smaller thresholds.
pub fn auto_scaling_region(
    r_values: &[f64],
    c_values: &[f64],
    search: &RegionSearch,
) -> Result<ScalingRegion> {
    let w = search.window;
    if w < 3 {
        return Err(Error::Region(format!("window must be ≥ 3, got {w}")));
    }
    if r_values.len() != c_values.len() {
        return Err(Error::Shape {
            expected: r_values.len(),
            actual: c_values.len(),
        });
    }
    if r_values.len() < w {
        return Err(Error::NoScalingRegion(format!(
            "grid of {} points is shorter than the window of {w}",
            r_values.len()
        )));
    }

    let mut best: Option<(f64, ScalingRegion)> = None;
    for start in 0..=r_values.len() - w {
        let cs = &c_values[start..start + w];
        if cs.iter().any(|&c| !(c > 0.0)) {
            continue;
        }
        if cs.iter().sum::<f64>() / w as f64 > search.saturation {
            continue;
        }
        let region = ScalingRegion::new(r_values, start, start + w - 1)?;
        let fit = fit_loglog_slope(r_values, c_values, &region)?;
        match best {
            Some((r2, _)) if fit.r_squared <= r2 + R2_TIE => {}
            _ => best = Some((fit.r_squared, region)),
        }
    }

    best.map(|(_, region)| region).ok_or_else(|| {
        Error::NoScalingRegion(format!(
            "no window of {w} positive, unsaturated (mean C ≤ {}) points",
            search.saturation
        ))
    })
}

/// Region search and fit for each row of a correlation-integral table.
pub fn estimate_rows(
    m_values: &[usize],
    r_values: &[f64],
    c: &[Vec<f64>],
    search: &RegionSearch,
) -> Result<Vec<DimensionEstimate>> {
    m_values
        .iter()
        .zip(c)
        .map(|(&m, row)| {
            let tag = |e: Error| match e {
                Error::NoScalingRegion(msg) => Error::NoScalingRegion(format!("m = {m}: {msg}")),
                other => other,
            };
            let region = auto_scaling_region(r_values, row, search).map_err(tag)?;
            let fit = fit_loglog_slope(r_values, row, &region)?;
            Ok(DimensionEstimate { m, fit })
        })
        .collect()
}

pub fn estimate_grid(grid: &CorrIntegralGrid, search: &RegionSearch) -> Result<Vec<DimensionEstimate>> {
    estimate_rows(&grid.m_values, &grid.r_values, &grid.c, search)
}

/// Full pipeline: correlation-integral grid, then a slope per `m`.
pub fn estimate_cd(
    signal: &RawSignal,
    config: &GridConfig,
    search: &RegionSearch,
) -> Result<Vec<DimensionEstimate>> {
    let g = grid(signal, config)?;
    estimate_grid(&g, search)
}
