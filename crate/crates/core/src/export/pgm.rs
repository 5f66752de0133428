use std::path::Path;

use super::csv::write_bytes;
use crate::corrint::DistanceMatrix;
use crate::error::Result;

/// 8-bit grayscale rendering of a distance matrix.
///
/// Intensity is linear in distance: 0 maps to black and the largest
/// off-diagonal distance `d_max` to 255. `inverted` flips the polarity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeatmapImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
    pub inverted: bool,
}

impl HeatmapImage {
    pub fn from_matrix(matrix: &DistanceMatrix, inverted: bool) -> (Self, f64) {
        let n = matrix.n();
        let d_max = matrix.max_distance();
        let mut pixels = Vec::with_capacity(n * n);
        for i in 0..n {
            pixels.extend(matrix.row(i).iter().map(|&d| {
                let level = if d_max > 0.0 {
                    // f64::round rounds half away from zero
                    (255.0 * d / d_max).round().clamp(0.0, 255.0) as u8
                } else {
                    0
                };
                if inverted {
                    255 - level
                } else {
                    level
                }
            }));
        }
        (
            Self {
                width: n,
                height: n,
                pixels,
                inverted,
            },
            d_max,
        )
    }

    /// Binary PGM (`P5`, maxval 255).
    pub fn to_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }
}

/// Render and write `matrix`; returns the `d_max` used for scaling.
pub fn write_heatmap_pgm(matrix: &DistanceMatrix, inverted: bool, path: impl AsRef<Path>) -> Result<f64> {
    let (image, d_max) = HeatmapImage::from_matrix(matrix, inverted);
    write_bytes(path.as_ref(), &image.to_pgm())?;
    Ok(d_max)
}
