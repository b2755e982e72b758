//! Histogram-of-oriented-gradients features, the pre-network baseline for
//! feature-discrimination comparisons.
//!
//! Geometry: 8×8 pixel cells, 9 unsigned orientation bins over [0°, 180°),
//! 2×2-cell blocks at stride one cell, block-wise L2 normalization with
//! ε = 1e-5. Gradients are centered finite differences with replicated
//! edges, on the luma grayscale image.

use crate::error::{Error, Result};
use crate::image::ImageTensor;

pub const CELL: usize = 8;
pub const BINS: usize = 9;
pub const BLOCK: usize = 2; // cells per block side
const EPS: f64 = 1e-5;

/// Descriptor length for a square image of side `side`.
pub fn descriptor_len(side: usize) -> usize {
    let cells = side / CELL;
    let blocks = cells.saturating_sub(BLOCK - 1);
    blocks * blocks * BLOCK * BLOCK * BINS
}

/// HOG descriptor of an image (grayscale conversion applied as needed).
pub fn hog_features(image: &ImageTensor) -> Result<Vec<f64>> {
    let side = image.height();
    if side < CELL * BLOCK {
        return Err(Error::Dimension(format!(
            "image side {side} smaller than one {}px block",
            CELL * BLOCK
        )));
    }
    let gray = image.to_grayscale();
    let g = gray.channel(0);
    let at = |y: usize, x: usize| g[y * side + x];

    // centered differences with edge replication
    let mut gx = vec![0.0; side * side];
    let mut gy = vec![0.0; side * side];
    for y in 0..side {
        for x in 0..side {
            let xr = at(y, (x + 1).min(side - 1));
            let xl = at(y, x.saturating_sub(1));
            let yd = at((y + 1).min(side - 1), x);
            let yu = at(y.saturating_sub(1), x);
            gx[y * side + x] = xr - xl;
            gy[y * side + x] = yd - yu;
        }
    }

    // per-cell orientation histograms, magnitude-weighted hard binning
    let cells = side / CELL;
    let mut hist = vec![0.0; cells * cells * BINS];
    for cy in 0..cells {
        for cx in 0..cells {
            let h = &mut hist[(cy * cells + cx) * BINS..(cy * cells + cx + 1) * BINS];
            for py in cy * CELL..(cy + 1) * CELL {
                for px in cx * CELL..(cx + 1) * CELL {
                    let dx = gx[py * side + px];
                    let dy = gy[py * side + px];
                    let mag = (dx * dx + dy * dy).sqrt();
                    if mag == 0.0 {
                        continue;
                    }
                    let mut angle = dy.atan2(dx).to_degrees();
                    if angle < 0.0 {
                        angle += 180.0;
                    }
                    if angle >= 180.0 {
                        angle -= 180.0;
                    }
                    let bin = ((angle / 20.0) as usize).min(BINS - 1);
                    h[bin] += mag;
                }
            }
        }
    }

    // 2x2 blocks, stride 1 cell, L2 normalization
    let blocks = cells - (BLOCK - 1);
    let mut descriptor = Vec::with_capacity(blocks * blocks * BLOCK * BLOCK * BINS);
    for by in 0..blocks {
        for bx in 0..blocks {
            let start = descriptor.len();
            for dy in 0..BLOCK {
                for dx in 0..BLOCK {
                    let cell = ((by + dy) * cells + bx + dx) * BINS;
                    descriptor.extend_from_slice(&hist[cell..cell + BINS]);
                }
            }
            let sq: f64 = descriptor[start..].iter().map(|v| v * v).sum();
            let norm = (sq + EPS * EPS).sqrt();
            for v in &mut descriptor[start..] {
                *v /= norm;
            }
        }
    }
    Ok(descriptor)
}
