//! KDE-based class feature distributions and inter-class variance.
//!
//! Per feature dimension, each class's sampled feature values become a
//! Gaussian kernel density estimate on a shared uniform grid (bandwidth by
//! Silverman's rule). The overlap of two class curves is, by default, the
//! area ratio Σ min / Σ max — bounded in [0, 1] and matching the geometric
//! "overlapped area" picture; the literal pointwise-ratio reading is kept
//! behind [`OverlapMode::PointwiseMean`]. Inter-class variance is one minus
//! the mean overlap across all strict class pairs, averaged over feature
//! dimensions.

use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::stats::{iqr, mean, pairwise_sum, sample_std};

const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_5;

/// Kernel bandwidth with a degeneracy marker for all-identical samples.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bandwidth {
    pub value: f64,
    pub degenerate: bool,
}

/// Silverman's rule, robust form: h = 0.9 · min(σ, IQR/1.34) · N^(-1/5).
///
/// A zero IQR with positive spread falls back to σ alone; fully identical
/// samples fall back to a tiny bandwidth proportional to the value's
/// magnitude, flagged as degenerate.
pub fn silverman_bandwidth(samples: &[f64]) -> Result<Bandwidth> {
    if samples.len() < 2 {
        return Err(Error::Data(format!(
            "bandwidth estimation needs at least 2 samples, got {}",
            samples.len()
        )));
    }
    let sigma = sample_std(samples);
    let spread_iqr = iqr(samples) / 1.34;
    let scale = match (sigma > 0.0, spread_iqr > 0.0) {
        (true, true) => sigma.min(spread_iqr),
        (true, false) => sigma,
        _ => {
            let v = samples[0].abs();
            return Ok(Bandwidth {
                value: 1e-6 * (1.0 + v),
                degenerate: true,
            });
        }
    };
    let n = samples.len() as f64;
    Ok(Bandwidth {
        value: 0.9 * scale * n.powf(-0.2),
        degenerate: false,
    })
}

/// A density estimate evaluated on a uniform grid.
#[derive(Clone, Debug, PartialEq)]
pub struct KdeCurve {
    grid: Vec<f64>,
    density: Vec<f64>,
    bandwidth: Bandwidth,
}

impl KdeCurve {
    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn density(&self) -> &[f64] {
        &self.density
    }

    pub fn bandwidth(&self) -> Bandwidth {
        self.bandwidth
    }

    /// Trapezoidal integral over the grid; the deficit from 1 is the mass
    /// beyond the grid ends.
    pub fn mass(&self) -> f64 {
        if self.grid.len() < 2 {
            return 0.0;
        }
        let step = self.grid[1] - self.grid[0];
        let inner: f64 = self.density[1..self.density.len() - 1].iter().sum();
        step * (inner + 0.5 * (self.density[0] + self.density[self.density.len() - 1]))
    }
}

/// Uniform grid of `points` values covering [lo, hi].
pub fn uniform_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    assert!(points >= 2 && hi > lo);
    let step = (hi - lo) / (points - 1) as f64;
    (0..points).map(|i| lo + step * i as f64).collect()
}

/// Gaussian-kernel density estimate of `samples` on `grid`.
pub fn kde(samples: &[f64], grid: &[f64]) -> Result<KdeCurve> {
    if samples.is_empty() {
        return Err(Error::Data("kde of no samples".into()));
    }
    let bandwidth = if samples.len() == 1 {
        Bandwidth {
            value: 1.0,
            degenerate: false,
        }
    } else {
        silverman_bandwidth(samples)?
    };
    kde_with_bandwidth(samples, grid, bandwidth)
}

/// Density estimate with an explicit bandwidth.
pub fn kde_with_bandwidth(samples: &[f64], grid: &[f64], bandwidth: Bandwidth) -> Result<KdeCurve> {
    if samples.is_empty() {
        return Err(Error::Data("kde of no samples".into()));
    }
    let h = bandwidth.value;
    let norm = 1.0 / (samples.len() as f64 * h * SQRT_TWO_PI);
    let inv_h = 1.0 / h;
    let density: Vec<f64> = grid
        .iter()
        .map(|&x| {
            let mut acc = 0.0;
            for &xi in samples {
                let u = (x - xi) * inv_h;
                acc += (-0.5 * u * u).exp();
            }
            acc * norm
        })
        .collect();
    Ok(KdeCurve {
        grid: grid.to_vec(),
        density,
        bandwidth,
    })
}

/// How two class curves are reduced to a single overlap number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverlapMode {
    /// Σ min / Σ max over the grid (area intersection-over-union). Default.
    AreaRatio,
    /// Mean of pointwise min/max ratios over grid points where max > 0.
    PointwiseMean,
}

impl std::fmt::Display for OverlapMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OverlapMode::AreaRatio => write!(f, "area_ratio"),
            OverlapMode::PointwiseMean => write!(f, "pointwise_mean"),
        }
    }
}

/// Overlap of two curves on a shared grid, in [0, 1]; 1 iff identical.
/// Grid points where both densities are zero contribute nothing.
pub fn inter_class(a: &KdeCurve, b: &KdeCurve, mode: OverlapMode) -> Result<f64> {
    if a.grid != b.grid {
        return Err(Error::Dimension(
            "overlap requires curves on the same grid".into(),
        ));
    }
    match mode {
        OverlapMode::AreaRatio => {
            let mut num = 0.0;
            let mut den = 0.0;
            for (&x, &y) in a.density.iter().zip(&b.density) {
                num += x.min(y);
                den += x.max(y);
            }
            Ok(if den == 0.0 { 0.0 } else { num / den })
        }
        OverlapMode::PointwiseMean => {
            let mut acc = 0.0;
            let mut n = 0usize;
            for (&x, &y) in a.density.iter().zip(&b.density) {
                let hi = x.max(y);
                if hi > 0.0 {
                    acc += x.min(y) / hi;
                    n += 1;
                }
            }
            Ok(if n == 0 { 0.0 } else { acc / n as f64 })
        }
    }
}

/// N×D feature samples of one class.
#[derive(Clone, Debug)]
pub struct FeatureMatrix {
    rows: usize,
    dims: usize,
    data: Vec<f64>,
    class_label: usize,
}

impl FeatureMatrix {
    pub fn new(rows: usize, dims: usize, data: Vec<f64>, class_label: usize) -> Result<Self> {
        if data.len() != rows * dims {
            return Err(Error::Dimension(format!(
                "feature data length {} != {rows}x{dims}",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numerical("non-finite feature value".into()));
        }
        Ok(Self {
            rows,
            dims,
            data,
            class_label,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn class_label(&self) -> usize {
        self.class_label
    }

    /// Values of dimension `k` across samples.
    pub fn column(&self, k: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self.data[i * self.dims + k]).collect()
    }
}

/// Pairwise overlap matrix plus the scalar inter-class variance.
#[derive(Clone, Debug)]
pub struct VarianceReport {
    class_count: usize,
    /// C×C, None for pairs involving an excluded class; diagonal is 1.
    pairwise: Vec<Option<f64>>,
    pub variance: f64,
    pub dims: usize,
    pub grid_size: usize,
    pub overlap_mode: OverlapMode,
    /// Classes skipped for having fewer than 2 samples.
    pub excluded: Vec<usize>,
}

impl VarianceReport {
    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn pair(&self, i: usize, j: usize) -> Option<f64> {
        self.pairwise[i * self.class_count + j]
    }

    /// JSON: {pairs: [[i,j,value]…], variance, D, grid_size, overlap_mode}.
    pub fn to_json(&self) -> String {
        let mut pairs = Vec::new();
        for i in 0..self.class_count {
            for j in i + 1..self.class_count {
                if let Some(v) = self.pair(i, j) {
                    pairs.push(json!([i, j, v]));
                }
            }
        }
        serde_json::to_string_pretty(&json!({
            "pairs": pairs,
            "variance": self.variance,
            "D": self.dims,
            "grid_size": self.grid_size,
            "overlap_mode": self.overlap_mode,
            "excluded": self.excluded,
        }))
        .expect("report serializes")
    }
}

/// Variance from strict-pair overlaps: 1 − mean over i<j.
pub fn variance_from_pairs(pair_overlaps: &[f64]) -> f64 {
    if pair_overlaps.is_empty() {
        return 0.0;
    }
    1.0 - mean(pair_overlaps)
}

/// Default evaluation grid resolution per feature dimension.
pub const DEFAULT_GRID_SIZE: usize = 256;

/// Inter-class variance over per-class feature matrices.
///
/// Per dimension: a shared grid spans the pooled sample range padded by 3×
/// the largest class bandwidth; per-class KDE curves are compared pairwise
/// and overlaps averaged over dimensions. Classes with fewer than 2 samples
/// are excluded and their pairs marked absent.
pub fn variance_report(
    classes: &[FeatureMatrix],
    mode: OverlapMode,
    grid_size: usize,
) -> Result<VarianceReport> {
    if classes.is_empty() {
        return Err(Error::Data("variance report of no classes".into()));
    }
    let dims = classes[0].dims();
    if classes.iter().any(|c| c.dims() != dims) {
        return Err(Error::Dimension(
            "all classes must share the feature dimension".into(),
        ));
    }
    let class_count = classes.len();
    let included: Vec<usize> = (0..class_count).filter(|&c| classes[c].rows() >= 2).collect();
    let excluded: Vec<usize> = (0..class_count).filter(|&c| classes[c].rows() < 2).collect();
    if included.len() < 2 {
        return Err(Error::Data(
            "need at least two classes with 2+ samples".into(),
        ));
    }

    // per-dimension pair overlaps, computed independently and combined in
    // dimension order so the result is identical under any parallelism
    let per_dim: Result<Vec<Vec<f64>>> = (0..dims)
        .into_par_iter()
        .map(|k| {
            let columns: Vec<Vec<f64>> = included
                .iter()
                .map(|&c| classes[c].column(k))
                .collect();
            let bandwidths: Vec<Bandwidth> = columns
                .iter()
                .map(|col| silverman_bandwidth(col))
                .collect::<Result<_>>()?;
            let h_max = bandwidths
                .iter()
                .map(|b| b.value)
                .fold(f64::MIN, f64::max);
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for col in &columns {
                for &v in col {
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
            }
            let grid = uniform_grid(lo - 3.0 * h_max, hi + 3.0 * h_max, grid_size);
            let curves: Vec<KdeCurve> = columns
                .iter()
                .zip(&bandwidths)
                .map(|(col, &bw)| kde_with_bandwidth(col, &grid, bw))
                .collect::<Result<_>>()?;
            let mut overlaps = Vec::with_capacity(included.len() * (included.len() - 1) / 2);
            for a in 0..curves.len() {
                for b in a + 1..curves.len() {
                    overlaps.push(inter_class(&curves[a], &curves[b], mode)?);
                }
            }
            Ok(overlaps)
        })
        .collect();
    let per_dim = per_dim?;

    let pair_total = included.len() * (included.len() - 1) / 2;
    let mut pair_means = vec![0.0; pair_total];
    for (p, pm) in pair_means.iter_mut().enumerate() {
        let vals: Vec<f64> = per_dim.iter().map(|d| d[p]).collect();
        *pm = pairwise_sum(&vals) / dims as f64;
    }

    let mut pairwise = vec![None; class_count * class_count];
    for &c in &included {
        pairwise[c * class_count + c] = Some(1.0);
    }
    let mut p = 0;
    for a in 0..included.len() {
        for b in a + 1..included.len() {
            let (ci, cj) = (included[a], included[b]);
            pairwise[ci * class_count + cj] = Some(pair_means[p]);
            pairwise[cj * class_count + ci] = Some(pair_means[p]);
            p += 1;
        }
    }

    Ok(VarianceReport {
        class_count,
        pairwise,
        variance: variance_from_pairs(&pair_means),
        dims,
        grid_size,
        overlap_mode: mode,
        excluded,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::Rng;

    #[test]
    fn silverman_formula_oracle() {
        // evenly spaced points rescaled to sample std exactly 1; their
        // IQR/1.34 exceeds sigma, so h = 0.9 * 1 * 100^(-1/5)
        let n = 100;
        let raw: Vec<f64> = (0..n).map(|i| i as f64).collect();
        let s = sample_std(&raw);
        let samples: Vec<f64> = raw.iter().map(|v| v / s).collect();
        assert!((sample_std(&samples) - 1.0).abs() < 1e-12);
        assert!(iqr(&samples) / 1.34 > 1.0);
        let h = silverman_bandwidth(&samples).unwrap();
        let want = 0.9 * (n as f64).powf(-0.2);
        assert!((h.value - want).abs() < 1e-12, "{} vs {want}", h.value);
        assert!((want - 0.358_296).abs() < 1e-6);
        assert!(!h.degenerate);
    }

    #[test]
    fn silverman_scales_homogeneously() {
        let mut rng = Rng::new(3);
        let samples: Vec<f64> = (0..200).map(|_| rng.normal()).collect();
        let h1 = silverman_bandwidth(&samples).unwrap().value;
        let scaled: Vec<f64> = samples.iter().map(|v| v * 2.5).collect();
        let h2 = silverman_bandwidth(&scaled).unwrap().value;
        assert!((h2 - 2.5 * h1).abs() < 1e-12);
    }

    #[test]
    fn identical_samples_fall_back_to_degenerate_bandwidth() {
        let samples = vec![3.0; 10];
        let h = silverman_bandwidth(&samples).unwrap();
        assert!(h.degenerate);
        assert!((h.value - 1e-6 * 4.0).abs() < 1e-18);
        // the curve is a spike at the common value (grid point 256 is 3.0)
        let grid = uniform_grid(2.9, 3.1, 513);
        let curve = kde_with_bandwidth(&samples, &grid, h).unwrap();
        let peak = curve
            .density()
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        assert!((grid[peak.0] - 3.0).abs() < 1e-3);
        assert!(*peak.1 > 1e4, "spike height {}", peak.1);
    }

    #[test]
    fn single_gaussian_peak_height() {
        let grid = uniform_grid(-4.0, 4.0, 513);
        let curve = kde_with_bandwidth(
            &[0.0],
            &grid,
            Bandwidth {
                value: 1.0,
                degenerate: false,
            },
        )
        .unwrap();
        let at_zero = curve.density()[256];
        assert!((at_zero - 1.0 / SQRT_TWO_PI).abs() < 1e-12);
        assert!((at_zero - 0.398_942).abs() < 1e-6);
    }

    #[test]
    fn two_distant_samples_make_equal_half_peaks() {
        let grid = uniform_grid(-15.0, 15.0, 3001);
        let bw = Bandwidth {
            value: 1.0,
            degenerate: false,
        };
        let curve = kde_with_bandwidth(&[-10.0, 10.0], &grid, bw).unwrap();
        let at = |x: f64| {
            let i = ((x + 15.0) / 0.01).round() as usize;
            curve.density()[i]
        };
        let half = 0.5 / SQRT_TWO_PI;
        assert!((at(-10.0) - half).abs() < 1e-9);
        assert!((at(10.0) - half).abs() < 1e-9);
    }

    #[test]
    fn kde_matches_naive_double_loop() {
        let mut rng = Rng::new(5);
        let samples: Vec<f64> = (0..50).map(|_| rng.normal()).collect();
        let h = silverman_bandwidth(&samples).unwrap();
        let grid = uniform_grid(-4.0, 4.0, 101);
        let curve = kde_with_bandwidth(&samples, &grid, h).unwrap();
        for (gi, &x) in grid.iter().enumerate() {
            // direct evaluation of the defining sum
            let mut want = 0.0;
            for &xi in &samples {
                let u = (x - xi) / h.value;
                want += (-0.5 * u * u).exp() / (h.value * SQRT_TWO_PI);
            }
            want /= samples.len() as f64;
            assert!((curve.density()[gi] - want).abs() < 1e-12);
        }
    }

    #[test]
    fn kde_mass_with_3h_margin_is_nearly_one() {
        let mut rng = Rng::new(6);
        let samples: Vec<f64> = (0..300).map(|_| rng.normal() * 2.0 + 1.0).collect();
        let h = silverman_bandwidth(&samples).unwrap();
        let lo = samples.iter().cloned().fold(f64::INFINITY, f64::min) - 3.0 * h.value;
        let hi = samples.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 3.0 * h.value;
        let curve = kde_with_bandwidth(&samples, &uniform_grid(lo, hi, 256), h).unwrap();
        let mass = curve.mass();
        assert!(mass >= 0.98 && mass <= 1.0 + 1e-9, "mass {mass}");
    }

    #[test]
    fn overlap_of_identical_curves_is_one() {
        let grid = uniform_grid(-5.0, 5.0, 256);
        let samples = [-0.3, 0.1, 0.4, 1.2, -0.8];
        let c = kde(&samples, &grid).unwrap();
        for mode in [OverlapMode::AreaRatio, OverlapMode::PointwiseMean] {
            assert!((inter_class(&c, &c, mode).unwrap() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn overlap_of_disjoint_supports_is_zero() {
        let grid = uniform_grid(-100.0, 100.0, 4096);
        let a = kde(&[-90.0, -89.5, -89.0], &grid).unwrap();
        let b = kde(&[89.0, 89.5, 90.0], &grid).unwrap();
        let v = inter_class(&a, &b, OverlapMode::AreaRatio).unwrap();
        assert!(v < 1e-12, "{v}");
    }

    #[test]
    fn mismatched_grids_error() {
        let a = kde(&[0.0, 1.0], &uniform_grid(-3.0, 3.0, 64)).unwrap();
        let b = kde(&[0.0, 1.0], &uniform_grid(-4.0, 4.0, 64)).unwrap();
        assert!(inter_class(&a, &b, OverlapMode::AreaRatio).is_err());
    }

    #[test]
    fn gaussian_pair_overlap_matches_quadrature_oracle() {
        // two unit gaussians 2h apart, h = 1: IoU of min/max areas
        let grid = uniform_grid(-9.0, 11.0, 2048);
        let bw = Bandwidth {
            value: 1.0,
            degenerate: false,
        };
        let a = kde_with_bandwidth(&[0.0], &grid, bw).unwrap();
        let b = kde_with_bandwidth(&[2.0], &grid, bw).unwrap();
        let got = inter_class(&a, &b, OverlapMode::AreaRatio).unwrap();
        // independent fine quadrature of the two pdfs
        let n = 400_000;
        let (lo, hi) = (-12.0, 14.0);
        let step = (hi - lo) / n as f64;
        let pdf = |x: f64, mu: f64| (-0.5 * (x - mu) * (x - mu)).exp() / SQRT_TWO_PI;
        let mut num = 0.0;
        let mut den = 0.0;
        for i in 0..n {
            let x = lo + (i as f64 + 0.5) * step;
            let pa = pdf(x, 0.0);
            let pb = pdf(x, 2.0);
            num += pa.min(pb) * step;
            den += pa.max(pb) * step;
        }
        let want = num / den;
        assert!((got - want).abs() < 1e-3, "{got} vs {want}");
    }

    fn class_from_columns(cols: &[Vec<f64>], label: usize) -> FeatureMatrix {
        let rows = cols[0].len();
        let dims = cols.len();
        let mut data = vec![0.0; rows * dims];
        for (k, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                data[i * dims + k] = v;
            }
        }
        FeatureMatrix::new(rows, dims, data, label).unwrap()
    }

    #[test]
    fn identical_class_distributions_give_zero_variance() {
        let col: Vec<f64> = (0..40).map(|i| (i as f64 * 0.37).sin()).collect();
        let classes: Vec<FeatureMatrix> = (0..3)
            .map(|c| class_from_columns(&[col.clone(), col.clone()], c))
            .collect();
        let report = variance_report(&classes, OverlapMode::AreaRatio, 256).unwrap();
        assert!(report.variance.abs() < 1e-9, "{}", report.variance);
    }

    #[test]
    fn disjoint_class_supports_give_unit_variance() {
        let classes: Vec<FeatureMatrix> = (0..3)
            .map(|c| {
                let off = c as f64 * 1000.0;
                let col: Vec<f64> = (0..30).map(|i| off + i as f64 * 0.01).collect();
                class_from_columns(&[col.clone(), col], c)
            })
            .collect();
        let report = variance_report(&classes, OverlapMode::AreaRatio, 512).unwrap();
        assert!((report.variance - 1.0).abs() < 1e-9, "{}", report.variance);
    }

    #[test]
    fn two_class_single_dim_arithmetic() {
        assert!((variance_from_pairs(&[0.3]) - 0.7).abs() < 1e-15);
        assert!((variance_from_pairs(&[1.0, 1.0, 1.0]) - 0.0).abs() < 1e-15);
    }

    #[test]
    fn variance_is_permutation_invariant() {
        let mut rng = Rng::new(9);
        let mk = |shift: f64, rng: &mut Rng| {
            let c0: Vec<f64> = (0..25).map(|_| rng.normal() + shift).collect();
            let c1: Vec<f64> = (0..25).map(|_| rng.normal() - shift).collect();
            vec![c0, c1]
        };
        let a = class_from_columns(&mk(0.0, &mut rng), 0);
        let b = class_from_columns(&mk(1.0, &mut rng), 1);
        let c = class_from_columns(&mk(2.0, &mut rng), 2);
        let v1 = variance_report(&[a.clone(), b.clone(), c.clone()], OverlapMode::AreaRatio, 256)
            .unwrap()
            .variance;
        let v2 = variance_report(&[c, a, b], OverlapMode::AreaRatio, 256)
            .unwrap()
            .variance;
        assert!((v1 - v2).abs() < 1e-12);
    }

    #[test]
    fn translating_a_class_away_never_raises_overlap() {
        let mut rng = Rng::new(11);
        let base: Vec<f64> = (0..60).map(|_| rng.normal()).collect();
        let other: Vec<f64> = (0..60).map(|_| rng.normal()).collect();
        let h = silverman_bandwidth(&base).unwrap();
        let mut last = f64::INFINITY;
        for step in 0..8 {
            let shift = step as f64 * 0.5;
            let moved: Vec<f64> = other.iter().map(|v| v + shift).collect();
            let lo = base
                .iter()
                .chain(&moved)
                .cloned()
                .fold(f64::INFINITY, f64::min)
                - 3.0 * h.value;
            let hi = base
                .iter()
                .chain(&moved)
                .cloned()
                .fold(f64::NEG_INFINITY, f64::max)
                + 3.0 * h.value;
            let grid = uniform_grid(lo, hi, 1024);
            let a = kde_with_bandwidth(&base, &grid, h).unwrap();
            let b = kde_with_bandwidth(&moved, &grid, h).unwrap();
            let ov = inter_class(&a, &b, OverlapMode::AreaRatio).unwrap();
            assert!(ov <= last + 1e-6, "step {step}: {ov} > {last}");
            last = ov;
        }
    }

    #[test]
    fn small_classes_are_excluded_with_warning() {
        let good: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let a = class_from_columns(&[good.clone()], 0);
        let b = class_from_columns(&[good.iter().map(|v| v + 0.5).collect()], 1);
        let tiny = FeatureMatrix::new(1, 1, vec![0.0], 2).unwrap();
        let report = variance_report(&[a, b, tiny], OverlapMode::AreaRatio, 128).unwrap();
        assert_eq!(report.excluded, vec![2]);
        assert!(report.pair(0, 2).is_none());
        assert!(report.pair(0, 1).is_some());
        let json = report.to_json();
        assert!(json.contains("\"variance\""));
        assert!(json.contains("\"D\""));
    }
}
