//! Centered 2D Fourier analysis: forward/inverse transforms, radial band
//! masks, low/high decomposition, band recombination, and azimuthal
//! spectral density.
//!
//! Conventions, applied everywhere:
//! - The forward transform carries the full 1/(HW) factor, so the DC
//!   coefficient equals the image mean. The inverse is the plain
//!   unnormalized sum, making `idft2(dft2(x)) == x` exact up to rounding.
//! - Spectra are stored center-shifted with DC at (⌊H/2⌋, ⌊W/2⌋).
//! - Radial distance is Euclidean distance to that center. Low masks keep
//!   `d <= r`; high masks are the pointwise complement; ring masks keep
//!   `k_lo < d <= k_hi`.
//! - Spectral density bins use round-to-nearest-integer radius and the
//!   ring mean of |coeff|², for k = 0..H/2-1. Grid corners beyond the last
//!   band are excluded from density values but are assigned to the last
//!   ring of a partition so band sums reconstruct the full field.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_complex::Complex;
use once_cell::sync::Lazy;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::error::{Error, Result};
use crate::image::ImageTensor;

// ---------------------------------------------------------------------------
// FFT plumbing
// ---------------------------------------------------------------------------

static PLANS: Lazy<RwLock<HashMap<(usize, bool), Arc<dyn Fft<f64>>>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

fn plan(len: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    if let Some(p) = PLANS.read().unwrap().get(&(len, inverse)) {
        return p.clone();
    }
    let mut planner = FftPlanner::new();
    let direction = if inverse {
        FftDirection::Inverse
    } else {
        FftDirection::Forward
    };
    let p = planner.plan_fft(len, direction);
    PLANS.write().unwrap().insert((len, inverse), p.clone());
    p
}

fn transpose(src: &[Complex<f64>], h: usize, w: usize, dst: &mut [Complex<f64>]) {
    for y in 0..h {
        for x in 0..w {
            dst[x * h + y] = src[y * w + x];
        }
    }
}

/// Unnormalized in-place 2D FFT (rows then columns).
fn fft2_raw(buf: &mut Vec<Complex<f64>>, h: usize, w: usize, inverse: bool) {
    let row = plan(w, inverse);
    for r in buf.chunks_exact_mut(w) {
        row.process(r);
    }
    let mut t = vec![Complex::default(); h * w];
    transpose(buf, h, w, &mut t);
    let col = plan(h, inverse);
    for r in t.chunks_exact_mut(h) {
        col.process(r);
    }
    transpose(&t, w, h, buf);
}

/// Move DC from index 0 to index ⌊n/2⌋ (2D, both axes).
fn shift_to_center(raw: &[Complex<f64>], h: usize, w: usize) -> Vec<Complex<f64>> {
    let mut out = vec![Complex::default(); h * w];
    for u in 0..h {
        let ic = (u + h / 2) % h;
        for v in 0..w {
            let jc = (v + w / 2) % w;
            out[ic * w + jc] = raw[u * w + v];
        }
    }
    out
}

/// Inverse of `shift_to_center`.
fn shift_from_center(centered: &[Complex<f64>], h: usize, w: usize) -> Vec<Complex<f64>> {
    let mut out = vec![Complex::default(); h * w];
    for u in 0..h {
        let ic = (u + h / 2) % h;
        for v in 0..w {
            let jc = (v + w / 2) % w;
            out[u * w + v] = centered[ic * w + jc];
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Spectrum
// ---------------------------------------------------------------------------

/// Center-shifted complex Fourier coefficients of a (multi-channel) field,
/// carrying the forward 1/(HW) normalization.
#[derive(Clone, Debug)]
pub struct Spectrum {
    height: usize,
    width: usize,
    channels: usize,
    data: Vec<Complex<f64>>,
}

impl Spectrum {
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    #[inline]
    pub fn coeff(&self, c: usize, i: usize, j: usize) -> Complex<f64> {
        self.data[(c * self.height + i) * self.width + j]
    }

    pub fn channel(&self, c: usize) -> &[Complex<f64>] {
        let plane = self.height * self.width;
        &self.data[c * plane..(c + 1) * plane]
    }

    pub fn channel_mut(&mut self, c: usize) -> &mut [Complex<f64>] {
        let plane = self.height * self.width;
        &mut self.data[c * plane..(c + 1) * plane]
    }

    pub fn zeros(height: usize, width: usize, channels: usize) -> Spectrum {
        Spectrum {
            height,
            width,
            channels,
            data: vec![Complex::default(); height * width * channels],
        }
    }

    /// Build from raw centered coefficients (test and builder entry point).
    pub fn from_parts(
        height: usize,
        width: usize,
        channels: usize,
        data: Vec<Complex<f64>>,
    ) -> Result<Spectrum> {
        if data.len() != height * width * channels {
            return Err(Error::Dimension(format!(
                "coefficient length {} does not match {height}x{width}x{channels}",
                data.len()
            )));
        }
        Ok(Spectrum {
            height,
            width,
            channels,
            data,
        })
    }

    /// Pointwise product with a mask, every channel.
    pub fn apply_mask(&self, mask: &BandMask) -> Result<Spectrum> {
        if mask.height != self.height || mask.width != self.width {
            return Err(Error::Dimension(format!(
                "mask {}x{} vs spectrum {}x{}",
                mask.height, mask.width, self.height, self.width
            )));
        }
        let mut out = self.clone();
        let plane = self.height * self.width;
        for c in 0..self.channels {
            let ch = &mut out.data[c * plane..(c + 1) * plane];
            for (v, &keep) in ch.iter_mut().zip(&mask.bits) {
                if !keep {
                    *v = Complex::default();
                }
            }
        }
        Ok(out)
    }

    fn same_shape(&self, other: &Spectrum) -> bool {
        self.height == other.height
            && self.width == other.width
            && self.channels == other.channels
    }
}

/// Forward transform of Eq-style convention: coeff = (1/HW) Σ x·e^{-jθ},
/// center-shifted. The DC coefficient equals the channel mean.
pub fn dft2(image: &ImageTensor) -> Result<Spectrum> {
    let (h, w) = (image.height(), image.width());
    if h != w {
        return Err(Error::Dimension(format!("non-square input {h}x{w}")));
    }
    let scale = 1.0 / (h * w) as f64;
    let mut data = Vec::with_capacity(h * w * image.channels());
    for c in 0..image.channels() {
        let mut buf: Vec<Complex<f64>> = image
            .channel(c)
            .iter()
            .map(|&v| Complex::new(v, 0.0))
            .collect();
        fft2_raw(&mut buf, h, w, false);
        for v in &mut buf {
            *v *= scale;
        }
        data.extend(shift_to_center(&buf, h, w));
    }
    Ok(Spectrum {
        height: h,
        width: w,
        channels: image.channels(),
        data,
    })
}

/// Inverse transform. Returns the real part and the largest absolute
/// imaginary residue (must stay < 1e-9 for spectra of real images).
pub fn idft2(spec: &Spectrum) -> (ImageTensor, f64) {
    let (h, w) = (spec.height, spec.width);
    let mut data = Vec::with_capacity(h * w * spec.channels);
    let mut residue = 0.0f64;
    for c in 0..spec.channels {
        let mut buf = shift_from_center(spec.channel(c), h, w);
        fft2_raw(&mut buf, h, w, true);
        for v in &buf {
            residue = residue.max(v.im.abs());
            data.push(v.re);
        }
    }
    let field = ImageTensor::new(h, w, spec.channels, data).expect("square spectrum");
    (field, residue)
}

/// Gradient of a real loss with respect to the input field, given the
/// cotangent of the centered spectrum (∂L/∂Re + j·∂L/∂Im per bin).
/// Adjoint of [`dft2`]: Re(unnormalized inverse transform) / (HW).
pub fn dft2_backward(grad: &Spectrum) -> ImageTensor {
    let (h, w) = (grad.height, grad.width);
    let scale = 1.0 / (h * w) as f64;
    let mut data = Vec::with_capacity(h * w * grad.channels);
    for c in 0..grad.channels {
        let mut buf = shift_from_center(grad.channel(c), h, w);
        fft2_raw(&mut buf, h, w, true);
        data.extend(buf.iter().map(|v| v.re * scale));
    }
    ImageTensor::new(h, w, grad.channels, data).expect("square spectrum")
}

// ---------------------------------------------------------------------------
// Masks
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MaskKind {
    /// Keep d <= r.
    Low { r: f64 },
    /// Keep d > r (pointwise complement of Low).
    High { r: f64 },
    /// Keep k_lo < d <= k_hi.
    Ring { k_lo: f64, k_hi: f64 },
}

/// Boolean radial mask over a centered spectrum grid.
#[derive(Clone, Debug, PartialEq)]
pub struct BandMask {
    height: usize,
    width: usize,
    kind: MaskKind,
    bits: Vec<bool>,
}

/// Euclidean distance of bin (i, j) to the spectrum center.
#[inline]
fn radius(i: usize, j: usize, h: usize, w: usize) -> f64 {
    let dy = i as f64 - (h / 2) as f64;
    let dx = j as f64 - (w / 2) as f64;
    (dy * dy + dx * dx).sqrt()
}

impl BandMask {
    fn build(height: usize, width: usize, kind: MaskKind) -> BandMask {
        let mut bits = vec![false; height * width];
        for i in 0..height {
            for j in 0..width {
                let d = radius(i, j, height, width);
                bits[i * width + j] = match kind {
                    MaskKind::Low { r } => d <= r,
                    MaskKind::High { r } => d > r,
                    MaskKind::Ring { k_lo, k_hi } => d > k_lo && d <= k_hi,
                };
            }
        }
        BandMask {
            height,
            width,
            kind,
            bits,
        }
    }

    pub fn low(height: usize, width: usize, r: f64) -> BandMask {
        Self::build(height, width, MaskKind::Low { r })
    }

    pub fn high(height: usize, width: usize, r: f64) -> BandMask {
        Self::build(height, width, MaskKind::High { r })
    }

    pub fn ring(height: usize, width: usize, k_lo: f64, k_hi: f64) -> BandMask {
        Self::build(height, width, MaskKind::Ring { k_lo, k_hi })
    }

    /// Width-1 ring (k-1, k]; band 0 is the DC bin alone.
    pub fn band(height: usize, width: usize, k: usize) -> BandMask {
        Self::ring(height, width, k as f64 - 1.0, k as f64)
    }

    /// Disjoint width-1 rings covering the whole grid: bands 0..H/2-1 with
    /// the last ring extended through the grid corners, so the masks sum to
    /// the all-ones matrix.
    pub fn ring_partition(height: usize, width: usize) -> Vec<BandMask> {
        let bands = band_count(height);
        (0..bands)
            .map(|k| {
                if k + 1 == bands {
                    Self::ring(height, width, k as f64 - 1.0, f64::INFINITY)
                } else {
                    Self::band(height, width, k)
                }
            })
            .collect()
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn kind(&self) -> MaskKind {
        self.kind
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn popcount(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// Number of density bands for a grid of side `h` (k = 0..h/2-1).
pub fn band_count(h: usize) -> usize {
    h / 2
}

// ---------------------------------------------------------------------------
// Decomposition / recombination
// ---------------------------------------------------------------------------

/// Low/high split at radius r: X = X_l + X_h by mask complementarity.
pub fn decompose(image: &ImageTensor, r: f64) -> Result<(ImageTensor, ImageTensor)> {
    let spec = dft2(image)?;
    let low = spec.apply_mask(&BandMask::low(spec.height, spec.width, r))?;
    let high = spec.apply_mask(&BandMask::high(spec.height, spec.width, r))?;
    Ok((idft2(&low).0, idft2(&high).0))
}

/// Low band of `a` plus high band of `b` at radius r, single inverse pass.
pub fn recombine(a: &Spectrum, b: &Spectrum, r: f64) -> Result<ImageTensor> {
    if !a.same_shape(b) {
        return Err(Error::Dimension(format!(
            "spectra {}x{}x{} vs {}x{}x{}",
            a.height, a.width, a.channels, b.height, b.width, b.channels
        )));
    }
    let low = BandMask::low(a.height, a.width, r);
    let mut merged = Spectrum::zeros(a.height, a.width, a.channels);
    let plane = a.height * a.width;
    for c in 0..a.channels {
        let ac = a.channel(c);
        let bc = b.channel(c);
        let mc = &mut merged.data[c * plane..(c + 1) * plane];
        for (idx, keep_low) in low.bits.iter().enumerate() {
            mc[idx] = if *keep_low { ac[idx] } else { bc[idx] };
        }
    }
    Ok(idft2(&merged).0)
}

// ---------------------------------------------------------------------------
// Spectral density
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Normalization {
    None,
    Sum1,
    Max1,
}

impl std::fmt::Display for Normalization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Normalization::None => write!(f, "none"),
            Normalization::Sum1 => write!(f, "sum1"),
            Normalization::Max1 => write!(f, "max1"),
        }
    }
}

/// Azimuthally averaged squared spectrum: values AI_k for k = 0..H/2-1.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDensity {
    values: Vec<f64>,
    normalization: Normalization,
}

impl SpectralDensity {
    pub fn from_values(values: Vec<f64>, normalization: Normalization) -> SpectralDensity {
        SpectralDensity {
            values,
            normalization,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Re-normalize; Sum1 and Max1 fail on an all-zero curve.
    pub fn normalized(&self, mode: Normalization) -> Result<SpectralDensity> {
        let values = match mode {
            Normalization::None => self.values.clone(),
            Normalization::Sum1 => {
                let s: f64 = self.values.iter().sum();
                if s <= 0.0 {
                    return Err(Error::Numerical(
                        "cannot sum1-normalize an all-zero density".into(),
                    ));
                }
                self.values.iter().map(|v| v / s).collect()
            }
            Normalization::Max1 => {
                let m = self.values.iter().cloned().fold(0.0, f64::max);
                if m <= 0.0 {
                    return Err(Error::Numerical(
                        "cannot max1-normalize an all-zero density".into(),
                    ));
                }
                self.values.iter().map(|v| v / m).collect()
            }
        };
        Ok(SpectralDensity {
            values,
            normalization: mode,
        })
    }

    /// CSV with header `k,value,normalization`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,value,normalization\n");
        for (k, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{k},{v},{}\n", self.normalization));
        }
        out
    }

    pub fn write_csv(&self, path: &std::path::Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }
}

/// Ring id per centered bin (None beyond the last band) and per-ring bin
/// counts, using round-to-nearest-integer radius.
pub(crate) fn ring_bins(h: usize, w: usize) -> (Vec<Option<usize>>, Vec<usize>) {
    let bands = band_count(h);
    let mut idx = vec![None; h * w];
    let mut counts = vec![0usize; bands];
    for i in 0..h {
        for j in 0..w {
            let k = radius(i, j, h, w).round() as usize;
            if k < bands {
                idx[i * w + j] = Some(k);
                counts[k] += 1;
            }
        }
    }
    (idx, counts)
}

/// Azimuthal spectral density of a real field: per band, the mean of
/// |coeff|² over bins at rounded radius k, averaged over channels, then
/// normalized as requested.
pub fn spectral_density(field: &ImageTensor, mode: Normalization) -> Result<SpectralDensity> {
    let spec = dft2(field)?;
    density_of_spectrum(&spec, mode)
}

/// Density of an already-transformed spectrum.
pub fn density_of_spectrum(spec: &Spectrum, mode: Normalization) -> Result<SpectralDensity> {
    let (idx, counts) = ring_bins(spec.height, spec.width);
    let bands = counts.len();
    assert!(
        counts.iter().all(|&c| c > 0),
        "empty ring on a square grid"
    );
    let mut sums = vec![0.0; bands];
    for c in 0..spec.channels {
        for (v, ring) in spec.channel(c).iter().zip(&idx) {
            if let Some(k) = ring {
                sums[*k] += v.norm_sqr();
            }
        }
    }
    let values: Vec<f64> = sums
        .iter()
        .zip(&counts)
        .map(|(s, &n)| s / (n * spec.channels) as f64)
        .collect();
    SpectralDensity::from_values(values, Normalization::None).normalized(mode)
}

/// Mean density over a set of images: raw per-image densities averaged,
/// then sum1-normalized (the curve used for dataset-level comparisons).
pub fn mean_density<'a, I>(images: I) -> Result<SpectralDensity>
where
    I: IntoIterator<Item = &'a ImageTensor>,
{
    let mut acc: Option<Vec<f64>> = None;
    let mut n = 0usize;
    for img in images {
        let d = spectral_density(img, Normalization::None)?;
        match &mut acc {
            None => acc = Some(d.values().to_vec()),
            Some(a) => {
                for (x, y) in a.iter_mut().zip(d.values()) {
                    *x += y;
                }
            }
        }
        n += 1;
    }
    let mut values = acc.ok_or_else(|| Error::Data("mean density of no images".into()))?;
    for v in &mut values {
        *v /= n as f64;
    }
    SpectralDensity::from_values(values, Normalization::None).normalized(Normalization::Sum1)
}
