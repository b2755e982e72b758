//! Image tensors.
//!
//! An [`ImageTensor`] is a square H×W image with 1 or 3 channels stored
//! channel-major, row-major (`data[c*H*W + y*W + x]`). Pixel values are
//! real; ingestion maps bytes into [0, 1] and persistence validates the
//! range, but intermediate fields (band components, gradients, recombined
//! images) may exceed it. Clamping is always explicit, never silent.

use crate::error::{Error, Result};

/// Fixed luma weights for grayscale conversion, shared by every consumer.
pub const LUMA_WEIGHTS: [f64; 3] = [0.299, 0.587, 0.114];

#[derive(Clone, Debug, PartialEq)]
pub struct ImageTensor {
    height: usize,
    width: usize,
    channels: usize,
    data: Vec<f64>,
}

impl ImageTensor {
    /// Wrap raw channel-major data. Images must be square with 1 or 3 channels.
    pub fn new(height: usize, width: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if height != width {
            return Err(Error::Dimension(format!(
                "images must be square, got {height}x{width}"
            )));
        }
        if channels != 1 && channels != 3 {
            return Err(Error::Dimension(format!(
                "channel count must be 1 or 3, got {channels}"
            )));
        }
        if data.len() != height * width * channels {
            return Err(Error::Dimension(format!(
                "data length {} does not match {height}x{width}x{channels}",
                data.len()
            )));
        }
        Ok(Self {
            height,
            width,
            channels,
            data,
        })
    }

    pub fn zeros(height: usize, width: usize, channels: usize) -> Result<Self> {
        Self::new(height, width, channels, vec![0.0; height * width * channels])
    }

    /// Constant-valued image.
    pub fn splat(height: usize, width: usize, channels: usize, value: f64) -> Result<Self> {
        Self::new(height, width, channels, vec![value; height * width * channels])
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    #[inline]
    pub fn get(&self, c: usize, y: usize, x: usize) -> f64 {
        self.data[(c * self.height + y) * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, c: usize, y: usize, x: usize, v: f64) {
        self.data[(c * self.height + y) * self.width + x] = v;
    }

    pub fn channel(&self, c: usize) -> &[f64] {
        let plane = self.height * self.width;
        &self.data[c * plane..(c + 1) * plane]
    }

    pub fn channel_mut(&mut self, c: usize) -> &mut [f64] {
        let plane = self.height * self.width;
        &mut self.data[c * plane..(c + 1) * plane]
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    pub fn is_unit_range(&self) -> bool {
        self.data.iter().all(|v| v.is_finite() && (0.0..=1.0).contains(v))
    }

    /// Explicit clamp into [0, 1].
    pub fn clamp_unit(&mut self) {
        for v in &mut self.data {
            *v = v.clamp(0.0, 1.0);
        }
    }

    /// Luma grayscale (single channel); identity on 1-channel images.
    pub fn to_grayscale(&self) -> ImageTensor {
        if self.channels == 1 {
            return self.clone();
        }
        let plane = self.height * self.width;
        let mut out = vec![0.0; plane];
        for (c, w) in LUMA_WEIGHTS.iter().enumerate() {
            let ch = self.channel(c);
            for (o, v) in out.iter_mut().zip(ch) {
                *o += w * v;
            }
        }
        ImageTensor {
            height: self.height,
            width: self.width,
            channels: 1,
            data: out,
        }
    }

    /// Largest absolute entry-wise difference; infinity on shape mismatch.
    pub fn max_abs_diff(&self, other: &ImageTensor) -> f64 {
        if self.height != other.height
            || self.width != other.width
            || self.channels != other.channels
        {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}
