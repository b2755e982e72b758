//! Frequency-domain analysis of convolutional image classifiers.
//!
//! The toolkit decomposes images into radial frequency bands, measures how
//! discriminative learned features are per band (KDE inter-class variance),
//! tracks which bands a model learns first through the spectral density of
//! input gradients, and builds augmented datasets (CDES, HARS, Mixup,
//! CutMix) that shift a model's frequency bias.
//!
//! Module map:
//! - [`image`] / [`dataset`]: image tensors, CIFAR-10 binary I/O, seeded RNG.
//! - [`spectral`]: centered 2D DFT, radial masks, band decomposition,
//!   recombination, azimuthal spectral density.
//! - [`kde`]: class feature distributions, overlap ratio, inter-class
//!   variance; [`hog`] supplies the pre-network baseline features.
//! - [`net`]: a compact CNN with manual backpropagation exposing penultimate
//!   features and input gradients.
//! - [`priority`]: band-restricted gradients and the per-epoch learning
//!   priority matrix.
//! - [`augment`] / [`cdes`]: HARS, Mixup, CutMix builders and the
//!   convolutional density enhancement pipeline.
//! - [`synth`]: a class-structured synthetic corpus in CIFAR format for
//!   desk-scale experiments.

pub mod augment;
pub mod cdes;
pub mod dataset;
pub mod error;
pub mod hog;
pub mod image;
pub mod kde;
pub mod net;
pub mod priority;
pub mod rng;
pub mod spectral;
pub mod stats;
pub mod synth;

pub use dataset::{LabeledDataset, SplitTag};
pub use error::{Error, Result};
pub use image::ImageTensor;
pub use rng::Rng;
pub use spectral::{BandMask, SpectralDensity, Spectrum};
