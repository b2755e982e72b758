//! Labeled datasets and bit-exact CIFAR-10 binary ingestion/persistence.
//!
//! The on-disk format is the stock CIFAR-10 binary record: 3073 bytes per
//! image (1 label byte, then 1024 R + 1024 G + 1024 B bytes, row-major
//! 32×32). Bytes map to [0, 1] by division by 255 on load; on save values
//! quantize round-half-up (`floor(v*255 + 0.5)`), so load → save → load
//! round-trips byte-identically.

use std::path::Path;

use crate::error::{Error, Result};
use crate::image::ImageTensor;
use crate::rng::Rng;

pub const CIFAR_SIDE: usize = 32;
pub const CIFAR_CHANNELS: usize = 3;
pub const CIFAR_CLASSES: usize = 10;
pub const CIFAR_RECORD_BYTES: usize = 1 + CIFAR_SIDE * CIFAR_SIDE * CIFAR_CHANNELS;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitTag {
    Train,
    Test,
}

impl std::fmt::Display for SplitTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SplitTag::Train => write!(f, "train"),
            SplitTag::Test => write!(f, "test"),
        }
    }
}

/// Images with class labels in `[0, class_count)`.
#[derive(Clone, Debug)]
pub struct LabeledDataset {
    images: Vec<ImageTensor>,
    labels: Vec<usize>,
    class_count: usize,
    split_tag: SplitTag,
}

impl LabeledDataset {
    pub fn new(
        images: Vec<ImageTensor>,
        labels: Vec<usize>,
        class_count: usize,
        split_tag: SplitTag,
    ) -> Result<Self> {
        if images.len() != labels.len() {
            return Err(Error::Data(format!(
                "{} images but {} labels",
                images.len(),
                labels.len()
            )));
        }
        if let Some((i, &l)) = labels.iter().enumerate().find(|(_, &l)| l >= class_count) {
            return Err(Error::Data(format!(
                "label {l} at record {i} is outside [0, {class_count})"
            )));
        }
        Ok(Self {
            images,
            labels,
            class_count,
            split_tag,
        })
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn images(&self) -> &[ImageTensor] {
        &self.images
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn image(&self, i: usize) -> &ImageTensor {
        &self.images[i]
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn split_tag(&self) -> SplitTag {
        self.split_tag
    }

    /// Number of records per class, indexed by label.
    pub fn class_histogram(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.class_count];
        for &l in &self.labels {
            counts[l] += 1;
        }
        counts
    }

    /// Record indices belonging to class `c`, in dataset order.
    pub fn indices_of_class(&self, c: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.labels[i] == c).collect()
    }

    /// Replace every image through `f`, keeping labels and metadata.
    pub fn map_images<F>(&self, f: F) -> Result<LabeledDataset>
    where
        F: Fn(usize, &ImageTensor) -> Result<ImageTensor> + Sync,
    {
        use rayon::prelude::*;
        let images: Result<Vec<ImageTensor>> = self
            .images
            .par_iter()
            .enumerate()
            .map(|(i, img)| f(i, img))
            .collect();
        LabeledDataset::new(images?, self.labels.clone(), self.class_count, self.split_tag)
    }

    pub fn with_split_tag(mut self, tag: SplitTag) -> Self {
        self.split_tag = tag;
        self
    }
}

/// Load a CIFAR-10 binary file (any number of whole 3073-byte records).
pub fn load_cifar_binary(path: &Path, split_tag: SplitTag) -> Result<LabeledDataset> {
    let bytes = std::fs::read(path)?;
    parse_cifar_bytes(&bytes, split_tag)
}

/// Parse CIFAR-10 records from raw bytes.
pub fn parse_cifar_bytes(bytes: &[u8], split_tag: SplitTag) -> Result<LabeledDataset> {
    if bytes.len() % CIFAR_RECORD_BYTES != 0 {
        let whole = bytes.len() / CIFAR_RECORD_BYTES;
        return Err(Error::Ingest(format!(
            "truncated record at byte offset {}: {} trailing bytes, record needs {}",
            whole * CIFAR_RECORD_BYTES,
            bytes.len() - whole * CIFAR_RECORD_BYTES,
            CIFAR_RECORD_BYTES
        )));
    }
    let n = bytes.len() / CIFAR_RECORD_BYTES;
    let mut images = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for (rec, chunk) in bytes.chunks_exact(CIFAR_RECORD_BYTES).enumerate() {
        let label = chunk[0] as usize;
        if label >= CIFAR_CLASSES {
            return Err(Error::Ingest(format!(
                "corrupt record at byte offset {}: label byte {} >= {}",
                rec * CIFAR_RECORD_BYTES,
                chunk[0],
                CIFAR_CLASSES
            )));
        }
        let data: Vec<f64> = chunk[1..].iter().map(|&b| b as f64 / 255.0).collect();
        images.push(ImageTensor::new(CIFAR_SIDE, CIFAR_SIDE, CIFAR_CHANNELS, data)?);
        labels.push(label);
    }
    LabeledDataset::new(images, labels, CIFAR_CLASSES, split_tag)
}

/// Quantize a unit-range value to a byte, rounding half up.
#[inline]
pub fn quantize_unit(v: f64) -> u8 {
    (v * 255.0 + 0.5).floor() as u8
}

/// Write the dataset in CIFAR-10 binary format.
///
/// With `clamp` unset, any value outside [0, 1] refuses the write (nothing
/// is written); with `clamp` set, values clamp into range first. Built
/// datasets (recombined bands) carry small out-of-range excursions, so
/// persisting them requires the explicit flag.
pub fn save_dataset(dataset: &LabeledDataset, path: &Path, clamp: bool) -> Result<()> {
    let bytes = encode_cifar_bytes(dataset, clamp)?;
    std::fs::write(path, bytes)?;
    Ok(())
}

/// Encode the dataset as CIFAR-10 records.
pub fn encode_cifar_bytes(dataset: &LabeledDataset, clamp: bool) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(dataset.len() * CIFAR_RECORD_BYTES);
    for i in 0..dataset.len() {
        let img = dataset.image(i);
        if img.height() != CIFAR_SIDE || img.channels() != CIFAR_CHANNELS {
            return Err(Error::Dimension(format!(
                "record {i}: CIFAR format needs {CIFAR_SIDE}x{CIFAR_SIDE}x{CIFAR_CHANNELS}, got {}x{}x{}",
                img.height(),
                img.width(),
                img.channels()
            )));
        }
        out.push(dataset.label(i) as u8);
        for &v in img.data() {
            let v = if clamp { v.clamp(0.0, 1.0) } else { v };
            if !(0.0..=1.0).contains(&v) || !v.is_finite() {
                return Err(Error::Data(format!(
                    "record {i}: value {v} outside [0, 1] and clamp flag is off"
                )));
            }
            out.push(quantize_unit(v));
        }
    }
    Ok(out)
}

/// Class-balanced subset: `per_class` images from every class, chosen by a
/// seeded per-class shuffle. A function of (dataset, per_class, seed) only.
pub fn subset(dataset: &LabeledDataset, per_class: usize, rng: &Rng) -> Result<LabeledDataset> {
    let mut images = Vec::with_capacity(per_class * dataset.class_count());
    let mut labels = Vec::with_capacity(per_class * dataset.class_count());
    for c in 0..dataset.class_count() {
        let mut idx = dataset.indices_of_class(c);
        if idx.len() < per_class {
            return Err(Error::Data(format!(
                "class {c} has {} records, need {per_class}",
                idx.len()
            )));
        }
        rng.derive(c as u64).shuffle(&mut idx);
        for &i in idx.iter().take(per_class) {
            images.push(dataset.image(i).clone());
            labels.push(c);
        }
    }
    LabeledDataset::new(images, labels, dataset.class_count(), dataset.split_tag())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(label: u8, fill: u8) -> Vec<u8> {
        let mut rec = vec![fill; CIFAR_RECORD_BYTES];
        rec[0] = label;
        rec
    }

    #[test]
    fn saturated_record_loads_as_ones() {
        let bytes = record(7, 255);
        let ds = parse_cifar_bytes(&bytes, SplitTag::Train).unwrap();
        assert_eq!(ds.len(), 1);
        assert_eq!(ds.label(0), 7);
        assert!(ds.image(0).data().iter().all(|&v| v == 1.0));
    }

    #[test]
    fn two_records_load_as_two_images() {
        let mut bytes = record(0, 10);
        bytes.extend(record(3, 20));
        let ds = parse_cifar_bytes(&bytes, SplitTag::Test).unwrap();
        assert_eq!(ds.len(), 2);
        assert_eq!(ds.labels(), &[0, 3]);
    }

    #[test]
    fn truncated_file_names_byte_offset() {
        let mut bytes = record(1, 0);
        bytes.extend_from_slice(&[2, 3, 4]);
        let err = parse_cifar_bytes(&bytes, SplitTag::Train).unwrap_err();
        assert!(err.to_string().contains("3073"), "{err}");
        assert!(err.to_string().contains("offset 3073"), "{err}");
    }

    #[test]
    fn bad_label_byte_is_corrupt_record() {
        let bytes = record(10, 0);
        let err = parse_cifar_bytes(&bytes, SplitTag::Train).unwrap_err();
        assert!(err.to_string().contains("label byte 10"), "{err}");
    }

    #[test]
    fn half_quantizes_to_128() {
        // round-half-up: floor(0.5*255 + 0.5) = floor(128.0) = 128
        assert_eq!(quantize_unit(0.5), 128);
        assert_eq!(quantize_unit(0.0), 0);
        assert_eq!(quantize_unit(1.0), 255);
    }

    #[test]
    fn load_save_round_trips_byte_identically() {
        let mut bytes = Vec::new();
        let mut state = 0x12345u32;
        for rec in 0..5u8 {
            bytes.push(rec % CIFAR_CLASSES as u8);
            for _ in 0..CIFAR_RECORD_BYTES - 1 {
                state = state.wrapping_mul(1664525).wrapping_add(1013904223);
                bytes.push((state >> 24) as u8);
            }
        }
        let ds = parse_cifar_bytes(&bytes, SplitTag::Train).unwrap();
        let rewritten = encode_cifar_bytes(&ds, false).unwrap();
        assert_eq!(bytes, rewritten);
    }

    #[test]
    fn empty_dataset_saves_zero_length() {
        let ds = LabeledDataset::new(vec![], vec![], CIFAR_CLASSES, SplitTag::Train).unwrap();
        assert!(encode_cifar_bytes(&ds, false).unwrap().is_empty());
    }

    #[test]
    fn out_of_range_refused_without_clamp() {
        let img = ImageTensor::splat(CIFAR_SIDE, CIFAR_SIDE, CIFAR_CHANNELS, 1.2).unwrap();
        let ds = LabeledDataset::new(vec![img], vec![0], CIFAR_CLASSES, SplitTag::Train).unwrap();
        assert!(encode_cifar_bytes(&ds, false).is_err());
        let bytes = encode_cifar_bytes(&ds, true).unwrap();
        assert_eq!(bytes[1], 255);
    }

    fn tiny_dataset(per_class: usize) -> LabeledDataset {
        let mut images = Vec::new();
        let mut labels = Vec::new();
        for c in 0..CIFAR_CLASSES {
            for k in 0..per_class {
                let v = (c * per_class + k) as f64 / (CIFAR_CLASSES * per_class) as f64;
                images.push(ImageTensor::splat(CIFAR_SIDE, CIFAR_SIDE, CIFAR_CHANNELS, v).unwrap());
                labels.push(c);
            }
        }
        LabeledDataset::new(images, labels, CIFAR_CLASSES, SplitTag::Train).unwrap()
    }

    #[test]
    fn subset_is_balanced_and_deterministic() {
        let ds = tiny_dataset(4);
        let rng = Rng::new(11);
        let a = subset(&ds, 2, &rng).unwrap();
        let b = subset(&ds, 2, &rng).unwrap();
        assert_eq!(a.len(), 2 * CIFAR_CLASSES);
        assert_eq!(a.class_histogram(), vec![2; CIFAR_CLASSES]);
        for i in 0..a.len() {
            assert_eq!(a.image(i), b.image(i));
            assert_eq!(a.label(i), b.label(i));
        }
    }

    #[test]
    fn subset_of_everything_is_a_permutation() {
        let ds = tiny_dataset(3);
        let all = subset(&ds, 3, &Rng::new(5)).unwrap();
        assert_eq!(all.len(), ds.len());
        let mut seen: Vec<f64> = all.images().iter().map(|im| im.data()[0]).collect();
        let mut orig: Vec<f64> = ds.images().iter().map(|im| im.data()[0]).collect();
        seen.sort_by(f64::total_cmp);
        orig.sort_by(f64::total_cmp);
        assert_eq!(seen, orig);
    }

    #[test]
    fn subset_one_per_class() {
        let ds = tiny_dataset(2);
        let one = subset(&ds, 1, &Rng::new(0)).unwrap();
        assert_eq!(one.len(), CIFAR_CLASSES);
        assert_eq!(one.class_histogram(), vec![1; CIFAR_CLASSES]);
    }

    #[test]
    fn subset_insufficient_population_names_class() {
        let ds = tiny_dataset(2);
        let err = subset(&ds, 3, &Rng::new(0)).unwrap_err();
        assert!(err.to_string().contains("class 0"), "{err}");
    }
}
