//! Reader for the MNIST IDX files: big-endian headers, magic `0x00000803`
//! for images and `0x00000801` for labels, pixels stored row-major as bytes.

use std::fs;
use std::path::Path;

use super::{LabeledDataset, Sample};
use crate::error::{Error, Result};

const IMAGES_MAGIC: u32 = 0x0000_0803;
const LABELS_MAGIC: u32 = 0x0000_0801;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdxImages {
    pub count: usize,
    pub rows: usize,
    pub cols: usize,
    pub pixels: Vec<u8>,
}

impl IdxImages {
    pub fn image(&self, i: usize) -> &[u8] {
        let size = self.rows * self.cols;
        &self.pixels[i * size..(i + 1) * size]
    }
}

fn format_error(path: &Path, message: impl Into<String>) -> Error {
    Error::Format { path: path.to_path_buf(), message: message.into() }
}

fn read_u32(bytes: &[u8], offset: usize, path: &Path) -> Result<u32> {
    bytes
        .get(offset..offset + 4)
        .map(|b| u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
        .ok_or_else(|| format_error(path, "truncated header"))
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| format_error(path, format!("cannot read: {e}")))
}

pub fn read_idx_images(path: impl AsRef<Path>) -> Result<IdxImages> {
    let path = path.as_ref();
    let bytes = read_file(path)?;
    let magic = read_u32(&bytes, 0, path)?;
    if magic != IMAGES_MAGIC {
        return Err(format_error(path, format!("bad image magic {magic:#010x}")));
    }
    let count = read_u32(&bytes, 4, path)? as usize;
    let rows = read_u32(&bytes, 8, path)? as usize;
    let cols = read_u32(&bytes, 12, path)? as usize;
    let expected = count * rows * cols;
    let body = &bytes[16..];
    if body.len() != expected {
        return Err(format_error(
            path,
            format!("expected {expected} pixel bytes for {count} {rows}x{cols} images, found {}", body.len()),
        ));
    }
    Ok(IdxImages { count, rows, cols, pixels: body.to_vec() })
}

pub fn read_idx_labels(path: impl AsRef<Path>) -> Result<Vec<u8>> {
    let path = path.as_ref();
    let bytes = read_file(path)?;
    let magic = read_u32(&bytes, 0, path)?;
    if magic != LABELS_MAGIC {
        return Err(format_error(path, format!("bad label magic {magic:#010x}")));
    }
    let count = read_u32(&bytes, 4, path)? as usize;
    let body = &bytes[8..];
    if body.len() != count {
        return Err(format_error(path, format!("expected {count} labels, found {}", body.len())));
    }
    Ok(body.to_vec())
}

/// Keeps digits `class_a` (label 0) and `class_b` (label 1), with pixels
/// flattened and scaled to `[0, 1]`.
pub fn load_mnist_idx(
    images_path: impl AsRef<Path>,
    labels_path: impl AsRef<Path>,
    class_a: u8,
    class_b: u8,
) -> Result<LabeledDataset> {
    if class_a == class_b {
        return Err(Error::Config(format!("classes must differ, got {class_a} twice")));
    }
    if class_a > 9 || class_b > 9 {
        return Err(Error::Config(format!("classes must be digits, got {class_a},{class_b}")));
    }
    let images = read_idx_images(images_path.as_ref())?;
    let labels = read_idx_labels(labels_path.as_ref())?;
    if images.count != labels.len() {
        return Err(format_error(
            labels_path.as_ref(),
            format!("{} labels for {} images", labels.len(), images.count),
        ));
    }
    let samples = labels
        .iter()
        .enumerate()
        .filter(|(_, &d)| d == class_a || d == class_b)
        .map(|(i, &d)| Sample {
            features: images.image(i).iter().map(|&p| f64::from(p) / 255.0).collect(),
            label: u8::from(d == class_b),
        })
        .collect();
    LabeledDataset::new(format!("mnist{class_a}{class_b}"), images.rows * images.cols, samples)
}
