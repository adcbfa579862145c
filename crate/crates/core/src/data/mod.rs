//! Dataset ingestion and preprocessing.

mod mnist;
mod pca;
mod preprocess;
mod synth;
mod tabular;

pub use mnist::{load_mnist_idx, read_idx_images, read_idx_labels, IdxImages};
pub use pca::{pca_fit, pca_transform, PcaModel};
pub use preprocess::{
    cap_samples, l2_normalize, l2_normalize_dataset, rescale_to_range, select_features, split_train_test, RangeScaler,
};
pub use synth::synth_binary_dataset;
pub use tabular::{load_csv, read_csv, CsvOptions, LabelColumn};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub features: Vec<f64>,
    pub label: u8,
}

/// Binary-labelled samples sharing one feature dimension.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledDataset {
    name: String,
    feature_dim: usize,
    samples: Vec<Sample>,
}

impl LabeledDataset {
    pub fn new(name: impl Into<String>, feature_dim: usize, samples: Vec<Sample>) -> Result<Self> {
        for (i, s) in samples.iter().enumerate() {
            if s.features.len() != feature_dim {
                return Err(Error::Input(format!(
                    "sample {i} has {} features, expected {feature_dim}",
                    s.features.len()
                )));
            }
            if s.label > 1 {
                return Err(Error::Input(format!("sample {i} has non-binary label {}", s.label)));
            }
        }
        Ok(Self { name: name.into(), feature_dim, samples })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn feature_dim(&self) -> usize {
        self.feature_dim
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn labels(&self) -> Vec<u8> {
        self.samples.iter().map(|s| s.label).collect()
    }

    /// Number of samples in class 0 and class 1.
    pub fn class_counts(&self) -> [usize; 2] {
        let ones = self.samples.iter().filter(|s| s.label == 1).count();
        [self.samples.len() - ones, ones]
    }

    /// Samples at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            name: self.name.clone(),
            feature_dim: self.feature_dim,
            samples: indices.iter().map(|&i| self.samples[i].clone()).collect(),
        }
    }

    /// Replaces every feature row with `f(row)`; all outputs must share a length.
    pub fn map_features<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&[f64]) -> Vec<f64>,
    {
        let samples: Vec<Sample> = self
            .samples
            .iter()
            .map(|s| Sample { features: f(&s.features), label: s.label })
            .collect();
        let dim = samples.first().map_or(self.feature_dim, |s| s.features.len());
        Self::new(self.name.clone(), dim, samples)
    }
}
