//! Principal component analysis by eigendecomposition of the sample
//! covariance of the training split.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use super::LabeledDataset;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    mean: Vec<f64>,
    /// `k` orthonormal principal directions, strongest first.
    components: Vec<Vec<f64>>,
    explained_variance: Vec<f64>,
    total_variance: f64,
}

impl PcaModel {
    pub fn k(&self) -> usize {
        self.components.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    pub fn explained_variance(&self) -> &[f64] {
        &self.explained_variance
    }

    /// Share of the total variance carried by each kept component.
    pub fn explained_variance_ratio(&self) -> Vec<f64> {
        if self.total_variance <= 0.0 {
            return vec![0.0; self.k()];
        }
        self.explained_variance.iter().map(|v| v / self.total_variance).collect()
    }

    pub fn transform_row(&self, row: &[f64]) -> Vec<f64> {
        self.components
            .iter()
            .map(|c| c.iter().zip(row).zip(&self.mean).map(|((w, x), m)| w * (x - m)).sum())
            .collect()
    }

    pub fn inverse_transform_row(&self, projected: &[f64]) -> Vec<f64> {
        let mut out = self.mean.clone();
        for (c, &p) in self.components.iter().zip(projected) {
            for (o, w) in out.iter_mut().zip(c) {
                *o += p * w;
            }
        }
        out
    }

    /// The model restricted to its first `k` components.
    pub fn truncated(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.k() {
            return Err(Error::Config(format!("cannot keep {k} of {} components", self.k())));
        }
        Ok(Self {
            mean: self.mean.clone(),
            components: self.components[..k].to_vec(),
            explained_variance: self.explained_variance[..k].to_vec(),
            total_variance: self.total_variance,
        })
    }
}

/// Fits the top-`k` principal directions of `train`. Each direction is
/// signed so that its largest-magnitude coordinate is positive.
pub fn pca_fit(train: &LabeledDataset, k: usize) -> Result<PcaModel> {
    let d = train.feature_dim();
    if k == 0 || k > d {
        return Err(Error::Config(format!("cannot fit {k} components to {d} features")));
    }
    if train.is_empty() {
        return Err(Error::Input("cannot fit PCA on an empty dataset".into()));
    }
    let m = train.len();
    let mut mean = vec![0.0; d];
    for s in train.samples() {
        for (acc, x) in mean.iter_mut().zip(&s.features) {
            *acc += x;
        }
    }
    mean.iter_mut().for_each(|v| *v /= m as f64);

    let centered = DMatrix::from_fn(m, d, |i, j| train.samples()[i].features[j] - mean[j]);
    let denom = if m > 1 { (m - 1) as f64 } else { 1.0 };
    let covariance = centered.tr_mul(&centered) / denom;
    let total_variance = covariance.trace();
    let eigen = SymmetricEigen::new(covariance);

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eigen.eigenvalues[b].total_cmp(&eigen.eigenvalues[a]));

    let mut components = Vec::with_capacity(k);
    let mut explained_variance = Vec::with_capacity(k);
    for &idx in order.iter().take(k) {
        let mut v: Vec<f64> = eigen.eigenvectors.column(idx).iter().copied().collect();
        let pivot = v.iter().copied().fold(0.0f64, |best, x| if x.abs() > best.abs() { x } else { best });
        if pivot < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        components.push(v);
        explained_variance.push(eigen.eigenvalues[idx].max(0.0));
    }
    Ok(PcaModel { mean, components, explained_variance, total_variance })
}

/// Projects every sample of `data` onto the model's components.
pub fn pca_transform(model: &PcaModel, data: &LabeledDataset) -> Result<LabeledDataset> {
    if data.feature_dim() != model.mean.len() {
        return Err(Error::Size(format!(
            "PCA fitted on {} features, data has {}",
            model.mean.len(),
            data.feature_dim()
        )));
    }
    let out = data.map_features(|row| model.transform_row(row))?;
    LabeledDataset::new(out.name().to_string(), model.k(), out.samples().to_vec())
}
