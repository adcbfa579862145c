use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::LabeledDataset;
use crate::error::{Error, Result};

/// Per-feature affine map onto `[lo, hi]`, fitted on one split and applied
/// to any other. Values outside the fitted range are clamped and features
/// that were constant during fitting map to `lo`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RangeScaler {
    pub lo: f64,
    pub hi: f64,
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl RangeScaler {
    pub fn fit(train: &LabeledDataset, lo: f64, hi: f64) -> Result<Self> {
        if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
            return Err(Error::Config(format!("empty target range [{lo}, {hi}]")));
        }
        if train.is_empty() {
            return Err(Error::Input("cannot fit a scaler on an empty dataset".into()));
        }
        let d = train.feature_dim();
        let mut min = vec![f64::INFINITY; d];
        let mut max = vec![f64::NEG_INFINITY; d];
        for s in train.samples() {
            for (j, &x) in s.features.iter().enumerate() {
                min[j] = min[j].min(x);
                max[j] = max[j].max(x);
            }
        }
        Ok(Self { lo, hi, min, max })
    }

    pub fn transform_row(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.min.iter().zip(&self.max))
            .map(|(&x, (&min, &max))| {
                if max > min {
                    (self.lo + (x - min) / (max - min) * (self.hi - self.lo)).clamp(self.lo, self.hi)
                } else {
                    self.lo
                }
            })
            .collect()
    }

    pub fn transform(&self, data: &LabeledDataset) -> Result<LabeledDataset> {
        if data.feature_dim() != self.min.len() {
            return Err(Error::Size(format!(
                "scaler fitted on {} features, data has {}",
                self.min.len(),
                data.feature_dim()
            )));
        }
        data.map_features(|row| self.transform_row(row))
    }
}

/// Fits a [`RangeScaler`] on `train` and applies it to both splits.
pub fn rescale_to_range(
    train: &LabeledDataset,
    test: &LabeledDataset,
    lo: f64,
    hi: f64,
) -> Result<(LabeledDataset, LabeledDataset)> {
    let scaler = RangeScaler::fit(train, lo, hi)?;
    Ok((scaler.transform(train)?, scaler.transform(test)?))
}

/// Scales `row` to unit L2 norm. The zero vector maps to `e_0`.
pub fn l2_normalize(row: &[f64]) -> Vec<f64> {
    let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        let mut e0 = vec![0.0; row.len()];
        if let Some(first) = e0.first_mut() {
            *first = 1.0;
        }
        return e0;
    }
    row.iter().map(|v| v / norm).collect()
}

pub fn l2_normalize_dataset(data: &LabeledDataset) -> Result<LabeledDataset> {
    data.map_features(l2_normalize)
}

/// Seeded shuffle, then the first `floor(ratio * m)` samples train and the
/// rest test. Both sides keep at least one sample when `m >= 2`.
pub fn split_train_test(data: &LabeledDataset, ratio: f64, seed: u64) -> Result<(LabeledDataset, LabeledDataset)> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::Config(format!("split ratio {ratio} outside (0, 1)")));
    }
    let m = data.len();
    let mut indices: Vec<usize> = (0..m).collect();
    indices.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    // the epsilon absorbs products like 0.8 * 10 landing just below an integer
    let mut n_train = (ratio * m as f64 + 1e-9).floor() as usize;
    if m >= 2 {
        n_train = n_train.clamp(1, m - 1);
    }
    let (train, test) = indices.split_at(n_train.min(m));
    Ok((data.subset(train), data.subset(test)))
}

/// Keeps the first `n` columns of `ranked`, in ranked order.
pub fn select_features(data: &LabeledDataset, ranked: &[usize], n: usize) -> Result<LabeledDataset> {
    if n == 0 || ranked.len() < n {
        return Err(Error::Config(format!("need {n} ranked features, got {}", ranked.len())));
    }
    let chosen = &ranked[..n];
    for (i, &c) in chosen.iter().enumerate() {
        if c >= data.feature_dim() {
            return Err(Error::Config(format!(
                "feature index {c} out of range for {} features",
                data.feature_dim()
            )));
        }
        if chosen[..i].contains(&c) {
            return Err(Error::Config(format!("feature index {c} ranked twice")));
        }
    }
    data.map_features(|row| chosen.iter().map(|&c| row[c]).collect())
}

/// Seeded subsample of at most `cap` samples without replacement. Class
/// proportions are kept (rounded) and each class present in `data` keeps at
/// least one sample when `cap >= 2`. Selected samples keep their relative order.
pub fn cap_samples(data: &LabeledDataset, cap: usize, seed: u64) -> LabeledDataset {
    let m = data.len();
    if cap >= m {
        return data.clone();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut by_class: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (i, s) in data.samples().iter().enumerate() {
        by_class[usize::from(s.label)].push(i);
    }
    by_class.iter_mut().for_each(|idx| idx.shuffle(&mut rng));
    let [n0, n1] = [by_class[0].len(), by_class[1].len()];

    let lower = cap.saturating_sub(n0).max(usize::from(n1 > 0 && cap >= 2));
    let upper = n1.min(cap - usize::from(n0 > 0 && cap >= 2).min(cap));
    let proportional = (cap as f64 * n1 as f64 / m as f64).round() as usize;
    let take1 = proportional.clamp(lower.min(upper), upper);
    let take0 = cap - take1;

    let mut chosen: Vec<usize> = by_class[0][..take0].iter().chain(&by_class[1][..take1]).copied().collect();
    chosen.sort_unstable();
    data.subset(&chosen)
}
