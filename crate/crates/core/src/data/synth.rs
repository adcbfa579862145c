use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{LabeledDataset, Sample};
use crate::error::{Error, Result};

/// Two isotropic unit-variance Gaussian blobs in `dim` dimensions whose means
/// sit at `-separation/2` and `+separation/2` on every axis. Labels alternate
/// 0, 1, 0, ... so the classes are balanced.
pub fn synth_binary_dataset(m: usize, dim: usize, separation: f64, seed: u64) -> Result<LabeledDataset> {
    if m < 2 || dim < 2 {
        return Err(Error::Config(format!("synthetic dataset needs m >= 2 and dim >= 2, got m={m}, dim={dim}")));
    }
    if !separation.is_finite() {
        return Err(Error::Config("separation must be finite".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples = (0..m)
        .map(|i| {
            let label = (i % 2) as u8;
            let center = if label == 1 { separation / 2.0 } else { -separation / 2.0 };
            let features = (0..dim)
                .map(|_| center + <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng))
                .collect();
            Sample { features, label }
        })
        .collect();
    LabeledDataset::new("synth", dim, samples)
}
