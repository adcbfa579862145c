//! Mini-batch SGD on binary cross-entropy with parameter-shift gradients.

use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::LabeledDataset;
use crate::encoding::FeatureVector;
use crate::error::{Error, Result};
use crate::metrics::accuracy;
use crate::model::{label_from_expectation, probability, ModelConfig, ModelParams, SampleEvaluator};
use crate::parallel::map_ordered;

/// Probabilities are clamped to `[EPS, 1 - EPS]` before taking logs.
pub const EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self { epochs: 5, learning_rate: 0.1, batch_size: 32, seed: 0 }
    }
}

impl TrainConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    /// A zero learning rate is accepted so that a run can be used to
    /// measure the untrained model.
    pub fn validate(&self) -> Result<()> {
        if self.epochs == 0 {
            return Err(Error::Config("epochs must be at least 1".into()));
        }
        if !(self.learning_rate.is_finite() && self.learning_rate >= 0.0) {
            return Err(Error::Config(format!("invalid learning rate {}", self.learning_rate)));
        }
        if self.batch_size == 0 {
            return Err(Error::Config("batch size must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainHistory {
    pub epoch_train_accuracy: Vec<f64>,
    pub final_params: ModelParams,
}

/// Binary cross-entropy of a predicted probability against a 0/1 label.
pub fn bce_loss(p: f64, y: u8) -> f64 {
    let p = p.clamp(EPS, 1.0 - EPS);
    if y == 1 {
        -p.ln()
    } else {
        -(1.0 - p).ln()
    }
}

fn bce_dloss_dp(p: f64, y: u8) -> f64 {
    let p = p.clamp(EPS, 1.0 - EPS);
    if y == 1 {
        -1.0 / p
    } else {
        1.0 / (1.0 - p)
    }
}

fn loss_gradient(eval: &SampleEvaluator, y: u8, params: &ModelParams) -> Result<Vec<f64>> {
    let (z, dz) = eval.expectation_and_gradient(params)?;
    // p = (1 - z) / 2
    let scale = bce_dloss_dp(probability(z), y) * -0.5;
    Ok(dz.into_iter().map(|g| g * scale).collect())
}

/// Gradient of the BCE loss of one sample with respect to every θ.
pub fn grad_params(x: &FeatureVector, y: u8, config: &ModelConfig, params: &ModelParams) -> Result<Vec<f64>> {
    loss_gradient(&SampleEvaluator::new(x, config)?, y, params)
}

/// θ drawn uniformly from `[0, 2π)`.
pub fn initial_params(config: &ModelConfig, seed: u64) -> ModelParams {
    init_from(config, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn init_from(config: &ModelConfig, rng: &mut ChaCha8Rng) -> ModelParams {
    let theta = (0..config.num_params()).map(|_| rng.random_range(0.0..TAU)).collect();
    ModelParams::new(theta).expect("uniform draws are finite")
}

fn evaluators(data: &LabeledDataset, config: &ModelConfig) -> Result<Vec<SampleEvaluator>> {
    map_ordered(data.samples(), |s| {
        FeatureVector::new(s.features.clone()).and_then(|x| SampleEvaluator::new(&x, config))
    })
    .into_iter()
    .collect()
}

fn predict_with(evals: &[SampleEvaluator], params: &ModelParams) -> Result<Vec<u8>> {
    map_ordered(evals, |e| e.expectation(params).map(label_from_expectation)).into_iter().collect()
}

pub fn train(data: &LabeledDataset, model: &ModelConfig, tcfg: &TrainConfig) -> Result<TrainHistory> {
    tcfg.validate()?;
    model.validate()?;
    if data.is_empty() {
        return Err(Error::Input("cannot train on an empty dataset".into()));
    }
    let evals = evaluators(data, model)?;
    let labels = data.labels();

    let mut rng = ChaCha8Rng::seed_from_u64(tcfg.seed);
    let mut params = init_from(model, &mut rng);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut history = Vec::with_capacity(tcfg.epochs);

    for _ in 0..tcfg.epochs {
        order.shuffle(&mut rng);
        for batch in order.chunks(tcfg.batch_size) {
            let grads = map_ordered(batch, |&i| loss_gradient(&evals[i], labels[i], &params));
            let mut mean = vec![0.0; params.len()];
            for g in grads {
                for (m, v) in mean.iter_mut().zip(g?) {
                    *m += v;
                }
            }
            let step = tcfg.learning_rate / batch.len() as f64;
            for (t, g) in params.as_mut_slice().iter_mut().zip(&mean) {
                *t -= step * g;
            }
        }
        history.push(accuracy(&predict_with(&evals, &params)?, &labels)?);
    }
    Ok(TrainHistory { epoch_train_accuracy: history, final_params: params })
}

/// Hard labels for every sample of `data`.
pub fn predict_dataset(data: &LabeledDataset, model: &ModelConfig, params: &ModelParams) -> Result<Vec<u8>> {
    predict_with(&evaluators(data, model)?, params)
}

/// Accuracy and F1 (positive class 1) of `params` on `data`.
pub fn evaluate(data: &LabeledDataset, model: &ModelConfig, params: &ModelParams) -> Result<(f64, f64)> {
    let pred = predict_dataset(data, model, params)?;
    let labels = data.labels();
    Ok((accuracy(&pred, &labels)?, crate::metrics::f1_score(&pred, &labels, 1)?))
}
