//! Binary classification metrics. Class 1 is the positive class.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub true_positive: usize,
    pub false_positive: usize,
    pub true_negative: usize,
    pub false_negative: usize,
}

impl ConfusionMatrix {
    pub fn from_predictions(predictions: &[u8], labels: &[u8], positive: u8) -> Result<Self> {
        check_lengths(predictions, labels)?;
        let mut cm = Self::default();
        for (&p, &y) in predictions.iter().zip(labels) {
            match (p == positive, y == positive) {
                (true, true) => cm.true_positive += 1,
                (true, false) => cm.false_positive += 1,
                (false, false) => cm.true_negative += 1,
                (false, true) => cm.false_negative += 1,
            }
        }
        Ok(cm)
    }

    pub fn total(&self) -> usize {
        self.true_positive + self.false_positive + self.true_negative + self.false_negative
    }

    /// `2PR / (P + R)`, or 0 when there are no true positives.
    pub fn f1(&self) -> f64 {
        if self.true_positive == 0 {
            return 0.0;
        }
        let tp = self.true_positive as f64;
        let precision = tp / (tp + self.false_positive as f64);
        let recall = tp / (tp + self.false_negative as f64);
        2.0 * precision * recall / (precision + recall)
    }
}

fn check_lengths(predictions: &[u8], labels: &[u8]) -> Result<()> {
    if predictions.len() != labels.len() {
        return Err(Error::Input(format!(
            "{} predictions for {} labels",
            predictions.len(),
            labels.len()
        )));
    }
    if predictions.is_empty() {
        return Err(Error::Input("no predictions".into()));
    }
    Ok(())
}

/// Fraction of exact matches.
pub fn accuracy(predictions: &[u8], labels: &[u8]) -> Result<f64> {
    check_lengths(predictions, labels)?;
    let hits = predictions.iter().zip(labels).filter(|(p, y)| p == y).count();
    Ok(hits as f64 / labels.len() as f64)
}

pub fn f1_score(predictions: &[u8], labels: &[u8], positive: u8) -> Result<f64> {
    Ok(ConfusionMatrix::from_predictions(predictions, labels, positive)?.f1())
}
