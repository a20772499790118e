use serde::{Deserialize, Serialize};

use crate::error::{dim_check, Error, Result};

/// Fraction of positions where `pred` equals `truth`.
pub fn accuracy(pred: &[usize], truth: &[usize]) -> Result<f64> {
    dim_check(truth.len(), pred.len())?;
    if pred.is_empty() {
        return Err(Error::Config("accuracy of an empty prediction".into()));
    }
    let hits = pred.iter().zip(truth).filter(|(p, t)| p == t).count();
    Ok(hits as f64 / pred.len() as f64)
}

/// Chance-corrected accuracy `(acc - 1/K) / (1 - 1/K)`.
pub fn kappa(acc: f64, n_classes: usize) -> f64 {
    let chance = 1.0 / n_classes as f64;
    (acc - chance) / (1.0 - chance)
}

/// Mean, sample standard deviation, standard error of the mean and range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub mean: f64,
    pub std: f64,
    pub sem: f64,
    pub max: f64,
    pub min: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Summary {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = if values.len() > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        let std = var.sqrt();
        Summary {
            mean,
            std,
            sem: std / n.sqrt(),
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
        }
    }
}
