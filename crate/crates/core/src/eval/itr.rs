use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inputs of the information-per-trial formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ItrInput {
    pub n_classes: usize,
    pub accuracy: f64,
    pub trial_seconds: f64,
}

impl ItrInput {
    pub fn new(n_classes: usize, accuracy: f64, trial_seconds: f64) -> Result<Self> {
        if n_classes < 2 {
            return Err(Error::Config("ITR needs at least two classes".into()));
        }
        if !(0.0..=1.0).contains(&accuracy) {
            return Err(Error::Config(format!("accuracy {accuracy} outside [0, 1]")));
        }
        if !(trial_seconds > 0.0 && trial_seconds.is_finite()) {
            return Err(Error::Config("trial time must be positive".into()));
        }
        Ok(Self {
            n_classes,
            accuracy,
            trial_seconds,
        })
    }

    pub fn misclassification(&self) -> f64 {
        1.0 - self.accuracy
    }
}

fn x_log2(x: f64, arg: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * arg.log2()
    }
}

/// Bits per decision: `log2|C| + a·log2(a) + m·log2(m / (|C| - 1))`.
pub fn info_per_trial(inp: &ItrInput) -> f64 {
    let k = inp.n_classes as f64;
    let a = inp.accuracy;
    let m = inp.misclassification();
    k.log2() + x_log2(a, a) + x_log2(m, m / (k - 1.0))
}

/// Bits per second.
pub fn itr(bits: f64, trial_seconds: f64) -> Result<f64> {
    if !(trial_seconds > 0.0) {
        return Err(Error::Config("trial time must be positive".into()));
    }
    Ok(bits / trial_seconds)
}

pub fn bits_per_minute(bits_per_second: f64) -> f64 {
    60.0 * bits_per_second
}
