use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{argmax, forward, train_mlp, MlpModel, TrainConfig};
use crate::error::{dim_check, Error, Result};
use crate::seed::{derive_seed, rng};

/// Networks trained on bootstrap resamples; predictions average the member
/// probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaggingEnsemble {
    pub members: Vec<MlpModel>,
    pub bootstrap_seeds: Vec<u64>,
}

impl BaggingEnsemble {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The first `k` members. Member `i` depends only on the data, the
    /// config and `i`, so this equals an ensemble trained with `k` members.
    pub fn truncated(&self, k: usize) -> Result<Self> {
        if k == 0 || k > self.len() {
            return Err(Error::Config(format!("cannot keep {k} of {} members", self.len())));
        }
        Ok(Self {
            members: self.members[..k].to_vec(),
            bootstrap_seeds: self.bootstrap_seeds[..k].to_vec(),
        })
    }

    pub fn predict_proba(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        let first = self.members.first().ok_or_else(|| Error::Config("empty ensemble".into()))?;
        let mut sum = DMatrix::zeros(x.nrows(), first.n_outputs());
        for m in &self.members {
            sum += forward(m, x)?;
        }
        Ok(sum / self.members.len() as f64)
    }
}

/// Trains `k` members in parallel. Member `i` uses seed
/// `derive_seed(cfg.seed, i)` both for its bootstrap draw of `n` indices with
/// replacement and for its own training; with `bootstrap` off every member
/// sees the full sample.
pub fn train_bagging(
    x: &DMatrix<f64>,
    labels: &[usize],
    n_classes: usize,
    k: usize,
    hidden: usize,
    cfg: &TrainConfig,
    bootstrap: bool,
) -> Result<BaggingEnsemble> {
    if k == 0 {
        return Err(Error::Config("ensemble needs at least one member".into()));
    }
    dim_check(x.nrows(), labels.len())?;
    let seeds: Vec<u64> = (0..k as u64).map(|i| derive_seed(cfg.seed, i)).collect();
    let members = seeds
        .par_iter()
        .map(|&seed| {
            let member_cfg = TrainConfig {
                seed,
                ..cfg.clone()
            };
            if bootstrap && !labels.is_empty() {
                let mut r = rng(derive_seed(seed, 2));
                let idx: Vec<usize> = (0..labels.len()).map(|_| r.random_range(0..labels.len())).collect();
                let xb = x.select_rows(&idx);
                let yb: Vec<usize> = idx.iter().map(|&i| labels[i]).collect();
                train_mlp(&xb, &yb, n_classes, hidden, &member_cfg)
            } else {
                train_mlp(x, labels, n_classes, hidden, &member_cfg)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BaggingEnsemble {
        members,
        bootstrap_seeds: seeds,
    })
}

/// Averaged probabilities and argmax labels (ties to the lowest class).
pub fn predict(ensemble: &BaggingEnsemble, x: &DMatrix<f64>) -> Result<(DMatrix<f64>, Vec<usize>)> {
    let p = ensemble.predict_proba(x)?;
    let labels = p.row_iter().map(|r| argmax(r.iter().copied())).collect();
    Ok((p, labels))
}
