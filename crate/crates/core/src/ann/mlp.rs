use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::adam::{adam_step, AdamState};
use crate::error::{dim_check, Error, Result};
use crate::seed::{derive_seed, rng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub l2: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub adam_beta1: f64,
    pub adam_beta2: f64,
    pub adam_eps: f64,
    pub seed: u64,
    /// Stop once the epoch loss has failed to improve by more than this for
    /// `patience` consecutive epochs.
    pub tol: f64,
    pub patience: usize,
    /// When false the biases stay at zero and each layer is `g(W·a)`.
    pub use_bias: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.001,
            l2: 0.0001,
            batch_size: 200,
            epochs: 200,
            adam_beta1: 0.9,
            adam_beta2: 0.999,
            adam_eps: 1e-8,
            seed: 0,
            tol: 1e-6,
            patience: 10,
            use_bias: true,
        }
    }
}

impl TrainConfig {
    fn validate(&self) -> Result<()> {
        let ok = self.learning_rate > 0.0
            && self.l2 >= 0.0
            && self.batch_size > 0
            && (0.0..1.0).contains(&self.adam_beta1)
            && (0.0..1.0).contains(&self.adam_beta2)
            && self.adam_eps > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid training configuration {self:?}")))
        }
    }
}

/// `softmax(W2 · relu(W1 · x + b1) + b2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    pub w1: DMatrix<f64>,
    pub b1: DVector<f64>,
    pub w2: DMatrix<f64>,
    pub b2: DVector<f64>,
}

/// Gradients with the same shapes as [`MlpModel`].
pub type MlpGrads = MlpModel;

fn glorot_with(r: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    let limit = (6.0 / (rows + cols) as f64).sqrt();
    DMatrix::from_fn(rows, cols, |_, _| r.random_range(-limit..=limit))
}

/// `rows × cols` weights uniform on `±√(6 / (fan_in + fan_out))` with
/// `fan_in = cols` and `fan_out = rows`.
pub fn glorot_init(rows: usize, cols: usize, seed: u64) -> DMatrix<f64> {
    glorot_with(&mut rng(seed), rows, cols)
}

impl MlpModel {
    pub fn zeros(n_in: usize, hidden: usize, n_out: usize) -> Self {
        Self {
            w1: DMatrix::zeros(hidden, n_in),
            b1: DVector::zeros(hidden),
            w2: DMatrix::zeros(n_out, hidden),
            b2: DVector::zeros(n_out),
        }
    }

    /// Glorot-uniform weights, zero biases.
    pub fn glorot(n_in: usize, hidden: usize, n_out: usize, seed: u64) -> Self {
        let mut r = rng(derive_seed(seed, 0));
        let w1 = glorot_with(&mut r, hidden, n_in);
        let w2 = glorot_with(&mut r, n_out, hidden);
        Self {
            w1,
            b1: DVector::zeros(hidden),
            w2,
            b2: DVector::zeros(n_out),
        }
    }

    pub fn n_inputs(&self) -> usize {
        self.w1.ncols()
    }

    pub fn hidden(&self) -> usize {
        self.w1.nrows()
    }

    pub fn n_outputs(&self) -> usize {
        self.w2.nrows()
    }

    pub fn is_finite(&self) -> bool {
        [self.w1.as_slice(), self.b1.as_slice(), self.w2.as_slice(), self.b2.as_slice()]
            .iter()
            .all(|s| s.iter().all(|v| v.is_finite()))
    }

    fn tensors_mut(&mut self) -> [&mut [f64]; 4] {
        [
            self.w1.as_mut_slice(),
            self.b1.as_mut_slice(),
            self.w2.as_mut_slice(),
            self.b2.as_mut_slice(),
        ]
    }

    fn tensors(&self) -> [&[f64]; 4] {
        [self.w1.as_slice(), self.b1.as_slice(), self.w2.as_slice(), self.b2.as_slice()]
    }

    fn sizes(&self) -> [usize; 4] {
        self.tensors().map(<[f64]>::len)
    }
}

struct Activations {
    pre_hidden: DMatrix<f64>,
    hidden: DMatrix<f64>,
    /// Per-row log-sum-exp of the logits.
    lse: Vec<f64>,
    logits: DMatrix<f64>,
    probs: DMatrix<f64>,
}

fn add_row_bias(m: &mut DMatrix<f64>, b: &DVector<f64>) {
    for mut row in m.row_iter_mut() {
        row += b.transpose();
    }
}

/// Row-wise softmax and log-sum-exp.
fn softmax_rows(z: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>) {
    let mut p = z.clone();
    let mut lse = Vec::with_capacity(z.nrows());
    for mut row in p.row_iter_mut() {
        let max = row.max();
        row.apply(|v| *v = (*v - max).exp());
        let sum = row.sum();
        row /= sum;
        lse.push(max + sum.ln());
    }
    (p, lse)
}

fn activations(model: &MlpModel, x: &DMatrix<f64>) -> Result<Activations> {
    dim_check(model.n_inputs(), x.ncols())?;
    let mut pre_hidden = x * model.w1.transpose();
    add_row_bias(&mut pre_hidden, &model.b1);
    let hidden = pre_hidden.map(|v| v.max(0.0));
    let mut logits = &hidden * model.w2.transpose();
    add_row_bias(&mut logits, &model.b2);
    let (probs, lse) = softmax_rows(&logits);
    Ok(Activations {
        pre_hidden,
        hidden,
        lse,
        logits,
        probs,
    })
}

/// Class probabilities, one row per input row.
pub fn forward(model: &MlpModel, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    activations(model, x).map(|a| a.probs)
}

/// One-hot rows for `labels`.
pub fn one_hot(labels: &[usize], n_classes: usize) -> DMatrix<f64> {
    let mut y = DMatrix::zeros(labels.len(), n_classes);
    for (i, &l) in labels.iter().enumerate() {
        y[(i, l)] = 1.0;
    }
    y
}

/// Mean cross-entropy plus `l2 · (‖W1‖² + ‖W2‖²)` and its exact gradient.
/// Biases are not penalised.
pub fn loss_and_grads(model: &MlpModel, x: &DMatrix<f64>, y: &DMatrix<f64>, l2: f64) -> Result<(f64, MlpGrads)> {
    dim_check(x.nrows(), y.nrows())?;
    dim_check(model.n_outputs(), y.ncols())?;
    let n = x.nrows() as f64;
    let act = activations(model, x)?;

    let mut ce = 0.0;
    for (i, (z, t)) in act.logits.row_iter().zip(y.row_iter()).enumerate() {
        for (zi, ti) in z.iter().zip(t.iter()) {
            if *ti != 0.0 {
                ce -= ti * (zi - act.lse[i]);
            }
        }
    }
    ce /= n;
    let penalty = l2 * (model.w1.norm_squared() + model.w2.norm_squared());

    let d_logits = (&act.probs - y) / n;
    let w2 = d_logits.transpose() * &act.hidden + &model.w2 * (2.0 * l2);
    let b2 = d_logits.row_sum().transpose();
    let mut d_hidden = &d_logits * &model.w2;
    d_hidden.zip_apply(&act.pre_hidden, |g, z| {
        if z <= 0.0 {
            *g = 0.0
        }
    });
    let w1 = d_hidden.transpose() * x + &model.w1 * (2.0 * l2);
    let b1 = d_hidden.row_sum().transpose();
    Ok((ce + penalty, MlpModel { w1, b1, w2, b2 }))
}

fn gather_rows(x: &DMatrix<f64>, idx: &[usize]) -> DMatrix<f64> {
    x.select_rows(idx)
}

/// Mini-batch Adam training with a per-epoch seeded shuffle.
///
/// `n_classes` fixes the output width so that bootstrap samples missing a
/// class still produce a full-width model.
pub fn train_mlp(
    x: &DMatrix<f64>,
    labels: &[usize],
    n_classes: usize,
    hidden: usize,
    cfg: &TrainConfig,
) -> Result<MlpModel> {
    if hidden == 0 {
        return Err(Error::Config("hidden layer must have at least one unit".into()));
    }
    cfg.validate()?;
    dim_check(x.nrows(), labels.len())?;
    if let Some(&bad) = labels.iter().find(|&&l| l >= n_classes) {
        return Err(Error::Config(format!("label {bad} out of range")));
    }
    let mut model = MlpModel::glorot(x.ncols(), hidden, n_classes, cfg.seed);
    if cfg.epochs == 0 || labels.is_empty() {
        return Ok(model);
    }
    let y = one_hot(labels, n_classes);
    let mut adam = AdamState::new(&model.sizes());
    let mut shuffle_rng = rng(derive_seed(cfg.seed, 1));
    let mut order: Vec<usize> = (0..labels.len()).collect();
    let mut best = f64::INFINITY;
    let mut stale = 0;
    for _ in 0..cfg.epochs {
        order.shuffle(&mut shuffle_rng);
        let mut epoch_loss = 0.0;
        for batch in order.chunks(cfg.batch_size) {
            let xb = gather_rows(x, batch);
            let yb = gather_rows(&y, batch);
            let (loss, mut grads) = loss_and_grads(&model, &xb, &yb, cfg.l2)?;
            if !loss.is_finite() {
                return Err(Error::TrainingDiverged);
            }
            if !cfg.use_bias {
                grads.b1.fill(0.0);
                grads.b2.fill(0.0);
            }
            epoch_loss += loss * batch.len() as f64;
            let g = grads.tensors();
            adam_step(&mut adam, &mut model.tensors_mut(), &g, cfg);
        }
        epoch_loss /= labels.len() as f64;
        if !model.is_finite() || !epoch_loss.is_finite() {
            return Err(Error::TrainingDiverged);
        }
        if epoch_loss > best - cfg.tol {
            stale += 1;
            if stale >= cfg.patience {
                break;
            }
        } else {
            stale = 0;
        }
        best = best.min(epoch_loss);
    }
    Ok(model)
}
