//! Single-hidden-layer ReLU network with softmax output, trained with Adam
//! on an L2-penalised cross-entropy, and its bootstrap-aggregated ensemble.

mod adam;
mod bagging;
mod mlp;

pub use adam::{adam_step, AdamState};
pub use bagging::{predict, train_bagging, BaggingEnsemble};
pub use mlp::{
    forward, glorot_init, loss_and_grads, one_hot, train_mlp, MlpGrads, MlpModel, TrainConfig,
};

/// Index of the largest entry; ties go to the lowest index.
pub fn argmax(row: impl IntoIterator<Item = f64>) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, v) in row.into_iter().enumerate() {
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}
