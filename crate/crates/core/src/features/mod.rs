//! Dimension reduction and cross-validation folds.

mod folds;
mod pca;

pub use folds::{stratified_kfold, stratified_split, FoldAssignment};
pub use pca::{pca_fit, pca_transform, PcaModel};
