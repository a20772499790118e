use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::metrics::{accuracy, Summary};
use crate::ann::{predict, train_bagging, TrainConfig};
use crate::dataio::EegTrialSet;
use crate::error::{Error, Result};
use crate::features::{pca_fit, stratified_kfold, FoldAssignment};
use crate::pipeline::{
    fit_from_covariances, fit_tangent_space, tangent_features, trial_covariances, HyperParams, PipelineConfig,
    PipelineModel,
};
use crate::seed::derive_seed;
use crate::spd::SpdMatrix;

/// Candidate values searched by inner cross-validation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grid {
    pub n_rf: Vec<usize>,
    pub k_bag: Vec<usize>,
    pub hidden: Vec<usize>,
}

impl Grid {
    /// Full search sets: PCA {4..64}, ensemble {2..64}, hidden {8..256}.
    pub fn full() -> Self {
        Self {
            n_rf: vec![4, 8, 16, 32, 64],
            k_bag: vec![2, 4, 8, 16, 32, 64],
            hidden: vec![8, 16, 32, 64, 128, 256],
        }
    }

    pub fn single(hp: HyperParams) -> Self {
        Self {
            n_rf: vec![hp.n_rf],
            k_bag: vec![hp.k_bag],
            hidden: vec![hp.hidden],
        }
    }

    fn validate(&self) -> Result<()> {
        let lists = [&self.n_rf, &self.k_bag, &self.hidden];
        if lists.iter().any(|l| l.is_empty()) {
            return Err(Error::Config("hyperparameter grid is empty".into()));
        }
        if lists.iter().any(|l| l.contains(&0)) {
            return Err(Error::Config("hyperparameter values must be positive".into()));
        }
        Ok(())
    }

    /// Grid points in search order (PCA outermost, hidden innermost).
    pub fn points(&self) -> Vec<HyperParams> {
        let mut out = Vec::new();
        for &n_rf in &self.n_rf {
            for &k_bag in &self.k_bag {
                for &hidden in &self.hidden {
                    out.push(HyperParams { n_rf, k_bag, hidden });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvConfig {
    pub k_folds: usize,
    /// Folds of the model-selection CV run inside each outer training portion.
    pub inner_folds: usize,
    pub seed: u64,
    pub grid: Grid,
    pub pipeline: PipelineConfig,
}

impl Default for CvConfig {
    fn default() -> Self {
        Self {
            k_folds: 10,
            inner_folds: 3,
            seed: 0,
            grid: Grid::full(),
            pipeline: PipelineConfig::standard(),
        }
    }
}

/// Per-fold test accuracies of one dataset and their summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub label: String,
    pub n_classes: usize,
    pub fold_accuracies: Vec<f64>,
    pub mean: f64,
    pub std: f64,
    pub sem: f64,
    pub max: f64,
    pub min: f64,
    /// Hyperparameters selected in each outer fold.
    pub chosen_hyperparams: Vec<HyperParams>,
}

impl CvResult {
    pub fn from_folds(label: impl Into<String>, n_classes: usize, folds: Vec<f64>, chosen: Vec<HyperParams>) -> Self {
        let s = Summary::of(&folds);
        Self {
            label: label.into(),
            n_classes,
            fold_accuracies: folds,
            mean: s.mean,
            std: s.std,
            sem: s.sem,
            max: s.max,
            min: s.min,
            chosen_hyperparams: chosen,
        }
    }
}

fn train_cfg_for(base: &TrainConfig, seed: u64) -> TrainConfig {
    TrainConfig {
        seed,
        ..base.clone()
    }
}

/// Mean inner-CV accuracy of every grid point on the `train` portion.
///
/// PCA components are nested and ensemble member `i` depends only on `i`,
/// so each inner fold fits one PCA at the largest dimension and one
/// ensemble per (dimension, width) at the largest size, and scores the
/// smaller settings on prefixes.
fn grid_scores(
    covs: &[SpdMatrix],
    labels: &[usize],
    n_classes: usize,
    train: &[usize],
    cfg: &CvConfig,
    seed: u64,
) -> Result<HashMap<HyperParams, f64>> {
    let train_labels: Vec<usize> = train.iter().map(|&i| labels[i]).collect();
    let inner = stratified_kfold(&train_labels, cfg.inner_folds, derive_seed(seed, 0))?;
    let max_rf = *cfg.grid.n_rf.iter().max().unwrap();
    let max_k = *cfg.grid.k_bag.iter().max().unwrap();
    let train_cfg = train_cfg_for(&cfg.pipeline.train, derive_seed(seed, 1));

    let per_fold = inner
        .splits()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(itr, ival)| -> Result<Vec<(HyperParams, f64)>> {
            let fit_idx: Vec<usize> = itr.iter().map(|&j| train[j]).collect();
            let val_idx: Vec<usize> = ival.iter().map(|&j| train[j]).collect();
            let ts = fit_tangent_space(covs, &fit_idx, &cfg.pipeline.mean)?;
            let x_fit = tangent_features(&ts, covs, &fit_idx, cfg.pipeline.scheme)?;
            let x_val = tangent_features(&ts, covs, &val_idx, cfg.pipeline.scheme)?;
            let pca_full = pca_fit(&x_fit, max_rf)?;
            let y_fit: Vec<usize> = fit_idx.iter().map(|&i| labels[i]).collect();
            let y_val: Vec<usize> = val_idx.iter().map(|&i| labels[i]).collect();
            let mut out = Vec::new();
            for &n_rf in &cfg.grid.n_rf {
                let pca = pca_full.truncate(n_rf)?;
                let z_fit = pca.transform(&x_fit)?;
                let z_val = pca.transform(&x_val)?;
                for &hidden in &cfg.grid.hidden {
                    let ens = train_bagging(
                        &z_fit,
                        &y_fit,
                        n_classes,
                        max_k,
                        hidden,
                        &train_cfg,
                        cfg.pipeline.bootstrap,
                    )?;
                    for &k_bag in &cfg.grid.k_bag {
                        let (_, pred) = predict(&ens.truncated(k_bag)?, &z_val)?;
                        out.push((HyperParams { n_rf, k_bag, hidden }, accuracy(&pred, &y_val)?));
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut scores: HashMap<HyperParams, f64> = HashMap::new();
    for fold in per_fold {
        for (hp, acc) in fold {
            *scores.entry(hp).or_default() += acc / cfg.inner_folds as f64;
        }
    }
    Ok(scores)
}

/// Best grid point by inner-CV accuracy on `train`; ties go to the earliest
/// point in [`Grid::points`] order.
pub fn select_hyperparams(
    covs: &[SpdMatrix],
    labels: &[usize],
    n_classes: usize,
    train: &[usize],
    cfg: &CvConfig,
    seed: u64,
) -> Result<HyperParams> {
    let points = cfg.grid.points();
    if points.len() == 1 {
        return Ok(points[0]);
    }
    let scores = grid_scores(covs, labels, n_classes, train, cfg, seed)?;
    let mut best = (points[0], f64::NEG_INFINITY);
    for hp in points {
        let s = scores[&hp];
        if s > best.1 {
            best = (hp, s);
        }
    }
    Ok(best.0)
}

fn fold_seed(cfg: &CvConfig, fold: usize) -> u64 {
    derive_seed(cfg.seed, 1000 + fold as u64)
}

fn fit_fold_with(
    covs: &[SpdMatrix],
    set: &EegTrialSet,
    train: &[usize],
    fold: usize,
    cfg: &CvConfig,
) -> Result<(PipelineModel, HyperParams)> {
    let seed = fold_seed(cfg, fold);
    let hp = select_hyperparams(covs, set.labels(), set.n_classes(), train, cfg, seed)?;
    let pipe = PipelineConfig {
        train: train_cfg_for(&cfg.pipeline.train, derive_seed(seed, 2)),
        ..cfg.pipeline.clone()
    };
    let model = fit_from_covariances(covs, set.labels(), set.class_names(), train, hp, &pipe)?;
    Ok((model, hp))
}

/// Model selection and fit for one outer fold. Reads only the trials of
/// the fold's training portion.
pub fn fit_outer_fold(
    set: &EegTrialSet,
    folds: &FoldAssignment,
    fold: usize,
    cfg: &CvConfig,
) -> Result<(PipelineModel, HyperParams)> {
    let train = folds.train_indices(fold);
    let mut covs = vec![SpdMatrix::identity(set.channels()); set.n_trials()];
    for &i in &train {
        covs[i] = cfg.pipeline.covariance.estimate(&set.trial_matrix(i))?;
    }
    fit_fold_with(&covs, set, &train, fold, cfg)
}

/// Stratified k-fold evaluation of the full pipeline with nested model
/// selection. Folds run in parallel; results land in fold order.
pub fn run_cv_pipeline(set: &EegTrialSet, cfg: &CvConfig, label: &str) -> Result<CvResult> {
    cfg.grid.validate()?;
    set.require_all_classes()?;
    let folds = stratified_kfold(set.labels(), cfg.k_folds, cfg.seed)?;
    let covs = trial_covariances(set, &cfg.pipeline.covariance)?;
    let per_fold = (0..cfg.k_folds)
        .into_par_iter()
        .map(|f| -> Result<(f64, HyperParams)> {
            let train = folds.train_indices(f);
            let test = folds.test_indices(f);
            let (model, hp) = fit_fold_with(&covs, set, &train, f, cfg)?;
            let test_covs: Vec<SpdMatrix> = test.iter().map(|&i| covs[i].clone()).collect();
            let (_, pred) = predict(&model.ensemble, &model.features(&test_covs)?)?;
            let truth: Vec<usize> = test.iter().map(|&i| set.labels()[i]).collect();
            log::debug!("fold {f}: {hp} -> {:?}", accuracy(&pred, &truth));
            Ok((accuracy(&pred, &truth)?, hp))
        })
        .collect::<Result<Vec<_>>>()?;
    let (accs, chosen) = per_fold.into_iter().unzip();
    Ok(CvResult::from_folds(label, set.n_classes(), accs, chosen))
}
