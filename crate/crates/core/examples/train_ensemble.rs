//! One network, a bagged ensemble, and the full pipeline saved to disk.

use isbci::ann::{predict, train_bagging, train_mlp, TrainConfig};
use isbci::dataio::{gen_synthetic, SyntheticConfig};
use isbci::eval::accuracy;
use isbci::features::{pca_fit, stratified_split};
use isbci::pipeline::{fit_pipeline, fit_tangent_space, load_model, save_model, tangent_features, trial_covariances};
use isbci::pipeline::{HyperParams, PipelineConfig};
use isbci::spd::{CovarianceEstimator, MeanConfig, VectorScheme};

fn main() -> isbci::Result<()> {
    let set = gen_synthetic(&SyntheticConfig {
        separation: 0.25,
        ..Default::default()
    })?;
    let (train, test) = stratified_split(set.labels(), 0.6, 1)?;
    let truth: Vec<usize> = test.iter().map(|&i| set.labels()[i]).collect();

    let covs = trial_covariances(&set, &CovarianceEstimator::default())?;
    let ts = fit_tangent_space(&covs, &train, &MeanConfig::default())?;
    let pca = pca_fit(&tangent_features(&ts, &covs, &train, VectorScheme::RowConcat)?, 8)?;
    let xtr = pca.transform(&tangent_features(&ts, &covs, &train, VectorScheme::RowConcat)?)?;
    let xte = pca.transform(&tangent_features(&ts, &covs, &test, VectorScheme::RowConcat)?)?;
    let ytr: Vec<usize> = train.iter().map(|&i| set.labels()[i]).collect();

    let cfg = TrainConfig::default();
    let single = train_mlp(&xtr, &ytr, 2, 32, &cfg)?;
    let probs = isbci::ann::forward(&single, &xte)?;
    let pred: Vec<usize> = probs.row_iter().map(|r| isbci::ann::argmax(r.iter().copied())).collect();
    println!("single network: {:.3}", accuracy(&pred, &truth)?);
    for k in [2, 8, 32] {
        let ens = train_bagging(&xtr, &ytr, 2, k, 32, &cfg, true)?;
        let (_, pred) = predict(&ens, &xte)?;
        println!("{k:>2} bagged networks: {:.3}", accuracy(&pred, &truth)?);
    }

    let hp = HyperParams { n_rf: 8, k_bag: 8, hidden: 32 };
    let model = fit_pipeline(&set, &train, hp, &PipelineConfig::standard())?;
    let path = std::env::temp_dir().join("isbci-example.isnn");
    save_model(&model, &path)?;
    let loaded = load_model(&path)?;
    let trials: Vec<_> = test.iter().map(|&i| set.trial_matrix(i)).collect();
    let (_, pred) = loaded.predict_trials(&trials)?;
    println!("pipeline {} reloaded from {}: {:.3}", loaded.hyperparams(), path.display(), accuracy(&pred, &truth)?);
    Ok(())
}
