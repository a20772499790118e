//! Trial covariances on the SPD manifold: Riemannian mean, tangent
//! projection, geodesic distance and a minimum-distance-to-mean classifier.

use isbci::dataio::{gen_synthetic, SyntheticConfig};
use isbci::features::stratified_split;
use isbci::pipeline::trial_covariances;
use isbci::spd::{
    geodesic_distance, mean_covariance, tangent_project, vectorize, CovarianceEstimator, MdmClassifier, MeanConfig,
    MeanMetric, VectorScheme,
};

fn main() -> isbci::Result<()> {
    let set = gen_synthetic(&SyntheticConfig {
        channels: 4,
        ..Default::default()
    })?;
    let covs = trial_covariances(&set, &CovarianceEstimator::default())?;

    let riemann = mean_covariance(&covs, &MeanConfig::default())?;
    let euclid = mean_covariance(
        &covs,
        &MeanConfig {
            metric: MeanMetric::Arithmetic,
            ..Default::default()
        },
    )?;
    println!("Riemannian mean:\n{:.3}", riemann.matrix());
    println!("distance to arithmetic mean: {:.4}", geodesic_distance(&riemann, &euclid)?);

    let s = tangent_project(&covs[0], &riemann)?;
    let v = vectorize(&s, VectorScheme::UpperWeighted);
    println!("trial 0 tangent vector ({} entries): {:.3?}", v.values.len(), &v.values[..4]);

    let (train, test) = stratified_split(set.labels(), 0.5, 0)?;
    let train_covs: Vec<_> = train.iter().map(|&i| covs[i].clone()).collect();
    let train_labels: Vec<usize> = train.iter().map(|&i| set.labels()[i]).collect();
    let mdm = MdmClassifier::fit(&train_covs, &train_labels, set.n_classes(), &MeanConfig::default())?;
    let hits = test
        .iter()
        .filter(|&&i| mdm.predict(&covs[i]).ok() == Some(set.labels()[i]))
        .count();
    println!("MDM held-out accuracy: {:.3}", hits as f64 / test.len() as f64);
    Ok(())
}
