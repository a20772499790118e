//! Tangent-space features of every trial and their principal components.

use isbci::dataio::{gen_synthetic, SyntheticConfig};
use isbci::features::pca_fit;
use isbci::pipeline::{fit_tangent_space, tangent_features, trial_covariances};
use isbci::spd::{CovarianceEstimator, MeanConfig, VectorScheme};

fn main() -> isbci::Result<()> {
    let set = gen_synthetic(&SyntheticConfig::default())?;
    let covs = trial_covariances(&set, &CovarianceEstimator::default())?;
    let all: Vec<usize> = (0..set.n_trials()).collect();
    let ts = fit_tangent_space(&covs, &all, &MeanConfig::default())?;
    let x = tangent_features(&ts, &covs, &all, VectorScheme::RowConcat)?;
    println!("feature matrix: {} trials x {} features", x.nrows(), x.ncols());

    let pca = pca_fit(&x, 8)?;
    let total: f64 = pca_fit(&x, x.ncols().min(x.nrows() - 1))?.eigenvalues.sum();
    let mut running = 0.0;
    for (j, l) in pca.eigenvalues.iter().enumerate() {
        running += l;
        println!("component {:>2}: variance {:>9.4}, cumulative {:.1}%", j + 1, l, 100.0 * running / total);
    }

    let z = pca.transform(&x)?;
    let class_mean = |k: usize| {
        let rows: Vec<usize> = all.iter().copied().filter(|&i| set.labels()[i] == k).collect();
        rows.iter().map(|&i| z[(i, 0)]).sum::<f64>() / rows.len() as f64
    };
    println!("first component class means: {:.3} vs {:.3}", class_mean(0), class_mean(1));
    Ok(())
}
