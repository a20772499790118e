mod common;

use nalgebra::DMatrix;
use proptest::prelude::*;

use isbci::features::*;
use isbci::Error;
use common::*;

fn centered_cov(x: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, f) = x.shape();
    let mut mean = vec![0.0; f];
    for j in 0..f {
        for i in 0..n {
            mean[j] += x[(i, j)] / n as f64;
        }
    }
    DMatrix::from_fn(f, f, |a, b| {
        let mut acc = 0.0;
        for i in 0..n {
            acc += (x[(i, a)] - mean[a]) * (x[(i, b)] - mean[b]);
        }
        acc / (n - 1) as f64
    })
}

fn assert_orthonormal(m: &PcaModel) {
    let g = &m.components * m.components.transpose();
    let k = m.n_components();
    assert!(max_abs(&(g - DMatrix::identity(k, k))) < 1e-8);
}

#[test]
fn rank_one_line() {
    let x = DMatrix::from_fn(10, 2, |i, _| i as f64 - 3.0);
    let m = pca_fit(&x, 1).unwrap();
    let h = 0.5f64.sqrt();
    assert!((m.components[(0, 0)] - h).abs() < 1e-12 && (m.components[(0, 1)] - h).abs() < 1e-12);
}

#[test]
fn isotropic_cloud_is_orthonormal() {
    let x = random_matrix(&mut rng(1), 400, 5);
    let m = pca_fit(&x, 5).unwrap();
    assert_orthonormal(&m);
    assert!(m.eigenvalues.iter().all(|&l| (l - 1.0).abs() < 0.3));
}

#[test]
fn components_diagonalize_sample_covariance() {
    let base = random_matrix(&mut rng(2), 60, 6);
    let mix = random_matrix(&mut rng(3), 6, 6);
    let x = base * mix;
    let cov = centered_cov(&x);
    let m = pca_fit(&x, 4).unwrap();
    for j in 0..4 {
        let u = m.components.row(j).transpose();
        let residual = &cov * &u - &u * m.eigenvalues[j];
        assert!(residual.norm() < 1e-8, "component {j}: {}", residual.norm());
    }
    assert!(m.eigenvalues.as_slice().windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn gram_path_matches_covariance_oracle() {
    // more features than samples
    let x = random_matrix(&mut rng(4), 12, 30);
    let cov = centered_cov(&x);
    let m = pca_fit(&x, 12).unwrap();
    assert_orthonormal(&m);
    for j in 0..11 {
        let u = m.components.row(j).transpose();
        assert!((&cov * &u - &u * m.eigenvalues[j]).norm() < 1e-8);
    }
    assert!(m.eigenvalues[11].abs() < 1e-10);
}

#[test]
fn transform_properties() {
    let x = random_matrix(&mut rng(5), 50, 4) * random_matrix(&mut rng(6), 4, 4);
    let m = pca_fit(&x, 3).unwrap();
    let mean_row = m.mean.transpose();
    assert!(max_abs(&pca_transform(&m, &DMatrix::from_rows(&[mean_row])).unwrap()) < 1e-12);
    let z = m.transform(&x).unwrap();
    for j in 0..3 {
        let col = z.column(j);
        let mu = col.mean();
        let var = col.iter().map(|v| (v - mu).powi(2)).sum::<f64>() / 49.0;
        assert!((var - m.eigenvalues[j]).abs() < 1e-9 * m.eigenvalues[j].max(1.0));
    }
    assert!(matches!(m.transform(&DMatrix::zeros(2, 5)), Err(Error::DimensionMismatch { .. })));
}

#[test]
fn canonical_model_selects_columns() {
    let m = PcaModel {
        mean: nalgebra::DVector::zeros(4),
        components: DMatrix::identity(2, 4),
        eigenvalues: nalgebra::dvector![1.0, 1.0],
    };
    let x = random_matrix(&mut rng(7), 5, 4);
    assert_eq!(m.transform(&x).unwrap(), x.columns(0, 2).into_owned());
}

#[test]
fn too_many_components() {
    assert!(matches!(pca_fit(&DMatrix::zeros(3, 5), 4), Err(Error::Config(_))));
}

#[test]
fn fold_examples() {
    let fa = stratified_kfold(&[0, 0, 0, 1, 1, 1], 3, 0).unwrap();
    for f in 0..3 {
        let mut got: Vec<usize> = fa.test_indices(f).iter().map(|&i| [0, 0, 0, 1, 1, 1][i]).collect();
        got.sort_unstable();
        assert_eq!(got, vec![0, 1]);
    }
    let mut labels = vec![0; 70];
    labels.extend(vec![1; 30]);
    let fa = stratified_kfold(&labels, 10, 3).unwrap();
    for class in 0..2 {
        let sizes: Vec<usize> = (0..10)
            .map(|f| fa.test_indices(f).iter().filter(|&&i| labels[i] == class).count())
            .collect();
        assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
    }
    let err = stratified_kfold(&[0, 0, 1], 3, 0).unwrap_err();
    assert!(err.to_string().starts_with("insufficient samples for stratification"));
}

#[test]
fn fold_seeds() {
    let labels: Vec<usize> = (0..40).map(|i| i % 2).collect();
    assert_eq!(stratified_kfold(&labels, 5, 1).unwrap(), stratified_kfold(&labels, 5, 1).unwrap());
    assert_ne!(stratified_kfold(&labels, 5, 1).unwrap(), stratified_kfold(&labels, 5, 2).unwrap());
}

#[test]
fn split_is_stratified() {
    let labels: Vec<usize> = (0..50).map(|i| usize::from(i % 5 == 0)).collect();
    let (train, test) = stratified_split(&labels, 0.6, 9).unwrap();
    assert_eq!(train.len() + test.len(), 50);
    assert_eq!(train.iter().filter(|&&i| labels[i] == 1).count(), 6);
    assert_eq!(train.iter().filter(|&&i| labels[i] == 0).count(), 24);
    let (_, test) = stratified_split(&labels, 1.0, 9).unwrap();
    assert!(test.is_empty());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn folds_partition_and_balance(counts in prop::collection::vec(5usize..40, 2..5), k in 2usize..6, seed in any::<u64>()) {
        let labels: Vec<usize> = counts.iter().enumerate().flat_map(|(c, &n)| std::iter::repeat_n(c, n)).collect();
        let fa = stratified_kfold(&labels, k, seed).unwrap();
        let mut seen = vec![0; labels.len()];
        for f in 0..k {
            for i in fa.test_indices(f) {
                seen[i] += 1;
            }
        }
        prop_assert!(seen.iter().all(|&s| s == 1));
        for class in 0..counts.len() {
            let sizes: Vec<usize> = (0..k)
                .map(|f| fa.test_indices(f).iter().filter(|&&i| labels[i] == class).count())
                .collect();
            prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        }
    }

    #[test]
    fn full_rank_reconstruction(n in 3usize..20, f in 1usize..6, seed in any::<u64>()) {
        let x = random_matrix(&mut rng(seed), n, f);
        let rank = f.min(n - 1);
        let m = pca_fit(&x, rank).unwrap();
        let back = m.inverse_transform(&m.transform(&x).unwrap()).unwrap();
        prop_assert!(max_abs(&(back - &x)) < 1e-9);
    }

    #[test]
    fn truncation_equals_smaller_fit(n in 8usize..30, f in 2usize..7, seed in any::<u64>()) {
        let x = random_matrix(&mut rng(seed), n, f);
        let big = pca_fit(&x, f).unwrap();
        let small = pca_fit(&x, 1).unwrap();
        prop_assert!(max_abs(&(big.truncate(1).unwrap().components - small.components)) < 1e-9);
    }
}
