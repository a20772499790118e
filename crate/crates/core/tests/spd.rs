mod common;

use std::f64::consts::E;

use nalgebra::DMatrix;
use proptest::prelude::*;

use isbci::spd::*;
use isbci::Error;
use common::*;

fn spd(m: DMatrix<f64>) -> SpdMatrix {
    SpdMatrix::new(m).unwrap()
}

#[test]
fn covariance_cases() {
    let e = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, -1.0, 1.0]);
    assert_eq!(covariance(&e, 0.0).unwrap().matrix(), &DMatrix::identity(2, 2));
    let e = DMatrix::from_row_slice(1, 4, &[2.0, 2.0, 2.0, 2.0]);
    assert_eq!(covariance(&e, 0.0).unwrap().matrix(), &DMatrix::from_element(1, 1, 4.0));
    let e = DMatrix::from_row_slice(1, 2, &[f64::NAN, 1.0]);
    assert!(matches!(covariance(&e, 0.0), Err(Error::InvalidSamples)));
}

#[test]
fn covariance_matches_dot_product_oracle() {
    let mut r = rng(1);
    let e = random_matrix(&mut r, 3, 5);
    let got = covariance(&e, 0.0).unwrap();
    assert!(max_abs(&(got.matrix() - naive_covariance(&e))) < 1e-12);
    let shrunk = covariance(&e, 0.5).unwrap();
    let mut expected = naive_covariance(&e);
    let shift = 0.5 * expected.trace() / 3.0;
    for i in 0..3 {
        expected[(i, i)] += shift;
    }
    assert!(max_abs(&(shrunk.matrix() - expected)) < 1e-12);
}

#[test]
fn centered_covariance_removes_channel_means() {
    let mut r = rng(2);
    let e = random_matrix(&mut r, 3, 40).add_scalar(5.0);
    let est = CovarianceEstimator { shrinkage: 0.0, center: true };
    let mut centered = e.clone();
    for mut row in centered.row_iter_mut() {
        let m = row.mean();
        row.add_scalar_mut(-m);
    }
    assert!(max_abs(&(est.estimate(&e).unwrap().matrix() - naive_covariance(&centered))) < 1e-12);
}

#[test]
fn matrix_function_cases() {
    assert!(max_abs(&logm(&SpdMatrix::identity(3)).unwrap()) < 1e-15);
    let d = SpdMatrix::from_diagonal(&[E, E * E]).unwrap();
    assert!(max_abs(&(logm(&d).unwrap() - DMatrix::from_diagonal(&nalgebra::dvector![1.0, 2.0]))) < 1e-14);
    let bad = SpdMatrix::symmetric(DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0])).unwrap();
    assert!(matches!(logm(&bad), Err(Error::NotPositiveDefinite)));
    assert!(matches!(SpdMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0])), Err(_)));
}

#[test]
fn expm_logm_round_trip_against_series_oracle() {
    let mut r = rng(3);
    for dim in [2, 5, 8, 12] {
        let a = random_spd(&mut r, dim);
        let l = logm(&spd(a.clone())).unwrap();
        assert!(max_abs(&(series_expm(&l) - &a)) < 1e-8);
        assert!(max_abs(&(expm_sym(&l).matrix() - series_expm(&l))) < 1e-9);
    }
}

#[test]
fn mean_cases() {
    let a = spd(DMatrix::from_row_slice(2, 2, &[2.0, 0.3, 0.3, 1.0]));
    for metric in [MeanMetric::Riemannian, MeanMetric::Arithmetic] {
        let cfg = MeanConfig { metric, ..Default::default() };
        assert!(max_abs(&(mean_covariance(&[a.clone()], &cfg).unwrap().matrix() - a.matrix())) < 1e-12);
    }
    let m = mean_covariance(
        &[SpdMatrix::from_diagonal(&[1.0, 4.0]).unwrap(), SpdMatrix::from_diagonal(&[9.0, 1.0]).unwrap()],
        &MeanConfig::default(),
    )
    .unwrap();
    assert!(max_abs(&(m.matrix() - DMatrix::from_diagonal(&nalgebra::dvector![3.0, 2.0]))) < 1e-10);
    let strict = MeanConfig { max_iter: 0, ..Default::default() };
    let b = SpdMatrix::from_diagonal(&[1.0, 3.0]).unwrap();
    assert!(matches!(mean_covariance(&[a.clone(), b], &strict), Err(Error::MeanDiverged(_))));
    assert!(mean_covariance(&[], &MeanConfig::default()).is_err());
}

#[test]
fn riemannian_mean_matches_oracle() {
    let mut r = rng(4);
    let mats: Vec<DMatrix<f64>> = (0..7).map(|_| random_spd(&mut r, 4)).collect();
    let ours = mean_covariance(&mats.iter().cloned().map(spd).collect::<Vec<_>>(), &MeanConfig::default()).unwrap();
    assert!(max_abs(&(ours.matrix() - oracle_riemann_mean(&mats))) < 1e-7);
}

#[test]
fn tangent_cases() {
    let ci = SpdMatrix::from_diagonal(&[E, 1.0]).unwrap();
    let p = tangent_project(&ci, &SpdMatrix::identity(2)).unwrap();
    assert!(max_abs(&(p - DMatrix::from_diagonal(&nalgebra::dvector![1.0, 0.0]))) < 1e-14);
    assert!(matches!(
        tangent_project(&SpdMatrix::identity(2), &SpdMatrix::identity(3)),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn tangent_matches_jacobi_oracle() {
    let mut r = rng(5);
    for dim in 2..9 {
        let c = random_spd(&mut r, dim);
        let m = random_spd(&mut r, dim);
        let ours = tangent_project(&spd(c.clone()), &spd(m.clone())).unwrap();
        assert!(max_abs(&(ours - oracle_tangent(&c, &m))) < 1e-10, "dim {dim}");
    }
}

#[test]
fn vectorize_cases() {
    let (a, b, d) = (1.5, -0.25, 3.0);
    let p = DMatrix::from_row_slice(2, 2, &[a, b, b, d]);
    assert_eq!(vectorize(&p, VectorScheme::RowConcat).values, vec![a, b, b, d]);
    assert_eq!(vectorize(&p, VectorScheme::UpperWeighted).values, vec![a, 2f64.sqrt() * b, d]);
    assert_eq!(VectorScheme::RowConcat.len(60), 3600);
    let big = DMatrix::<f64>::identity(60, 60);
    assert_eq!(vectorize(&big, VectorScheme::RowConcat).values.len(), 3600);
}

#[test]
fn distance_cases() {
    let mut r = rng(6);
    let a = spd(random_spd(&mut r, 4));
    assert!(geodesic_distance(&a, &a).unwrap() < 1e-12);
    let d = geodesic_distance(&SpdMatrix::identity(2), &SpdMatrix::from_diagonal(&[E * E, 1.0]).unwrap()).unwrap();
    assert!((d - 2.0).abs() < 1e-12);
    for _ in 0..20 {
        let x = random_spd(&mut r, 5);
        let y = random_spd(&mut r, 5);
        let dxy = geodesic_distance(&spd(x.clone()), &spd(y.clone())).unwrap();
        let dyx = geodesic_distance(&spd(y.clone()), &spd(x.clone())).unwrap();
        assert!((dxy - dyx).abs() < 1e-10);
        assert!((dxy - oracle_distance(&x, &y)).abs() < 1e-10);
    }
}

#[test]
fn mdm_separates_diagonal_classes() {
    let class0: Vec<SpdMatrix> = (1..5).map(|i| SpdMatrix::from_diagonal(&[1.0 + 0.1 * i as f64, 1.0]).unwrap()).collect();
    let class1: Vec<SpdMatrix> = (1..5).map(|i| SpdMatrix::from_diagonal(&[1.0, 5.0 + 0.1 * i as f64]).unwrap()).collect();
    let mats: Vec<SpdMatrix> = class0.iter().chain(&class1).cloned().collect();
    let labels = [0, 0, 0, 0, 1, 1, 1, 1];
    let mdm = MdmClassifier::fit(&mats, &labels, 2, &MeanConfig::default()).unwrap();
    assert_eq!(mdm.predict(&SpdMatrix::from_diagonal(&[1.2, 1.1]).unwrap()).unwrap(), 0);
    assert_eq!(mdm.predict(&SpdMatrix::from_diagonal(&[1.0, 4.0]).unwrap()).unwrap(), 1);
}

fn spd_strategy() -> impl Strategy<Value = DMatrix<f64>> {
    (2usize..=16, any::<u64>()).prop_map(|(dim, seed)| random_spd(&mut rng(seed), dim))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn tangent_at_self_is_zero(a in spd_strategy()) {
        let s = spd(a);
        prop_assert!(max_abs(&tangent_project(&s, &s).unwrap()) < 1e-10);
    }

    #[test]
    fn sqrt_and_inverse_sqrt_compose(a in spd_strategy()) {
        let s = spd(a.clone());
        let h = sqrtm(&s).unwrap();
        let ih = invsqrtm(&s).unwrap();
        let n = a.nrows();
        prop_assert!(max_abs(&(h.matrix() * ih.matrix() - DMatrix::identity(n, n))) < 1e-8);
        prop_assert!(max_abs(&(h.matrix() * h.matrix() - &a)) < 1e-8 * a.norm().max(1.0));
    }

    #[test]
    fn mean_of_matrix_and_inverse_is_identity(a in spd_strategy()) {
        let n = a.nrows();
        let inv = a.clone().try_inverse().unwrap();
        let m = mean_covariance(&[spd(a), spd(inv)], &MeanConfig::default()).unwrap();
        prop_assert!(max_abs(&(m.matrix() - DMatrix::identity(n, n))) < 1e-8);
    }

    #[test]
    fn commuting_pair_mean_is_geometric(a in prop::collection::vec(0.05f64..20.0, 2..6), seed in any::<u64>()) {
        let mut r = rng(seed);
        let b: Vec<f64> = a.iter().map(|_| 0.05 + 20.0 * (gaussian(&mut r).abs() % 1.0)).collect();
        let m = mean_covariance(
            &[SpdMatrix::from_diagonal(&a).unwrap(), SpdMatrix::from_diagonal(&b).unwrap()],
            &MeanConfig::default(),
        ).unwrap();
        for i in 0..a.len() {
            prop_assert!((m.matrix()[(i, i)] - (a[i] * b[i]).sqrt()).abs() < 1e-7 * (a[i] * b[i]).sqrt().max(1.0));
        }
    }

    #[test]
    fn covariance_is_spd_with_shrinkage(c in 2usize..8, extra in 0usize..10, seed in any::<u64>(), shrink in 0.001f64..1.0) {
        let e = random_matrix(&mut rng(seed), c, c + extra);
        let cov = covariance(&e, shrink).unwrap();
        prop_assert!(SpdMatrix::new(cov.into_inner()).is_ok());
    }

    #[test]
    fn vectorize_round_trips(c in 1usize..10, seed in any::<u64>(), weighted in any::<bool>()) {
        let m = random_matrix(&mut rng(seed), c, c);
        let sym = &m + m.transpose();
        let scheme = if weighted { VectorScheme::UpperWeighted } else { VectorScheme::RowConcat };
        let v = vectorize(&sym, scheme);
        prop_assert_eq!(v.values.len(), scheme.len(c));
        prop_assert!(max_abs(&(unvectorize(&v).unwrap() - &sym)) < 1e-14);
        if weighted {
            prop_assert!((v.values.iter().map(|x| x * x).sum::<f64>().sqrt() - sym.norm()).abs() < 1e-10);
        }
    }
}
