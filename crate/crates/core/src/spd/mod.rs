//! Covariance estimation and the geometry of symmetric positive-definite
//! matrices: spectral matrix functions, the Riemannian mean, tangent-space
//! projection, vectorization and the affine-invariant distance.
//!
//! All matrix functions go through the symmetric eigendecomposition
//! `A = V diag(d) Vᵀ` and return `V diag(f(d)) Vᵀ`.

mod mdm;
mod mean;
mod tangent;

pub use mdm::MdmClassifier;
pub use mean::{mean_covariance, MeanConfig, MeanMetric};
pub use tangent::{tangent_project, unvectorize, vectorize, TangentSpace, TangentVector, VectorScheme};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{dim_check, Error, Result};

/// Relative eigenvalue floor below which a matrix is treated as singular.
pub const EIGEN_FLOOR: f64 = 1e-12;

/// Relative asymmetry tolerated by [`SpdMatrix::new`].
pub const SYMMETRY_TOL: f64 = 1e-10;

/// A symmetric channel-covariance matrix.
///
/// Symmetry is checked on construction. Positive-definiteness is checked by
/// [`SpdMatrix::new`] and re-checked by every spectral function, because a
/// raw sample covariance with fewer samples than channels is only
/// semi-definite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpdMatrix(DMatrix<f64>);

impl SpdMatrix {
    /// Validates symmetry and positive-definiteness.
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        let m = Self::symmetric(data)?;
        let eig = SymmetricEigen::new(m.0.clone());
        check_spectrum(&eig.eigenvalues)?;
        Ok(m)
    }

    /// Validates symmetry only.
    pub fn symmetric(data: DMatrix<f64>) -> Result<Self> {
        if !data.is_square() {
            return Err(Error::DimensionMismatch {
                expected: data.nrows(),
                got: data.ncols(),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSamples);
        }
        let scale = data.amax();
        let asym = (&data - data.transpose()).amax();
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::Config(format!(
                "matrix not symmetric (max asymmetry {asym:e})"
            )));
        }
        Ok(Self(symmetrize(data)))
    }

    pub fn identity(dim: usize) -> Self {
        Self(DMatrix::identity(dim, dim))
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_row_slice(diag)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    /// Smallest and largest eigenvalue.
    pub fn eigen_range(&self) -> (f64, f64) {
        let ev = SymmetricEigen::new(self.0.clone()).eigenvalues;
        (ev.min(), ev.max())
    }
}

impl AsRef<DMatrix<f64>> for SpdMatrix {
    fn as_ref(&self) -> &DMatrix<f64> {
        &self.0
    }
}

pub(crate) fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    let t = m.transpose();
    (m + t) * 0.5
}

fn check_spectrum(ev: &DVector<f64>) -> Result<()> {
    let max = ev.max();
    let min = ev.min();
    if !(max > 0.0) || min <= EIGEN_FLOOR * max {
        return Err(Error::NotPositiveDefinite);
    }
    Ok(())
}

/// Applies `f` to the spectrum of `m`, which must be positive-definite.
fn spectral_map(m: &DMatrix<f64>, f: impl Fn(f64) -> f64) -> Result<DMatrix<f64>> {
    let eig = SymmetricEigen::new(m.clone());
    check_spectrum(&eig.eigenvalues)?;
    Ok(recompose(&eig, f))
}

fn recompose(eig: &SymmetricEigen<f64, nalgebra::Dyn>, f: impl Fn(f64) -> f64) -> DMatrix<f64> {
    let v = &eig.eigenvectors;
    let mut scaled = v.clone();
    for (j, &d) in eig.eigenvalues.iter().enumerate() {
        let fd = f(d);
        scaled.column_mut(j).scale_mut(fd);
    }
    symmetrize(scaled * v.transpose())
}

/// Matrix logarithm; the result is symmetric but generally indefinite.
pub fn logm(a: &SpdMatrix) -> Result<DMatrix<f64>> {
    spectral_map(&a.0, f64::ln)
}

pub fn sqrtm(a: &SpdMatrix) -> Result<SpdMatrix> {
    spectral_map(&a.0, f64::sqrt).map(SpdMatrix)
}

pub fn invsqrtm(a: &SpdMatrix) -> Result<SpdMatrix> {
    spectral_map(&a.0, |d| 1.0 / d.sqrt()).map(SpdMatrix)
}

/// `A^p` for real `p`.
pub fn powm(a: &SpdMatrix, p: f64) -> Result<SpdMatrix> {
    spectral_map(&a.0, |d| d.powf(p)).map(SpdMatrix)
}

/// Exponential of a symmetric matrix (always SPD).
pub fn expm_sym(s: &DMatrix<f64>) -> SpdMatrix {
    let eig = SymmetricEigen::new(symmetrize(s.clone()));
    SpdMatrix(recompose(&eig, f64::exp))
}

/// Sample covariance estimator `C = (1/s)·E·Eᵀ + shrinkage·(tr/c)·I`.
///
/// Channels are not mean-centered unless `center` is set.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CovarianceEstimator {
    pub shrinkage: f64,
    pub center: bool,
}

impl CovarianceEstimator {
    /// `trial` is channels × samples.
    pub fn estimate(&self, trial: &DMatrix<f64>) -> Result<SpdMatrix> {
        if self.shrinkage < 0.0 || !self.shrinkage.is_finite() {
            return Err(Error::Config("shrinkage must be non-negative".into()));
        }
        let (c, s) = trial.shape();
        if s == 0 || c == 0 {
            return Err(Error::Config("trial has no samples".into()));
        }
        if trial.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSamples);
        }
        let mut cov = if self.center {
            let mut e = trial.clone();
            for mut row in e.row_iter_mut() {
                let mean = row.mean();
                row.add_scalar_mut(-mean);
            }
            &e * e.transpose()
        } else {
            trial * trial.transpose()
        };
        cov /= s as f64;
        if self.shrinkage > 0.0 {
            let shift = self.shrinkage * cov.trace() / c as f64;
            for i in 0..c {
                cov[(i, i)] += shift;
            }
        }
        Ok(SpdMatrix(symmetrize(cov)))
    }
}

/// Uncentered covariance of a channels × samples trial with optional
/// trace-scaled ridge.
pub fn covariance(trial: &DMatrix<f64>, shrinkage: f64) -> Result<SpdMatrix> {
    CovarianceEstimator {
        shrinkage,
        center: false,
    }
    .estimate(trial)
}

/// Affine-invariant distance `‖logm(A^{-1/2} B A^{-1/2})‖_F`.
pub fn geodesic_distance(a: &SpdMatrix, b: &SpdMatrix) -> Result<f64> {
    dim_check(a.dim(), b.dim())?;
    let isq = invsqrtm(a)?;
    let inner = symmetrize(isq.matrix() * b.matrix() * isq.matrix());
    let ev = SymmetricEigen::new(inner).eigenvalues;
    check_spectrum(&ev)?;
    Ok(ev.iter().map(|d| d.ln().powi(2)).sum::<f64>().sqrt())
}
