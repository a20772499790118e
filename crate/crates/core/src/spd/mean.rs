use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{expm_sym, invsqrtm, logm, sqrtm, symmetrize, SpdMatrix};
use crate::error::{dim_check, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeanMetric {
    #[default]
    Riemannian,
    Arithmetic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanConfig {
    pub metric: MeanMetric,
    /// Stop when the Frobenius norm of the mean tangent update drops below this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for MeanConfig {
    fn default() -> Self {
        Self {
            metric: MeanMetric::Riemannian,
            tol: 1e-8,
            max_iter: 50,
        }
    }
}

fn arithmetic_mean(mats: &[SpdMatrix]) -> DMatrix<f64> {
    let n = mats[0].dim();
    let mut sum = DMatrix::zeros(n, n);
    for m in mats {
        sum += m.matrix();
    }
    sum / mats.len() as f64
}

/// Mean of a set of covariance matrices.
///
/// The Riemannian mean is the fixed point of
/// `M ← M^{1/2} exp((1/N) Σ logm(M^{-1/2} C_i M^{-1/2})) M^{1/2}`,
/// started from the arithmetic mean.
pub fn mean_covariance(mats: &[SpdMatrix], cfg: &MeanConfig) -> Result<SpdMatrix> {
    let first = mats
        .first()
        .ok_or_else(|| Error::Config("mean of an empty set".into()))?;
    for m in mats {
        dim_check(first.dim(), m.dim())?;
    }
    let mut mean = SpdMatrix(symmetrize(arithmetic_mean(mats)));
    if cfg.metric == MeanMetric::Arithmetic {
        return Ok(mean);
    }
    let n = first.dim();
    let inv_n = 1.0 / mats.len() as f64;
    for _ in 0..cfg.max_iter {
        let half = sqrtm(&mean)?;
        let inv_half = invsqrtm(&mean)?;
        let mut step = DMatrix::zeros(n, n);
        for c in mats {
            let w = SpdMatrix(symmetrize(inv_half.matrix() * c.matrix() * inv_half.matrix()));
            step += logm(&w)?;
        }
        step *= inv_n;
        if step.norm() < cfg.tol {
            return Ok(mean);
        }
        let e = expm_sym(&step);
        mean = SpdMatrix(symmetrize(half.matrix() * e.matrix() * half.matrix()));
    }
    Err(Error::MeanDiverged(cfg.max_iter))
}
