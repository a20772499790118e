use std::f64::consts::SQRT_2;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{invsqrtm, logm, sqrtm, symmetrize, SpdMatrix};
use crate::error::{dim_check, Error, Result};

/// How a symmetric tangent matrix is flattened into a feature vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VectorScheme {
    /// All rows concatenated, `c²` entries. Off-diagonal entries appear twice.
    #[default]
    RowConcat,
    /// Upper triangle row by row, off-diagonal entries scaled by √2, `c(c+1)/2`
    /// entries. Euclidean norm equals the Frobenius norm of the matrix.
    UpperWeighted,
}

impl VectorScheme {
    pub fn len(self, c: usize) -> usize {
        match self {
            VectorScheme::RowConcat => c * c,
            VectorScheme::UpperWeighted => c * (c + 1) / 2,
        }
    }

    /// Recovers the matrix dimension from a vector length.
    pub fn dim_for_len(self, len: usize) -> Option<usize> {
        let c = match self {
            VectorScheme::RowConcat => (len as f64).sqrt().round() as usize,
            VectorScheme::UpperWeighted => (((8 * len + 1) as f64).sqrt().round() as usize - 1) / 2,
        };
        (self.len(c) == len).then_some(c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangentVector {
    pub values: Vec<f64>,
    pub scheme: VectorScheme,
}

pub fn vectorize(p: &DMatrix<f64>, scheme: VectorScheme) -> TangentVector {
    let c = p.nrows();
    let mut values = Vec::with_capacity(scheme.len(c));
    match scheme {
        VectorScheme::RowConcat => {
            for i in 0..c {
                for j in 0..c {
                    values.push(p[(i, j)]);
                }
            }
        }
        VectorScheme::UpperWeighted => {
            for i in 0..c {
                values.push(p[(i, i)]);
                for j in i + 1..c {
                    values.push(SQRT_2 * p[(i, j)]);
                }
            }
        }
    }
    TangentVector { values, scheme }
}

/// Inverse of [`vectorize`].
pub fn unvectorize(v: &TangentVector) -> Result<DMatrix<f64>> {
    let c = v
        .scheme
        .dim_for_len(v.values.len())
        .ok_or_else(|| Error::Config(format!("{} is not a valid tangent vector length", v.values.len())))?;
    let mut p = DMatrix::zeros(c, c);
    match v.scheme {
        VectorScheme::RowConcat => {
            for i in 0..c {
                for j in 0..c {
                    p[(i, j)] = v.values[i * c + j];
                }
            }
        }
        VectorScheme::UpperWeighted => {
            let mut k = 0;
            for i in 0..c {
                p[(i, i)] = v.values[k];
                k += 1;
                for j in i + 1..c {
                    let x = v.values[k] / SQRT_2;
                    p[(i, j)] = x;
                    p[(j, i)] = x;
                    k += 1;
                }
            }
        }
    }
    Ok(p)
}

/// Tangent space at a reference point `C_m`, with its square root and
/// inverse square root cached for batch projection.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentSpace {
    reference: SpdMatrix,
    half: SpdMatrix,
    inv_half: SpdMatrix,
}

impl TangentSpace {
    pub fn new(reference: SpdMatrix) -> Result<Self> {
        let half = sqrtm(&reference)?;
        let inv_half = invsqrtm(&reference)?;
        Ok(Self {
            reference,
            half,
            inv_half,
        })
    }

    pub fn reference(&self) -> &SpdMatrix {
        &self.reference
    }

    /// `P = C_m^{1/2} logm(C_m^{-1/2} C C_m^{-1/2}) C_m^{1/2}`.
    pub fn project(&self, c: &SpdMatrix) -> Result<DMatrix<f64>> {
        dim_check(self.reference.dim(), c.dim())?;
        let ih = self.inv_half.matrix();
        let whitened = SpdMatrix(symmetrize(ih * c.matrix() * ih));
        let l = logm(&whitened)?;
        let h = self.half.matrix();
        Ok(symmetrize(h * l * h))
    }

    pub fn project_vector(&self, c: &SpdMatrix, scheme: VectorScheme) -> Result<TangentVector> {
        Ok(vectorize(&self.project(c)?, scheme))
    }
}

pub fn tangent_project(c: &SpdMatrix, reference: &SpdMatrix) -> Result<DMatrix<f64>> {
    dim_check(reference.dim(), c.dim())?;
    TangentSpace::new(reference.clone())?.project(c)
}
