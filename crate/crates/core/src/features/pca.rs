use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{dim_check, Error, Result};

/// Fitted principal-component projection.
///
/// `components` rows are orthonormal and ordered by non-increasing
/// `eigenvalues` (sample variances along each component).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    pub mean: DVector<f64>,
    pub components: DMatrix<f64>,
    pub eigenvalues: DVector<f64>,
}

impl PcaModel {
    pub fn n_features(&self) -> usize {
        self.mean.len()
    }

    pub fn n_components(&self) -> usize {
        self.components.nrows()
    }

    /// `(X - mean) · componentsᵀ`.
    pub fn transform(&self, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        dim_check(self.n_features(), x.ncols())?;
        let mut centered = x.clone();
        for mut row in centered.row_iter_mut() {
            row -= self.mean.transpose();
        }
        Ok(centered * self.components.transpose())
    }

    /// `Y · components + mean`.
    pub fn inverse_transform(&self, y: &DMatrix<f64>) -> Result<DMatrix<f64>> {
        dim_check(self.n_components(), y.ncols())?;
        let mut x = y * &self.components;
        for mut row in x.row_iter_mut() {
            row += self.mean.transpose();
        }
        Ok(x)
    }

    /// The leading `n` components. Components are nested, so this equals a
    /// fresh fit with `n_rf = n` up to the tie-breaking of equal eigenvalues.
    pub fn truncate(&self, n: usize) -> Result<PcaModel> {
        if n == 0 || n > self.n_components() {
            return Err(Error::Config(format!(
                "cannot keep {n} of {} components",
                self.n_components()
            )));
        }
        Ok(PcaModel {
            mean: self.mean.clone(),
            components: self.components.rows(0, n).into_owned(),
            eigenvalues: self.eigenvalues.rows(0, n).into_owned(),
        })
    }
}

/// Largest-magnitude entry made positive.
fn fix_sign(mut v: DVector<f64>) -> DVector<f64> {
    let idx = v.iamax();
    if v[idx] < 0.0 {
        v.neg_mut();
    }
    v
}

fn sorted_desc(eig: &SymmetricEigen<f64, nalgebra::Dyn>) -> Vec<usize> {
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    order
}

/// Extends `basis` with unit vectors orthogonal to it (modified Gram-Schmidt
/// against the canonical basis) until it holds `want` vectors.
fn complete_basis(basis: &mut Vec<DVector<f64>>, dim: usize, want: usize) {
    for e in 0..dim {
        if basis.len() == want {
            break;
        }
        let mut v = DVector::zeros(dim);
        v[e] = 1.0;
        for b in basis.iter() {
            let p = b.dot(&v);
            v.axpy(-p, b, 1.0);
        }
        let norm = v.norm();
        if norm > 1e-6 {
            basis.push(v / norm);
        }
    }
}

/// Fits the top `n_rf` principal components of the rows of `x`.
///
/// Uses the `n_f × n_f` covariance when `n_f ≤ n`, otherwise the `n × n`
/// Gram matrix of the centered data.
pub fn pca_fit(x: &DMatrix<f64>, n_rf: usize) -> Result<PcaModel> {
    let (n, f) = x.shape();
    if n_rf == 0 || n_rf > n.min(f) {
        return Err(Error::Config(format!(
            "n_rf = {n_rf} must be in 1..={} for {n} samples of {f} features",
            n.min(f)
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidSamples);
    }
    let mean = x.row_mean().transpose();
    let mut xc = x.clone();
    for mut row in xc.row_iter_mut() {
        row -= mean.transpose();
    }
    let denom = (n.max(2) - 1) as f64;

    let mut comps: Vec<DVector<f64>> = Vec::with_capacity(n_rf);
    let mut vals = Vec::with_capacity(n_rf);
    if f <= n {
        let cov = xc.transpose() * &xc / denom;
        let eig = SymmetricEigen::new(cov);
        for &j in sorted_desc(&eig).iter().take(n_rf) {
            comps.push(eig.eigenvectors.column(j).into_owned());
            vals.push(eig.eigenvalues[j]);
        }
    } else {
        let gram = &xc * xc.transpose() / denom;
        let eig = SymmetricEigen::new(gram);
        for &j in sorted_desc(&eig).iter().take(n_rf) {
            let u = xc.transpose() * eig.eigenvectors.column(j);
            let norm = u.norm();
            if norm <= 1e-10 * (1.0 + xc.amax()) {
                break;
            }
            comps.push(u / norm);
            vals.push(eig.eigenvalues[j]);
        }
        complete_basis(&mut comps, f, n_rf);
        vals.resize(n_rf, 0.0);
    }

    let mut components = DMatrix::zeros(n_rf, f);
    for (i, c) in comps.into_iter().enumerate() {
        components.set_row(i, &fix_sign(c).transpose());
    }
    let eigenvalues = DVector::from_iterator(n_rf, vals.into_iter().map(|v| v.max(0.0)));
    Ok(PcaModel {
        mean,
        components,
        eigenvalues,
    })
}

pub fn pca_transform(model: &PcaModel, x: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    model.transform(x)
}
