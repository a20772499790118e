use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::EegTrialSet;
use crate::error::{Error, Result};
use crate::seed::{derive_seed, rng};
use crate::spd::{expm_sym, sqrtm, symmetrize, SpdMatrix};

/// Parameters of the synthetic EEG-like generator.
///
/// Class `k` draws trials as `Σ_k^{1/2} Z` with `Z` white Gaussian noise and
/// `Σ_k = B^{1/2} exp(separation · S_k) B^{1/2}`, where `B` is a shared
/// background covariance and `S_k` a random symmetric direction of unit
/// Frobenius norm. The geodesic distance from `B` to every `Σ_k` is exactly
/// `separation`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub n_per_class: usize,
    pub channels: usize,
    pub samples: usize,
    pub classes: usize,
    pub separation: f64,
    pub seed: u64,
    pub sampling_rate: f64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        Self {
            n_per_class: 100,
            channels: 8,
            samples: 128,
            classes: 2,
            separation: 2.0,
            seed: 7,
            sampling_rate: 256.0,
        }
    }
}

impl SyntheticConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::Config(m.to_string()));
        if self.channels < 2 {
            return fail("channels must be at least 2");
        }
        if self.samples < self.channels {
            return fail("samples must be at least the channel count");
        }
        if self.classes < 2 {
            return fail("at least two classes are required");
        }
        if self.n_per_class == 0 {
            return fail("n_per_class must be positive");
        }
        if !(self.separation >= 0.0 && self.separation.is_finite()) {
            return fail("separation must be a non-negative number");
        }
        if !(self.sampling_rate > 0.0 && self.sampling_rate.is_finite()) {
            return fail("sampling rate must be positive");
        }
        Ok(())
    }
}

fn gaussian_matrix(r: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| r.sample::<f64, _>(StandardNormal))
}

/// Per-class mixing matrices `Σ_k^{1/2}` used by [`gen_synthetic`].
pub fn class_mixing(cfg: &SyntheticConfig) -> Result<Vec<SpdMatrix>> {
    cfg.validate()?;
    let c = cfg.channels;
    let mut r = rng(derive_seed(cfg.seed, 0));
    let a = gaussian_matrix(&mut r, c, c);
    let background = SpdMatrix::new(symmetrize(&a * a.transpose() / c as f64 + DMatrix::identity(c, c)))?;
    let bh = sqrtm(&background)?;
    (0..cfg.classes)
        .map(|_| {
            let g = gaussian_matrix(&mut r, c, c);
            let dir = symmetrize(g);
            let dir = &dir / dir.norm();
            let e = expm_sym(&(dir * cfg.separation));
            let sigma = SpdMatrix::new(symmetrize(bh.matrix() * e.matrix() * bh.matrix()))?;
            sqrtm(&sigma)
        })
        .collect()
}

/// Generates a balanced trial set; a pure function of `cfg`.
///
/// Labels are interleaved (`trial i` has class `i mod K`).
pub fn gen_synthetic(cfg: &SyntheticConfig) -> Result<EegTrialSet> {
    let mixing = class_mixing(cfg)?;
    let (c, s, k) = (cfg.channels, cfg.samples, cfg.classes);
    let n = cfg.n_per_class * k;
    let mut r = rng(derive_seed(cfg.seed, 1));
    let mut samples = Vec::with_capacity(n * c * s);
    let mut labels = Vec::with_capacity(n);
    for i in 0..n {
        let class = i % k;
        let z = gaussian_matrix(&mut r, c, s);
        let x = mixing[class].matrix() * z;
        for row in x.row_iter() {
            samples.extend(row.iter().map(|&v| v as f32));
        }
        labels.push(class);
    }
    let class_names = (0..k).map(|i| format!("class{i}")).collect();
    EegTrialSet::new(c, s, samples, labels, class_names, cfg.sampling_rate)
}
