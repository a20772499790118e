//! The full decoder: covariance → tangent space at the training mean →
//! PCA → bagged MLP. Everything fitted here sees training trials only.
//!
//! Trained pipelines serialize to a container in the style of the trial
//! format: magic `ISNN1\n`, u32 little-endian header length, a JSON header,
//! then every parameter as little-endian `f32` in the order listed in the
//! header's `layout`.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::ann::{predict, train_bagging, BaggingEnsemble, MlpModel, TrainConfig};
use crate::dataio::EegTrialSet;
use crate::error::{dim_check, Error, Result};
use crate::features::{pca_fit, PcaModel};
use crate::spd::{mean_covariance, CovarianceEstimator, MeanConfig, SpdMatrix, TangentSpace, VectorScheme};

pub const MODEL_MAGIC: &[u8; 6] = b"ISNN1\n";

/// Model-selection knobs: PCA dimension, ensemble size, hidden width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HyperParams {
    pub n_rf: usize,
    pub k_bag: usize,
    pub hidden: usize,
}

impl std::fmt::Display for HyperParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/{}/{}", self.n_rf, self.k_bag, self.hidden)
    }
}

impl std::str::FromStr for HyperParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<usize> = s
            .split('/')
            .map(|p| p.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Config(format!("bad hyperparameter triple {s:?}")))?;
        match parts[..] {
            [n_rf, k_bag, hidden] => Ok(Self { n_rf, k_bag, hidden }),
            _ => Err(Error::Config(format!("bad hyperparameter triple {s:?}"))),
        }
    }
}

/// Fixed (not cross-validated) parts of the pipeline.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub covariance: CovarianceEstimator,
    pub mean: MeanConfig,
    pub scheme: VectorScheme,
    pub train: TrainConfig,
    /// Draw bootstrap resamples for ensemble members.
    pub bootstrap: bool,
}

impl PipelineConfig {
    pub fn standard() -> Self {
        Self {
            bootstrap: true,
            ..Default::default()
        }
    }
}

/// Covariance of every trial; trial-local, so it can be shared across folds.
pub fn trial_covariances(set: &EegTrialSet, est: &CovarianceEstimator) -> Result<Vec<SpdMatrix>> {
    use rayon::prelude::*;
    (0..set.n_trials())
        .into_par_iter()
        .map(|i| est.estimate(&set.trial_matrix(i)))
        .collect()
}

/// Reference mean of the training covariances.
pub fn fit_tangent_space(covs: &[SpdMatrix], train: &[usize], mean: &MeanConfig) -> Result<TangentSpace> {
    let subset: Vec<SpdMatrix> = train.iter().map(|&i| covs[i].clone()).collect();
    TangentSpace::new(mean_covariance(&subset, mean)?)
}

/// Tangent vectors of `idx`, one row each.
pub fn tangent_features(ts: &TangentSpace, covs: &[SpdMatrix], idx: &[usize], scheme: VectorScheme) -> Result<DMatrix<f64>> {
    let c = ts.reference().dim();
    let mut x = DMatrix::zeros(idx.len(), scheme.len(c));
    for (r, &i) in idx.iter().enumerate() {
        let v = ts.project_vector(&covs[i], scheme)?;
        x.set_row(r, &DVector::from_vec(v.values).transpose());
    }
    Ok(x)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineModel {
    pub covariance: CovarianceEstimator,
    pub tangent: TangentSpace,
    pub scheme: VectorScheme,
    pub pca: PcaModel,
    pub ensemble: BaggingEnsemble,
    pub class_names: Vec<String>,
}

impl PipelineModel {
    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn channels(&self) -> usize {
        self.tangent.reference().dim()
    }

    pub fn hyperparams(&self) -> HyperParams {
        HyperParams {
            n_rf: self.pca.n_components(),
            k_bag: self.ensemble.len(),
            hidden: self.ensemble.members[0].hidden(),
        }
    }

    /// Features for already-estimated covariance matrices.
    pub fn features(&self, covs: &[SpdMatrix]) -> Result<DMatrix<f64>> {
        let idx: Vec<usize> = (0..covs.len()).collect();
        let x = tangent_features(&self.tangent, covs, &idx, self.scheme)?;
        self.pca.transform(&x)
    }

    /// Class probabilities and labels for channels × samples trials.
    pub fn predict_trials(&self, trials: &[DMatrix<f64>]) -> Result<(DMatrix<f64>, Vec<usize>)> {
        let covs = trials
            .iter()
            .map(|t| {
                dim_check(self.channels(), t.nrows())?;
                self.covariance.estimate(t)
            })
            .collect::<Result<Vec<_>>>()?;
        predict(&self.ensemble, &self.features(&covs)?)
    }

    pub fn decode(&self, trial: &DMatrix<f64>) -> Result<usize> {
        Ok(self.predict_trials(std::slice::from_ref(trial))?.1[0])
    }
}

/// Fits the whole pipeline on `train` given precomputed covariances.
pub fn fit_from_covariances(
    covs: &[SpdMatrix],
    labels: &[usize],
    class_names: &[String],
    train: &[usize],
    hp: HyperParams,
    cfg: &PipelineConfig,
) -> Result<PipelineModel> {
    let tangent = fit_tangent_space(covs, train, &cfg.mean)?;
    let x = tangent_features(&tangent, covs, train, cfg.scheme)?;
    let pca = pca_fit(&x, hp.n_rf)?;
    let z = pca.transform(&x)?;
    let y: Vec<usize> = train.iter().map(|&i| labels[i]).collect();
    let ensemble = train_bagging(&z, &y, class_names.len(), hp.k_bag, hp.hidden, &cfg.train, cfg.bootstrap)?;
    Ok(PipelineModel {
        covariance: cfg.covariance,
        tangent,
        scheme: cfg.scheme,
        pca,
        ensemble,
        class_names: class_names.to_vec(),
    })
}

/// Fits the pipeline on the trials listed in `train`.
pub fn fit_pipeline(set: &EegTrialSet, train: &[usize], hp: HyperParams, cfg: &PipelineConfig) -> Result<PipelineModel> {
    if train.is_empty() {
        return Err(Error::Config("empty training set".into()));
    }
    let covs: Vec<SpdMatrix> = {
        let mut v = vec![SpdMatrix::identity(set.channels()); set.n_trials()];
        for &i in train {
            v[i] = cfg.covariance.estimate(&set.trial_matrix(i))?;
        }
        v
    };
    fit_from_covariances(&covs, set.labels(), set.class_names(), train, hp, cfg)
}

#[derive(Serialize, Deserialize)]
struct ModelHeader {
    channels: usize,
    class_names: Vec<String>,
    covariance: CovarianceEstimator,
    scheme: VectorScheme,
    n_features: usize,
    n_components: usize,
    hidden: usize,
    members: usize,
    bootstrap_seeds: Vec<u64>,
    layout: Vec<String>,
}

fn put(out: &mut Vec<u8>, values: impl IntoIterator<Item = f64>) {
    for v in values {
        out.extend_from_slice(&(v as f32).to_le_bytes());
    }
}

fn row_major(m: &DMatrix<f64>) -> impl Iterator<Item = f64> + '_ {
    (0..m.nrows()).flat_map(move |i| (0..m.ncols()).map(move |j| m[(i, j)]))
}

pub fn write_model<W: Write>(model: &PipelineModel, mut w: W) -> Result<()> {
    let hp = model.hyperparams();
    let header = ModelHeader {
        channels: model.channels(),
        class_names: model.class_names.clone(),
        covariance: model.covariance,
        scheme: model.scheme,
        n_features: model.pca.n_features(),
        n_components: hp.n_rf,
        hidden: hp.hidden,
        members: hp.k_bag,
        bootstrap_seeds: model.ensemble.bootstrap_seeds.clone(),
        layout: [
            "reference[c,c]",
            "pca_mean[n_features]",
            "pca_components[n_components,n_features]",
            "pca_eigenvalues[n_components]",
            "members*(w1[hidden,n_components],b1[hidden],w2[n_classes,hidden],b2[n_classes])",
        ]
        .map(String::from)
        .to_vec(),
    };
    let head = serde_json::to_vec(&header)?;
    let mut payload = Vec::new();
    put(&mut payload, row_major(model.tangent.reference().matrix()));
    put(&mut payload, model.pca.mean.iter().copied());
    put(&mut payload, row_major(&model.pca.components));
    put(&mut payload, model.pca.eigenvalues.iter().copied());
    for m in &model.ensemble.members {
        put(&mut payload, row_major(&m.w1));
        put(&mut payload, m.b1.iter().copied());
        put(&mut payload, row_major(&m.w2));
        put(&mut payload, m.b2.iter().copied());
    }
    w.write_all(MODEL_MAGIC)?;
    w.write_all(&(head.len() as u32).to_le_bytes())?;
    w.write_all(&head)?;
    w.write_all(&payload)?;
    w.flush()?;
    Ok(())
}

struct Floats<'a> {
    data: &'a [u8],
}

impl Floats<'_> {
    fn take(&mut self, n: usize) -> Result<Vec<f64>> {
        if self.data.len() < 4 * n {
            return Err(Error::CorruptContainer("model payload truncated".into()));
        }
        let (head, rest) = self.data.split_at(4 * n);
        self.data = rest;
        Ok(head
            .chunks_exact(4)
            .map(|b| f64::from(f32::from_le_bytes(b.try_into().unwrap())))
            .collect())
    }

    fn matrix(&mut self, rows: usize, cols: usize) -> Result<DMatrix<f64>> {
        Ok(DMatrix::from_row_slice(rows, cols, &self.take(rows * cols)?))
    }

    fn vector(&mut self, n: usize) -> Result<DVector<f64>> {
        Ok(DVector::from_vec(self.take(n)?))
    }
}

pub fn read_model<R: Read>(mut r: R) -> Result<PipelineModel> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() < 10 || &bytes[..6] != MODEL_MAGIC {
        return Err(Error::CorruptContainer("not a model container".into()));
    }
    let h = u32::from_le_bytes(bytes[6..10].try_into().unwrap()) as usize;
    let head = bytes
        .get(10..10 + h)
        .ok_or_else(|| Error::CorruptContainer("truncated model header".into()))?;
    let header: ModelHeader =
        serde_json::from_slice(head).map_err(|e| Error::CorruptContainer(format!("bad model header: {e}")))?;
    let mut f = Floats { data: &bytes[10 + h..] };
    let (c, nf, nc, hid, k) = (
        header.channels,
        header.n_features,
        header.n_components,
        header.hidden,
        header.class_names.len(),
    );
    let reference = SpdMatrix::new(f.matrix(c, c)?)?;
    let pca = PcaModel {
        mean: f.vector(nf)?,
        components: f.matrix(nc, nf)?,
        eigenvalues: f.vector(nc)?,
    };
    let members = (0..header.members)
        .map(|_| {
            Ok(MlpModel {
                w1: f.matrix(hid, nc)?,
                b1: f.vector(hid)?,
                w2: f.matrix(k, hid)?,
                b2: f.vector(k)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if !f.data.is_empty() {
        return Err(Error::CorruptContainer("trailing bytes after model payload".into()));
    }
    Ok(PipelineModel {
        covariance: header.covariance,
        tangent: TangentSpace::new(reference)?,
        scheme: header.scheme,
        pca,
        ensemble: BaggingEnsemble {
            members,
            bootstrap_seeds: header.bootstrap_seeds,
        },
        class_names: header.class_names,
    })
}

pub fn save_model(model: &PipelineModel, path: impl AsRef<Path>) -> Result<()> {
    write_model(model, BufWriter::new(File::create(path)?))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<PipelineModel> {
    read_model(BufReader::new(File::open(path)?))
}
