//! Trial sets: the in-memory container, its binary file format, CSV import,
//! a seeded synthetic generator and spectrogram export.

mod container;
mod csv_import;
mod spectrogram;
mod synthetic;

pub use container::{load_trialset, read_trialset, save_trialset, write_trialset, MAGIC};
pub use csv_import::{read_csv_trial, trialset_from_csv};
pub use spectrogram::{export_spectrogram, Spectrogram};
pub use synthetic::{class_mixing, gen_synthetic, SyntheticConfig};

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// `n` trials of `c` channels × `s` samples with one class label each.
///
/// A set may leave some classes without trials (a single exported trial,
/// say); [`EegTrialSet::require_all_classes`] checks for that where it
/// matters.
///
/// Samples are stored as `f32` in trial-major, channel-major, sample-minor
/// order, which is also the on-disk layout.
#[derive(Debug, Clone, PartialEq)]
pub struct EegTrialSet {
    n: usize,
    c: usize,
    s: usize,
    samples: Vec<f32>,
    labels: Vec<usize>,
    class_names: Vec<String>,
    sampling_rate: f64,
}

impl EegTrialSet {
    pub fn new(
        channels: usize,
        samples_per_trial: usize,
        samples: Vec<f32>,
        labels: Vec<usize>,
        class_names: Vec<String>,
        sampling_rate: f64,
    ) -> Result<Self> {
        let n = labels.len();
        let k = class_names.len();
        if k < 2 {
            return Err(Error::Config("at least two classes are required".into()));
        }
        if channels == 0 || samples_per_trial == 0 {
            return Err(Error::Config("channels and samples must be positive".into()));
        }
        if samples.len() != n * channels * samples_per_trial {
            return Err(Error::DimensionMismatch {
                expected: n * channels * samples_per_trial,
                got: samples.len(),
            });
        }
        if let Some(&bad) = labels.iter().find(|&&l| l >= k) {
            return Err(Error::Config(format!("label {bad} out of range for {k} classes")));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSamples);
        }
        if !(sampling_rate > 0.0 && sampling_rate.is_finite()) {
            return Err(Error::Config("sampling rate must be positive".into()));
        }
        Ok(Self {
            n,
            c: channels,
            s: samples_per_trial,
            samples,
            labels,
            class_names,
            sampling_rate,
        })
    }

    pub fn n_trials(&self) -> usize {
        self.n
    }

    pub fn channels(&self) -> usize {
        self.c
    }

    pub fn samples_per_trial(&self) -> usize {
        self.s
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn class_names(&self) -> &[String] {
        &self.class_names
    }

    pub fn sampling_rate(&self) -> f64 {
        self.sampling_rate
    }

    /// Raw samples of every trial in storage order.
    pub fn samples(&self) -> &[f32] {
        &self.samples
    }

    /// Raw samples of trial `i`, channel-major.
    pub fn trial(&self, i: usize) -> &[f32] {
        let len = self.c * self.s;
        &self.samples[i * len..(i + 1) * len]
    }

    /// Trial `i` as a channels × samples matrix.
    pub fn trial_matrix(&self, i: usize) -> DMatrix<f64> {
        DMatrix::from_row_iterator(self.c, self.s, self.trial(i).iter().map(|&v| f64::from(v)))
    }

    /// Overwrites the samples of trial `i`.
    pub fn replace_trial(&mut self, i: usize, data: &[f32]) -> Result<()> {
        let len = self.c * self.s;
        if data.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                got: data.len(),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSamples);
        }
        self.samples[i * len..(i + 1) * len].copy_from_slice(data);
        Ok(())
    }

    /// Same trials with labels replaced, e.g. a permutation-null copy.
    pub fn with_labels(&self, labels: Vec<usize>) -> Result<Self> {
        Self::new(
            self.c,
            self.s,
            self.samples.clone(),
            labels,
            self.class_names.clone(),
            self.sampling_rate,
        )
    }

    pub fn require_all_classes(&self) -> Result<()> {
        match self.class_indices().iter().position(Vec::is_empty) {
            Some(k) => Err(Error::Config(format!("class {k} ({}) has no trials", self.class_names[k]))),
            None => Ok(()),
        }
    }

    /// Indices of the trials of each class.
    pub fn class_indices(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.n_classes()];
        for (i, &l) in self.labels.iter().enumerate() {
            out[l].push(i);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        vec!["a".into(), "b".into()]
    }

    #[test]
    fn rejects_invariant_violations() {
        assert!(EegTrialSet::new(1, 1, vec![0.0; 2], vec![0, 1], vec!["a".into()], 1.0).is_err());
        assert!(EegTrialSet::new(1, 1, vec![0.0; 2], vec![0, 2], names(), 1.0).is_err());
        let one_class = EegTrialSet::new(1, 1, vec![0.0; 2], vec![0, 0], names(), 1.0).unwrap();
        assert!(one_class.require_all_classes().is_err());
        assert!(EegTrialSet::new(1, 1, vec![0.0; 3], vec![0, 1], names(), 1.0).is_err());
        assert!(matches!(
            EegTrialSet::new(1, 1, vec![0.0, f32::INFINITY], vec![0, 1], names(), 1.0),
            Err(Error::InvalidSamples)
        ));
    }

    #[test]
    fn trial_matrix_layout() {
        let set = EegTrialSet::new(2, 3, (1..=12).map(|v| v as f32).collect(), vec![0, 1], names(), 256.0)
            .unwrap();
        let m = set.trial_matrix(1);
        assert_eq!(m.shape(), (2, 3));
        assert_eq!(m[(0, 0)], 7.0);
        assert_eq!(m[(1, 2)], 12.0);
    }

    #[test]
    fn replace_trial_checks_values() {
        let mut set = EegTrialSet::new(1, 2, vec![0.0; 4], vec![0, 1], names(), 1.0).unwrap();
        set.replace_trial(1, &[5.0, 6.0]).unwrap();
        assert_eq!(set.trial(1), &[5.0, 6.0]);
        assert!(set.replace_trial(0, &[f32::NAN, 0.0]).is_err());
        assert!(set.replace_trial(0, &[0.0]).is_err());
    }
}
