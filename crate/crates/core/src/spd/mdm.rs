use super::{geodesic_distance, mean_covariance, MeanConfig, SpdMatrix};
use crate::error::{Error, Result};

/// Minimum distance to Riemannian mean. Each class is summarised by the mean
/// of its covariance matrices; a trial goes to the class whose mean is
/// geodesically closest.
///
/// Used as a separability check that shares nothing with the tangent-space
/// and neural-network path beyond the covariance estimate.
#[derive(Debug, Clone)]
pub struct MdmClassifier {
    centroids: Vec<SpdMatrix>,
}

impl MdmClassifier {
    pub fn fit(mats: &[SpdMatrix], labels: &[usize], n_classes: usize, cfg: &MeanConfig) -> Result<Self> {
        if mats.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: mats.len(),
                got: labels.len(),
            });
        }
        let centroids = (0..n_classes)
            .map(|k| {
                let members: Vec<SpdMatrix> = mats
                    .iter()
                    .zip(labels)
                    .filter(|(_, &l)| l == k)
                    .map(|(m, _)| m.clone())
                    .collect();
                if members.is_empty() {
                    return Err(Error::Config(format!("class {k} has no training trials")));
                }
                mean_covariance(&members, cfg)
            })
            .collect::<Result<_>>()?;
        Ok(Self { centroids })
    }

    pub fn centroids(&self) -> &[SpdMatrix] {
        &self.centroids
    }

    pub fn predict(&self, c: &SpdMatrix) -> Result<usize> {
        let mut best = (0, f64::INFINITY);
        for (k, m) in self.centroids.iter().enumerate() {
            let d = geodesic_distance(m, c)?;
            if d < best.1 {
                best = (k, d);
            }
        }
        Ok(best.0)
    }
}
