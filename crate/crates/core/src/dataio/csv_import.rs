use std::path::Path;

use super::EegTrialSet;
use crate::error::{Error, Result};

/// Reads one trial from a headerless CSV file, one channel per row.
/// Returns `(channels, samples, data)` with data channel-major.
pub fn read_csv_trial(path: impl AsRef<Path>) -> Result<(usize, usize, Vec<f32>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)?;
    let mut data = Vec::new();
    let mut width = None;
    let mut rows = 0;
    for rec in rdr.records() {
        let rec = rec?;
        if width.is_some_and(|w| w != rec.len()) {
            return Err(Error::Config(format!("row {rows} has {} columns", rec.len())));
        }
        width = Some(rec.len());
        for field in rec.iter() {
            let v: f32 = field
                .parse()
                .map_err(|_| Error::Config(format!("not a number: {field:?}")))?;
            if !v.is_finite() {
                return Err(Error::InvalidSamples);
            }
            data.push(v);
        }
        rows += 1;
    }
    let s = width.ok_or_else(|| Error::Config("empty csv trial".into()))?;
    Ok((rows, s, data))
}

/// Builds a trial set from `(csv path, label)` pairs. All files must share
/// one shape.
pub fn trialset_from_csv<P: AsRef<Path>>(
    files: &[(P, usize)],
    class_names: Vec<String>,
    sampling_rate: f64,
) -> Result<EegTrialSet> {
    let mut shape = None;
    let mut samples = Vec::new();
    let mut labels = Vec::with_capacity(files.len());
    for (path, label) in files {
        let (c, s, data) = read_csv_trial(path)?;
        if shape.is_some_and(|sh| sh != (c, s)) {
            return Err(Error::Config(format!(
                "{} has shape {c}x{s}, expected {:?}",
                path.as_ref().display(),
                shape.unwrap()
            )));
        }
        shape = Some((c, s));
        samples.extend(data);
        labels.push(*label);
    }
    let (c, s) = shape.ok_or_else(|| Error::Config("no csv files given".into()))?;
    EegTrialSet::new(c, s, samples, labels, class_names, sampling_rate)
}
