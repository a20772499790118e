//! Binary trial container.
//!
//! ```text
//! bytes 0..6        magic "ISBC1\n"
//! bytes 6..10       header length H, u32 little-endian
//! bytes 10..10+H    UTF-8 JSON header {n, c, s, sampling_rate, class_names, labels}
//! then              n·c·s f32 little-endian samples, trial-major, channel-major
//! ```

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::EegTrialSet;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 6] = b"ISBC1\n";

#[derive(Serialize, Deserialize)]
struct Header {
    n: usize,
    c: usize,
    s: usize,
    sampling_rate: f64,
    class_names: Vec<String>,
    labels: Vec<usize>,
}

pub fn write_trialset<W: Write>(set: &EegTrialSet, mut w: W) -> Result<()> {
    let header = serde_json::to_vec(&Header {
        n: set.n,
        c: set.c,
        s: set.s,
        sampling_rate: set.sampling_rate,
        class_names: set.class_names.clone(),
        labels: set.labels.clone(),
    })?;
    let len = u32::try_from(header.len()).map_err(|_| Error::Config("header too large".into()))?;
    w.write_all(MAGIC)?;
    w.write_all(&len.to_le_bytes())?;
    w.write_all(&header)?;
    for v in &set.samples {
        w.write_all(&v.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trialset<R: Read>(mut r: R) -> Result<EegTrialSet> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() < MAGIC.len() || &bytes[..MAGIC.len()] != MAGIC {
        return Err(Error::NotTrialContainer);
    }
    let rest = &bytes[MAGIC.len()..];
    if rest.len() < 4 {
        return Err(Error::CorruptContainer("truncated header length".into()));
    }
    let h = u32::from_le_bytes(rest[..4].try_into().unwrap()) as usize;
    let rest = &rest[4..];
    if rest.len() < h {
        return Err(Error::CorruptContainer("truncated header".into()));
    }
    let header: Header = serde_json::from_slice(&rest[..h])
        .map_err(|e| Error::CorruptContainer(format!("bad header: {e}")))?;
    let payload = &rest[h..];
    if header.labels.len() != header.n {
        return Err(Error::CorruptContainer(format!(
            "header declares {} trials but lists {} labels",
            header.n,
            header.labels.len()
        )));
    }
    let expected = header
        .n
        .checked_mul(header.c)
        .and_then(|v| v.checked_mul(header.s))
        .and_then(|v| v.checked_mul(4))
        .ok_or_else(|| Error::CorruptContainer("dimensions overflow".into()))?;
    if payload.len() != expected {
        return Err(Error::CorruptContainer(format!(
            "payload is {} bytes, header implies {expected}",
            payload.len()
        )));
    }
    let samples: Vec<f32> = payload
        .chunks_exact(4)
        .map(|b| f32::from_le_bytes(b.try_into().unwrap()))
        .collect();
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidSamples);
    }
    EegTrialSet::new(
        header.c,
        header.s,
        samples,
        header.labels,
        header.class_names,
        header.sampling_rate,
    )
    .map_err(|e| match e {
        Error::InvalidSamples => e,
        other => Error::CorruptContainer(other.to_string()),
    })
}

pub fn save_trialset(set: &EegTrialSet, path: impl AsRef<Path>) -> Result<()> {
    write_trialset(set, BufWriter::new(File::create(path)?))
}

pub fn load_trialset(path: impl AsRef<Path>) -> Result<EegTrialSet> {
    read_trialset(BufReader::new(File::open(path)?))
}
