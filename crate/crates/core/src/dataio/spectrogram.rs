use std::io::Write;

use nalgebra::DMatrix;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Short-time Fourier magnitudes, `[channel][bin][frame]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    pub channels: usize,
    pub bins: usize,
    pub frames: usize,
    pub window: usize,
    pub hop: usize,
    data: Vec<f64>,
}

impl Spectrogram {
    pub fn get(&self, channel: usize, bin: usize, frame: usize) -> f64 {
        self.data[(channel * self.bins + bin) * self.frames + frame]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Frequency of `bin` in Hz.
    pub fn bin_frequency(&self, bin: usize, sampling_rate: f64) -> f64 {
        bin as f64 * sampling_rate / self.window as f64
    }

    /// Long-format CSV: `channel,frequency_hz,frame,time_s,magnitude`.
    pub fn write_csv<W: Write>(&self, w: W, sampling_rate: f64) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["channel", "frequency_hz", "frame", "time_s", "magnitude"])?;
        for ch in 0..self.channels {
            for bin in 0..self.bins {
                for f in 0..self.frames {
                    let t = (f * self.hop) as f64 / sampling_rate;
                    out.write_record(&[
                        ch.to_string(),
                        self.bin_frequency(bin, sampling_rate).to_string(),
                        f.to_string(),
                        t.to_string(),
                        self.get(ch, bin, f).to_string(),
                    ])?;
                }
            }
        }
        out.flush()?;
        Ok(())
    }
}

/// Periodic Hann window.
fn hann(len: usize) -> Vec<f64> {
    (0..len)
        .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / len as f64).cos())
        .collect()
}

/// Hann-windowed STFT magnitude of every channel of a channels × samples
/// trial. Frames start every `hop` samples; a trailing partial frame is
/// dropped.
pub fn export_spectrogram(trial: &DMatrix<f64>, window: usize, hop: usize) -> Result<Spectrogram> {
    let (channels, s) = trial.shape();
    if window > s {
        return Err(Error::TrialTooShort { window, samples: s });
    }
    if window == 0 || hop == 0 {
        return Err(Error::Config("window and hop must be positive".into()));
    }
    let frames = (s - window) / hop + 1;
    let bins = window / 2 + 1;
    let taper = hann(window);
    let fft = FftPlanner::new().plan_fft_forward(window);
    let mut buf = vec![Complex::new(0.0, 0.0); window];
    let mut data = vec![0.0; channels * bins * frames];
    for ch in 0..channels {
        let row = trial.row(ch);
        for f in 0..frames {
            let start = f * hop;
            for (i, b) in buf.iter_mut().enumerate() {
                *b = Complex::new(row[start + i] * taper[i], 0.0);
            }
            fft.process(&mut buf);
            for (bin, v) in buf.iter().take(bins).enumerate() {
                data[(ch * bins + bin) * frames + f] = v.norm();
            }
        }
    }
    Ok(Spectrogram {
        channels,
        bins,
        frames,
        window,
        hop,
        data,
    })
}
