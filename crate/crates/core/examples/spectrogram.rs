//! Short-time magnitude spectra of a pure tone and of a synthetic trial.

use isbci::dataio::{export_spectrogram, gen_synthetic, SyntheticConfig};
use nalgebra::DMatrix;

fn main() -> isbci::Result<()> {
    let rate = 256.0;
    let tone = DMatrix::from_fn(1, 512, |_, t| (std::f64::consts::TAU * 12.0 * t as f64 / rate).sin());
    let sp = export_spectrogram(&tone, 256, 128)?;
    let peak = (0..sp.bins).max_by(|&a, &b| sp.get(0, a, 0).total_cmp(&sp.get(0, b, 0))).unwrap();
    println!(
        "12 Hz tone: {} bins x {} frames, peak at {} Hz",
        sp.bins,
        sp.frames,
        sp.bin_frequency(peak, rate)
    );

    let set = gen_synthetic(&SyntheticConfig::default())?;
    let sp = export_spectrogram(&set.trial_matrix(0), 64, 32)?;
    let mut out = Vec::new();
    sp.write_csv(&mut out, set.sampling_rate())?;
    let text = String::from_utf8(out).expect("utf-8");
    println!("trial 0 as CSV ({} rows), first lines:", text.lines().count() - 1);
    for line in text.lines().take(4) {
        println!("  {line}");
    }
    Ok(())
}
