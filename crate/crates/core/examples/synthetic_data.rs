//! Generates a synthetic two-class set, round-trips it through the binary
//! container and imports two CSV trials.

use isbci::dataio::{gen_synthetic, load_trialset, save_trialset, trialset_from_csv, SyntheticConfig};

fn main() -> isbci::Result<()> {
    let cfg = SyntheticConfig {
        n_per_class: 50,
        channels: 6,
        samples: 128,
        separation: 1.5,
        ..Default::default()
    };
    let set = gen_synthetic(&cfg)?;
    let counts: Vec<usize> = set.class_indices().iter().map(Vec::len).collect();
    println!(
        "{} trials, {} channels x {} samples at {} Hz, per class {:?}",
        set.n_trials(),
        set.channels(),
        set.samples_per_trial(),
        set.sampling_rate(),
        counts
    );

    let dir = std::env::temp_dir().join("isbci-example-data");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("synthetic.isbc");
    save_trialset(&set, &path)?;
    let back = load_trialset(&path)?;
    println!("container {} bytes, round trip equal: {}", std::fs::metadata(&path)?.len(), back == set);

    // one file per trial: rows are channels, columns are samples
    let a = dir.join("short.csv");
    let b = dir.join("long.csv");
    std::fs::write(&a, "0.1,0.4,-0.2,0.0\n1.0,0.9,1.1,0.8\n")?;
    std::fs::write(&b, "0.5,-0.5,0.5,-0.5\n0.0,0.2,0.0,-0.2\n")?;
    let imported = trialset_from_csv(&[(&a, 0), (&b, 1)], vec!["short".into(), "long".into()], 256.0)?;
    println!("imported {} CSV trials, first trial:\n{}", imported.n_trials(), imported.trial_matrix(0));
    Ok(())
}
