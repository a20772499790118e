//! The simulated loop: train on 60% of a synthetic set, then drive design 1
//! with scripted intents and print the transcript and running statistics.

use std::sync::Arc;

use isbci::dataio::{gen_synthetic, SyntheticConfig};
use isbci::sim::{parse_intents, start_session, write_transcript, Design, SimConfig, TranscriptConfig};

fn main() -> isbci::Result<()> {
    let data = Arc::new(gen_synthetic(&SyntheticConfig {
        separation: 0.8,
        ..Default::default()
    })?);
    let cfg = SimConfig::default();
    let (mut session, model) = start_session("demo", data, Design::Design1, 3, &cfg)?;
    eprintln!("decoder {} ready", model.hyperparams());

    let intents = parse_intents(
        "# two crops: right half, then its top\n\
         short\nlong\nshort\nshort\n\
         # undo the last crop and take the bottom instead\n\
         long\nlong\nlong\n\
         # double-click the centre\n\
         long\nshort\n",
    )?;
    let header = TranscriptConfig {
        data: "synthetic:separation=0.8".into(),
        design: Design::Design1,
        seed: 3,
        intents: intents.len(),
        sim: cfg,
    };
    let stats = write_transcript(std::io::stdout().lock(), &header, &mut session, &intents)?;
    eprintln!(
        "{} decisions, {} correct, accuracy {:.3}, {:.1} b/min",
        stats.decodes, stats.correct, stats.accuracy, stats.itr_bpm
    );
    Ok(())
}
