//! Headless runs: an intent script in, JSON lines out.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::protocol::ServerMessage;
use super::{Design, Intent, Session, SimConfig, Stats};
use crate::error::Result;

/// First line of a transcript; enough to reproduce the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptConfig {
    pub data: String,
    pub design: Design,
    pub seed: u64,
    pub intents: usize,
    pub sim: SimConfig,
}

/// One `short` or `long` per line. Blank lines and `#` comments are skipped.
pub fn parse_intents(script: &str) -> Result<Vec<Intent>> {
    script
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(str::parse)
        .collect()
}

/// Runs `intents` through `session`, writing the config, the initial state
/// and one outcome per line.
pub fn write_transcript<W: Write>(
    mut w: W,
    config: &TranscriptConfig,
    session: &mut Session,
    intents: &[Intent],
) -> Result<Stats> {
    let mut header = serde_json::to_value(config)?;
    header["type"] = "config".into();
    writeln!(w, "{}", serde_json::to_string(&header)?)?;
    writeln!(w, "{}", ServerMessage::State(session.state()).to_json())?;
    for &i in intents {
        let o = session.submit_intent(i)?;
        writeln!(w, "{}", ServerMessage::Outcome(o).to_json())?;
    }
    w.flush()?;
    Ok(session.stats())
}
