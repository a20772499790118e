use serde::{Deserialize, Serialize};

use super::{Design, Intent, Outcome, StateView, Stats};

/// Client requests. One JSON object per message, discriminated by `type`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ClientMessage {
    Start {
        design: Design,
        #[serde(default)]
        seed: u64,
    },
    Intent {
        session: String,
        value: Intent,
    },
    Stats {
        session: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum ServerMessage {
    State(StateView),
    Outcome(Outcome),
    Stats { session: String, stats: Stats },
    Error { message: String },
}

impl ServerMessage {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("server messages always serialize")
    }
}
