use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use super::protocol::{ClientMessage, ServerMessage};
use super::{split_for_session, train_session_model, Decoder, Design, Intent, Outcome, Session, SimConfig, StateView, Stats};
use crate::dataio::EegTrialSet;
use crate::error::{Error, Result};

enum DecoderSource {
    /// Train (and cache) one pipeline per seed.
    Trained(Mutex<HashMap<u64, Arc<dyn Decoder>>>),
    Fixed(Arc<dyn Decoder>),
}

/// Registry of live sessions behind the wire protocol. Sessions run
/// independently; each one is locked for the duration of a step.
pub struct SessionHub {
    data: Arc<EegTrialSet>,
    cfg: SimConfig,
    decoders: DecoderSource,
    sessions: Mutex<HashMap<String, Arc<Mutex<Session>>>>,
    next_id: AtomicU64,
}

impl SessionHub {
    pub fn new(data: Arc<EegTrialSet>, cfg: SimConfig) -> Self {
        Self::build(data, cfg, DecoderSource::Trained(Mutex::new(HashMap::new())))
    }

    /// Every session decodes with `decoder` instead of a trained pipeline.
    pub fn with_decoder(data: Arc<EegTrialSet>, cfg: SimConfig, decoder: Arc<dyn Decoder>) -> Self {
        Self::build(data, cfg, DecoderSource::Fixed(decoder))
    }

    fn build(data: Arc<EegTrialSet>, cfg: SimConfig, decoders: DecoderSource) -> Self {
        Self {
            data,
            cfg,
            decoders,
            sessions: Mutex::new(HashMap::new()),
            next_id: AtomicU64::new(1),
        }
    }

    fn decoder_for(&self, seed: u64, train: &[usize]) -> Result<Arc<dyn Decoder>> {
        match &self.decoders {
            DecoderSource::Fixed(d) => Ok(d.clone()),
            DecoderSource::Trained(cache) => {
                let mut cache = cache.lock().expect("decoder cache poisoned");
                if let Some(d) = cache.get(&seed) {
                    return Ok(d.clone());
                }
                let model: Arc<dyn Decoder> = Arc::new(train_session_model(&self.data, train, seed, &self.cfg)?);
                cache.insert(seed, model.clone());
                Ok(model)
            }
        }
    }

    pub fn start(&self, design: Design, seed: u64) -> Result<StateView> {
        let (train, test) = split_for_session(&self.data, seed, &self.cfg)?;
        let decoder = self.decoder_for(seed, &train)?;
        let id = format!("s{}", self.next_id.fetch_add(1, Ordering::Relaxed));
        let session = Session::with_decoder(&id, design, self.data.clone(), &test, decoder, seed, &self.cfg)?;
        let view = session.state();
        self.sessions
            .lock()
            .expect("session map poisoned")
            .insert(id, Arc::new(Mutex::new(session)));
        Ok(view)
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>> {
        self.sessions
            .lock()
            .expect("session map poisoned")
            .get(id)
            .cloned()
            .ok_or_else(|| Error::UnknownSession(id.to_string()))
    }

    pub fn submit_intent(&self, id: &str, intent: Intent) -> Result<Outcome> {
        let s = self.session(id)?;
        let mut guard = s.lock().expect("session poisoned");
        guard.submit_intent(intent)
    }

    pub fn session_stats(&self, id: &str) -> Result<Stats> {
        let s = self.session(id)?;
        let guard = s.lock().expect("session poisoned");
        Ok(guard.stats())
    }

    pub fn handle(&self, msg: ClientMessage) -> ServerMessage {
        let res = match msg {
            ClientMessage::Start { design, seed } => self.start(design, seed).map(ServerMessage::State),
            ClientMessage::Intent { session, value } => self.submit_intent(&session, value).map(ServerMessage::Outcome),
            ClientMessage::Stats { session } => self
                .session_stats(&session)
                .map(|stats| ServerMessage::Stats { session, stats }),
        };
        res.unwrap_or_else(|e| ServerMessage::Error { message: e.to_string() })
    }

    /// Parses one JSON request and returns the JSON reply.
    pub fn handle_text(&self, text: &str) -> String {
        match serde_json::from_str::<ClientMessage>(text) {
            Ok(msg) => self.handle(msg).to_json(),
            Err(e) => ServerMessage::Error {
                message: Error::Protocol(e.to_string()).to_string(),
            }
            .to_json(),
        }
    }
}
