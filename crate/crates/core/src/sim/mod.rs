//! Partial-online simulation: a user states an intent, the session draws a
//! held-out trial of that class, decodes it and feeds the decoded class to
//! the selected interface machine.

mod hub;
mod protocol;
mod transcript;

pub use hub::SessionHub;
pub use protocol::{ClientMessage, ServerMessage};
pub use transcript::{parse_intents, write_transcript, TranscriptConfig};

use std::sync::Arc;
use std::time::Instant;

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::dataio::EegTrialSet;
use crate::error::{Error, Result};
use crate::eval::{bits_per_minute, info_per_trial, itr, ItrInput};
use crate::features::stratified_split;
use crate::fsm::{
    Design1Context, Design2Context, DirNode, DirTree, FsmAction, FsmContext, FsmEvent, Prompt, Rect, WordSets,
};
use crate::pipeline::{fit_pipeline, HyperParams, PipelineConfig, PipelineModel};
use crate::seed::{derive_seed, rng};

/// What the user means to select. Short is class 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Intent {
    Short,
    Long,
}

impl Intent {
    pub fn class(self) -> usize {
        match self {
            Intent::Short => 0,
            Intent::Long => 1,
        }
    }

    pub fn from_class(c: usize) -> Self {
        if c == 0 {
            Intent::Short
        } else {
            Intent::Long
        }
    }
}

impl std::str::FromStr for Intent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "short" => Ok(Intent::Short),
            "long" => Ok(Intent::Long),
            other => Err(Error::Protocol(format!("intent must be short or long, got {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Design {
    #[serde(alias = "1")]
    Design1,
    #[serde(alias = "2")]
    Design2,
}

impl std::str::FromStr for Design {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "design1" | "1" => Ok(Design::Design1),
            "design2" | "2" => Ok(Design::Design2),
            other => Err(Error::Config(format!("unknown design {other:?}"))),
        }
    }
}

/// Maps one held-out trial to a class.
pub trait Decoder: Send + Sync {
    fn decode(&self, trial_id: usize, trial: &DMatrix<f64>) -> Result<usize>;
}

impl Decoder for PipelineModel {
    fn decode(&self, _trial_id: usize, trial: &DMatrix<f64>) -> Result<usize> {
        PipelineModel::decode(self, trial)
    }
}

/// Answers with the true label; for exercising the loop without a model.
#[derive(Debug, Clone)]
pub struct PerfectDecoder {
    labels: Vec<usize>,
}

impl PerfectDecoder {
    pub fn new(set: &EegTrialSet) -> Self {
        Self {
            labels: set.labels().to_vec(),
        }
    }
}

impl Decoder for PerfectDecoder {
    fn decode(&self, trial_id: usize, _trial: &DMatrix<f64>) -> Result<usize> {
        self.labels
            .get(trial_id)
            .copied()
            .ok_or(Error::DimensionMismatch {
                expected: self.labels.len(),
                got: trial_id,
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Share of each class used for training; the rest is the test pool.
    pub split: f64,
    /// Seconds per decision (input plus rest) for the live rate.
    pub trial_seconds: f64,
    pub hyperparams: HyperParams,
    pub pipeline: PipelineConfig,
    pub screen: Rect,
    pub tree: DirTree,
    pub words: WordSets,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            split: 0.6,
            trial_seconds: 2.0,
            hyperparams: HyperParams {
                n_rf: 8,
                k_bag: 4,
                hidden: 32,
            },
            pipeline: PipelineConfig::standard(),
            screen: Rect::screen(1024, 768),
            tree: DirTree::sample(),
            words: WordSets::default(),
        }
    }
}

/// Running decode statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub decodes: u64,
    pub correct: u64,
    pub accuracy: f64,
    /// Bits per decision at the running accuracy.
    pub bits: f64,
    pub itr_bpm: f64,
}

impl Stats {
    pub fn compute(decodes: u64, correct: u64, n_classes: usize, trial_seconds: f64) -> Result<Self> {
        let accuracy = if decodes == 0 {
            0.0
        } else {
            correct as f64 / decodes as f64
        };
        let (bits, itr_bpm) = if decodes == 0 {
            (0.0, 0.0)
        } else {
            let bits = info_per_trial(&ItrInput::new(n_classes, accuracy, trial_seconds)?);
            (bits, bits_per_minute(itr(bits, trial_seconds)?))
        };
        Ok(Self {
            decodes,
            correct,
            accuracy,
            bits,
            itr_bpm,
        })
    }
}

/// Snapshot of the grid shown by design 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeView {
    pub root: DirNode,
    pub columns: usize,
    pub cursor: Vec<usize>,
    pub path: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateView {
    pub session: String,
    pub design: Design,
    pub fsm_state: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rect: Option<Rect>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub screen: Option<Rect>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tree: Option<TreeView>,
    pub prompts: Prompt,
}

/// Result of one submitted intent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub session: String,
    pub trial: usize,
    pub intended: Intent,
    pub decoded: Intent,
    pub correct: bool,
    pub actions: Vec<FsmAction>,
    pub stats: Stats,
    pub state: StateView,
    /// Set when a class pool ran out and was reshuffled for this step.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

#[derive(Debug, Clone)]
struct TrialPool {
    trials: Vec<usize>,
    seed: u64,
    rounds: u64,
    pos: usize,
}

impl TrialPool {
    fn new(mut trials: Vec<usize>, seed: u64) -> Self {
        trials.sort_unstable();
        let mut p = Self {
            trials,
            seed,
            rounds: 0,
            pos: 0,
        };
        p.shuffle();
        p
    }

    fn shuffle(&mut self) {
        self.trials.sort_unstable();
        self.trials.shuffle(&mut rng(derive_seed(self.seed, self.rounds)));
        self.rounds += 1;
        self.pos = 0;
    }

    /// Next trial and whether the pool had to be reshuffled first.
    fn draw(&mut self) -> (usize, bool) {
        let reshuffled = self.pos == self.trials.len();
        if reshuffled {
            self.shuffle();
        }
        self.pos += 1;
        (self.trials[self.pos - 1], reshuffled)
    }
}

/// One user's simulated run. Steps are applied strictly in call order.
pub struct Session {
    id: String,
    design: Design,
    data: Arc<EegTrialSet>,
    decoder: Arc<dyn Decoder>,
    pools: [TrialPool; 2],
    fsm: FsmContext,
    words: WordSets,
    prompt_seed: u64,
    trial_seconds: f64,
    decodes: u64,
    correct: u64,
}

impl Session {
    /// Session over the held-out trials `test`, decoding with `decoder`.
    pub fn with_decoder(
        id: impl Into<String>,
        design: Design,
        data: Arc<EegTrialSet>,
        test: &[usize],
        decoder: Arc<dyn Decoder>,
        seed: u64,
        cfg: &SimConfig,
    ) -> Result<Self> {
        if data.n_classes() != 2 {
            return Err(Error::Config(format!(
                "the simulator needs two classes (short, long), data has {}",
                data.n_classes()
            )));
        }
        let pool_seed = derive_seed(seed, 3);
        let pools = [0, 1].map(|k| {
            let trials = test.iter().copied().filter(|&i| data.labels()[i] == k).collect();
            TrialPool::new(trials, derive_seed(pool_seed, k as u64))
        });
        if pools.iter().any(|p| p.trials.is_empty()) {
            return Err(Error::EmptyTestPool);
        }
        let prompt_seed = derive_seed(seed, 4);
        let fsm = match design {
            Design::Design1 => FsmContext::Design1(Design1Context::new(cfg.screen, cfg.words.clone(), prompt_seed)?),
            Design::Design2 => FsmContext::Design2(Design2Context::new(cfg.tree.clone())?),
        };
        Ok(Self {
            id: id.into(),
            design,
            data,
            decoder,
            pools,
            fsm,
            words: cfg.words.clone(),
            prompt_seed,
            trial_seconds: cfg.trial_seconds,
            decodes: 0,
            correct: 0,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn design(&self) -> Design {
        self.design
    }

    pub fn fsm(&self) -> &FsmContext {
        &self.fsm
    }

    pub fn stats(&self) -> Stats {
        Stats::compute(self.decodes, self.correct, 2, self.trial_seconds).expect("validated at start")
    }

    fn prompt(&self) -> Prompt {
        match &self.fsm {
            FsmContext::Design1(c) => c.prompt.clone(),
            FsmContext::Design2(_) => {
                let r = derive_seed(self.prompt_seed, self.decodes);
                let w = &self.words;
                Prompt {
                    short: w.short[(r % w.short.len() as u64) as usize].clone(),
                    long: w.long[((r >> 32) % w.long.len() as u64) as usize].clone(),
                }
            }
        }
    }

    pub fn state(&self) -> StateView {
        let (rect, screen, tree) = match &self.fsm {
            FsmContext::Design1(c) => (Some(c.current), Some(c.screen), None),
            FsmContext::Design2(c) => (
                None,
                None,
                Some(TreeView {
                    root: c.tree.root.clone(),
                    columns: c.tree.columns,
                    cursor: c.cursor.clone(),
                    path: c.selected_path(),
                }),
            ),
        };
        StateView {
            session: self.id.clone(),
            design: self.design,
            fsm_state: self.fsm.state_name(),
            rect,
            screen,
            tree,
            prompts: self.prompt(),
        }
    }

    /// Draws a held-out trial of the intended class, decodes it and steps
    /// the interface with the decoded class.
    pub fn submit_intent(&mut self, intent: Intent) -> Result<Outcome> {
        let started = Instant::now();
        let (trial, reshuffled) = self.pools[intent.class()].draw();
        let decoded_class = self.decoder.decode(trial, &self.data.trial_matrix(trial))?;
        let (fsm, actions) = self.fsm.step(FsmEvent::from_class(decoded_class))?;
        self.fsm = fsm;
        let decoded = Intent::from_class(decoded_class);
        let correct = decoded_class == intent.class();
        self.decodes += 1;
        self.correct += u64::from(correct);
        let warning = reshuffled.then(|| {
            log::warn!("session {}: {:?} test pool exhausted, reshuffled", self.id, intent);
            format!("{intent:?} test pool exhausted; reshuffled").to_lowercase()
        });
        log::debug!("session {} step {} took {:?}", self.id, self.decodes, started.elapsed());
        Ok(Outcome {
            session: self.id.clone(),
            trial,
            intended: intent,
            decoded,
            correct,
            actions,
            stats: self.stats(),
            state: self.state(),
            warning,
        })
    }
}

/// Trains a pipeline on a stratified share of `data` and opens a session
/// whose test pool is the remainder.
pub fn start_session(
    id: impl Into<String>,
    data: Arc<EegTrialSet>,
    design: Design,
    seed: u64,
    cfg: &SimConfig,
) -> Result<(Session, Arc<PipelineModel>)> {
    let (train, test) = split_for_session(&data, seed, cfg)?;
    let model = Arc::new(train_session_model(&data, &train, seed, cfg)?);
    let session = Session::with_decoder(id, design, data, &test, model.clone(), seed, cfg)?;
    Ok((session, model))
}

/// Train and test indices a session with this seed uses.
pub fn split_for_session(data: &EegTrialSet, seed: u64, cfg: &SimConfig) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(cfg.trial_seconds > 0.0 && cfg.trial_seconds.is_finite()) {
        return Err(Error::Config("trial time must be positive".into()));
    }
    let (train, test) = stratified_split(data.labels(), cfg.split, derive_seed(seed, 1))?;
    if test.is_empty() {
        return Err(Error::EmptyTestPool);
    }
    Ok((train, test))
}

pub fn train_session_model(data: &EegTrialSet, train: &[usize], seed: u64, cfg: &SimConfig) -> Result<PipelineModel> {
    let mut pipe = cfg.pipeline.clone();
    pipe.train.seed = derive_seed(seed, 2);
    fit_pipeline(data, train, cfg.hyperparams, &pipe)
}
