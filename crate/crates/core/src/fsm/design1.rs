use serde::{Deserialize, Serialize};

use super::rect::{split_rect, Rect};
use super::FsmEvent;
use crate::error::{Error, Result};
use crate::seed::derive_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum D1State {
    CropOrSwitch,
    CropRectangle,
    SwitchState,
}

impl D1State {
    pub fn name(self) -> &'static str {
        match self {
            D1State::CropOrSwitch => "crop_or_switch",
            D1State::CropRectangle => "crop_rectangle",
            D1State::SwitchState => "switch",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum D1Action {
    /// The rectangle was cropped to `kept`.
    CropApplied { kept: Rect },
    /// 1×1 rectangle; nothing left to crop.
    CropUnavailable,
    DoubleClick { x: u32, y: u32 },
    RectRestored { rect: Rect },
}

/// Candidate stimulus words. Short words label the left/top half.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordSets {
    pub short: Vec<String>,
    pub long: Vec<String>,
}

impl Default for WordSets {
    fn default() -> Self {
        Self {
            short: ["in", "out", "up"].map(String::from).to_vec(),
            long: ["independent", "cooperate"].map(String::from).to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prompt {
    pub short: String,
    pub long: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Design1Context {
    pub state: D1State,
    pub current: Rect,
    pub previous: Vec<Rect>,
    pub screen: Rect,
    pub prompt: Prompt,
    pub words: WordSets,
    prompt_seed: u64,
    prompt_draws: u64,
}

impl Design1Context {
    pub fn new(screen: Rect, words: WordSets, seed: u64) -> Result<Self> {
        if words.short.is_empty() || words.long.is_empty() {
            return Err(Error::Config("both word sets need at least one word".into()));
        }
        if screen.w == 0 || screen.h == 0 {
            return Err(Error::Config("screen must be non-empty".into()));
        }
        let mut ctx = Self {
            state: D1State::CropOrSwitch,
            current: screen,
            previous: Vec::new(),
            screen,
            prompt: Prompt {
                short: String::new(),
                long: String::new(),
            },
            words,
            prompt_seed: seed,
            prompt_draws: 0,
        };
        ctx.draw_prompt();
        Ok(ctx)
    }

    fn draw_prompt(&mut self) {
        let r = derive_seed(self.prompt_seed, self.prompt_draws);
        self.prompt_draws += 1;
        let pick = |set: &[String], bits: u64| set[(bits % set.len() as u64) as usize].clone();
        self.prompt = Prompt {
            short: pick(&self.words.short, r),
            long: pick(&self.words.long, r >> 32),
        };
    }

    /// Halves the next crop would produce: `(short side, long side)`.
    pub fn preview(&self) -> Option<(Rect, Rect)> {
        split_rect(&self.current).ok()
    }
}

/// One transition of design 1. `Epsilon` is not an event of this machine.
pub fn d1_step(ctx: &Design1Context, ev: FsmEvent) -> Result<(Design1Context, Vec<D1Action>)> {
    let short = match ev {
        FsmEvent::DecodedShort => true,
        FsmEvent::DecodedLong => false,
        FsmEvent::Epsilon => return Err(Error::Protocol("design 1 has no epsilon transitions".into())),
    };
    let mut next = ctx.clone();
    let mut actions = Vec::new();
    match (ctx.state, short) {
        (D1State::CropOrSwitch, true) => next.state = D1State::CropRectangle,
        (D1State::CropOrSwitch, false) => next.state = D1State::SwitchState,
        (D1State::CropRectangle, _) => {
            match split_rect(&ctx.current) {
                Ok((first, second)) => {
                    next.previous.push(ctx.current);
                    next.current = if short { first } else { second };
                    actions.push(D1Action::CropApplied { kept: next.current });
                }
                Err(_) => actions.push(D1Action::CropUnavailable),
            }
            next.state = D1State::CropOrSwitch;
        }
        (D1State::SwitchState, true) => {
            let (x, y) = ctx.current.center();
            actions.push(D1Action::DoubleClick { x, y });
            next.current = ctx.screen;
            next.previous.clear();
            next.state = D1State::CropOrSwitch;
        }
        (D1State::SwitchState, false) => {
            next.current = next.previous.pop().unwrap_or(ctx.screen);
            actions.push(D1Action::RectRestored { rect: next.current });
            next.state = D1State::CropRectangle;
        }
    }
    next.draw_prompt();
    Ok((next, actions))
}

/// Crops a perfect decoder needs before the rectangle fits inside `target`.
/// At each crop it keeps the half holding the target's centre pixel.
pub fn d1_steps_to_target(screen: Rect, target: Rect) -> Result<usize> {
    if !screen.contains(&target) || target.w == 0 || target.h == 0 {
        return Err(Error::Config("target must be a non-empty part of the screen".into()));
    }
    let (cx, cy) = target.center();
    let mut ctx = Design1Context::new(screen, WordSets::default(), 0)?;
    let mut crops = 0;
    while !target.contains(&ctx.current) {
        let (first, _) = split_rect(&ctx.current)?;
        let keep_first = first.contains_point(cx, cy);
        ctx = d1_step(&ctx, FsmEvent::DecodedShort)?.0;
        let (n, actions) = d1_step(&ctx, FsmEvent::from_class(usize::from(!keep_first)))?;
        debug_assert!(matches!(actions[..], [D1Action::CropApplied { .. }]));
        ctx = n;
        crops += 1;
    }
    Ok(crops)
}
