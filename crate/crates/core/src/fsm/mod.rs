//! The two binary-selection interface machines. Both are pure transition
//! functions: `(context, event) -> (context', actions)`.
//!
//! Design 1 narrows a translucent rectangle over the screen by halving it
//! and double-clicks whatever lies under the final rectangle. Design 2
//! drives a directory tree with Enter, arrow and Backspace keys.

mod design1;
mod design2;
mod rect;

pub use design1::{d1_step, d1_steps_to_target, D1Action, D1State, Design1Context, Prompt, WordSets};
pub use design2::{d2_step, D2State, Design2Context, DirNode, DirTree, KeyAction, NavRecord};
pub use rect::{split_rect, Rect};

use serde::{Deserialize, Serialize};

use crate::error::Result;

/// Decoded classifier output driving a machine. Class 0 is the short word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FsmEvent {
    #[serde(rename = "short")]
    DecodedShort,
    #[serde(rename = "long")]
    DecodedLong,
    Epsilon,
}

impl FsmEvent {
    pub fn from_class(class: usize) -> Self {
        if class == 0 {
            FsmEvent::DecodedShort
        } else {
            FsmEvent::DecodedLong
        }
    }
}

/// Either machine behind one interface.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "design", rename_all = "lowercase")]
pub enum FsmContext {
    Design1(Design1Context),
    Design2(Design2Context),
}

/// An output of either machine.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FsmAction {
    Pointer(D1Action),
    Key(KeyAction),
}

impl FsmContext {
    pub fn state_name(&self) -> String {
        match self {
            FsmContext::Design1(c) => c.state.name().to_string(),
            FsmContext::Design2(c) => c.state.name().to_string(),
        }
    }

    pub fn step(&self, ev: FsmEvent) -> Result<(FsmContext, Vec<FsmAction>)> {
        Ok(match self {
            FsmContext::Design1(c) => {
                let (n, a) = d1_step(c, ev)?;
                (FsmContext::Design1(n), a.into_iter().map(FsmAction::Pointer).collect())
            }
            FsmContext::Design2(c) => {
                let (n, a) = d2_step(c, ev)?;
                (FsmContext::Design2(n), a.into_iter().map(FsmAction::Key).collect())
            }
        })
    }
}
