use serde::{Deserialize, Serialize};

use super::FsmEvent;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum D2State {
    A,
    B,
    C,
    D,
}

impl D2State {
    pub fn name(self) -> &'static str {
        match self {
            D2State::A => "A",
            D2State::B => "B",
            D2State::C => "C",
            D2State::D => "D",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum KeyAction {
    Enter,
    RightArrow,
    LeftArrow,
    DownArrow,
    UpArrow,
    /// Backspace: go to the parent folder.
    LevelUp,
    /// Enter on an item without children.
    OpenFile { path: Vec<String> },
    UndoUnavailable,
    /// The requested move leaves the tree or the grid.
    BlockedEdge,
}

impl KeyAction {
    fn inverse(&self) -> KeyAction {
        match self {
            KeyAction::Enter => KeyAction::LevelUp,
            KeyAction::LevelUp => KeyAction::Enter,
            KeyAction::RightArrow => KeyAction::LeftArrow,
            KeyAction::LeftArrow => KeyAction::RightArrow,
            KeyAction::DownArrow => KeyAction::UpArrow,
            KeyAction::UpArrow => KeyAction::DownArrow,
            other => other.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirNode {
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<DirNode>,
}

impl DirNode {
    pub fn file(name: &str) -> Self {
        Self {
            name: name.into(),
            children: Vec::new(),
        }
    }

    pub fn dir(name: &str, children: Vec<DirNode>) -> Self {
        Self {
            name: name.into(),
            children,
        }
    }
}

/// Folder hierarchy shown as a grid `columns` wide. `root` is not itself
/// selectable; its children form the top level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirTree {
    pub root: DirNode,
    pub columns: usize,
}

impl DirTree {
    pub fn new(root: DirNode, columns: usize) -> Result<Self> {
        if root.children.is_empty() {
            return Err(Error::Config("directory tree has no top-level entries".into()));
        }
        if columns == 0 {
            return Err(Error::Config("grid needs at least one column".into()));
        }
        Ok(Self { root, columns })
    }

    /// A small home folder used by the demos and the simulator.
    pub fn sample() -> Self {
        let f = DirNode::file;
        let d = DirNode::dir;
        let root = d(
            "home",
            vec![
                d("Desktop", vec![f("notes.txt"), f("todo.txt")]),
                d(
                    "Documents",
                    vec![
                        d("letters", vec![f("bank.pdf"), f("family.odt")]),
                        f("report.pdf"),
                        f("budget.ods"),
                        f("cv.pdf"),
                        f("thesis.tex"),
                    ],
                ),
                d("Downloads", vec![f("setup.bin")]),
                d("Music", vec![d("album", vec![f("01.ogg"), f("02.ogg"), f("03.ogg")])]),
                d(
                    "Pictures",
                    vec![f("beach.jpg"), f("cat.jpg"), f("city.jpg"), f("forest.jpg"), f("snow.jpg")],
                ),
                d("Videos", vec![]),
                f("readme.txt"),
            ],
        );
        Self { root, columns: 4 }
    }

    pub fn node(&self, cursor: &[usize]) -> Option<&DirNode> {
        let mut n = &self.root;
        for &i in cursor {
            n = n.children.get(i)?;
        }
        Some(n)
    }

    pub fn names(&self, cursor: &[usize]) -> Vec<String> {
        let mut n = &self.root;
        let mut out = Vec::with_capacity(cursor.len());
        for &i in cursor {
            n = &n.children[i];
            out.push(n.name.clone());
        }
        out
    }

    fn sibling_count(&self, cursor: &[usize]) -> usize {
        let parent = &cursor[..cursor.len() - 1];
        self.node(parent).map_or(0, |p| p.children.len())
    }
}

/// One recorded navigation key and the cursor it moved from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NavRecord {
    pub key: KeyAction,
    pub from: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Design2Context {
    pub state: D2State,
    pub tree: DirTree,
    /// Child indices from the root to the selected item.
    pub cursor: Vec<usize>,
    pub history: Vec<NavRecord>,
}

impl Design2Context {
    /// Starts in `A` with the first top-level entry selected.
    pub fn new(tree: DirTree) -> Result<Self> {
        let tree = DirTree::new(tree.root, tree.columns)?;
        Ok(Self {
            state: D2State::A,
            tree,
            cursor: vec![0],
            history: Vec::new(),
        })
    }

    pub fn selected_path(&self) -> Vec<String> {
        self.tree.names(&self.cursor)
    }

    fn try_move(&mut self, key: KeyAction, target: Option<Vec<usize>>) -> KeyAction {
        match target {
            Some(t) => {
                let from = std::mem::replace(&mut self.cursor, t);
                self.history.push(NavRecord { key: key.clone(), from });
                key
            }
            None => KeyAction::BlockedEdge,
        }
    }
}

/// One transition of design 2. Every key-emitting branch ends back in `A`,
/// so the machine never rests in `C` or `D`; an explicit `Epsilon` is
/// rejected.
pub fn d2_step(ctx: &Design2Context, ev: FsmEvent) -> Result<(Design2Context, Vec<KeyAction>)> {
    let short = match ev {
        FsmEvent::DecodedShort => true,
        FsmEvent::DecodedLong => false,
        FsmEvent::Epsilon => return Err(Error::Protocol("epsilon transitions are applied internally".into())),
    };
    let mut next = ctx.clone();
    let last = *ctx.cursor.last().expect("cursor is never empty");
    let action = match (ctx.state, short) {
        (D2State::A, true) => {
            next.state = D2State::B;
            None
        }
        (D2State::A, false) => {
            next.state = D2State::D;
            None
        }
        (D2State::B, false) => {
            next.state = D2State::C;
            None
        }
        (D2State::B, true) => {
            let node = ctx.tree.node(&ctx.cursor).expect("cursor is valid");
            Some(if node.children.is_empty() {
                KeyAction::OpenFile {
                    path: ctx.selected_path(),
                }
            } else {
                let mut t = ctx.cursor.clone();
                t.push(0);
                next.try_move(KeyAction::Enter, Some(t))
            })
        }
        (D2State::C, true) => {
            let target = (last + 1 < ctx.tree.sibling_count(&ctx.cursor)).then(|| {
                let mut t = ctx.cursor.clone();
                *t.last_mut().unwrap() += 1;
                t
            });
            Some(next.try_move(KeyAction::RightArrow, target))
        }
        (D2State::C, false) => {
            let cols = ctx.tree.columns;
            let target = (last + cols < ctx.tree.sibling_count(&ctx.cursor)).then(|| {
                let mut t = ctx.cursor.clone();
                *t.last_mut().unwrap() += cols;
                t
            });
            Some(next.try_move(KeyAction::DownArrow, target))
        }
        (D2State::D, true) => Some(match next.history.pop() {
            Some(rec) => {
                next.cursor = rec.from;
                rec.key.inverse()
            }
            None => KeyAction::UndoUnavailable,
        }),
        (D2State::D, false) => {
            let target = (ctx.cursor.len() > 1).then(|| ctx.cursor[..ctx.cursor.len() - 1].to_vec());
            Some(next.try_move(KeyAction::LevelUp, target))
        }
    };
    let actions = match action {
        Some(a) => {
            next.state = D2State::A;
            vec![a]
        }
        None => Vec::new(),
    };
    Ok((next, actions))
}
