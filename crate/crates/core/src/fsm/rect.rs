use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned pixel rectangle; `(x, y)` is the top-left corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rect {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
}

impl Rect {
    pub const fn new(x: u32, y: u32, w: u32, h: u32) -> Self {
        Self { x, y, w, h }
    }

    pub fn screen(w: u32, h: u32) -> Self {
        Self::new(0, 0, w, h)
    }

    pub fn area(&self) -> u64 {
        u64::from(self.w) * u64::from(self.h)
    }

    pub fn right(&self) -> u32 {
        self.x + self.w
    }

    pub fn bottom(&self) -> u32 {
        self.y + self.h
    }

    /// Whether `other` lies entirely inside `self`.
    pub fn contains(&self, other: &Rect) -> bool {
        other.x >= self.x && other.y >= self.y && other.right() <= self.right() && other.bottom() <= self.bottom()
    }

    pub fn contains_point(&self, px: u32, py: u32) -> bool {
        px >= self.x && py >= self.y && px < self.right() && py < self.bottom()
    }

    /// Pixel at the centre, rounded toward the top-left.
    pub fn center(&self) -> (u32, u32) {
        (self.x + (self.w - 1) / 2, self.y + (self.h - 1) / 2)
    }

    pub fn is_split_vertical(&self) -> bool {
        self.w >= self.h
    }
}

/// Halves `r` across its longer side (width wins ties). The first half is
/// the left or top one and takes the odd pixel.
pub fn split_rect(r: &Rect) -> Result<(Rect, Rect)> {
    if r.w < 2 && r.h < 2 {
        return Err(Error::CannotSplit);
    }
    if r.is_split_vertical() {
        let first = r.w.div_ceil(2);
        Ok((
            Rect::new(r.x, r.y, first, r.h),
            Rect::new(r.x + first, r.y, r.w - first, r.h),
        ))
    } else {
        let first = r.h.div_ceil(2);
        Ok((
            Rect::new(r.x, r.y, r.w, first),
            Rect::new(r.x, r.y + first, r.w, r.h - first),
        ))
    }
}
