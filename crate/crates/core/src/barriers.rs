//! Barriers: rectangles in which every row and every column contains a hole.
//!
//! [`maximal_barriers`] implements the splitting algorithm: start from the
//! interior `[1..w-1]²`, repeatedly delete hole-free boundary columns/rows or
//! split on hole-free inner ones, and keep the rectangles that end up being
//! barriers. [`maximal_barriers_bruteforce`] is an independent oracle that
//! enumerates every rectangle.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::grid::{mh_distance, Configuration, GridError, Position};

/// An axis-aligned, nonempty rectangle `[x0..x1] × [y0..y1]` (inclusive).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rect {
    pub x0: i32,
    pub y0: i32,
    pub x1: i32,
    pub y1: i32,
}

impl Rect {
    /// Builds `[x0..x1] × [y0..y1]`; panics if empty.
    pub fn new(x0: i32, x1: i32, y0: i32, y1: i32) -> Rect {
        assert!(x0 <= x1 && y0 <= y1, "empty rectangle");
        Rect { x0, y0, x1, y1 }
    }

    /// Number of columns.
    pub fn width(&self) -> i32 {
        self.x1 - self.x0 + 1
    }

    /// Number of rows.
    pub fn height(&self) -> i32 {
        self.y1 - self.y0 + 1
    }

    pub fn area(&self) -> i64 {
        self.width() as i64 * self.height() as i64
    }

    /// South-west corner.
    pub fn southwest(&self) -> Position {
        Position::new(self.x0, self.y0)
    }

    pub fn contains(&self, p: Position) -> bool {
        (self.x0..=self.x1).contains(&p.x) && (self.y0..=self.y1).contains(&p.y)
    }

    pub fn contains_rect(&self, other: &Rect) -> bool {
        self.x0 <= other.x0 && other.x1 <= self.x1 && self.y0 <= other.y0 && other.y1 <= self.y1
    }

    /// The rectangle grown by one position on every side.
    pub fn enlarged(&self) -> Rect {
        Rect::new(self.x0 - 1, self.x1 + 1, self.y0 - 1, self.y1 + 1)
    }

    /// Whether the two rectangles share a position or contain positions that
    /// are 4- or diagonally adjacent.
    pub fn touches(&self, other: &Rect) -> bool {
        self.enlarged().intersects(other)
    }

    pub fn intersects(&self, other: &Rect) -> bool {
        self.x0 <= other.x1 && other.x0 <= self.x1 && self.y0 <= other.y1 && other.y0 <= self.y1
    }

    /// Positions in row-major order.
    pub fn positions(&self) -> impl Iterator<Item = Position> {
        let r = *self;
        (r.y0..=r.y1).flat_map(move |y| (r.x0..=r.x1).map(move |x| Position::new(x, y)))
    }

    /// `[x0, y0, x1, y1]`, the order used by the text and JSON outputs.
    pub fn as_array(&self) -> [i32; 4] {
        [self.x0, self.y0, self.x1, self.y1]
    }
}

impl fmt::Display for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}..{}]x[{}..{}]", self.x0, self.x1, self.y0, self.y1)
    }
}

/// True iff every column and every row of `r` contains a hole of `c`.
pub fn is_barrier(c: &Configuration, r: &Rect) -> bool {
    let cols = (r.x0..=r.x1).all(|x| (r.y0..=r.y1).any(|y| c.is_hole(Position::new(x, y))));
    cols && (r.y0..=r.y1).all(|y| (r.x0..=r.x1).any(|x| c.is_hole(Position::new(x, y))))
}

fn column_has_hole(c: &Configuration, r: &Rect, x: i32) -> bool {
    (r.y0..=r.y1).any(|y| c.is_hole(Position::new(x, y)))
}

fn row_has_hole(c: &Configuration, r: &Rect, y: i32) -> bool {
    (r.x0..=r.x1).any(|x| c.is_hole(Position::new(x, y)))
}

/// The maximal barriers of `c` by the splitting algorithm, ordered by
/// `(x0, y0, x1, y1)`.
///
/// When a rectangle has several hole-free lines the lowest-index column is
/// handled first, then the lowest-index row; the final set does not depend on
/// this choice.
pub fn maximal_barriers(c: &Configuration) -> Vec<Rect> {
    let w = c.size();
    let mut out = Vec::new();
    if w < 2 || c.k() == 0 {
        return out;
    }
    let mut work = VecDeque::from([Rect::new(1, w - 1, 1, w - 1)]);
    while let Some(r) = work.pop_front() {
        if let Some(x) = (r.x0..=r.x1).find(|&x| !column_has_hole(c, &r, x)) {
            if x > r.x0 {
                work.push_back(Rect::new(r.x0, x - 1, r.y0, r.y1));
            }
            if x < r.x1 {
                work.push_back(Rect::new(x + 1, r.x1, r.y0, r.y1));
            }
        } else if let Some(y) = (r.y0..=r.y1).find(|&y| !row_has_hole(c, &r, y)) {
            if y > r.y0 {
                work.push_back(Rect::new(r.x0, r.x1, r.y0, y - 1));
            }
            if y < r.y1 {
                work.push_back(Rect::new(r.x0, r.x1, y + 1, r.y1));
            }
        } else {
            out.push(r);
        }
    }
    out.sort();
    out
}

/// Oracle: every rectangle is tested, then the inclusion-maximal barriers are
/// kept. Intended for small inputs (`w <= 25`, `k <= 12`).
pub fn maximal_barriers_bruteforce(c: &Configuration) -> Vec<Rect> {
    let w = c.size();
    let side = c.side();
    // prefix[y][x]: number of holes in [0..x) × [0..y).
    let mut prefix = vec![vec![0u32; side + 1]; side + 1];
    for y in 0..side {
        for x in 0..side {
            let h = c.is_hole(Position::new(x as i32, y as i32)) as u32;
            prefix[y + 1][x + 1] = prefix[y][x + 1] + prefix[y + 1][x] - prefix[y][x] + h;
        }
    }
    let count = |x0: i32, x1: i32, y0: i32, y1: i32| -> u32 {
        let (x0, x1, y0, y1) = (x0 as usize, x1 as usize + 1, y0 as usize, y1 as usize + 1);
        prefix[y1][x1] + prefix[y0][x0] - prefix[y0][x1] - prefix[y1][x0]
    };
    let mut barriers = Vec::new();
    for x0 in 0..=w {
        for x1 in x0..=w {
            for y0 in 0..=w {
                for y1 in y0..=w {
                    let cols_ok = (x0..=x1).all(|x| count(x, x, y0, y1) > 0);
                    if cols_ok && (y0..=y1).all(|y| count(x0, x1, y, y) > 0) {
                        barriers.push(Rect::new(x0, x1, y0, y1));
                    }
                }
            }
        }
    }
    barriers.sort_by_key(|r| std::cmp::Reverse(r.area()));
    let mut maximal: Vec<Rect> = Vec::new();
    for r in barriers {
        if !maximal.iter().any(|m| m.contains_rect(&r)) {
            maximal.push(r);
        }
    }
    maximal.sort();
    maximal
}

/// The maximal barrier containing `v`, if any.
pub fn barrier_containing(barriers: &[Rect], v: Position) -> Option<Rect> {
    barriers.iter().copied().find(|r| r.contains(v))
}

/// True iff the shortest path from `corner` to `v` has Manhattan length.
pub fn corner_mh_access(c: &Configuration, corner: Position, v: Position) -> Result<bool, GridError> {
    Ok(c.bfs_distance(corner, v)? == mh_distance(corner, v))
}

/// The four corners of the square.
pub fn corners(w: i32) -> [Position; 4] {
    [Position::new(0, 0), Position::new(0, w), Position::new(w, 0), Position::new(w, w)]
}
