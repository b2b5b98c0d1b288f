//! The `c_k` engine: barrier shapes with at most `k` holes, the corner
//! distances `d0`/`d1` inside the enlarged rectangle, the excess function
//! `E(S, p, δ)`, its maximum `E_max` and the constant
//! `c_k = max E_max(S, p)` over all shapes and shape nodes.
//!
//! A shape is a `W × H` grid of holes in which every row and every column
//! holds a hole. Shapes are counted as raw grids (no symmetry quotient).

use std::collections::{HashMap, VecDeque};
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::barriers::Rect;
use crate::error::{Error, Result};
use crate::grid::{Configuration, Position};

/// Default largest `k` that the enumeration accepts without an override.
pub const DEFAULT_BUDGET_K: usize = 6;
/// Largest `k` the shape encoding supports (`W·H ≤ 64` cells).
pub const MAX_SUPPORTED_K: usize = 8;
/// Environment variable overriding the enumeration cap.
pub const BUDGET_ENV: &str = "FSSP_BUDGET_K";

/// The cap on `k` for shape enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_k: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_k: DEFAULT_BUDGET_K }
    }
}

impl Budget {
    /// The default cap, overridden by `FSSP_BUDGET_K` when it parses.
    pub fn from_env() -> Budget {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .map(|max_k| Budget { max_k })
            .unwrap_or_default()
    }

    /// A cap of at least `k` (used for the opt-in `k = 7` run).
    pub fn allowing(self, k: usize) -> Budget {
        Budget { max_k: self.max_k.max(k) }
    }

    pub fn check(&self, k: usize) -> Result<()> {
        if k == 0 || k > MAX_SUPPORTED_K {
            return Err(Error::KOutOfRange(k));
        }
        if k > self.max_k {
            return Err(Error::BudgetExceeded { k, cap: self.max_k });
        }
        Ok(())
    }
}

/// A barrier shape: `width × height` cells, hole `(x, y)` stored at bit
/// `y·width + x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BarrierShape {
    pub width: u8,
    pub height: u8,
    pub mask: u64,
}

impl BarrierShape {
    /// Builds a shape from hole positions; `None` if a hole is out of range,
    /// a row/column has no hole, or a cell is enclosed by holes.
    pub fn from_holes(width: usize, height: usize, holes: &[Position]) -> Option<BarrierShape> {
        if width == 0 || height == 0 || width * height > 64 {
            return None;
        }
        let mut mask = 0u64;
        for h in holes {
            if h.x < 0 || h.y < 0 || h.x as usize >= width || h.y as usize >= height {
                return None;
            }
            mask |= 1 << (h.y as usize * width + h.x as usize);
        }
        let s = BarrierShape { width: width as u8, height: height as u8, mask };
        (s.is_covering() && !s.has_enclosed_cell()).then_some(s)
    }

    /// The shape of `c` inside rectangle `r` (which must be a barrier).
    pub fn from_rect(c: &Configuration, r: &Rect) -> Option<BarrierShape> {
        let holes: Vec<Position> =
            r.positions().filter(|&p| c.is_hole(p)).map(|p| Position::new(p.x - r.x0, p.y - r.y0)).collect();
        BarrierShape::from_holes(r.width() as usize, r.height() as usize, &holes)
    }

    pub fn w(&self) -> i32 {
        self.width as i32
    }

    pub fn h(&self) -> i32 {
        self.height as i32
    }

    pub fn hole_count(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn in_shape(&self, p: Position) -> bool {
        p.x >= 0 && p.y >= 0 && p.x < self.w() && p.y < self.h()
    }

    pub fn is_hole(&self, p: Position) -> bool {
        self.in_shape(p) && self.mask >> (p.y * self.w() + p.x) & 1 == 1
    }

    /// Shape nodes: cells of the grid that are not holes, row-major.
    pub fn nodes(&self) -> impl Iterator<Item = Position> + '_ {
        (0..self.h())
            .flat_map(move |y| (0..self.w()).map(move |x| Position::new(x, y)))
            .filter(move |&p| !self.is_hole(p))
    }

    pub fn holes(&self) -> impl Iterator<Item = Position> + '_ {
        (0..self.h())
            .flat_map(move |y| (0..self.w()).map(move |x| Position::new(x, y)))
            .filter(move |&p| self.is_hole(p))
    }

    /// Whether some non-hole cell is cut off from the enlarged rectangle's
    /// frame. Such a cell could never be a node of a connected
    /// configuration, so the shape cannot occur as a barrier.
    pub fn has_enclosed_cell(&self) -> bool {
        let reach = self.enlarged_bfs(Position::new(-1, -1));
        self.nodes().any(|p| reach[self.enlarged_index(p)] == u32::MAX)
    }

    fn is_covering(&self) -> bool {
        let rows = (0..self.h()).all(|y| (0..self.w()).any(|x| self.is_hole(Position::new(x, y))));
        rows && (0..self.w()).all(|x| (0..self.h()).any(|y| self.is_hole(Position::new(x, y))))
    }

    /// Mirror image across the diagonal (swaps width and height).
    pub fn transpose(&self) -> BarrierShape {
        let holes: Vec<Position> = self.holes().map(|p| p.transpose()).collect();
        BarrierShape::from_holes(self.height as usize, self.width as usize, &holes)
            .expect("transposition preserves coverage")
    }

    /// Breadth-first distances inside the enlarged rectangle from the
    /// north-west corner `(-1, H)` and the south-east corner `(W, -1)`.
    /// Indexed by `(y + 1)·(W + 2) + (x + 1)`; `u32::MAX` marks unreachable.
    pub fn corner_distances(&self) -> (Vec<u32>, Vec<u32>) {
        (self.enlarged_bfs(Position::new(-1, self.h())), self.enlarged_bfs(Position::new(self.w(), -1)))
    }

    fn enlarged_index(&self, p: Position) -> usize {
        (p.y + 1) as usize * (self.w() + 2) as usize + (p.x + 1) as usize
    }

    fn enlarged_bfs(&self, source: Position) -> Vec<u32> {
        let (ew, eh) = (self.w() + 2, self.h() + 2);
        let mut dist = vec![u32::MAX; (ew * eh) as usize];
        dist[self.enlarged_index(source)] = 0;
        let mut queue = VecDeque::from([source]);
        while let Some(p) = queue.pop_front() {
            let d = dist[self.enlarged_index(p)];
            for q in p.neighbors() {
                let inside = q.x >= -1 && q.y >= -1 && q.x <= self.w() && q.y <= self.h();
                if inside && !self.is_hole(q) {
                    let qi = self.enlarged_index(q);
                    if dist[qi] == u32::MAX {
                        dist[qi] = d + 1;
                        queue.push_back(q);
                    }
                }
            }
        }
        dist
    }
}

/// `(d0, d1)` for a shape node `p`: distances within the enlarged rectangle
/// from `(-1, H)` and from `(W, -1)`.
pub fn d0_d1(s: &BarrierShape, p: Position) -> Result<(u32, u32)> {
    if !s.in_shape(p) || s.is_hole(p) {
        return Err(Error::PreconditionViolated(format!("{p} is not a node of the shape")));
    }
    let (a, b) = s.corner_distances();
    let i = s.enlarged_index(p);
    if a[i] == u32::MAX || b[i] == u32::MAX {
        return Err(Error::Unreachable(p));
    }
    Ok((a[i], b[i]))
}

/// `E(S, p, δ) = min(δ − H − 1 + d0, −δ − W − 1 + d1)`.
pub fn e_of(s: &BarrierShape, p: Position, delta: i64) -> Result<i64> {
    let (d0, d1) = d0_d1(s, p)?;
    Ok(e_from(s.w(), s.h(), d0, d1, delta))
}

/// The excess formula on raw parameters.
pub fn e_from(w: i32, h: i32, d0: u32, d1: u32, delta: i64) -> i64 {
    (delta - h as i64 - 1 + d0 as i64).min(-delta - w as i64 - 1 + d1 as i64)
}

/// Derived values of one `(S, p)` pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeEval {
    pub d0: u32,
    pub d1: u32,
    pub e_max: i64,
    pub delta_opt: i64,
    pub epsilon_opt: i64,
}

/// `E_max`, `δ_opt` and `ε_opt` from raw parameters.
pub fn eval_from(w: i32, h: i32, d0: u32, d1: u32, p: Position) -> ShapeEval {
    let (w, h, a, b) = (w as i64, h as i64, d0 as i64, d1 as i64);
    debug_assert_eq!((w + h + 2 - a - b).rem_euclid(2), 0, "checkerboard parity");
    let delta_opt = (-w + h - a + b).div_euclid(2);
    ShapeEval {
        d0,
        d1,
        e_max: (-w - h - 2 + a + b).div_euclid(2),
        delta_opt,
        epsilon_opt: delta_opt + p.x as i64 - p.y as i64,
    }
}

/// Evaluates one pair `(S, p)`.
pub fn evaluate(s: &BarrierShape, p: Position) -> Result<ShapeEval> {
    let (d0, d1) = d0_d1(s, p)?;
    Ok(eval_from(s.w(), s.h(), d0, d1, p))
}

/// One enumeration partition: a shape size and the hole mask of row 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Partition {
    pub width: u8,
    pub height: u8,
    pub first_row: u64,
}

/// All partitions of the shape space for `k`, in canonical order.
pub fn partitions(k: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    for width in 1..=k {
        for height in 1..=k {
            if width.max(height) > k || width * height > 64 {
                continue;
            }
            for first_row in 1..(1u64 << width) {
                let pc = first_row.count_ones() as usize;
                if pc <= k && (width - pc).max(height - 1) <= k - pc {
                    out.push(Partition { width: width as u8, height: height as u8, first_row });
                }
            }
        }
    }
    out
}

/// Visits every shape of one partition with at most `k` holes.
pub fn for_each_shape_in(k: usize, part: Partition, f: &mut dyn FnMut(BarrierShape)) {
    let w = part.width as usize;
    let full = (1u64 << w) - 1;
    let used = part.first_row.count_ones() as usize;
    #[allow(clippy::too_many_arguments)]
    fn rec(
        w: usize,
        h: usize,
        full: u64,
        y: usize,
        mask: u64,
        covered: u64,
        budget: usize,
        f: &mut dyn FnMut(BarrierShape),
    ) {
        if y == h {
            let s = BarrierShape { width: w as u8, height: h as u8, mask };
            if covered == full && !s.has_enclosed_cell() {
                f(s);
            }
            return;
        }
        for row in 1..=full {
            let pc = row.count_ones() as usize;
            if pc > budget {
                continue;
            }
            let left = budget - pc;
            let uncovered = (full & !(covered | row)).count_ones() as usize;
            if uncovered.max(h - y - 1) > left {
                continue;
            }
            rec(w, h, full, y + 1, mask | row << (y * w), covered | row, left, f);
        }
    }
    let h = part.height as usize;
    let uncovered = (full & !part.first_row).count_ones() as usize;
    if used > k || uncovered.max(h - 1) > k - used {
        return;
    }
    rec(w, h, full, 1, part.first_row, part.first_row, k - used, f);
}

/// Every shape with at most `k` holes, in canonical `(W, H, mask)` order.
pub fn enumerate_shapes(k: usize, budget: Budget) -> Result<Vec<BarrierShape>> {
    budget.check(k)?;
    let mut per: Vec<Vec<BarrierShape>> = partitions(k)
        .into_par_iter()
        .map(|part| {
            let mut v = Vec::new();
            for_each_shape_in(k, part, &mut |s| v.push(s));
            v
        })
        .collect();
    let mut all: Vec<BarrierShape> = per.drain(..).flatten().collect();
    all.sort();
    Ok(all)
}

/// The result of a `c_k` computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CkResult {
    pub k: usize,
    pub c_k: i64,
    pub shape_count: u64,
    pub pair_count: u64,
    pub argmax_pair_count: u64,
    /// Pairs attaining `c_k`, ordered by `(W, H, mask, p.x, p.y)`.
    pub argmax_pairs: Vec<(BarrierShape, Position)>,
}

#[derive(Default)]
struct Partial {
    shapes: u64,
    pairs: u64,
    best: Option<i64>,
    argmax: Vec<(BarrierShape, Position)>,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        self.shapes += other.shapes;
        self.pairs += other.pairs;
        match (self.best, other.best) {
            (_, None) => {}
            (None, Some(_)) => {
                self.best = other.best;
                self.argmax = other.argmax;
            }
            (Some(a), Some(b)) if b > a => {
                self.best = other.best;
                self.argmax = other.argmax;
            }
            (Some(a), Some(b)) if b == a => self.argmax.extend(other.argmax),
            _ => {}
        }
        self
    }
}

fn scan_partition(k: usize, part: Partition) -> Partial {
    let mut acc = Partial::default();
    for_each_shape_in(k, part, &mut |s| {
        acc.shapes += 1;
        let (a, b) = s.corner_distances();
        for p in s.nodes() {
            let i = s.enlarged_index(p);
            acc.pairs += 1;
            let e = eval_from(s.w(), s.h(), a[i], b[i], p).e_max;
            match acc.best {
                Some(best) if e < best => {}
                Some(best) if e == best => acc.argmax.push((s, p)),
                _ => {
                    acc.best = Some(e);
                    acc.argmax.clear();
                    acc.argmax.push((s, p));
                }
            }
        }
    });
    acc
}

/// Computes `c_k` with counts of shapes, pairs and maximizing pairs.
pub fn compute_ck(k: usize, budget: Budget) -> Result<CkResult> {
    if k < 2 {
        return Err(Error::KOutOfRange(k));
    }
    budget.check(k)?;
    let total =
        partitions(k).into_par_iter().map(|part| scan_partition(k, part)).reduce(Partial::default, Partial::merge);
    let mut argmax = total.argmax;
    argmax.sort_by_key(|(s, p)| (s.width, s.height, s.mask, p.x, p.y));
    Ok(CkResult {
        k,
        c_k: total.best.unwrap_or(0),
        shape_count: total.shapes,
        pair_count: total.pairs,
        argmax_pair_count: argmax.len() as u64,
        argmax_pairs: argmax,
    })
}

/// Memoized `c_k`.
pub fn c_k(k: usize, budget: Budget) -> Result<i64> {
    static CACHE: OnceLock<Mutex<HashMap<usize, i64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&v) = cache.lock().expect("cache lock").get(&k) {
        return Ok(v);
    }
    let v = compute_ck(k, budget)?.c_k;
    cache.lock().expect("cache lock").insert(k, v);
    Ok(v)
}

/// The analytic bounds `(k − 2, k² + 4k)` on `c_k`.
pub fn ck_bounds(k: usize) -> (i64, i64) {
    let k = k as i64;
    (k - 2, k * k + 4 * k)
}

/// `H_{k,w} = 2w + c_k` when `2w ≥ k² + 7k + 5`; `None` (unknown) below.
pub fn h_kw(k: usize, w: i32, budget: Budget) -> Result<Option<i64>> {
    if k < 2 {
        return Err(Error::KOutOfRange(k));
    }
    let threshold = (k * k + 7 * k + 5) as i64;
    if 2 * (w as i64) < threshold {
        return Ok(None);
    }
    Ok(Some(2 * w as i64 + c_k(k, budget)?))
}

/// One row of the published table of `c_k` values and counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PublishedRow {
    pub k: usize,
    pub c_k: i64,
    pub shapes: u64,
    pub pairs: u64,
    pub argmax_pairs: u64,
}

/// The published reference values for `k = 2..=9`.
pub const PUBLISHED_TABLE: [PublishedRow; 8] = [
    PublishedRow { k: 2, c_k: 1, shapes: 5, pairs: 4, argmax_pairs: 2 },
    PublishedRow { k: 3, c_k: 1, shapes: 29, pairs: 80, argmax_pairs: 34 },
    PublishedRow { k: 4, c_k: 2, shapes: 224, pairs: 1_324, argmax_pairs: 16 },
    PublishedRow { k: 5, c_k: 3, shapes: 2_220, pairs: 22_588, argmax_pairs: 24 },
    PublishedRow { k: 6, c_k: 4, shapes: 26_898, pairs: 416_782, argmax_pairs: 14 },
    PublishedRow { k: 7, c_k: 5, shapes: 384_344, pairs: 8_397_762, argmax_pairs: 20 },
    PublishedRow { k: 8, c_k: 6, shapes: 6_314_747, pairs: 184_619_252, argmax_pairs: 26 },
    PublishedRow { k: 9, c_k: 7, shapes: 117_140_060, pairs: 4_411_162_884, argmax_pairs: 32 },
];

/// The published row for `k`, if any.
pub fn published_row(k: usize) -> Option<PublishedRow> {
    PUBLISHED_TABLE.iter().copied().find(|r| r.k == k)
}
