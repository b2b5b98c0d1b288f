//! A minimal-time synchronizer for squares with at most one hole: every node
//! fires at exactly `2w`.
//!
//! Every cell runs the same finite rule on its own state and the states of
//! its four neighbors (holes and positions outside the square are borders).
//! The rule is the composition of four layers:
//!
//! * **A₀ — diagonal and lines.** Signal `A` walks the diagonal, reaching
//!   `(i, i)` at time `2i`. At `(i, i)` it emits `E1` east and `N1` north.
//!   `E1` at `(i+1, i)` passes north into `(i+1, i+1)` unless that cell is a
//!   hole; then it detours `E2` east and `Z` north twice, reaching
//!   `(i+2, i+2)` at `2i + 4` (and `N1` mirrors this). The arrival of `E1`
//!   starts a line synchronizer on row `i` from `(i+1, i)` eastwards up to
//!   the first hole or the border, treating its west side as a border;
//!   `N1` does the same for column `i`. A row without a hole therefore fires
//!   at `2i + 1 + 2(w − i) − 2 = 2w − 1`, a row cut by the hole fires
//!   earlier, and a row whose origin is the hole never starts.
//! * **Sweep.** `J` runs east along row 0, turns north at `(w, 0)` as `K`,
//!   and every `K` cell (except the corner) releases `L` westwards; `L`
//!   reaches `(i, j)` (`i > j`) at `2w − (i − j)` unless the hole blocks it.
//!   `M`/`N`/`O` mirror this along column 0, row `w`, and southwards.
//! * **A₁ — filter.** A line firing at time `t` counts only if the cell has
//!   received `L` or `O` by `t`; early firings of cut rows never qualify.
//! * **A₂ — closure.** A node fires at `t + 1` if it or a neighbor passed the
//!   A₁ filter at `t`.
//! * **A₃ — corner patch.** A node with boundary condition `(0, 0, 1, 1)`
//!   fires when `A` arrives there (needed when `(w−1, w−1)` is the hole).

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{BoundaryCondition, Configuration, Position};
use crate::sim::line::{delta, LineCell};
use crate::sim::FiringTranscript;

/// State of one cell of the square synchronizer.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Sh1Cell {
    /// Diagonal signal present now.
    pub a: bool,
    /// `E1` present now; the flag records whether its north side is blocked.
    pub e1: Option<bool>,
    /// `N1` present now; the flag records whether its east side is blocked.
    pub n1: Option<bool>,
    pub e2: bool,
    pub n2: bool,
    /// Detour signal heading north (after `E2`).
    pub z_north: bool,
    /// Detour signal heading east (after `N2`).
    pub z_east: bool,
    pub row: LineCell,
    pub col: LineCell,
    pub row_origin: bool,
    pub col_origin: bool,
    pub j: bool,
    pub k: bool,
    pub l: bool,
    pub m: bool,
    pub n: bool,
    pub o: bool,
    /// `L` or `O` received at some time so far.
    pub swept: bool,
    /// Passed the A₁ filter at this step.
    pub a1: bool,
    /// In the final firing state.
    pub fired: bool,
}

impl Sh1Cell {
    pub fn is_quiescent(&self) -> bool {
        *self == Sh1Cell::default()
    }

    /// State of the general at time 0.
    pub fn general() -> Sh1Cell {
        Sh1Cell { a: true, j: true, m: true, ..Sh1Cell::default() }
    }
}

/// Neighbor states in (east, north, west, south) order; `None` = border.
pub type Neighborhood<'a> = [Option<&'a Sh1Cell>; 4];

/// The local rule. `nb` holds the east, north, west and south neighbors.
pub fn sh1_delta(c: &Sh1Cell, nb: Neighborhood<'_>) -> Sh1Cell {
    let [east, north, west, south] = nb;
    let bc = BoundaryCondition([east.is_some(), north.is_some(), west.is_some(), south.is_some()]);
    let mut s = Sh1Cell {
        swept: c.swept,
        fired: c.fired,
        row_origin: c.row_origin,
        col_origin: c.col_origin,
        ..Sh1Cell::default()
    };

    // A₀: diagonal signal and its detours.
    s.a = south.is_some_and(|x| x.e1 == Some(false) || x.z_north)
        || west.is_some_and(|x| x.n1 == Some(false) || x.z_east);
    s.e1 = west.is_some_and(|x| x.a).then_some(north.is_none());
    s.n1 = south.is_some_and(|x| x.a).then_some(east.is_none());
    s.e2 = west.is_some_and(|x| x.e1 == Some(true));
    s.n2 = south.is_some_and(|x| x.n1 == Some(true));
    s.z_north = south.is_some_and(|x| x.e2);
    s.z_east = west.is_some_and(|x| x.n2);

    // A₀: embedded line synchronizers.
    let line_start = |right: Option<&Sh1Cell>| {
        if right.is_none() {
            LineCell::firing()
        } else {
            LineCell::initial_general()
        }
    };
    if s.e1.is_some() && !c.row_origin {
        s.row_origin = true;
        s.row = line_start(east);
    } else {
        let left = if c.row_origin { None } else { west.map(|x| &x.row) };
        s.row = delta(left, &c.row, east.map(|x| &x.row));
    }
    if s.n1.is_some() && !c.col_origin {
        s.col_origin = true;
        s.col = line_start(north);
    } else {
        let left = if c.col_origin { None } else { south.map(|x| &x.col) };
        s.col = delta(left, &c.col, north.map(|x| &x.col));
    }
    let line_fired_now = (s.row.fire && !c.row.fire) || (s.col.fire && !c.col.fire);

    // Sweep signals.
    s.j = west.is_some_and(|x| x.j);
    s.k = (s.j && east.is_none()) || south.is_some_and(|x| x.k);
    s.l = (s.k && north.is_some()) || east.is_some_and(|x| x.l);
    s.m = south.is_some_and(|x| x.m);
    s.n = (s.m && north.is_none()) || west.is_some_and(|x| x.n);
    s.o = (s.n && east.is_some()) || north.is_some_and(|x| x.o);
    s.swept |= s.l || s.o;

    // A₁, A₂, A₃.
    s.a1 = line_fired_now && s.swept;
    let closure = c.a1 || nb.iter().any(|x| x.is_some_and(|x| x.a1));
    let corner = s.a && bc == BoundaryCondition::NORTH_EAST_CORNER;
    s.fired |= closure || corner;
    s
}

/// Per-layer observations of a run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Sh1Diagnostics {
    /// First time `A` was present, per diagonal node.
    #[serde(with = "crate::grid::pos_map")]
    pub a_times: BTreeMap<Position, u32>,
    /// Time each node's row or column line fired (A₀).
    #[serde(with = "crate::grid::pos_map")]
    pub line_fire: BTreeMap<Position, u32>,
    /// First arrival of `L` per node.
    #[serde(with = "crate::grid::pos_map")]
    pub l_arrivals: BTreeMap<Position, u32>,
    /// First arrival of `O` per node.
    #[serde(with = "crate::grid::pos_map")]
    pub o_arrivals: BTreeMap<Position, u32>,
    /// Nodes passing the A₁ filter, with the time.
    #[serde(with = "crate::grid::pos_map")]
    pub a1: BTreeMap<Position, u32>,
    /// Nodes fired by the A₂ closure, with the time.
    #[serde(with = "crate::grid::pos_map")]
    pub a2: BTreeMap<Position, u32>,
    /// Nodes fired by the A₃ corner patch.
    pub corner_patch: BTreeSet<Position>,
}

/// Transcript plus layer diagnostics.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sh1Run {
    pub transcript: FiringTranscript,
    pub diagnostics: Sh1Diagnostics,
}

/// A running square simulation.
#[derive(Clone, Debug)]
pub struct Sh1Sim<'c> {
    config: &'c Configuration,
    cells: Vec<Sh1Cell>,
    time: u32,
}

impl<'c> Sh1Sim<'c> {
    pub fn new(config: &'c Configuration) -> Sh1Sim<'c> {
        let n = config.side() * config.side();
        let mut cells = vec![Sh1Cell::default(); n];
        cells[0] = Sh1Cell::general();
        Sh1Sim { config, cells, time: 0 }
    }

    pub fn time(&self) -> u32 {
        self.time
    }

    pub fn cell(&self, p: Position) -> Option<&Sh1Cell> {
        self.config.is_node(p).then(|| &self.cells[self.config.index(p)])
    }

    /// Advances one synchronous step, asserting that quiescent
    /// neighborhoods stay quiescent.
    pub fn step(&mut self) {
        let c = self.config;
        let mut next = self.cells.clone();
        for v in c.nodes() {
            let nb = v.neighbors().map(|q| self.cell(q));
            let cur = &self.cells[c.index(v)];
            let new = sh1_delta(cur, nb);
            let calm = cur.is_quiescent() && nb.iter().all(|x| x.is_none_or(Sh1Cell::is_quiescent));
            assert!(!calm || new.is_quiescent(), "quiescence violated at {v}");
            next[c.index(v)] = new;
        }
        self.cells = next;
        self.time += 1;
    }

    /// ASCII view, north row first: `#` hole, `F` fired, `A` diagonal
    /// signal, `G` line general, `L`/`O` sweep, `+` other activity, `.` calm.
    pub fn render(&self) -> String {
        let c = self.config;
        let mut out = String::new();
        for y in (0..=c.size()).rev() {
            for x in 0..=c.size() {
                let p = Position::new(x, y);
                let ch = match self.cell(p) {
                    None => '#',
                    Some(s) if s.fired => 'F',
                    Some(s) if s.a => 'A',
                    Some(s) if s.row.general || s.col.general => 'G',
                    Some(s) if s.l || s.o => 'L',
                    Some(s) if !s.is_quiescent() => '+',
                    Some(_) => '.',
                };
                out.push(ch);
            }
            out.push('\n');
        }
        out
    }
}

/// Runs the square synchronizer on a configuration with at most one hole
/// until time `2w + 2`, recording the transcript and diagnostics.
pub fn run_sh1(c: &Configuration) -> Result<Sh1Run> {
    run_sh1_with(c, |_| {})
}

/// As [`run_sh1`], calling `observe` after every step (and at time 0).
pub fn run_sh1_with(c: &Configuration, mut observe: impl FnMut(&Sh1Sim<'_>)) -> Result<Sh1Run> {
    if c.k() > 1 {
        return Err(Error::WrongHoleCount { expected: "0 or 1", found: c.k() });
    }
    if c.size() < 2 {
        return Err(Error::SizeTooSmall(c.size(), 2));
    }
    let horizon = 2 * c.size() as u32 + 2;
    let mut sim = Sh1Sim::new(c);
    let mut transcript = FiringTranscript::silent(c, horizon);
    let mut diag = Sh1Diagnostics::default();
    let mut record = |sim: &Sh1Sim<'_>, prev: Option<&Vec<Sh1Cell>>| {
        let t = sim.time;
        for v in c.nodes() {
            let s = &sim.cells[c.index(v)];
            let before = prev.map(|p| p[c.index(v)]).unwrap_or_default();
            if s.a {
                diag.a_times.entry(v).or_insert(t);
            }
            if (s.row.fire && !before.row.fire) || (s.col.fire && !before.col.fire) {
                diag.line_fire.entry(v).or_insert(t);
            }
            if s.l {
                diag.l_arrivals.entry(v).or_insert(t);
            }
            if s.o {
                diag.o_arrivals.entry(v).or_insert(t);
            }
            if s.a1 {
                diag.a1.entry(v).or_insert(t);
            }
            if s.fired && !before.fired {
                transcript.fire_time.insert(v, Some(t));
                let by_closure =
                    before.a1 || v.neighbors().iter().any(|&q| prev.is_some_and(|p| c.is_node(q) && p[c.index(q)].a1));
                if by_closure {
                    diag.a2.insert(v, t);
                }
                if s.a && c.boundary_condition_unchecked(v) == BoundaryCondition::NORTH_EAST_CORNER {
                    diag.corner_patch.insert(v);
                }
            }
        }
    };
    record(&sim, None);
    observe(&sim);
    while sim.time < horizon {
        let prev = sim.cells.clone();
        sim.step();
        record(&sim, Some(&prev));
        observe(&sim);
    }
    Ok(Sh1Run { transcript, diagnostics: diag })
}
