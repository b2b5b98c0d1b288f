//! A minimal-time synchronizer for a line of `n` cells with the general at
//! the left end: every cell fires at exactly `2n − 2`.
//!
//! The rule is a recursive halving scheme driven by two kinds of moving
//! objects per direction:
//!
//! * a *fast* marker (speed 1), sent out by every new general;
//! * a *slow* marker family whose members advance only when pushed by a
//!   *pulse* of the family's color travelling the opposite way. A marker
//!   leaving a cell with odd parity drops a pulse behind it, so each family
//!   member moves at a third, a seventh, … of full speed, exactly as needed
//!   for the fast marker to meet it at the midpoint of the segment.
//!
//! When a fast marker meets a slow marker of the opposite direction (same
//! cell with equal parity, same cell with unequal parity, or a swap across a
//! cell boundary) one or two new generals appear at the midpoint, each
//! sending a fresh family into its half. A fast marker reaching the end of
//! the line also creates a general there. A general fires when it and all of
//! its neighbors are generals. Two colors suffice to keep adjacent families
//! apart; new families take the color opposite to the marker they met.
//!
//! The state of a cell is finite (a few flags, two colors, two parities); it
//! is kept structured rather than flattened into an enumerated alphabet.

use std::collections::HashMap;

/// Index of the rightward (`+1`) direction in per-direction arrays.
pub const RIGHT: usize = 0;
/// Index of the leftward (`−1`) direction in per-direction arrays.
pub const LEFT: usize = 1;

const fn opposite(d: usize) -> usize {
    1 - d
}

/// A marker travelling in one direction.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Marker {
    pub color: u8,
    pub parity: u8,
    pub fast: bool,
}

/// State of one line cell.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct LineCell {
    pub general: bool,
    pub fire: bool,
    /// Color of the family a general releases in each direction.
    pub src: [Option<u8>; 2],
    /// Markers moving in each direction.
    pub mk: [Option<Marker>; 2],
    /// Pulses (bit per color) pushing the family of each direction; they
    /// travel against that direction.
    pub pl: [u8; 2],
}

impl LineCell {
    /// The quiescent state.
    pub const QUIESCENT: LineCell =
        LineCell { general: false, fire: false, src: [None, None], mk: [None, None], pl: [0, 0] };

    /// The state of the general at the left end at time 0.
    pub fn initial_general() -> LineCell {
        LineCell {
            general: true,
            src: [Some(0), None],
            mk: [Some(Marker { color: 0, parity: 0, fast: true }), None],
            ..LineCell::QUIESCENT
        }
    }

    /// A general that is already firing (a line of length 1).
    pub fn firing() -> LineCell {
        LineCell { general: true, fire: true, ..LineCell::QUIESCENT }
    }

    pub fn is_quiescent(&self) -> bool {
        *self == LineCell::QUIESCENT
    }

    fn has_pulse(&self, d: usize, color: u8) -> bool {
        self.pl[d] >> color & 1 == 1
    }
}

/// Whether the marker of `x` in direction `d` advances this step.
fn advances(x: &LineCell, d: usize, ahead: Option<&LineCell>) -> bool {
    match x.mk[d] {
        None => false,
        Some(m) if m.fast => true,
        Some(m) => ahead.is_some_and(|a| a.has_pulse(d, m.color)),
    }
}

#[derive(Clone, Copy)]
struct Incoming {
    marker: Marker,
    arrived: bool,
}

/// The transition function. `left`/`right` are `None` beyond the ends of
/// the line (or at any other border).
///
/// # Panics
/// Panics if the neighborhood is one the construction never produces.
pub fn delta(left: Option<&LineCell>, c: &LineCell, right: Option<&LineCell>) -> LineCell {
    if c.fire {
        return *c;
    }
    let nb = |d: usize| if d == RIGHT { right } else { left };
    if c.general {
        let fire = [left, right].iter().all(|n| n.is_none_or(|n| n.general));
        return LineCell { general: true, fire, src: c.src, ..LineCell::QUIESCENT };
    }

    let mut inc: [Option<Incoming>; 2] = [None, None];
    for d in [RIGHT, LEFT] {
        let behind = nb(opposite(d));
        let ahead = nb(d);
        let mut m = None;
        if let Some(b) = behind {
            match b.mk[d] {
                Some(bm) if (bm.fast || c.has_pulse(d, bm.color)) && !(b.general && !bm.fast) => {
                    m = Some(Incoming {
                        marker: Marker { color: bm.color, parity: bm.parity ^ 1, fast: bm.fast },
                        arrived: true,
                    });
                }
                None if b.general => {
                    if let Some(col) = b.src[d] {
                        if c.has_pulse(d, col) {
                            m = Some(Incoming { marker: Marker { color: col, parity: 1, fast: false }, arrived: true });
                        }
                    }
                }
                _ => {}
            }
        }
        if let Some(cm) = c.mk[d] {
            if !advances(c, d, ahead) {
                assert!(m.is_none(), "two markers of one direction collide");
                m = Some(Incoming { marker: cm, arrived: false });
            }
        }
        inc[d] = m;
    }

    let mut pulses = [0u8; 2];
    for d in [RIGHT, LEFT] {
        let ahead = nb(d);
        let cm = c.mk[d];
        if let Some(a) = ahead {
            for col in 0..2u8 {
                if a.has_pulse(d, col) {
                    let pushes_mine = cm.is_some_and(|m| m.color == col && !m.fast);
                    if !pushes_mine {
                        pulses[d] |= 1 << col;
                    }
                }
            }
        }
        if let Some(m) = cm {
            if advances(c, d, ahead) && m.parity == 1 {
                pulses[d] |= 1 << m.color;
            }
        }
    }

    // New generals: (directions to emit into, color of the met marker).
    let mut birth: Option<(Vec<usize>, u8)> = None;
    if let (Some(r), Some(l)) = (inc[RIGHT], inc[LEFT]) {
        assert!(!(r.marker.fast && l.marker.fast), "two fast markers meet");
        assert!(r.marker.fast || l.marker.fast, "two slow markers meet");
        let (fast, slow, slow_dir) = if r.marker.fast { (r, l, LEFT) } else { (l, r, RIGHT) };
        if fast.marker.parity == slow.marker.parity {
            birth = Some((vec![RIGHT, LEFT], slow.marker.color));
        } else {
            assert!(!slow.arrived, "odd meeting with a marker that just arrived");
            birth = Some((vec![opposite(slow_dir)], slow.marker.color));
        }
    }
    for d in [RIGHT, LEFT] {
        let Some(a) = nb(d) else { continue };
        let (Some(cm), Some(am)) = (c.mk[d], a.mk[opposite(d)]) else { continue };
        if advances(c, d, Some(a)) && advances(a, opposite(d), Some(c)) {
            assert!(!(cm.fast && am.fast), "two fast markers swap");
            assert!(cm.fast || am.fast, "two slow markers swap");
            assert!(birth.is_none(), "simultaneous meetings");
            let color = if cm.fast { am.color } else { cm.color };
            birth = Some((vec![opposite(d)], color));
        }
    }
    for e in [RIGHT, LEFT] {
        let Some(cm) = c.mk[e] else { continue };
        if !cm.fast {
            continue;
        }
        let Some(n) = nb(e) else { continue };
        let Some(nm) = n.mk[opposite(e)] else { continue };
        if nm.fast || n.general || c.has_pulse(opposite(e), nm.color) {
            continue;
        }
        if cm.parity ^ 1 != nm.parity {
            assert!(birth.is_none(), "simultaneous meetings");
            birth = Some((vec![opposite(e)], nm.color));
        }
    }
    for d in [RIGHT, LEFT] {
        if let Some(m) = inc[d] {
            if m.marker.fast && nb(d).is_none() && birth.is_none() {
                birth = Some((vec![opposite(d)], m.marker.color));
            }
        }
    }

    if let Some((dirs, color)) = birth {
        let mut g = LineCell { general: true, ..LineCell::QUIESCENT };
        for d in dirs {
            g.src[d] = Some(color ^ 1);
            g.mk[d] = Some(Marker { color: color ^ 1, parity: 0, fast: true });
        }
        return g;
    }
    LineCell { mk: [inc[RIGHT].map(|m| m.marker), inc[LEFT].map(|m| m.marker)], pl: pulses, ..LineCell::QUIESCENT }
}

/// One synchronous step of a whole line (borders at both ends).
pub fn step_line(cells: &[LineCell]) -> Vec<LineCell> {
    let n = cells.len();
    (0..n)
        .map(|i| {
            let left = if i > 0 { Some(&cells[i - 1]) } else { None };
            let right = cells.get(i + 1);
            let next = delta(left, &cells[i], right);
            let calm = cells[i].is_quiescent()
                && left.is_none_or(|c| c.is_quiescent())
                && right.is_none_or(|c| c.is_quiescent());
            assert!(!calm || next.is_quiescent(), "quiescence violated at cell {i}");
            next
        })
        .collect()
}

/// Outcome of a line run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineRun {
    pub n: usize,
    /// Common firing time, if every cell fired at the same step.
    pub fire_time: Option<u32>,
    /// Per-cell first firing time.
    pub cell_fire_times: Vec<Option<u32>>,
    /// Number of distinct cell states seen during the run.
    pub distinct_states: usize,
}

/// The initial line of `n` cells.
pub fn initial_line(n: usize) -> Vec<LineCell> {
    let mut cells = vec![LineCell::QUIESCENT; n];
    if n == 1 {
        cells[0] = LineCell::firing();
    } else if n > 1 {
        cells[0] = LineCell::initial_general();
    }
    cells
}

/// Simulates a line of `n ≥ 1` cells until every cell has fired (or a
/// generous horizon passes). A single cell is already firing at time 0.
pub fn run_line(n: usize) -> LineRun {
    assert!(n >= 1, "a line has at least one cell");
    let mut cells = initial_line(n);
    let mut fire: Vec<Option<u32>> = cells.iter().map(|c| c.fire.then_some(0)).collect();
    let mut seen: HashMap<LineCell, ()> = cells.iter().map(|&c| (c, ())).collect();
    let horizon = 3 * n as u32 + 8;
    let mut t = 0;
    while fire.iter().any(Option::is_none) && t < horizon {
        cells = step_line(&cells);
        t += 1;
        for (i, c) in cells.iter().enumerate() {
            if c.fire && fire[i].is_none() {
                fire[i] = Some(t);
            }
            seen.insert(*c, ());
        }
    }
    let first = fire[0];
    let common = fire.iter().all(|&f| f.is_some() && f == first);
    LineRun { n, fire_time: if common { first } else { None }, cell_fire_times: fire, distinct_states: seen.len() }
}

/// Firing time of the line synchronizer for `n` cells (`2n − 2`).
///
/// # Panics
/// Panics if the cells do not fire simultaneously, which the construction
/// rules out.
pub fn run_line_fssp(n: usize) -> u32 {
    run_line(n).fire_time.expect("all cells fire simultaneously")
}

/// Every `(left, center, right) → next` transition used while running all
/// lines of length `1..=n_max`. The rule is a function, so each triple maps
/// to exactly one successor; the table's size does not grow with `n_max`
/// once all configurations of the scheme have appeared.
pub fn observed_transitions(n_max: usize) -> HashMap<(Option<LineCell>, LineCell, Option<LineCell>), LineCell> {
    let mut table = HashMap::new();
    for n in 1..=n_max {
        let mut cells = initial_line(n);
        for _ in 0..2 * n {
            let next = step_line(&cells);
            for i in 0..n {
                let key = ((i > 0).then(|| cells[i - 1]), cells[i], cells.get(i + 1).copied());
                let prev = table.insert(key, next[i]);
                assert!(prev.is_none_or(|p| p == next[i]));
            }
            cells = next;
        }
    }
    table
}
