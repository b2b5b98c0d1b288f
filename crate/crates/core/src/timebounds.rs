//! Firing-time lower bounds.
//!
//! `T(v, C)` is the length of the shortest route from the general to `v`
//! through one of the far corners `(0, w)` or `(w, 0)`; no solution fires
//! before `max_v T(v, C)`. The module also evaluates the closed-form barrier
//! expression for `T`, the critical-hole predicates for two holes, the
//! `≡'_{t,v}` relation, and searches for chains of pattern-preserving hole
//! moves that carry a configuration to one with a critical pair.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::barriers::{barrier_containing, maximal_barriers};
use crate::error::{Error, Result};
use crate::grid::{validate, Configuration, DistanceMap, HalfPlane, Position, V_GEN};
use crate::shapes::{d0_d1, e_from, BarrierShape};

/// Distances from the general and from the two far corners.
#[derive(Clone, Debug)]
pub struct CornerDistances {
    pub from_gen: DistanceMap,
    pub from_nw: DistanceMap,
    pub from_se: DistanceMap,
}

impl CornerDistances {
    pub fn new(c: &Configuration) -> Self {
        let w = c.size();
        CornerDistances {
            from_gen: c.distances_from(V_GEN),
            from_nw: c.distances_from(Position::new(0, w)),
            from_se: c.distances_from(Position::new(w, 0)),
        }
    }

    /// `T(v, C)`; `None` if `v` is not a node.
    pub fn t(&self, c: &Configuration, v: Position) -> Option<u32> {
        let w = c.size();
        let via_nw = self.from_gen.get(Position::new(0, w))? + self.from_nw.get(v)?;
        let via_se = self.from_gen.get(Position::new(w, 0))? + self.from_se.get(v)?;
        Some(via_nw.min(via_se))
    }
}

/// `T(v, C) = min(d(v_gen, (0,w)) + d((0,w), v), d(v_gen, (w,0)) + d((w,0), v))`.
pub fn t_of(c: &Configuration, v: Position) -> Result<u32> {
    c.require_node(v)?;
    Ok(CornerDistances::new(c).t(c, v).expect("nodes are reachable"))
}

/// `T(v, C)` for every position, row-major; `None` at holes.
pub fn t_table(c: &Configuration) -> Vec<Option<u32>> {
    let cd = CornerDistances::new(c);
    (0..c.side() * c.side()).map(|i| cd.t(c, c.position(i))).collect()
}

/// `max_v T(v, C)`, a lower bound on the minimum firing time.
pub fn max_t(c: &Configuration) -> u32 {
    t_table(c).into_iter().flatten().max().unwrap_or(0)
}

/// Evaluates `2w + min(δ − H − 1 + d0, −δ − W − 1 + d1)` for a node inside
/// a maximal barrier `R` with south-west corner `z`, where `δ = z.x − z.y`
/// and `d0`, `d1` are the distances from `z + (−1, H)` and `z + (W, −1)`
/// within the enlarged rectangle of `R`.
pub fn t_formula(c: &Configuration, v: Position) -> Result<i64> {
    c.require_node(v)?;
    let barriers = maximal_barriers(c);
    let r = barrier_containing(&barriers, v).ok_or(Error::NotInBarrier(v))?;
    let shape = BarrierShape::from_rect(c, &r).expect("maximal barriers of valid configurations are shapes");
    let z = r.southwest();
    let p = Position::new(v.x - z.x, v.y - z.y);
    let (d0, d1) = d0_d1(&shape, p)?;
    let delta = (z.x - z.y) as i64;
    Ok(2 * c.size() as i64 + e_from(shape.w(), shape.h(), d0, d1, delta))
}

/// Holes `(x, y)` with `|x − y| = 2`.
pub fn critical_holes(c: &Configuration) -> Vec<Position> {
    c.holes().iter().copied().filter(|&h| is_critical(h)).collect()
}

pub fn is_critical(h: Position) -> bool {
    (h.x - h.y).abs() == 2
}

/// Whether two critical holes sit at offset `(1, 1)` from each other.
pub fn has_critical_pair(c: &Configuration) -> bool {
    let crit = critical_holes(c);
    crit.iter().any(|&a| crit.contains(&a.offset(1, 1)))
}

/// Both sides of the critical-pair characterization for two holes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CriticalPairCheck {
    pub max_t: u32,
    pub max_t_is_2w_plus_1: bool,
    pub has_critical_pair: bool,
    /// `max_t ∈ {2w, 2w+1}` and the two sides agree.
    pub consistent: bool,
}

/// Evaluates `max_t(C) = 2w + 1` and `has_critical_pair(C)` for a
/// two-hole configuration.
pub fn critical_pair_theorem_check(c: &Configuration) -> Result<CriticalPairCheck> {
    require_two_holes(c)?;
    let m = max_t(c);
    let w2 = 2 * c.size() as u32;
    let lhs = m == w2 + 1;
    let rhs = has_critical_pair(c);
    Ok(CriticalPairCheck {
        max_t: m,
        max_t_is_2w_plus_1: lhs,
        has_critical_pair: rhs,
        consistent: (m == w2 || m == w2 + 1) && lhs == rhs,
    })
}

pub(crate) fn require_two_holes(c: &Configuration) -> Result<()> {
    if c.k() != 2 {
        return Err(Error::WrongHoleCount { expected: "2", found: c.k() });
    }
    Ok(())
}

/// The `≡'_{t,v}` relation: every node `u` of `C` with
/// `d_C(v_gen, u) + d_C(u, v) ≤ t` is a node of `C'` with the same boundary
/// condition, and symmetrically with the roles exchanged.
///
/// A node lies on some walk of length at most `t` from the general to `v`
/// exactly when its distance sum is at most `t`, so this node-set test is
/// equivalent to comparing all such paths.
pub fn equiv_prime(c: &Configuration, c2: &Configuration, t: u32, v: Position) -> Result<bool> {
    c.require_node(v)?;
    c2.require_node(v)?;
    Ok(one_sided(c, c2, t, v) && one_sided(c2, c, t, v))
}

fn one_sided(a: &Configuration, b: &Configuration, t: u32, v: Position) -> bool {
    let from_gen = a.distances_from(V_GEN);
    let from_v = a.distances_from(v);
    a.nodes().all(|u| {
        let (Some(x), Some(y)) = (from_gen.get(u), from_v.get(u)) else {
            return true;
        };
        x + y > t || (b.is_node(u) && a.boundary_condition_unchecked(u) == b.boundary_condition_unchecked(u))
    })
}

/// Whether `C` and `C'` carry the same pattern on the given half-plane set.
pub fn pattern_move_equiv(c: &Configuration, c2: &Configuration, hp: HalfPlane) -> Result<bool> {
    if c.size() != c2.size() {
        return Err(Error::SizeMismatch(c.size(), c2.size()));
    }
    let w = c.size();
    Ok(crate::grid::regions(w).half_plane(hp).iter().all(|&p| c.is_hole(p) == c2.is_hole(p)))
}

/// One hole relocation; both endpoints lie outside `half_plane`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CertStep {
    pub half_plane: HalfPlane,
    pub from: Position,
    pub to: Position,
}

/// A chain of pattern-preserving moves ending at a critical pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateChain {
    pub steps: Vec<CertStep>,
    #[serde(rename = "final")]
    pub final_config: Configuration,
}

/// Why a certificate search came back empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NotFound {
    /// Every reachable configuration was examined.
    Exhausted { explored: usize },
    /// The depth cap cut the search short.
    DepthCap { cap: usize, explored: usize },
}

/// Default depth cap for [`lower_bound_certificate`].
pub const CERT_DEPTH_CAP: usize = 64;

/// The half-plane set (if any) whose complement contains both `a` and `b`.
fn shared_exterior(w: i32, a: Position, b: Position) -> Option<HalfPlane> {
    HalfPlane::ALL
        .into_iter()
        .find(|&hp| !crate::grid::in_half_plane(w, hp, a) && !crate::grid::in_half_plane(w, hp, b))
}

/// Unordered two-hole state over interior positions.
type PairState = (Position, Position);

fn norm(a: Position, b: Position) -> PairState {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

fn interior(w: i32) -> Vec<Position> {
    (1..w).flat_map(|y| (1..w).map(move |x| Position::new(x, y))).collect()
}

/// The neighbors of a state in the move graph (validity not yet checked).
fn moves(w: i32, s: PairState, cells: &[Position]) -> Vec<(CertStep, PairState)> {
    let mut out = Vec::new();
    for (mover, stay) in [(s.0, s.1), (s.1, s.0)] {
        for &to in cells {
            if to == mover || to == stay {
                continue;
            }
            if let Some(hp) = shared_exterior(w, mover, to) {
                out.push((CertStep { half_plane: hp, from: mover, to }, norm(stay, to)));
            }
        }
    }
    out
}

fn pair_config(w: i32, s: PairState) -> Option<Configuration> {
    validate(w as i64, &[s.0, s.1]).ok()
}

fn pair_has_critical_pair(s: PairState) -> bool {
    is_critical(s.0) && is_critical(s.1) && (s.1 == s.0.offset(1, 1) || s.0 == s.1.offset(1, 1))
}

/// Breadth-first search for a shortest chain of pattern-preserving moves
/// from `c` to a configuration with a critical pair.
pub fn lower_bound_certificate(c: &Configuration) -> Result<std::result::Result<CertificateChain, NotFound>> {
    lower_bound_certificate_capped(c, CERT_DEPTH_CAP)
}

/// As [`lower_bound_certificate`] with an explicit depth cap.
pub fn lower_bound_certificate_capped(
    c: &Configuration,
    cap: usize,
) -> Result<std::result::Result<CertificateChain, NotFound>> {
    require_two_holes(c)?;
    let w = c.size();
    let start = norm(c.holes()[0], c.holes()[1]);
    let cells = interior(w);
    let mut parent: HashMap<PairState, Option<(PairState, CertStep)>> = HashMap::new();
    let mut valid: HashMap<PairState, bool> = HashMap::new();
    parent.insert(start, None);
    let mut frontier = VecDeque::from([(start, 0usize)]);
    let mut capped = false;
    while let Some((s, depth)) = frontier.pop_front() {
        if pair_has_critical_pair(s) {
            let mut steps = Vec::new();
            let mut cur = s;
            while let Some(Some((prev, step))) = parent.get(&cur) {
                steps.push(*step);
                cur = *prev;
            }
            steps.reverse();
            let final_config = pair_config(w, s).expect("visited states are valid");
            return Ok(Ok(CertificateChain { steps, final_config }));
        }
        if depth == cap {
            capped = true;
            continue;
        }
        for (step, next) in moves(w, s, &cells) {
            if parent.contains_key(&next) {
                continue;
            }
            let ok = *valid.entry(next).or_insert_with(|| pair_config(w, next).is_some());
            if ok {
                parent.insert(next, Some((s, step)));
                frontier.push_back((next, depth + 1));
            }
        }
    }
    let explored = parent.len();
    Ok(Err(if capped { NotFound::DepthCap { cap, explored } } else { NotFound::Exhausted { explored } }))
}

/// Precomputed shortest chains for every two-hole configuration of one size.
///
/// Moves are reversible (the reverse move has the same two endpoints), so
/// one multi-source breadth-first search from all critical-pair
/// configurations yields, for every state, its distance to the goal set and
/// the first move of a shortest chain.
#[derive(Clone, Debug)]
pub struct CertificateIndex {
    w: i32,
    next: HashMap<PairState, Option<(CertStep, PairState)>>,
}

impl CertificateIndex {
    pub fn build(w: i32) -> CertificateIndex {
        let cells = interior(w);
        let mut next: HashMap<PairState, Option<(CertStep, PairState)>> = HashMap::new();
        let mut queue = VecDeque::new();
        for (i, &a) in cells.iter().enumerate() {
            for &b in &cells[i + 1..] {
                let s = norm(a, b);
                if pair_has_critical_pair(s) && pair_config(w, s).is_some() {
                    next.insert(s, None);
                    queue.push_back(s);
                }
            }
        }
        let mut valid: HashMap<PairState, bool> = HashMap::new();
        while let Some(s) = queue.pop_front() {
            for (step, prev) in moves(w, s, &cells) {
                if next.contains_key(&prev) {
                    continue;
                }
                if *valid.entry(prev).or_insert_with(|| pair_config(w, prev).is_some()) {
                    // The reverse of `step` carries `prev` to `s`.
                    let back = CertStep { half_plane: step.half_plane, from: step.to, to: step.from };
                    next.insert(prev, Some((back, s)));
                    queue.push_back(prev);
                }
            }
        }
        CertificateIndex { w, next }
    }

    pub fn size(&self) -> i32 {
        self.w
    }

    /// A shortest chain for `c`, or `None` if no chain exists.
    pub fn chain(&self, c: &Configuration) -> Option<CertificateChain> {
        if c.size() != self.w || c.k() != 2 {
            return None;
        }
        let mut s = norm(c.holes()[0], c.holes()[1]);
        let mut steps = Vec::new();
        loop {
            match self.next.get(&s)? {
                None => break,
                Some((step, t)) => {
                    steps.push(*step);
                    s = *t;
                }
            }
        }
        Some(CertificateChain { steps, final_config: pair_config(self.w, s)? })
    }

    /// Number of states from which a chain exists.
    pub fn reachable_states(&self) -> usize {
        self.next.len()
    }
}

/// Replays a chain from `initial` and checks every step: the moved hole
/// exists, the target is a free interior position, both endpoints lie
/// outside the declared half-plane set (so its pattern is unchanged), each
/// intermediate configuration is valid, the last one equals `final` and
/// contains a critical pair. With `check_equiv`, every step must also
/// satisfy `≡'_{2w, v*}` at the half-plane's witness corner.
pub fn verify_certificate(
    initial: &Configuration,
    chain: &CertificateChain,
    check_equiv: bool,
) -> std::result::Result<(), String> {
    let w = initial.size();
    let mut cur = initial.clone();
    for (i, step) in chain.steps.iter().enumerate() {
        if !cur.is_hole(step.from) {
            return Err(format!("step {i}: {} is not a hole", step.from));
        }
        if cur.is_hole(step.to) {
            return Err(format!("step {i}: {} is already a hole", step.to));
        }
        for p in [step.from, step.to] {
            if crate::grid::in_half_plane(w, step.half_plane, p) {
                return Err(format!("step {i}: {p} lies in {}", step.half_plane));
            }
        }
        let holes: Vec<Position> = cur.holes().iter().map(|&h| if h == step.from { step.to } else { h }).collect();
        let next = validate(w as i64, &holes).map_err(|e| format!("step {i}: {e}"))?;
        if !pattern_move_equiv(&cur, &next, step.half_plane).map_err(|e| e.to_string())? {
            return Err(format!("step {i}: pattern on {} changed", step.half_plane));
        }
        if check_equiv {
            let v = step.half_plane.witness(w);
            if !equiv_prime(&cur, &next, 2 * w as u32, v).map_err(|e| e.to_string())? {
                return Err(format!("step {i}: not equivalent at {v} for t = 2w"));
            }
        }
        cur = next;
    }
    if cur != chain.final_config {
        return Err("replayed configuration differs from the declared final one".into());
    }
    if !has_critical_pair(&cur) {
        return Err("final configuration has no critical pair".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: i32, y: i32) -> Position {
        Position::new(x, y)
    }

    fn cfg(w: i64, holes: &[(i32, i32)]) -> Configuration {
        Configuration::new(w, holes).unwrap()
    }

    /// Oracle: T by explicit minimization over both corner routes using the
    /// generic distance query.
    fn oracle_t(c: &Configuration, v: Position) -> u32 {
        let w = c.size();
        let a = c.via_distance(V_GEN, p(0, w), v).unwrap();
        let b = c.via_distance(V_GEN, p(w, 0), v).unwrap();
        a.min(b)
    }

    #[test]
    fn t_of_examples() {
        let free = Configuration::hole_free(5);
        assert_eq!(t_of(&free, p(5, 5)).unwrap(), 10);
        assert_eq!(t_of(&free, p(0, 0)).unwrap(), 10);
        let c = cfg(12, &[(6, 4), (7, 5)]);
        assert_eq!(t_of(&c, p(6, 5)).unwrap(), 25);
        assert_eq!(t_of(&c, p(6, 4)), Err(Error::Grid(crate::grid::GridError::NotANode(p(6, 4)))));
    }

    #[test]
    fn max_t_examples() {
        assert_eq!(max_t(&Configuration::hole_free(7)), 14);
        assert_eq!(max_t(&cfg(12, &[(6, 4), (7, 5)])), 25);
        assert_eq!(max_t(&cfg(12, &[(3, 3), (8, 8)])), 24);
    }

    #[test]
    fn t_formula_examples() {
        let c = cfg(12, &[(6, 4), (7, 5)]);
        assert_eq!(t_formula(&c, p(6, 5)), Ok(25));
        assert_eq!(t_formula(&c, p(7, 4)), Ok(t_of(&c, p(7, 4)).unwrap() as i64));
        assert_eq!(t_formula(&c, p(0, 0)), Err(Error::NotInBarrier(p(0, 0))));
    }

    #[test]
    fn critical_examples() {
        let c = cfg(12, &[(6, 4), (7, 5)]);
        assert_eq!(critical_holes(&c).len(), 2);
        assert!(has_critical_pair(&c));
        assert!(has_critical_pair(&cfg(12, &[(4, 6), (5, 7)])));
        let c = cfg(12, &[(3, 3), (8, 8)]);
        assert!(critical_holes(&c).is_empty());
        assert!(!has_critical_pair(&c));
    }

    #[test]
    fn critical_pair_theorem_examples() {
        let r = critical_pair_theorem_check(&cfg(12, &[(6, 4), (7, 5)])).unwrap();
        assert!(r.max_t_is_2w_plus_1 && r.has_critical_pair && r.consistent);
        let r = critical_pair_theorem_check(&cfg(12, &[(3, 3), (8, 8)])).unwrap();
        assert!(!r.max_t_is_2w_plus_1 && !r.has_critical_pair && r.consistent);
        let r = critical_pair_theorem_check(&cfg(12, &[(5, 7), (9, 2)])).unwrap();
        assert!(!r.max_t_is_2w_plus_1 && !r.has_critical_pair && r.consistent);
        assert_eq!(
            critical_pair_theorem_check(&cfg(12, &[(5, 5)])).unwrap_err(),
            Error::WrongHoleCount { expected: "2", found: 1 }
        );
    }

    #[test]
    fn equiv_prime_examples() {
        let a = cfg(12, &[(10, 3), (3, 10)]);
        let b = cfg(12, &[(10, 3), (9, 11)]);
        assert!(equiv_prime(&a, &a, 30, p(4, 4)).unwrap());
        assert!(equiv_prime(&a, &b, 24, p(12, 0)).unwrap());
        let small = Configuration::hole_free(12);
        let big = Configuration::hole_free(13);
        assert!(max_t(&small) <= 24);
        for v in small.nodes() {
            assert!(!equiv_prime(&small, &big, 24, v).unwrap());
        }
    }

    #[test]
    fn pattern_move_examples() {
        let a = cfg(12, &[(10, 3), (3, 10)]);
        let b = cfg(12, &[(10, 3), (9, 11)]);
        for hp in HalfPlane::ALL {
            assert!(pattern_move_equiv(&a, &a, hp).unwrap());
        }
        assert!(pattern_move_equiv(&a, &b, HalfPlane::H2).unwrap());
        let c = cfg(12, &[(5, 7), (9, 2)]);
        let d = cfg(12, &[(6, 7), (9, 2)]);
        assert!(!pattern_move_equiv(&c, &d, HalfPlane::H1).unwrap());
        assert_eq!(
            pattern_move_equiv(&a, &cfg(13, &[(5, 5), (6, 6)]), HalfPlane::H0),
            Err(Error::SizeMismatch(12, 13))
        );
    }

    #[test]
    fn certificate_examples() {
        let c = cfg(12, &[(6, 4), (7, 5)]);
        let chain = lower_bound_certificate(&c).unwrap().unwrap();
        assert!(chain.steps.is_empty());
        assert!(verify_certificate(&c, &chain, true).is_ok());

        let c = cfg(12, &[(10, 3), (3, 10)]);
        let chain = lower_bound_certificate(&c).unwrap().unwrap();
        assert_eq!(chain.steps.len(), 2);
        assert_eq!(verify_certificate(&c, &chain, true), Ok(()));

        let c = cfg(12, &[(3, 3), (8, 8)]);
        assert!(matches!(lower_bound_certificate(&c).unwrap(), Err(NotFound::Exhausted { .. })));
        assert!(matches!(
            lower_bound_certificate_capped(&cfg(12, &[(10, 3), (3, 10)]), 1).unwrap(),
            Err(NotFound::DepthCap { cap: 1, .. })
        ));
    }

    #[test]
    fn the_documented_chain_verifies() {
        let c = cfg(12, &[(10, 3), (3, 10)]);
        let chain = CertificateChain {
            steps: vec![
                CertStep { half_plane: HalfPlane::H2, from: p(3, 10), to: p(9, 11) },
                CertStep { half_plane: HalfPlane::H1, from: p(10, 3), to: p(8, 10) },
            ],
            final_config: cfg(12, &[(9, 11), (8, 10)]),
        };
        assert_eq!(verify_certificate(&c, &chain, true), Ok(()));
        let mut bad = chain.clone();
        bad.steps[0].half_plane = HalfPlane::H0;
        assert!(verify_certificate(&c, &bad, false).is_err());
    }

    #[test]
    fn index_agrees_with_search() {
        let index = CertificateIndex::build(11);
        for holes in [[(9, 2), (2, 9)], [(3, 3), (8, 8)], [(4, 6), (5, 7)], [(10, 1), (1, 10)]] {
            let c = cfg(11, &holes);
            let direct = lower_bound_certificate(&c).unwrap();
            let indexed = index.chain(&c);
            assert_eq!(direct.as_ref().ok().map(|ch| ch.steps.len()), indexed.as_ref().map(|ch| ch.steps.len()));
            if let Some(ch) = indexed {
                assert_eq!(verify_certificate(&c, &ch, true), Ok(()));
            }
        }
    }

    fn arb_config() -> impl Strategy<Value = Configuration> {
        (4i32..=14).prop_flat_map(|w| {
            proptest::collection::btree_set((1..w, 1..w), 0..=4usize).prop_filter_map("valid", move |hs| {
                let holes: Vec<Position> = hs.into_iter().map(Position::from).collect();
                validate(w as i64, &holes).ok()
            })
        })
    }

    proptest! {
        #[test]
        fn t_matches_oracle_and_lower_bound(c in arb_config()) {
            let table = t_table(&c);
            for v in c.nodes() {
                prop_assert_eq!(table[c.index(v)], Some(oracle_t(&c, v)));
            }
            prop_assert!(max_t(&c) >= 2 * c.size() as u32);
        }

        #[test]
        fn formula_matches_t(c in arb_config()) {
            let barriers = maximal_barriers(&c);
            for v in c.nodes() {
                if barrier_containing(&barriers, v).is_some() {
                    prop_assert_eq!(t_formula(&c, v).unwrap(), t_of(&c, v).unwrap() as i64);
                }
            }
        }

        #[test]
        fn equiv_symmetric_and_monotone(a in arb_config(), b in arb_config(), t in 0u32..40) {
            prop_assume!(a.is_node(V_GEN) && b.is_node(V_GEN));
            let v = V_GEN;
            let ab = equiv_prime(&a, &b, t, v).unwrap();
            prop_assert_eq!(ab, equiv_prime(&b, &a, t, v).unwrap());
            if ab && t > 0 {
                prop_assert!(equiv_prime(&a, &b, t - 1, v).unwrap());
            }
        }
    }
}
