//! Core geometry: positions, validated configurations, shortest-path
//! distances, boundary conditions, patterns and the named region families.
//!
//! Coordinates follow one convention throughout the crate: the general sits
//! at `(0, 0)` in the south-west corner, `x` grows to the east and `y` grows
//! to the north. A configuration of size `w` occupies the square
//! `S_w = [0, w] × [0, w]`; holes are removed positions strictly inside it.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A grid position. Positions outside any particular square are legal values.
///
/// Serialized as the pair `[x, y]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(i32, i32)", into = "(i32, i32)")]
pub struct Position {
    pub x: i32,
    pub y: i32,
}

impl Position {
    pub const fn new(x: i32, y: i32) -> Self {
        Position { x, y }
    }

    /// Component-wise translation.
    pub const fn offset(self, dx: i32, dy: i32) -> Self {
        Position { x: self.x + dx, y: self.y + dy }
    }

    /// Mirror image across the main diagonal.
    pub const fn transpose(self) -> Self {
        Position { x: self.y, y: self.x }
    }

    /// The four 4-adjacent positions in (east, north, west, south) order.
    pub const fn neighbors(self) -> [Position; 4] {
        [self.offset(1, 0), self.offset(0, 1), self.offset(-1, 0), self.offset(0, -1)]
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl From<(i32, i32)> for Position {
    fn from((x, y): (i32, i32)) -> Self {
        Position { x, y }
    }
}

impl From<Position> for (i32, i32) {
    fn from(p: Position) -> Self {
        (p.x, p.y)
    }
}

/// The general's position.
pub const V_GEN: Position = Position::new(0, 0);

/// Manhattan distance `|a.x - b.x| + |a.y - b.y|`.
pub fn mh_distance(a: Position, b: Position) -> u32 {
    a.x.abs_diff(b.x) + a.y.abs_diff(b.y)
}

/// Reasons a candidate configuration is rejected.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("size must be at least 1 (got {0})")]
    InvalidSize(i64),
    #[error("hole {hole} is not strictly inside the square of size {w}")]
    BoundaryHole { w: i32, hole: Position },
    #[error("{k} holes do not fit in the (w-1)^2 = {capacity} interior positions")]
    TooManyHoles { k: usize, capacity: usize },
    #[error("node {witness} is not reachable from the general")]
    Disconnected { witness: Position },
}

/// Errors raised by geometric queries on a valid configuration.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("{0} is not a node of the configuration")]
    NotANode(Position),
    #[error("{0} lies outside the square")]
    OutOfSquare(Position),
}

/// A validated configuration: the square `S_w` minus a set of holes.
///
/// Invariants (checked by [`validate`]): every hole is strictly inside the
/// square, `(w-1)^2 >= k`, and the nodes form one 4-connected component.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    w: i32,
    holes: Vec<Position>,
    hole_mask: Vec<bool>,
}

/// Validates a size and hole set, returning the configuration or the first
/// violated invariant together with a witness.
pub fn validate(size: i64, holes: &[Position]) -> Result<Configuration, ConfigError> {
    if size < 1 || size > i32::MAX as i64 / 4 {
        return Err(ConfigError::InvalidSize(size));
    }
    let w = size as i32;
    let set: BTreeSet<Position> = holes.iter().copied().collect();
    let capacity = ((w - 1) as usize).pow(2);
    if set.len() > capacity {
        return Err(ConfigError::TooManyHoles { k: set.len(), capacity });
    }
    if let Some(&hole) = set.iter().find(|h| h.x < 1 || h.x > w - 1 || h.y < 1 || h.y > w - 1) {
        return Err(ConfigError::BoundaryHole { w, hole });
    }
    let config = Configuration::from_parts(w, set.into_iter().collect());
    let dist = config.distances_from(V_GEN);
    if let Some(witness) = config.nodes().find(|&p| dist.get(p).is_none()) {
        return Err(ConfigError::Disconnected { witness });
    }
    Ok(config)
}

impl Configuration {
    /// Builds a configuration without checking invariants. `holes` must be
    /// sorted, deduplicated and inside the square.
    pub(crate) fn from_parts(w: i32, holes: Vec<Position>) -> Self {
        let side = (w + 1) as usize;
        let mut hole_mask = vec![false; side * side];
        for h in &holes {
            hole_mask[h.y as usize * side + h.x as usize] = true;
        }
        Configuration { w, holes, hole_mask }
    }

    /// Convenience constructor from coordinate pairs.
    pub fn new(w: i64, holes: &[(i32, i32)]) -> Result<Self, ConfigError> {
        let holes: Vec<Position> = holes.iter().map(|&p| p.into()).collect();
        validate(w, &holes)
    }

    /// The hole-free square of size `w`.
    pub fn hole_free(w: i32) -> Self {
        Configuration::from_parts(w, Vec::new())
    }

    /// Side parameter `w` (the square has `w + 1` positions per side).
    pub fn size(&self) -> i32 {
        self.w
    }

    /// Number of holes `k`.
    pub fn k(&self) -> usize {
        self.holes.len()
    }

    /// Holes in ascending `(x, y)` order.
    pub fn holes(&self) -> &[Position] {
        &self.holes
    }

    /// Positions per side, `w + 1`.
    pub fn side(&self) -> usize {
        (self.w + 1) as usize
    }

    pub fn in_square(&self, p: Position) -> bool {
        p.x >= 0 && p.y >= 0 && p.x <= self.w && p.y <= self.w
    }

    /// Row-major index of an in-square position.
    pub fn index(&self, p: Position) -> usize {
        p.y as usize * self.side() + p.x as usize
    }

    /// Inverse of [`Configuration::index`].
    pub fn position(&self, idx: usize) -> Position {
        let side = self.side();
        Position::new((idx % side) as i32, (idx / side) as i32)
    }

    pub fn is_hole(&self, p: Position) -> bool {
        self.in_square(p) && self.hole_mask[self.index(p)]
    }

    pub fn is_node(&self, p: Position) -> bool {
        self.in_square(p) && !self.hole_mask[self.index(p)]
    }

    /// All nodes in row-major order (south row first, west to east).
    pub fn nodes(&self) -> impl Iterator<Item = Position> + '_ {
        let side = self.side();
        (0..side * side).filter(move |&i| !self.hole_mask[i]).map(move |i| self.position(i))
    }

    /// Number of nodes, `(w + 1)^2 - k`.
    pub fn node_count(&self) -> usize {
        self.side() * self.side() - self.holes.len()
    }

    /// The same square with a different hole set; validated.
    pub fn with_holes(&self, holes: &[Position]) -> Result<Configuration, ConfigError> {
        validate(self.w as i64, holes)
    }

    /// Mirror image across the main diagonal (always valid).
    pub fn transpose(&self) -> Configuration {
        let mut holes: Vec<Position> = self.holes.iter().map(|h| h.transpose()).collect();
        holes.sort();
        Configuration::from_parts(self.w, holes)
    }

    /// Breadth-first distances from `source` through nodes.
    pub fn distances_from(&self, source: Position) -> DistanceMap {
        let side = self.side();
        let mut dist = vec![u32::MAX; side * side];
        if self.is_node(source) {
            let mut queue = VecDeque::new();
            let s = self.index(source);
            dist[s] = 0;
            queue.push_back(source);
            while let Some(p) = queue.pop_front() {
                let d = dist[self.index(p)];
                for q in p.neighbors() {
                    if self.is_node(q) {
                        let qi = self.index(q);
                        if dist[qi] == u32::MAX {
                            dist[qi] = d + 1;
                            queue.push_back(q);
                        }
                    }
                }
            }
        }
        DistanceMap { w: self.w, dist }
    }

    /// Shortest 4-adjacent path length through nodes.
    pub fn bfs_distance(&self, a: Position, b: Position) -> Result<u32, GridError> {
        self.require_node(a)?;
        self.require_node(b)?;
        self.distances_from(a).get(b).ok_or(GridError::NotANode(b))
    }

    /// `d(a, c) + d(c, b)`.
    pub fn via_distance(&self, a: Position, c: Position, b: Position) -> Result<u32, GridError> {
        Ok(self.bfs_distance(a, c)? + self.bfs_distance(c, b)?)
    }

    /// Which of the four neighbors of `v` are nodes.
    pub fn boundary_condition(&self, v: Position) -> Result<BoundaryCondition, GridError> {
        self.require_node(v)?;
        Ok(self.boundary_condition_unchecked(v))
    }

    /// As [`Configuration::boundary_condition`] without the node check.
    pub fn boundary_condition_unchecked(&self, v: Position) -> BoundaryCondition {
        let n = v.neighbors();
        BoundaryCondition([self.is_node(n[0]), self.is_node(n[1]), self.is_node(n[2]), self.is_node(n[3])])
    }

    pub(crate) fn require_node(&self, p: Position) -> Result<(), GridError> {
        if self.is_node(p) {
            Ok(())
        } else {
            Err(GridError::NotANode(p))
        }
    }

    /// The pattern of this configuration over `region`.
    pub fn pattern_of<I>(&self, region: I) -> Result<Pattern, GridError>
    where
        I: IntoIterator<Item = Position>,
    {
        let mut assignments = BTreeMap::new();
        for p in region {
            if !self.in_square(p) {
                return Err(GridError::OutOfSquare(p));
            }
            let cell = if self.is_hole(p) { Cell::Hole } else { Cell::Node };
            assignments.insert(p, cell);
        }
        Ok(Pattern { assignments })
    }

    /// Whether every assignment of `pattern` agrees with this configuration.
    pub fn has_pattern(&self, pattern: &Pattern) -> bool {
        pattern.assignments.iter().all(|(&p, &cell)| match cell {
            Cell::Node => self.is_node(p),
            Cell::Hole => self.is_hole(p),
        })
    }

    /// Renders the configuration as a grid of `.` (node) and `#` (hole),
    /// north row first.
    pub fn render(&self) -> String {
        let mut out = String::with_capacity(self.side() * (self.side() + 1));
        for y in (0..=self.w).rev() {
            for x in 0..=self.w {
                out.push(if self.is_hole(Position::new(x, y)) { '#' } else { '.' });
            }
            out.push('\n');
        }
        out
    }
}

/// Shortest-path distances from one source; `None` for holes, off-square
/// positions and unreachable nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMap {
    w: i32,
    dist: Vec<u32>,
}

impl DistanceMap {
    pub fn get(&self, p: Position) -> Option<u32> {
        if p.x < 0 || p.y < 0 || p.x > self.w || p.y > self.w {
            return None;
        }
        let d = self.dist[p.y as usize * (self.w + 1) as usize + p.x as usize];
        (d != u32::MAX).then_some(d)
    }

    /// Largest finite distance.
    pub fn eccentricity(&self) -> u32 {
        self.dist.iter().copied().filter(|&d| d != u32::MAX).max().unwrap_or(0)
    }
}

/// Per-worker memo of breadth-first searches keyed by source position.
///
/// Each cache is bound to one configuration; it is deliberately not shared
/// between threads so that queries stay pure functions of their inputs.
#[derive(Debug)]
pub struct DistanceCache<'c> {
    config: &'c Configuration,
    maps: HashMap<Position, DistanceMap>,
}

impl<'c> DistanceCache<'c> {
    pub fn new(config: &'c Configuration) -> Self {
        DistanceCache { config, maps: HashMap::new() }
    }

    pub fn config(&self) -> &'c Configuration {
        self.config
    }

    pub fn from_source(&mut self, source: Position) -> &DistanceMap {
        let config = self.config;
        self.maps.entry(source).or_insert_with(|| config.distances_from(source))
    }

    pub fn distance(&mut self, a: Position, b: Position) -> Result<u32, GridError> {
        self.config.require_node(a)?;
        self.config.require_node(b)?;
        self.from_source(a).get(b).ok_or(GridError::NotANode(b))
    }
}

/// Neighbor-existence bits in (east, north, west, south) order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundaryCondition(pub [bool; 4]);

impl BoundaryCondition {
    /// The boundary condition of the north-east corner `(w, w)` of a square.
    pub const NORTH_EAST_CORNER: BoundaryCondition = BoundaryCondition([false, false, true, true]);

    pub fn east(self) -> bool {
        self.0[0]
    }
    pub fn north(self) -> bool {
        self.0[1]
    }
    pub fn west(self) -> bool {
        self.0[2]
    }
    pub fn south(self) -> bool {
        self.0[3]
    }

    /// The bits as 0/1 integers.
    pub fn bits(self) -> [u8; 4] {
        self.0.map(u8::from)
    }
}

impl fmt::Display for BoundaryCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = self.bits();
        write!(f, "({}, {}, {}, {})", b[0], b[1], b[2], b[3])
    }
}

/// A label in a pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cell {
    Node,
    Hole,
}

/// A partial map from positions to node/hole labels.
///
/// Serialized as `{"nodes": [[x,y],...], "holes": [[x,y],...]}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Pattern {
    pub assignments: BTreeMap<Position, Cell>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PatternDoc {
    nodes: Vec<Position>,
    holes: Vec<Position>,
}

impl Serialize for Pattern {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let pick = |want: Cell| self.assignments.iter().filter(|(_, &c)| c == want).map(|(&p, _)| p).collect();
        PatternDoc { nodes: pick(Cell::Node), holes: pick(Cell::Hole) }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Pattern {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let doc = PatternDoc::deserialize(deserializer)?;
        let mut assignments = BTreeMap::new();
        for p in doc.nodes {
            assignments.insert(p, Cell::Node);
        }
        for p in doc.holes {
            if assignments.insert(p, Cell::Hole).is_some() {
                return Err(serde::de::Error::custom(format!("{p} is labelled both node and hole")));
            }
        }
        Ok(Pattern { assignments })
    }
}

impl Pattern {
    pub fn new() -> Self {
        Pattern::default()
    }

    /// The pattern over `region` whose holes are exactly `holes ∩ region`.
    pub fn over(region: impl IntoIterator<Item = Position>, holes: &[Position]) -> Pattern {
        let assignments =
            region.into_iter().map(|p| (p, if holes.contains(&p) { Cell::Hole } else { Cell::Node })).collect();
        Pattern { assignments }
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn get(&self, p: Position) -> Option<Cell> {
        self.assignments.get(&p).copied()
    }

    /// Positions labelled as holes.
    pub fn holes(&self) -> impl Iterator<Item = Position> + '_ {
        self.assignments.iter().filter(|(_, &c)| c == Cell::Hole).map(|(&p, _)| p)
    }

    pub fn domain(&self) -> impl Iterator<Item = Position> + '_ {
        self.assignments.keys().copied()
    }
}

/// One of the four center-quadrant regions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Region {
    U,
    V,
    W,
    X,
}

/// One of the three half-plane-like regions used for pattern moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HalfPlane {
    H0,
    H1,
    H2,
}

impl HalfPlane {
    pub const ALL: [HalfPlane; 3] = [HalfPlane::H0, HalfPlane::H1, HalfPlane::H2];

    /// The corner node witnessing the equivalence for moves outside this set:
    /// `(0, 0)` for `H0`, `(0, w)` for `H1`, `(w, 0)` for `H2`.
    pub fn witness(self, w: i32) -> Position {
        match self {
            HalfPlane::H0 => Position::new(0, 0),
            HalfPlane::H1 => Position::new(0, w),
            HalfPlane::H2 => Position::new(w, 0),
        }
    }
}

impl fmt::Display for HalfPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            HalfPlane::H0 => "H0",
            HalfPlane::H1 => "H1",
            HalfPlane::H2 => "H2",
        };
        f.write_str(s)
    }
}

/// The region family of a square of size `w`: the partition `U, V, W, X`,
/// the sets `H0, H1, H2` and the center `v_cnt = (⌊w/2⌋, ⌊w/2⌋)`.
///
/// Membership is decided by closed-form inequalities; the sets are also
/// materialized (in row-major order) for iteration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionFamily {
    pub w: i32,
    pub v_cnt: Position,
    pub u: Vec<Position>,
    pub v: Vec<Position>,
    pub w_set: Vec<Position>,
    pub x: Vec<Position>,
    pub h0: Vec<Position>,
    pub h1: Vec<Position>,
    pub h2: Vec<Position>,
}

/// Builds the region family for `w >= 2`.
pub fn regions(w: i32) -> RegionFamily {
    let h = w / 2;
    let all = (0..=w).flat_map(|y| (0..=w).map(move |x| Position::new(x, y)));
    let mut fam = RegionFamily {
        w,
        v_cnt: Position::new(h, h),
        u: Vec::new(),
        v: Vec::new(),
        w_set: Vec::new(),
        x: Vec::new(),
        h0: Vec::new(),
        h1: Vec::new(),
        h2: Vec::new(),
    };
    for p in all {
        match region_of(w, p) {
            Some(Region::U) => fam.u.push(p),
            Some(Region::V) => fam.v.push(p),
            Some(Region::W) => fam.w_set.push(p),
            Some(Region::X) => fam.x.push(p),
            None => unreachable!(),
        }
        if in_half_plane(w, HalfPlane::H0, p) {
            fam.h0.push(p);
        }
        if in_half_plane(w, HalfPlane::H1, p) {
            fam.h1.push(p);
        }
        if in_half_plane(w, HalfPlane::H2, p) {
            fam.h2.push(p);
        }
    }
    fam
}

impl RegionFamily {
    pub fn region_of(&self, p: Position) -> Option<Region> {
        region_of(self.w, p)
    }

    pub fn in_half_plane(&self, hp: HalfPlane, p: Position) -> bool {
        in_half_plane(self.w, hp, p)
    }

    pub fn half_plane(&self, hp: HalfPlane) -> &[Position] {
        match hp {
            HalfPlane::H0 => &self.h0,
            HalfPlane::H1 => &self.h1,
            HalfPlane::H2 => &self.h2,
        }
    }

    pub fn region(&self, r: Region) -> &[Position] {
        match r {
            Region::U => &self.u,
            Region::V => &self.v,
            Region::W => &self.w_set,
            Region::X => &self.x,
        }
    }

    /// `U ∪ V` in row-major order.
    pub fn uv(&self) -> Vec<Position> {
        self.union(&[Region::U, Region::V])
    }

    /// `U ∪ V ∪ W` in row-major order.
    pub fn uvw(&self) -> Vec<Position> {
        self.union(&[Region::U, Region::V, Region::W])
    }

    /// Union of the given regions in row-major order.
    pub fn union(&self, parts: &[Region]) -> Vec<Position> {
        let mut out: Vec<Position> = parts.iter().flat_map(|&r| self.region(r).iter().copied()).collect();
        out.sort_by_key(|p| (p.y, p.x));
        out
    }
}

/// Region membership for a position of `S_w`; `None` outside the square.
pub fn region_of(w: i32, p: Position) -> Option<Region> {
    if p.x < 0 || p.y < 0 || p.x > w || p.y > w {
        return None;
    }
    let h = w / 2;
    if p.x < h && p.y < h {
        return Some(Region::U);
    }
    if p.x <= h && p.y <= h {
        return Some(Region::V);
    }
    let in_w = if w % 2 == 0 {
        (p.x <= h && p.y == h + 1) || (p.x == h + 1 && p.y <= h)
    } else {
        p.x <= h + 1 && p.y <= h + 1
    };
    Some(if in_w { Region::W } else { Region::X })
}

/// Membership in `H0 = {x + y <= w + 1}`, `H1 = {x <= ⌊w/2⌋ + 1}` or
/// `H2 = {y <= ⌊w/2⌋ + 1}` (all intersected with `S_w`).
pub fn in_half_plane(w: i32, hp: HalfPlane, p: Position) -> bool {
    if p.x < 0 || p.y < 0 || p.x > w || p.y > w {
        return false;
    }
    let h = w / 2;
    match hp {
        HalfPlane::H0 => p.x + p.y <= w + 1,
        HalfPlane::H1 => p.x <= h + 1,
        HalfPlane::H2 => p.y <= h + 1,
    }
}

/// Serializes a map keyed by [`Position`] as a list of `[[x, y], value]`
/// entries (JSON objects only allow string keys).
pub mod pos_map {
    use std::collections::BTreeMap;

    use serde::ser::SerializeSeq;
    use serde::{Serialize, Serializer};

    use super::Position;

    pub fn serialize<V: Serialize, S: Serializer>(
        map: &BTreeMap<Position, V>,
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(map.len()))?;
        for entry in map {
            seq.serialize_element(&entry)?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: i32, y: i32) -> Position {
        Position::new(x, y)
    }

    fn oracle_bfs(w: i32, holes: &[Position], a: Position, b: Position) -> Option<u32> {
        // Independent breadth-first search over an explicit boolean grid.
        let side = (w + 1) as usize;
        let mut open = vec![vec![true; side]; side];
        for h in holes {
            open[h.x as usize][h.y as usize] = false;
        }
        let mut seen = vec![vec![None; side]; side];
        let mut q = VecDeque::from([(a.x, a.y)]);
        seen[a.x as usize][a.y as usize] = Some(0u32);
        while let Some((x, y)) = q.pop_front() {
            let d = seen[x as usize][y as usize].unwrap();
            for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx > w || ny > w {
                    continue;
                }
                let (ux, uy) = (nx as usize, ny as usize);
                if open[ux][uy] && seen[ux][uy].is_none() {
                    seen[ux][uy] = Some(d + 1);
                    q.push_back((nx, ny));
                }
            }
        }
        seen[b.x as usize][b.y as usize]
    }

    #[test]
    fn validate_examples() {
        assert!(Configuration::new(5, &[]).is_ok());
        assert_eq!(Configuration::new(5, &[(0, 3)]), Err(ConfigError::BoundaryHole { w: 5, hole: p(0, 3) }));
        assert_eq!(
            Configuration::new(5, &[(1, 2), (2, 1), (2, 3), (3, 2)]),
            Err(ConfigError::Disconnected { witness: p(2, 2) })
        );
        assert!(matches!(
            Configuration::new(2, &[(1, 1), (1, 2)]),
            Err(ConfigError::TooManyHoles { k: 2, capacity: 1 })
        ));
        assert_eq!(Configuration::new(0, &[]), Err(ConfigError::InvalidSize(0)));
    }

    #[test]
    fn mh_examples() {
        assert_eq!(mh_distance(p(0, 0), p(0, 0)), 0);
        assert_eq!(mh_distance(p(0, 0), p(3, 4)), 7);
        assert_eq!(mh_distance(p(2, 5), p(5, 2)), 6);
    }

    #[test]
    fn bfs_examples() {
        let free = Configuration::hole_free(5);
        assert_eq!(free.bfs_distance(p(0, 0), p(5, 5)), Ok(10));
        let c = Configuration::new(5, &[(2, 2), (3, 3)]).unwrap();
        assert_eq!(c.bfs_distance(p(2, 1), p(2, 3)), Ok(4));
        assert_eq!(c.bfs_distance(p(0, 0), p(5, 5)), Ok(10));
        assert_eq!(c.bfs_distance(p(2, 2), p(0, 0)), Err(GridError::NotANode(p(2, 2))));
        assert_eq!(c.bfs_distance(p(0, 0), p(6, 0)), Err(GridError::NotANode(p(6, 0))));
    }

    #[test]
    fn via_examples() {
        let free = Configuration::hole_free(5);
        assert_eq!(free.via_distance(p(0, 0), p(0, 5), p(5, 5)), Ok(10));
        assert_eq!(free.via_distance(p(0, 0), p(5, 5), p(0, 5)), Ok(15));
        assert_eq!(free.via_distance(p(0, 0), p(0, 0), p(0, 0)), Ok(0));
        let c = Configuration::new(12, &[(6, 4), (7, 5)]).unwrap();
        assert_eq!(c.via_distance(p(0, 0), p(0, 12), p(6, 5)), Ok(25));
    }

    #[test]
    fn boundary_condition_examples() {
        let free = Configuration::hole_free(5);
        assert_eq!(free.boundary_condition(p(5, 5)).unwrap().bits(), [0, 0, 1, 1]);
        assert_eq!(free.boundary_condition(p(2, 2)).unwrap().bits(), [1, 1, 1, 1]);
        let c = Configuration::new(5, &[(2, 2), (3, 3)]).unwrap();
        // East neighbor (3,3) and south neighbor (2,2) are both holes.
        assert_eq!(c.boundary_condition(p(2, 3)).unwrap().bits(), [0, 1, 1, 0]);
        assert_eq!(c.boundary_condition(p(2, 1)).unwrap().bits(), [1, 0, 1, 1]);
        assert!(c.boundary_condition(p(3, 3)).is_err());
        assert_eq!(free.boundary_condition(p(5, 5)).unwrap(), BoundaryCondition::NORTH_EAST_CORNER);
    }

    #[test]
    fn pattern_examples() {
        let c = Configuration::new(12, &[(5, 7), (9, 2)]).unwrap();
        let fam = regions(12);
        assert!(c.pattern_of(Vec::new()).unwrap().is_empty());
        let uv = c.pattern_of(fam.uv()).unwrap();
        assert_eq!(uv.holes().count(), 0);
        assert_eq!(uv.len(), 49);
        let wp = c.pattern_of(fam.w_set.iter().copied()).unwrap();
        assert_eq!(wp.holes().collect::<Vec<_>>(), vec![p(5, 7)]);
        let mut only = Pattern::new();
        only.assignments.insert(p(5, 7), Cell::Node);
        assert!(!c.has_pattern(&only));
        let other = Configuration::new(12, &[(10, 3), (3, 10)]).unwrap();
        assert!(c.has_pattern(&other.pattern_of(fam.uv()).unwrap()));
        assert_eq!(c.pattern_of([p(13, 0)]), Err(GridError::OutOfSquare(p(13, 0))));
    }

    #[test]
    fn serde_forms() {
        assert_eq!(serde_json::to_string(&p(3, -1)).unwrap(), "[3,-1]");
        let pat = Pattern::over([p(1, 1), p(2, 1)], &[p(2, 1)]);
        let text = serde_json::to_string(&pat).unwrap();
        assert_eq!(text, r#"{"nodes":[[1,1]],"holes":[[2,1]]}"#);
        assert_eq!(serde_json::from_str::<Pattern>(&text).unwrap(), pat);
        assert!(serde_json::from_str::<Pattern>(r#"{"nodes":[[1,1]],"holes":[[1,1]]}"#).is_err());
    }

    #[test]
    fn region_examples() {
        let f = regions(12);
        assert_eq!(f.region_of(p(5, 5)), Some(Region::U));
        assert_eq!(f.region_of(p(6, 3)), Some(Region::V));
        assert_eq!(f.region_of(p(5, 7)), Some(Region::W));
        assert_eq!(f.region_of(p(7, 7)), Some(Region::X));
        assert_eq!(regions(11).region_of(p(6, 6)), Some(Region::W));
        assert!(f.in_half_plane(HalfPlane::H0, p(6, 7)));
        assert!(!f.in_half_plane(HalfPlane::H0, p(7, 7)));
        assert_eq!(f.v_cnt, p(6, 6));
        assert_eq!(f.region_of(f.v_cnt), Some(Region::V));
    }

    #[test]
    fn region_identities_for_many_sizes() {
        for w in 4..=40 {
            let f = regions(w);
            let total = f.u.len() + f.v.len() + f.w_set.len() + f.x.len();
            assert_eq!(total, ((w + 1) * (w + 1)) as usize);
            let h = w / 2;
            let uvw: BTreeSet<Position> = f.uvw().into_iter().collect();
            let uv: BTreeSet<Position> = f.uv().into_iter().collect();
            for y in 0..=w {
                for x in 0..=w {
                    let q = p(x, y);
                    assert_eq!(uv.contains(&q), x <= h && y <= h, "w={w} {q}");
                    if uvw.contains(&q) {
                        assert!(f.in_half_plane(HalfPlane::H0, q));
                    }
                    let h12 = f.in_half_plane(HalfPlane::H1, q) && f.in_half_plane(HalfPlane::H2, q);
                    let corner = q == f.v_cnt.offset(1, 1);
                    let expected = if w % 2 == 0 { h12 && !corner } else { h12 };
                    assert_eq!(uvw.contains(&q), expected, "w={w} {q}");
                }
            }
        }
    }

    fn arb_config() -> impl Strategy<Value = Configuration> {
        (3i32..=10).prop_flat_map(|w| {
            proptest::collection::btree_set((1..w, 1..w), 0..=((w - 1) * (w - 1)).min(8) as usize).prop_filter_map(
                "connected",
                move |hs| {
                    let holes: Vec<Position> = hs.into_iter().map(Position::from).collect();
                    validate(w as i64, &holes).ok()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn bfs_matches_oracle_and_dominates_mh(c in arb_config(), ai in 0usize..200, bi in 0usize..200) {
            let nodes: Vec<Position> = c.nodes().collect();
            let a = nodes[ai % nodes.len()];
            let b = nodes[bi % nodes.len()];
            let d = c.bfs_distance(a, b).unwrap();
            prop_assert_eq!(Some(d), oracle_bfs(c.size(), c.holes(), a, b));
            prop_assert!(mh_distance(a, b) <= d);
            if c.k() == 0 {
                prop_assert_eq!(mh_distance(a, b), d);
            }
        }

        #[test]
        fn bfs_is_a_metric(c in arb_config(), i in 0usize..200, j in 0usize..200, l in 0usize..200) {
            let nodes: Vec<Position> = c.nodes().collect();
            let (a, b, m) = (nodes[i % nodes.len()], nodes[j % nodes.len()], nodes[l % nodes.len()]);
            let ab = c.bfs_distance(a, b).unwrap();
            prop_assert_eq!(ab, c.bfs_distance(b, a).unwrap());
            prop_assert!(ab <= c.bfs_distance(a, m).unwrap() + c.bfs_distance(m, b).unwrap());
            prop_assert_eq!(ab == 0, a == b);
        }

        #[test]
        fn pattern_round_trip(c in arb_config(), mask in proptest::collection::vec(any::<bool>(), 121)) {
            let region: Vec<Position> = (0..=c.size())
                .flat_map(|y| (0..=c.size()).map(move |x| Position::new(x, y)))
                .enumerate()
                .filter(|(i, _)| mask[i % mask.len()])
                .map(|(_, q)| q)
                .collect();
            let pat = c.pattern_of(region).unwrap();
            prop_assert!(c.has_pattern(&pat));
        }

        #[test]
        fn distance_cache_agrees(c in arb_config(), i in 0usize..200, j in 0usize..200) {
            let nodes: Vec<Position> = c.nodes().collect();
            let (a, b) = (nodes[i % nodes.len()], nodes[j % nodes.len()]);
            let mut cache = DistanceCache::new(&c);
            prop_assert_eq!(cache.distance(a, b).unwrap(), c.bfs_distance(a, b).unwrap());
            prop_assert_eq!(cache.distance(a, b).unwrap(), c.bfs_distance(a, b).unwrap());
        }
    }
}
