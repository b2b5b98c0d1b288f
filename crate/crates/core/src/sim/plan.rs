//! Partial solutions built from size-check messages, simulated at the level
//! of message timing.
//!
//! A plan targets one size `w̃`. The corner messages `W0`/`W1` exist only
//! when the configuration has size `w̃`; they are created at `(0, w)` and
//! `(w, 0)` at time `w`. Each pattern message `M_ij` exists only when the
//! configuration carries the plan's pattern `π̃` on the checked region `Z`; it
//! is created at its site `v_ij` at time `d_MH(v_gen, v_ij) + r_ij`. Every
//! message spreads at speed one along shortest paths. A node fires at
//! `2w̃ + s` when, by then, it has received `W0` or `W1` and every message of
//! at least one group (an empty group list counts as satisfied).

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{mh_distance, validate, Cell, Configuration, Pattern, Position, V_GEN};
use crate::sim::FiringTranscript;
use crate::timebounds::{has_critical_pair, max_t};

/// One pattern message: generation site and extra delay.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Message {
    pub site: Position,
    pub offset: u32,
}

impl Message {
    pub fn at(site: Position) -> Message {
        Message { site, offset: 0 }
    }
}

/// A message plan; the firing rule is `(W0 ∨ W1) ∧ ⋁_i ⋀_j M_ij`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MessagePlan {
    pub target_size: i32,
    pub slack: u32,
    pub checked_region: Vec<Position>,
    pub groups: Vec<Vec<Message>>,
    pub pattern: Pattern,
}

impl MessagePlan {
    /// The plan that fires on the corner messages alone at `2w̃ + s`.
    pub fn corner_only(target_size: i32, slack: u32) -> MessagePlan {
        MessagePlan { target_size, slack, checked_region: Vec::new(), groups: Vec::new(), pattern: Pattern::new() }
    }

    /// A plan whose pattern is `reference` restricted to `region`.
    pub fn for_config(
        reference: &Configuration,
        slack: u32,
        region: Vec<Position>,
        groups: Vec<Vec<Message>>,
    ) -> MessagePlan {
        let pattern = Pattern::over(region.iter().copied(), reference.holes());
        MessagePlan { target_size: reference.size(), slack, checked_region: region, groups, pattern }
    }

    /// `2w̃ + s`.
    pub fn fire_time(&self) -> u32 {
        2 * self.target_size as u32 + self.slack
    }

    /// Checks the structural invariants: the pattern is defined exactly on
    /// the checked region, and every site is labelled as a node.
    pub fn validate(&self) -> Result<()> {
        if self.target_size < 1 {
            return Err(Error::InvalidPlan(format!("target size {} < 1", self.target_size)));
        }
        let region: BTreeSet<Position> = self.checked_region.iter().copied().collect();
        let domain: BTreeSet<Position> = self.pattern.domain().collect();
        if region != domain {
            return Err(Error::InvalidPlan("pattern domain differs from the checked region".into()));
        }
        for m in self.groups.iter().flatten() {
            if self.pattern.get(m.site) != Some(Cell::Node) {
                return Err(Error::InvalidPlan(format!("site {} is not a node of the pattern", m.site)));
            }
        }
        Ok(())
    }

    /// Reflection across the main diagonal.
    pub fn transpose(&self) -> MessagePlan {
        let pattern =
            Pattern { assignments: self.pattern.assignments.iter().map(|(p, &c)| (p.transpose(), c)).collect() };
        MessagePlan {
            target_size: self.target_size,
            slack: self.slack,
            checked_region: self.checked_region.iter().map(|p| p.transpose()).collect(),
            groups: self
                .groups
                .iter()
                .map(|g| g.iter().map(|m| Message { site: m.site.transpose(), offset: m.offset }).collect())
                .collect(),
            pattern,
        }
    }

    fn distinct_sites(&self) -> Vec<Position> {
        let sites: BTreeSet<Position> = self.groups.iter().flatten().map(|m| m.site).collect();
        sites.into_iter().collect()
    }
}

/// `D_ij(C, v) = d_MH(v_gen, v_ij) + r_ij + d_C(v_ij, v)`: the arrival time of
/// `M_ij` at `v`, or `None` when the site is not a node of `C`.
fn arrival(m: &Message, site_dist: &HashMap<Position, crate::grid::DistanceMap>, v: Position) -> Option<u32> {
    let d = site_dist.get(&m.site)?.get(v)?;
    Some(mh_distance(V_GEN, m.site) + m.offset + d)
}

fn site_distances(c: &Configuration, plan: &MessagePlan) -> HashMap<Position, crate::grid::DistanceMap> {
    plan.distinct_sites().into_iter().filter(|&s| c.is_node(s)).map(|s| (s, c.distances_from(s))).collect()
}

/// Whether the group part of the rule holds at `v` by time `t`.
fn groups_satisfied(
    plan: &MessagePlan,
    site_dist: &HashMap<Position, crate::grid::DistanceMap>,
    v: Position,
    t: u32,
) -> bool {
    plan.groups.is_empty()
        || plan.groups.iter().any(|g| g.iter().all(|m| arrival(m, site_dist, v).is_some_and(|a| a <= t)))
}

/// Simulates the plan on `c`: every node either fires at `2w̃ + s` or never.
pub fn run_message_plan(c: &Configuration, plan: &MessagePlan) -> FiringTranscript {
    let t = plan.fire_time();
    let mut transcript = FiringTranscript::silent(c, t);
    if c.size() != plan.target_size {
        return transcript;
    }
    let w = c.size();
    let from_nw = c.distances_from(Position::new(0, w));
    let from_se = c.distances_from(Position::new(w, 0));
    let pattern_ok = c.has_pattern(&plan.pattern);
    let site_dist = if pattern_ok { site_distances(c, plan) } else { HashMap::new() };
    for v in c.nodes() {
        let corner = [from_nw.get(v), from_se.get(v)].into_iter().flatten().any(|d| w as u32 + d <= t);
        let groups = if pattern_ok { groups_satisfied(plan, &site_dist, v, t) } else { plan.groups.is_empty() };
        if corner && groups {
            transcript.fire_time.insert(v, Some(t));
        }
    }
    transcript
}

/// All configurations of size `w` with `k` holes that carry `pattern`.
pub fn completions(w: i32, k: usize, pattern: &Pattern) -> Vec<Configuration> {
    let fixed: Vec<Position> = pattern.holes().collect();
    if fixed.len() > k {
        return Vec::new();
    }
    let free: Vec<Position> =
        (1..w).flat_map(|y| (1..w).map(move |x| Position::new(x, y))).filter(|&p| pattern.get(p).is_none()).collect();
    let mut out = Vec::new();
    let mut chosen = fixed.clone();
    fn rec(
        w: i32,
        free: &[Position],
        start: usize,
        need: usize,
        chosen: &mut Vec<Position>,
        out: &mut Vec<Configuration>,
    ) {
        if need == 0 {
            if let Ok(c) = validate(w as i64, chosen) {
                out.push(c);
            }
            return;
        }
        for i in start..free.len() {
            chosen.push(free[i]);
            rec(w, free, i + 1, need - 1, chosen, out);
            chosen.pop();
        }
    }
    let in_square = fixed.iter().all(|p| p.x >= 1 && p.y >= 1 && p.x < w && p.y < w);
    if in_square {
        rec(w, &free, 0, k - fixed.len(), &mut chosen, &mut out);
    }
    out
}

/// Nodes of `c` at which no group of `plan` arrives by `2w̃ + s`.
pub fn c5_failures(plan: &MessagePlan, c: &Configuration) -> Vec<Position> {
    if plan.groups.is_empty() {
        return Vec::new();
    }
    let t = plan.fire_time();
    let site_dist = site_distances(c, plan);
    c.nodes().filter(|&v| !groups_satisfied(plan, &site_dist, v, t)).collect()
}

/// Result of checking the partial-solution conditions for a plan.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionReport {
    /// Completions of the pattern examined.
    pub completions: usize,
    /// C1: every completion has `max_t ≤ 2w̃ + s`.
    pub c1: bool,
    pub c1_counterexample: Option<Configuration>,
    /// C2: the group patterns are all `π̃`, so their conjunction is `π̃`.
    pub c2: bool,
    /// C3/C4: guaranteed by the simulator's message semantics.
    pub c3: bool,
    pub c4: bool,
    /// C5: for every completion and node some group arrives by `2w̃ + s`.
    pub c5: bool,
    pub c5_counterexample: Option<(Configuration, Position)>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.c1 && self.c2 && self.c3 && self.c4 && self.c5
    }

    /// The plan's own configuration was among the completions that passed
    /// C1 and C5 (so the simulation fires it).
    pub fn c1_c5(&self) -> bool {
        self.c1 && self.c5
    }
}

/// Verifies conditions C1–C5 for `plan`, built for `reference`.
///
/// C1 and C5 are checked over every configuration of the target size with
/// the same number of holes that carries the plan's pattern. For two holes
/// C1 uses the critical-pair criterion (`max_t = 2w + 1` exactly when a
/// critical pair exists); otherwise `max_t` is computed directly.
pub fn check_c_conditions(plan: &MessagePlan, reference: &Configuration) -> Result<ConditionReport> {
    plan.validate()?;
    if reference.size() != plan.target_size {
        return Err(Error::SizeMismatch(reference.size(), plan.target_size));
    }
    if !reference.has_pattern(&plan.pattern) {
        return Err(Error::InvalidPlan("the reference configuration does not carry the pattern".into()));
    }
    let w = plan.target_size;
    let t = plan.fire_time();
    let all = completions(w, reference.k(), &plan.pattern);
    let mut report = ConditionReport {
        completions: all.len(),
        c1: true,
        c1_counterexample: None,
        c2: true,
        c3: true,
        c4: true,
        c5: true,
        c5_counterexample: None,
    };
    for c in &all {
        if report.c1 {
            let bound = if c.k() == 2 { 2 * w as u32 + u32::from(has_critical_pair(c)) } else { max_t(c) };
            if bound > t {
                report.c1 = false;
                report.c1_counterexample = Some(c.clone());
            }
        }
        if report.c5 && !plan.groups.is_empty() {
            let site_dist = site_distances(c, plan);
            if let Some(v) = c.nodes().find(|&v| !groups_satisfied(plan, &site_dist, v, t)) {
                report.c5 = false;
                report.c5_counterexample = Some((c.clone(), v));
            }
        }
        if !report.c1 && !report.c5 {
            break;
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::regions;

    fn p(x: i32, y: i32) -> Position {
        Position::new(x, y)
    }

    fn cfg(w: i64, holes: &[(i32, i32)]) -> Configuration {
        Configuration::new(w, holes).unwrap()
    }

    fn bar_plan() -> MessagePlan {
        let reference = cfg(7, &[(1, 1), (2, 1), (3, 1)]);
        let z = vec![p(1, 1), p(2, 1), p(3, 1), p(3, 0)];
        MessagePlan::for_config(&reference, 0, z, vec![vec![Message::at(p(3, 0))]])
    }

    #[test]
    fn bar_instance() {
        let plan = bar_plan();
        plan.validate().unwrap();
        let c = cfg(7, &[(1, 1), (2, 1), (3, 1)]);
        assert!(run_message_plan(&c, &plan).fires_exactly_at(14));
        assert!(run_message_plan(&cfg(7, &[(1, 1), (2, 1), (4, 1)]), &plan).never_fires());
        assert!(run_message_plan(&cfg(6, &[(1, 1), (2, 1), (3, 1)]), &plan).never_fires());
        assert!(run_message_plan(&cfg(8, &[(1, 1), (2, 1), (3, 1)]), &plan).never_fires());
        let report = check_c_conditions(&plan, &c).unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.completions, 1);
    }

    #[test]
    fn corner_only_plan_fires_at_bound() {
        let c = cfg(12, &[(6, 4), (7, 5)]);
        let plan = MessagePlan::corner_only(12, 1);
        assert!(run_message_plan(&c, &plan).fires_exactly_at(25));
        assert!(check_c_conditions(&plan, &c).unwrap().passed());
        let tight = MessagePlan::corner_only(12, 0);
        let r = check_c_conditions(&tight, &c).unwrap();
        assert!(!r.c1);
    }

    #[test]
    fn center_plan_fails_c5_at_far_corner() {
        let f = regions(12);
        let v = f.v_cnt;
        let c = Configuration::new(12, &[(v.x, v.y + 1), (v.x + 1, v.y)]).unwrap();
        let plan = MessagePlan::for_config(&c, 0, f.uvw(), vec![vec![Message::at(v)]]);
        let r = check_c_conditions(&plan, &c).unwrap();
        assert!(!r.c5);
        assert!(c5_failures(&plan, &c).contains(&p(12, 12)));
        assert!(c5_failures(&plan, &cfg(12, &[(3, 3), (8, 8)])).is_empty());
    }

    #[test]
    fn plan_validation() {
        let mut plan = bar_plan();
        plan.groups = vec![vec![Message::at(p(1, 1))]];
        assert!(matches!(plan.validate(), Err(Error::InvalidPlan(_))));
        let mut plan = bar_plan();
        plan.checked_region.pop();
        assert!(plan.validate().is_err());
    }

    #[test]
    fn plan_json_round_trip() {
        let plan = bar_plan();
        let text = serde_json::to_string(&plan).unwrap();
        assert_eq!(serde_json::from_str::<MessagePlan>(&text).unwrap(), plan);
        assert_eq!(plan.transpose().transpose(), plan);
    }

    #[test]
    fn completions_enumerate_free_cells() {
        let pat = Pattern::over([p(5, 5)], &[p(5, 5)]);
        let all = completions(6, 2, &pat);
        assert_eq!(all.len(), 24);
        assert!(all.iter().all(|c| c.is_hole(p(5, 5))));
    }

    #[test]
    fn mismatched_sizes_never_fire() {
        let plan = MessagePlan::corner_only(9, 0);
        for w in [7, 8, 10, 11] {
            assert!(run_message_plan(&Configuration::hole_free(w), &plan).never_fires());
        }
        assert!(run_message_plan(&Configuration::hole_free(9), &plan).fires_exactly_at(18));
    }
}
