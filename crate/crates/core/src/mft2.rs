//! Minimum firing time of two-hole configurations, with certificates.
//!
//! For `w ≥ 11` the minimum firing time of a two-hole configuration is
//! `2w + 1` exactly when one of three conditions holds: no hole in `U∪V∪W`;
//! no hole in `U∪V` and a single, critical hole in `W`; or a critical pair
//! inside `U∪V∪W`. Otherwise it is `2w`.
//!
//! The decision itself is read directly off region membership. Each verdict
//! carries a certificate: for `2w + 1` a chain of pattern-preserving hole
//! moves ending at a critical pair; for `2w` a message plan (the witness
//! partial solution) together with its checked conditions.
//!
//! The module also provides the distance bound for nodes of `U∪V`
//! (`d_MH(v_gen, v) + d_C(v, v') ≤ 2w`) with its four exceptional hole
//! geometries, and exhaustive sweeps over all configurations of one size.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{mh_distance, regions, validate, Configuration, Position, Region, RegionFamily, V_GEN};
use crate::sim::plan::{check_c_conditions, run_message_plan, ConditionReport, Message, MessagePlan};
use crate::timebounds::{
    has_critical_pair, is_critical, lower_bound_certificate, max_t, require_two_holes, verify_certificate,
    CertificateChain, CertificateIndex,
};

/// Smallest size for which the classification is asserted.
pub const MIN_CLASSIFY_SIZE: i32 = 11;
/// Smallest size for which the distance bound with exceptions is asserted.
pub const MIN_APPENDIX_SIZE: i32 = 5;

/// Region counts of the two holes plus the refinements used to pick a
/// witness plan.
///
/// `V'` is `V` without `v_cnt`; `W'` is `W` without `v_cnt + (1, 1)` (which
/// lies in `W` only for odd `w`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HoleTypeProfile {
    /// `(#U, #V, #W, #X)`.
    pub counts: (usize, usize, usize, usize),
    /// `(critical holes in V', noncritical holes in V', hole at v_cnt)`.
    pub v_split: (usize, usize, usize),
    /// `(critical holes in W', noncritical holes in W', hole at v_cnt + (1, 1) inside W)`.
    pub w_split: (usize, usize, usize),
}

impl fmt::Display for HoleTypeProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b, c, d) = self.counts;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

/// The region counts and refinements of a two-hole configuration.
pub fn type_of(c: &Configuration) -> Result<HoleTypeProfile> {
    require_two_holes(c)?;
    let fam = regions(c.size());
    Ok(profile(c, &fam))
}

fn profile(c: &Configuration, fam: &RegionFamily) -> HoleTypeProfile {
    let cnt = fam.v_cnt;
    let corner = cnt.offset(1, 1);
    let mut p = HoleTypeProfile { counts: (0, 0, 0, 0), v_split: (0, 0, 0), w_split: (0, 0, 0) };
    for &h in c.holes() {
        match fam.region_of(h).expect("holes lie in the square") {
            Region::U => p.counts.0 += 1,
            Region::V => {
                p.counts.1 += 1;
                if h == cnt {
                    p.v_split.2 += 1;
                } else if is_critical(h) {
                    p.v_split.0 += 1;
                } else {
                    p.v_split.1 += 1;
                }
            }
            Region::W => {
                p.counts.2 += 1;
                if h == corner {
                    p.w_split.2 += 1;
                } else if is_critical(h) {
                    p.w_split.0 += 1;
                } else {
                    p.w_split.1 += 1;
                }
            }
            Region::X => p.counts.3 += 1,
        }
    }
    p
}

/// Which of the three conditions forces `2w + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LowerBoundReason {
    /// Both holes lie in `X`.
    NoHoleInUvw,
    /// No hole in `U∪V`, one critical hole in `W`, the other in `X`.
    CriticalHoleInW,
    /// Both holes lie in `U∪V∪W` and form a critical pair.
    CriticalPair,
}

fn lower_bound_reason(c: &Configuration, p: &HoleTypeProfile) -> Option<LowerBoundReason> {
    let (a, b, w, x) = p.counts;
    if x == 2 {
        Some(LowerBoundReason::NoHoleInUvw)
    } else if (a, b, w, x) == (0, 0, 1, 1) && p.w_split.0 == 1 {
        Some(LowerBoundReason::CriticalHoleInW)
    } else if x == 0 && has_critical_pair(c) {
        Some(LowerBoundReason::CriticalPair)
    } else {
        None
    }
}

fn require_classifiable(c: &Configuration) -> Result<()> {
    require_two_holes(c)?;
    if c.size() < MIN_CLASSIFY_SIZE {
        return Err(Error::SizeTooSmall(c.size(), MIN_CLASSIFY_SIZE));
    }
    Ok(())
}

/// The minimum firing time alone (no certificate): `2w + 1` or `2w`.
pub fn mft_value(c: &Configuration) -> Result<u32> {
    require_classifiable(c)?;
    let p = type_of(c)?;
    Ok(2 * c.size() as u32 + u32::from(lower_bound_reason(c, &p).is_some()))
}

/// The hole geometry that selects a witness plan.
///
/// `v_cnt = (⌊w/2⌋, ⌊w/2⌋)`; `Z` is the checked region of the plan.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanCase {
    /// A hole in `U` and none in `V`: `Z = U∪V`, one message from `v_cnt`.
    HoleInU,
    /// Holes only in `W∪X`, at least one of `v_cnt + (0, 1)`, `v_cnt + (1, 0)`
    /// a node, and (odd `w`) no hole at `v_cnt + (1, 1)` unless `W'` also
    /// holds a noncritical hole: `Z = U∪V∪W'`, one message from `v_cnt`.
    OpenCenter,
    /// Odd `w`, a hole at `v_cnt + (1, 1)` and no noncritical hole in `W'`:
    /// `Z = U∪V∪W`, messages from `v_cnt + (0, 1)` or `v_cnt + (1, 0)`.
    OuterCornerHole,
    /// Holes at `v_cnt + (0, 1)` and `v_cnt + (1, 0)`: `Z = U∪V∪W'`, a message
    /// from `v_cnt`, or both of those from `v_cnt + (−1, 1)` and `v_cnt + (1, −1)`.
    BlockedCenter,
    /// Holes in `V` (not both next to `v_cnt`) with a noncritical hole in `V'`
    /// or two critical ones: `Z = U∪V'`, one message from `v_cnt − (1, 1)`.
    OpenInnerCorner,
    /// A hole at `v_cnt` and no noncritical hole in `V'`: `Z = U∪V`, messages
    /// from `v_cnt − (1, 0)` or `v_cnt − (0, 1)`.
    CenterHole,
    /// A lone critical hole `v0` in `V'`, the other hole not in `U∪V`:
    /// `Z = U∪V∪{v0 + (1, 1)}`, one message from the node next to `v_cnt`
    /// on the arm of `V` holding `v0`.
    LoneCriticalInV,
    /// Holes at `v_cnt − (1, 0)` and `v_cnt − (0, 1)`: `Z = U∪V`, a message
    /// from `v_cnt − (1, 1)`, or both of those from `v_cnt − (2, 0)` and
    /// `v_cnt − (0, 2)`.
    BlockedInnerCorner,
    /// One hole `v0` in `U`, one `v1` in the horizontal arm of `V`, with
    /// `v1 ≠ v0 + (1, 1)`: `Z = U∪V`, both messages from `v0 − (0, 1)` and
    /// `v1 − (1, 0)`.
    SplitUv,
    /// As [`PlanCase::SplitUv`] with `v1 = v0 + (1, 1)`: messages from
    /// `v0 + (1, 0)` or `v1 − (1, 0)`.
    DiagonalUv,
}

/// A witness plan with the case that produced it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessPlan {
    pub case: PlanCase,
    /// Built for the diagonal reflection and mapped back.
    pub mirrored: bool,
    pub plan: MessagePlan,
}

fn without(mut region: Vec<Position>, drop: &[Position]) -> Vec<Position> {
    region.retain(|p| !drop.contains(p));
    region
}

fn singles(sites: &[Position]) -> Vec<Vec<Message>> {
    sites.iter().map(|&s| vec![Message::at(s)]).collect()
}

/// Builds the witness plan of a configuration with minimum firing time
/// `2w`, following the case split on the hole type. The plan is returned
/// unchecked; [`classify`] verifies it.
pub fn build_witness_plan(c: &Configuration) -> Result<WitnessPlan> {
    require_classifiable(c)?;
    let fam = regions(c.size());
    let p = profile(c, &fam);
    if lower_bound_reason(c, &p).is_some() {
        return Err(Error::NotUpperBoundCase);
    }
    // Plans for a V-hole in the vertical arm are built in the reflected frame.
    if p.counts == (1, 1, 0, 0) {
        let v1 = c.holes().iter().copied().find(|&h| fam.region_of(h) == Some(Region::V)).unwrap();
        if v1.y != fam.v_cnt.y {
            let inner = plan_in_frame(&c.transpose(), &fam)?;
            return Ok(WitnessPlan { case: inner.case, mirrored: true, plan: inner.plan.transpose() });
        }
    }
    plan_in_frame(c, &fam)
}

fn plan_in_frame(c: &Configuration, fam: &RegionFamily) -> Result<WitnessPlan> {
    let p = profile(c, fam);
    let cnt = fam.v_cnt;
    let ne = cnt.offset(1, 1);
    let holes = c.holes();
    let has = |a: Position, b: Position| holes.contains(&a) && holes.contains(&b);
    let uv = fam.uv();
    let uvw_prime = without(fam.uvw(), &[ne]);
    let (a, b, _, _) = p.counts;
    let (case, region, groups) = if a >= 1 && b == 0 {
        (PlanCase::HoleInU, uv, singles(&[cnt]))
    } else if a == 0 && b == 0 {
        if has(cnt.offset(0, 1), cnt.offset(1, 0)) {
            let groups =
                vec![vec![Message::at(cnt)], vec![Message::at(cnt.offset(-1, 1)), Message::at(cnt.offset(1, -1))]];
            (PlanCase::BlockedCenter, uvw_prime, groups)
        } else if p.w_split.2 == 1 && p.w_split.1 == 0 {
            (PlanCase::OuterCornerHole, fam.uvw(), singles(&[cnt.offset(0, 1), cnt.offset(1, 0)]))
        } else {
            (PlanCase::OpenCenter, uvw_prime, singles(&[cnt]))
        }
    } else if a == 0 {
        let inner = cnt.offset(-1, -1);
        if has(cnt.offset(-1, 0), cnt.offset(0, -1)) {
            let groups =
                vec![vec![Message::at(inner)], vec![Message::at(cnt.offset(-2, 0)), Message::at(cnt.offset(0, -2))]];
            (PlanCase::BlockedInnerCorner, uv, groups)
        } else if p.v_split.2 == 1 && p.v_split.1 == 0 {
            (PlanCase::CenterHole, uv, singles(&[cnt.offset(-1, 0), cnt.offset(0, -1)]))
        } else if p.v_split == (1, 0, 0) {
            let v0 = holes.iter().copied().find(|&h| fam.region_of(h) == Some(Region::V)).unwrap();
            let site = if v0.y == cnt.y { cnt.offset(-1, 0) } else { cnt.offset(0, -1) };
            let mut region = uv;
            region.push(v0.offset(1, 1));
            region.sort_by_key(|q| (q.y, q.x));
            (PlanCase::LoneCriticalInV, region, singles(&[site]))
        } else {
            (PlanCase::OpenInnerCorner, without(uv, &[cnt]), singles(&[inner]))
        }
    } else {
        // Type (1, 1, 0, 0) with the V-hole on the horizontal arm.
        let v0 = holes.iter().copied().find(|&h| fam.region_of(h) == Some(Region::U)).unwrap();
        let v1 = holes.iter().copied().find(|&h| fam.region_of(h) == Some(Region::V)).unwrap();
        if v1 == v0.offset(1, 1) {
            (PlanCase::DiagonalUv, uv, singles(&[v0.offset(1, 0), v1.offset(-1, 0)]))
        } else {
            (PlanCase::SplitUv, uv, vec![vec![Message::at(v0.offset(0, -1)), Message::at(v1.offset(-1, 0))]])
        }
    };
    let plan = MessagePlan::for_config(c, 0, region, groups);
    plan.validate()?;
    Ok(WitnessPlan { case, mirrored: false, plan })
}

/// The certificate attached to a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Pattern-preserving moves to a critical pair (value `2w + 1`).
    LowerChain { reason: LowerBoundReason, chain: CertificateChain },
    /// A verified witness plan (value `2w`).
    WitnessPlan { case: PlanCase, mirrored: bool, plan: MessagePlan, report: ConditionReport },
}

/// The minimum firing time of a two-hole configuration with its evidence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MftVerdict {
    pub w: i32,
    pub mft: u32,
    #[serde(rename = "type")]
    pub profile: HoleTypeProfile,
    #[serde(flatten)]
    pub certificate: Certificate,
}

/// Classifies `c` and attaches a verified certificate.
pub fn classify(c: &Configuration) -> Result<MftVerdict> {
    classify_with(c, None)
}

/// As [`classify`], taking lower-bound chains from a prebuilt index when one
/// of the right size is supplied.
pub fn classify_with(c: &Configuration, index: Option<&CertificateIndex>) -> Result<MftVerdict> {
    require_classifiable(c)?;
    let w = c.size();
    let p = type_of(c)?;
    if let Some(reason) = lower_bound_reason(c, &p) {
        let chain = match index.filter(|ix| ix.size() == w) {
            Some(ix) => ix.chain(c),
            None => lower_bound_certificate(c)?.ok(),
        }
        .ok_or_else(|| Error::CertificateFailed(format!("no move chain to a critical pair from {:?}", c.holes())))?;
        verify_certificate(c, &chain, false).map_err(Error::CertificateFailed)?;
        return Ok(MftVerdict {
            w,
            mft: 2 * w as u32 + 1,
            profile: p,
            certificate: Certificate::LowerChain { reason, chain },
        });
    }
    let witness = build_witness_plan(c)?;
    let report = check_c_conditions(&witness.plan, c)?;
    if !report.passed() {
        return Err(Error::CertificateFailed(format!(
            "{:?} plan for {:?} fails its conditions: {:?}",
            witness.case,
            c.holes(),
            report
        )));
    }
    if !run_message_plan(c, &witness.plan).fires_exactly_at(2 * w as u32) {
        return Err(Error::CertificateFailed(format!("{:?} plan does not fire {:?} at 2w", witness.case, c.holes())));
    }
    Ok(MftVerdict {
        w,
        mft: 2 * w as u32,
        profile: p,
        certificate: Certificate::WitnessPlan {
            case: witness.case,
            mirrored: witness.mirrored,
            plan: witness.plan,
            report,
        },
    })
}

/// One of the four hole geometries under which a node of `U∪V` may exceed
/// the distance bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceException {
    /// Holes at `v + (0, 1)`, `v + (1, 0)`; `v'` at the far corner `(w, w)`
    /// or next to it.
    BlockedNorthEast,
    /// `x = ⌊w/2⌋`, holes at `v − (1, 0)`, `v + (0, 1)`; `v'` at or next to
    /// `(0, w)` (even `w`), exactly `(0, w)` (odd `w`).
    BlockedWestNorth,
    /// `y = ⌊w/2⌋`, holes at `v − (0, 1)`, `v + (1, 0)`; `v'` at or next to
    /// `(w, 0)` (even `w`), exactly `(w, 0)` (odd `w`).
    BlockedSouthEast,
    /// Even `w`, `v = v_cnt`, holes at `v − (0, 1)`, `v − (1, 0)`; `v'` at or
    /// next to `(0, 0)`.
    BlockedSouthWest,
}

impl DistanceException {
    pub const ALL: [DistanceException; 4] = [
        DistanceException::BlockedNorthEast,
        DistanceException::BlockedWestNorth,
        DistanceException::BlockedSouthEast,
        DistanceException::BlockedSouthWest,
    ];

    /// Its number (1 to 4) in the list of exceptions.
    pub fn number(self) -> usize {
        self as usize + 1
    }

    /// Whether `(c, v, v')` has this geometry.
    pub fn matches(self, c: &Configuration, v: Position, v2: Position) -> bool {
        let w = c.size();
        let h = w / 2;
        let even = w % 2 == 0;
        let p = Position::new;
        let holes = |a: Position, b: Position| c.is_hole(a) && c.is_hole(b);
        match self {
            DistanceException::BlockedNorthEast => {
                holes(v.offset(0, 1), v.offset(1, 0)) && [p(w - 1, w), p(w, w - 1), p(w, w)].contains(&v2)
            }
            DistanceException::BlockedWestNorth => {
                v.x == h
                    && holes(v.offset(-1, 0), v.offset(0, 1))
                    && if even { [p(0, w - 1), p(1, w), p(0, w)].contains(&v2) } else { v2 == p(0, w) }
            }
            DistanceException::BlockedSouthEast => {
                v.y == h
                    && holes(v.offset(0, -1), v.offset(1, 0))
                    && if even { [p(w - 1, 0), p(w, 1), p(w, 0)].contains(&v2) } else { v2 == p(w, 0) }
            }
            DistanceException::BlockedSouthWest => {
                even && v == p(h, h)
                    && holes(v.offset(0, -1), v.offset(-1, 0))
                    && [p(1, 0), p(0, 1), p(0, 0)].contains(&v2)
            }
        }
    }
}

/// Outcome of the distance-bound check for one `(C, v, v')`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AppendixOutcome {
    /// `d_MH(v_gen, v) + d_C(v, v') ≤ 2w`.
    Holds,
    /// The bound fails and the configuration has the given exceptional
    /// geometry.
    Exception(DistanceException),
    /// The bound fails outside every listed geometry (a counterexample to the
    /// bound; never expected).
    Unexplained,
}

/// Every exceptional geometry matched by `(c, v, v')`.
pub fn matching_exceptions(c: &Configuration, v: Position, v2: Position) -> Vec<DistanceException> {
    DistanceException::ALL.into_iter().filter(|e| e.matches(c, v, v2)).collect()
}

fn appendix_preconditions(c: &Configuration, v: Position, v2: Position) -> Result<()> {
    let w = c.size();
    if c.k() != 2 {
        return Err(Error::PreconditionViolated(format!("expected 2 holes, found {}", c.k())));
    }
    if w < MIN_APPENDIX_SIZE {
        return Err(Error::PreconditionViolated(format!("size {w} is below {MIN_APPENDIX_SIZE}")));
    }
    if !matches!(crate::grid::region_of(w, v), Some(Region::U | Region::V)) {
        return Err(Error::PreconditionViolated(format!("{v} is not in U∪V")));
    }
    for q in [v, v2] {
        if !c.is_node(q) {
            return Err(Error::PreconditionViolated(format!("{q} is not a node")));
        }
    }
    Ok(())
}

fn appendix_outcome(c: &Configuration, v: Position, v2: Position, d: u32) -> AppendixOutcome {
    if mh_distance(V_GEN, v) + d <= 2 * c.size() as u32 {
        return AppendixOutcome::Holds;
    }
    match matching_exceptions(c, v, v2).first() {
        Some(&e) => AppendixOutcome::Exception(e),
        None => AppendixOutcome::Unexplained,
    }
}

/// Checks `d_MH(v_gen, v) + d_C(v, v') ≤ 2w` for a node `v ∈ U∪V` and names
/// the exceptional geometry when it fails.
pub fn thm_appendix_check(c: &Configuration, v: Position, v2: Position) -> Result<AppendixOutcome> {
    appendix_preconditions(c, v, v2)?;
    let d = c.bfs_distance(v, v2)?;
    Ok(appendix_outcome(c, v, v2, d))
}

/// All valid two-hole configurations of size `w`, in lexicographic order of
/// the hole pair.
pub fn two_hole_configurations(w: i32) -> Vec<Configuration> {
    let cells: Vec<Position> = (1..w).flat_map(|y| (1..w).map(move |x| Position::new(x, y))).collect();
    let mut out = Vec::new();
    for (i, &a) in cells.iter().enumerate() {
        for &b in &cells[i + 1..] {
            if let Ok(c) = validate(w as i64, &[a, b]) {
                out.push(c);
            }
        }
    }
    out
}

/// One disagreement found by [`appendix_sweep`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AppendixMismatch {
    pub config: Configuration,
    pub v: Position,
    pub v_prime: Position,
    pub bound_holds: bool,
    pub matched: Vec<DistanceException>,
}

/// Result of checking the distance bound over every configuration of one
/// size, every `v ∈ U∪V` and every `v'`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AppendixSweep {
    pub w: i32,
    pub configurations: usize,
    pub checked: u64,
    pub violations: u64,
    /// Violations per exception, in list order.
    pub by_exception: [u64; 4],
    /// Cases where the bound fails without exactly one matching geometry,
    /// or a geometry matches while the bound holds (at most 32 kept).
    pub mismatches: Vec<AppendixMismatch>,
    pub mismatch_count: u64,
}

impl AppendixSweep {
    /// Violations coincide exactly with the exceptional geometries.
    pub fn exact(&self) -> bool {
        self.mismatch_count == 0
    }
}

/// Exhaustive check of the distance bound for size `w`.
pub fn appendix_sweep(w: i32) -> AppendixSweep {
    const KEEP: usize = 32;
    let configs = two_hole_configurations(w);
    let fam = regions(w);
    let uv = fam.uv();
    let empty = || AppendixSweep {
        w,
        configurations: 0,
        checked: 0,
        violations: 0,
        by_exception: [0; 4],
        mismatches: Vec::new(),
        mismatch_count: 0,
    };
    let merge = |mut a: AppendixSweep, b: AppendixSweep| {
        a.configurations += b.configurations;
        a.checked += b.checked;
        a.violations += b.violations;
        for i in 0..4 {
            a.by_exception[i] += b.by_exception[i];
        }
        a.mismatch_count += b.mismatch_count;
        a.mismatches.extend(b.mismatches);
        a.mismatches.truncate(KEEP);
        a
    };
    configs
        .par_iter()
        .map(|c| {
            let mut s = empty();
            s.configurations = 1;
            for &v in uv.iter().filter(|&&v| c.is_node(v)) {
                let dist = c.distances_from(v);
                for v2 in c.nodes() {
                    s.checked += 1;
                    let d = dist.get(v2).expect("configurations are connected");
                    let holds = mh_distance(V_GEN, v) + d <= 2 * w as u32;
                    let matched = matching_exceptions(c, v, v2);
                    if !holds {
                        s.violations += 1;
                        if let [e] = matched[..] {
                            s.by_exception[e.number() - 1] += 1;
                        }
                    }
                    let consistent = if holds { matched.is_empty() } else { matched.len() == 1 };
                    if !consistent {
                        s.mismatch_count += 1;
                        if s.mismatches.len() < KEEP {
                            s.mismatches.push(AppendixMismatch {
                                config: c.clone(),
                                v,
                                v_prime: v2,
                                bound_holds: holds,
                                matched,
                            });
                        }
                    }
                }
            }
            s
        })
        .reduce(empty, merge)
}

/// Result of classifying and independently re-checking every configuration
/// of one size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossCertification {
    pub w: i32,
    pub configurations: usize,
    /// Verdicts `2w + 1`, each with a chain replayed and checked.
    pub lower: usize,
    /// Verdicts `2w`, each with a plan passing its conditions, firing at
    /// exactly `2w` in simulation, and with `max_t = 2w`.
    pub upper: usize,
    pub by_case: BTreeMap<PlanCase, usize>,
    pub mirrored: usize,
    /// Descriptions of failures (at most 32 kept).
    pub failures: Vec<String>,
    pub failure_count: usize,
}

impl CrossCertification {
    pub fn passed(&self) -> bool {
        self.failure_count == 0 && self.lower + self.upper == self.configurations
    }
}

enum Checked {
    Lower,
    Upper(PlanCase, bool),
    Failed(String),
}

fn cross_check(c: &Configuration, index: &CertificateIndex, check_equiv: bool) -> Checked {
    let w = c.size() as u32;
    let verdict = match classify_with(c, Some(index)) {
        Ok(v) => v,
        Err(e) => return Checked::Failed(format!("{:?}: {e}", c.holes())),
    };
    match verdict.certificate {
        Certificate::LowerChain { chain, .. } => {
            if verdict.mft != 2 * w + 1 {
                return Checked::Failed(format!("{:?}: chain attached to value {}", c.holes(), verdict.mft));
            }
            match verify_certificate(c, &chain, check_equiv) {
                Ok(()) => Checked::Lower,
                Err(e) => Checked::Failed(format!("{:?}: chain rejected: {e}", c.holes())),
            }
        }
        Certificate::WitnessPlan { case, mirrored, plan, report } => {
            if verdict.mft != 2 * w {
                return Checked::Failed(format!("{:?}: plan attached to value {}", c.holes(), verdict.mft));
            }
            if !report.c1_c5() {
                return Checked::Failed(format!("{:?}: plan conditions fail", c.holes()));
            }
            if !run_message_plan(c, &plan).fires_exactly_at(2 * w) {
                return Checked::Failed(format!("{:?}: plan does not fire at 2w", c.holes()));
            }
            if max_t(c) != 2 * w {
                return Checked::Failed(format!("{:?}: max_t is {} for a 2w verdict", c.holes(), max_t(c)));
            }
            Checked::Upper(case, mirrored)
        }
    }
}

/// Classifies every two-hole configuration of size `w` and re-verifies each
/// certificate independently. With `check_equiv`, every chain step is also
/// checked against the `≡'` relation at its witness corner.
pub fn cross_certify(w: i32, index: &CertificateIndex, check_equiv: bool) -> CrossCertification {
    const KEEP: usize = 32;
    let configs = two_hole_configurations(w);
    let results: Vec<Checked> = configs.par_iter().map(|c| cross_check(c, index, check_equiv)).collect();
    let mut out = CrossCertification {
        w,
        configurations: configs.len(),
        lower: 0,
        upper: 0,
        by_case: BTreeMap::new(),
        mirrored: 0,
        failures: Vec::new(),
        failure_count: 0,
    };
    for r in results {
        match r {
            Checked::Lower => out.lower += 1,
            Checked::Upper(case, mirrored) => {
                out.upper += 1;
                *out.by_case.entry(case).or_default() += 1;
                out.mirrored += usize::from(mirrored);
            }
            Checked::Failed(msg) => {
                out.failure_count += 1;
                if out.failures.len() < KEEP {
                    out.failures.push(msg);
                }
            }
        }
    }
    out
}
