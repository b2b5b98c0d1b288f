//! Subcommand implementations. Each returns an [`Outcome`] whose JSON value
//! is the documented output schema of the command.

use std::fmt::Write as _;
use std::io::Read as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};
use sqhole::barriers::{barrier_containing, maximal_barriers};
use sqhole::mft2::{self, MIN_CLASSIFY_SIZE};
use sqhole::shapes::{compute_ck, published_row, Budget};
use sqhole::sim::line::{initial_line, run_line, step_line, LineCell};
use sqhole::sim::plan::run_message_plan;
use sqhole::sim::sh1::run_sh1_with;
use sqhole::timebounds::{equiv_prime, lower_bound_certificate, max_t, pattern_move_equiv, t_formula, t_of};
use sqhole::{io, Certificate, CertificateIndex, Configuration, HalfPlane, MessagePlan, NotFound, Position};

use crate::failure::{CmdResult, Failure, Outcome};

/// Collects the bytes of every input document for the run digest.
#[derive(Default)]
pub struct Inputs {
    pub documents: Vec<Vec<u8>>,
}

impl Inputs {
    /// Reads a file, or standard input for `-`.
    pub fn read(&mut self, path: &Path) -> Result<String, Failure> {
        let mut bytes = Vec::new();
        if path.as_os_str() == "-" {
            std::io::stdin()
                .read_to_end(&mut bytes)
                .map_err(|e| Failure::Invalid(format!("cannot read standard input: {e}")))?;
        } else {
            bytes =
                std::fs::read(path).map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", path.display())))?;
        }
        let text = String::from_utf8(bytes.clone())
            .map_err(|_| Failure::Invalid(format!("{} is not UTF-8 text", path.display())))?;
        self.documents.push(bytes);
        Ok(text)
    }

    pub fn config(&mut self, path: &Path) -> Result<Configuration, Failure> {
        let text = self.read(path)?;
        io::parse_any(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("outputs always serialize")
}

pub fn validate(c: &Configuration, ascii: bool, canonical: bool) -> CmdResult {
    let value = json!({ "valid": true, "size": c.size(), "k": c.k(), "holes": c.holes() });
    if ascii {
        Ok(Outcome::with_text(value, io::to_ascii(c)))
    } else if canonical {
        Ok(Outcome::with_text(value, format!("{}\n", io::to_json(c))))
    } else {
        Ok(Outcome::json(value))
    }
}

fn line_char(c: &LineCell) -> char {
    if c.fire {
        'F'
    } else if c.general {
        'G'
    } else if c.is_quiescent() {
        '.'
    } else {
        '+'
    }
}

pub fn simulate_line(n: usize, trace: bool) -> CmdResult {
    if n == 0 {
        return Err(Failure::Invalid("a line has at least one cell".into()));
    }
    let run = run_line(n);
    let value = json!({
        "n": n,
        "fire_time": run.fire_time,
        "expected": if n == 1 { 0 } else { 2 * n - 2 },
        "distinct_states": run.distinct_states,
    });
    if !trace {
        return Ok(Outcome::json(value));
    }
    let mut text = String::new();
    let mut cells = initial_line(n);
    let last = run.fire_time.unwrap_or(3 * n as u32 + 8);
    for t in 0..=last {
        let row: String = cells.iter().map(line_char).collect();
        let _ = writeln!(text, "{t:>5} {row}");
        cells = step_line(&cells);
    }
    let _ = writeln!(text, "{value}");
    Ok(Outcome::with_text(value, text))
}

pub fn simulate_sh1(c: &Configuration, trace: bool) -> CmdResult {
    let mut frames = String::new();
    let run = run_sh1_with(c, |sim| {
        if trace {
            let _ = write!(frames, "t={}\n{}\n", sim.time(), sim.render());
        }
    })?;
    let fire = run.transcript.simultaneous_time();
    let value = json!({
        "w": c.size(),
        "k": c.k(),
        "fire_time": fire,
        "max_t": max_t(c),
        "minimal": fire == Some(max_t(c)) && run.transcript.first_fire_time() == fire,
        "corner_patch": run.diagnostics.corner_patch.len(),
    });
    if trace {
        let _ = writeln!(frames, "{value}");
        Ok(Outcome::with_text(value, frames))
    } else {
        Ok(Outcome::json(value))
    }
}

pub fn simulate_plan(c: &Configuration, plan_text: &str) -> CmdResult {
    let plan: MessagePlan =
        serde_json::from_str(plan_text).map_err(|e| Failure::Invalid(format!("malformed plan: {e}")))?;
    plan.validate()?;
    let transcript = run_message_plan(c, &plan);
    Ok(Outcome::json(json!({
        "w": c.size(),
        "plan_fire_time": plan.fire_time(),
        "fire_time": transcript.simultaneous_time(),
        "first_fire_time": transcript.first_fire_time(),
        "never_fires": transcript.never_fires(),
        "fires_exactly_at_plan_time": transcript.fires_exactly_at(plan.fire_time()),
    })))
}

pub fn barriers(c: &Configuration, as_json: bool) -> CmdResult {
    let rects = maximal_barriers(c);
    let arrays: Vec<[i32; 4]> = rects.iter().map(|r| r.as_array()).collect();
    let value = json!({ "maximal_barriers": arrays });
    if as_json {
        return Ok(Outcome::json(value));
    }
    let mut text = String::new();
    for [x0, y0, x1, y1] in &arrays {
        let _ = writeln!(text, "{x0} {y0} {x1} {y1}");
    }
    let _ = writeln!(text, "count {}", arrays.len());
    Ok(Outcome::with_text(value, text))
}

pub fn budget(allow_k7: bool) -> Budget {
    let b = Budget::from_env();
    if allow_k7 {
        b.allowing(7)
    } else {
        b
    }
}

pub fn ck(k: usize, budget: Budget, list_argmax: bool) -> CmdResult {
    let r = compute_ck(k, budget)?;
    let argmax = if list_argmax {
        Value::Array(
            r.argmax_pairs
                .iter()
                .map(|(s, p)| json!({ "width": s.width, "height": s.height, "mask": s.mask, "p": p }))
                .collect(),
        )
    } else {
        json!(r.argmax_pair_count)
    };
    Ok(Outcome::json(json!({
        "k": r.k,
        "c_k": r.c_k,
        "shapes": r.shape_count,
        "pairs": r.pair_count,
        "argmax_pairs": argmax,
    })))
}

pub fn tvc(c: &Configuration, as_json: bool) -> CmdResult {
    let w = c.size();
    let mut grid = Vec::new();
    for y in (0..=w).rev() {
        let row: Vec<Option<u32>> = (0..=w)
            .map(|x| {
                let p = Position::new(x, y);
                c.is_node(p).then(|| t_of(c, p)).transpose()
            })
            .collect::<Result<_, _>>()?;
        grid.push(row);
    }
    let m = max_t(c);
    let value = json!({ "w": w, "max_t": m, "t": grid });
    if as_json {
        return Ok(Outcome::json(value));
    }
    let width = m.to_string().len();
    let mut text = format!("max_t {m}\n");
    for row in &grid {
        let cells: Vec<String> = row
            .iter()
            .map(|t| match t {
                Some(t) => format!("{t:>width$}"),
                None => format!("{:>width$}", "#"),
            })
            .collect();
        let _ = writeln!(text, "{}", cells.join(" "));
    }
    Ok(Outcome::with_text(value, text))
}

pub fn classify(c: &Configuration, full: bool) -> CmdResult {
    if c.size() < MIN_CLASSIFY_SIZE {
        return Err(Failure::Invalid(format!(
            "UNSUPPORTED_SIZE: the classifier covers w >= {MIN_CLASSIFY_SIZE} (got w = {})",
            c.size()
        )));
    }
    let verdict = mft2::classify(c)?;
    if full {
        return Ok(Outcome::json(to_value(&verdict)));
    }
    let mut value = json!({
        "w": verdict.w,
        "mft": verdict.mft,
        "type": verdict.profile,
    });
    let extra = match &verdict.certificate {
        Certificate::LowerChain { reason, chain } => json!({
            "kind": "lower_chain",
            "reason": reason,
            "steps": chain.steps.len(),
        }),
        Certificate::WitnessPlan { case, mirrored, report, .. } => json!({
            "kind": "witness_plan",
            "case": case,
            "mirrored": mirrored,
            "conditions_passed": report.passed(),
        }),
    };
    if let (Value::Object(v), Value::Object(e)) = (&mut value, extra) {
        v.extend(e);
    }
    Ok(Outcome::json(value))
}

pub fn certify(c: &Configuration) -> CmdResult {
    match lower_bound_certificate(c)? {
        Ok(chain) => {
            sqhole::timebounds::verify_certificate(c, &chain, true).map_err(Failure::Internal)?;
            Ok(Outcome::json(json!({ "status": "FOUND", "chain": chain })))
        }
        Err(reason) => {
            let explored = match reason {
                NotFound::Exhausted { explored } | NotFound::DepthCap { explored, .. } => explored,
            };
            Ok(Outcome::not_found(json!({ "status": "NOT_FOUND", "reason": reason, "explored": explored })))
        }
    }
}

pub fn parse_half_plane(s: &str) -> Result<HalfPlane, String> {
    HalfPlane::ALL
        .into_iter()
        .find(|h| h.to_string().eq_ignore_ascii_case(s))
        .ok_or_else(|| format!("expected H0, H1 or H2, got {s:?}"))
}

pub fn parse_position(s: &str) -> Result<Position, String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected x,y, got {s:?}"))?;
    let x = x.trim().parse().map_err(|_| format!("bad x coordinate in {s:?}"))?;
    let y = y.trim().parse().map_err(|_| format!("bad y coordinate in {s:?}"))?;
    Ok(Position::new(x, y))
}

pub fn equiv(
    c1: &Configuration,
    c2: &Configuration,
    t: Option<u32>,
    v: Option<Position>,
    half_plane: Option<HalfPlane>,
) -> CmdResult {
    let mut out = serde_json::Map::new();
    match (t, v) {
        (Some(t), Some(v)) => {
            out.insert("t".into(), json!(t));
            out.insert("v".into(), json!(v));
            out.insert("equiv".into(), json!(equiv_prime(c1, c2, t, v)?));
        }
        (None, None) => {}
        _ => return Err(Failure::Invalid("--t and --v must be given together".into())),
    }
    if let Some(hp) = half_plane {
        out.insert("half_plane".into(), json!(hp));
        out.insert("pattern_equal".into(), json!(pattern_move_equiv(c1, c2, hp)?));
    }
    if out.is_empty() {
        return Err(Failure::Invalid("give --t with --v, or --half-plane".into()));
    }
    Ok(Outcome::json(Value::Object(out)))
}

/// Output format of `repro-tables`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum TableFormat {
    Markdown,
    Json,
}

pub fn repro_tables(ks: &[usize], budget: Budget, format: TableFormat) -> CmdResult {
    // Check every k up front so a refused row fails before any work starts.
    for &k in ks {
        if k < 2 {
            return Err(Failure::Invalid(format!("k = {k} is outside the table range 2..7")));
        }
        budget.check(k)?;
    }
    let mut rows = Vec::new();
    let mut md = String::from(
        "| k | c_k | shapes | pairs | argmax | published c_k | published shapes | published pairs | published argmax | match |\n\
         |---|---|---|---|---|---|---|---|---|---|\n",
    );
    for &k in ks {
        let r = compute_ck(k, budget)?;
        let published = published_row(k);
        let matches = published.is_some_and(|p| {
            p.c_k == r.c_k
                && p.shapes == r.shape_count
                && p.pairs == r.pair_count
                && p.argmax_pairs == r.argmax_pair_count
        });
        let cell = |v: Option<String>| v.unwrap_or_else(|| "-".into());
        let _ = writeln!(
            md,
            "| {k} | {} | {} | {} | {} | {} | {} | {} | {} | {} |",
            r.c_k,
            r.shape_count,
            r.pair_count,
            r.argmax_pair_count,
            cell(published.map(|p| p.c_k.to_string())),
            cell(published.map(|p| p.shapes.to_string())),
            cell(published.map(|p| p.pairs.to_string())),
            cell(published.map(|p| p.argmax_pairs.to_string())),
            if matches { "yes" } else { "no" },
        );
        rows.push(json!({
            "k": k,
            "computed": { "c_k": r.c_k, "shapes": r.shape_count, "pairs": r.pair_count, "argmax_pairs": r.argmax_pair_count },
            "published": published.map(|p| json!({
                "c_k": p.c_k, "shapes": p.shapes, "pairs": p.pairs, "argmax_pairs": p.argmax_pairs,
            })),
            "match": matches,
        }));
    }
    let all_match = rows.iter().all(|r| r["match"] == json!(true));
    let value = json!({ "rows": rows, "all_match": all_match });
    match format {
        TableFormat::Json => Ok(Outcome::json(value)),
        TableFormat::Markdown => Ok(Outcome::with_text(value, md)),
    }
}

fn require_classify_size(w: i32) -> Result<(), Failure> {
    if w < MIN_CLASSIFY_SIZE {
        return Err(Failure::Invalid(format!("UNSUPPORTED_SIZE: sweeps cover w >= {MIN_CLASSIFY_SIZE} (got {w})")));
    }
    Ok(())
}

/// Exhaustive two-hole cross-certification at size `w`.
pub fn sweep_certify(w: i32, check_equiv: bool) -> CmdResult {
    require_classify_size(w)?;
    let index = CertificateIndex::build(w);
    let report = mft2::cross_certify(w, &index, check_equiv);
    let mut out = Outcome::json(to_value(&report));
    if !report.passed() {
        out.code = crate::failure::EXIT_INTERNAL;
    }
    Ok(out)
}

/// Exhaustive check of the distance bound and its exceptions at size `w`.
pub fn sweep_appendix(w: i32) -> CmdResult {
    if w < mft2::MIN_APPENDIX_SIZE {
        return Err(Failure::Invalid(format!(
            "the distance bound is stated for w >= {} (got {w})",
            mft2::MIN_APPENDIX_SIZE
        )));
    }
    let report = mft2::appendix_sweep(w);
    let mut out = Outcome::json(to_value(&report));
    if !report.exact() {
        out.code = crate::failure::EXIT_INTERNAL;
    }
    Ok(out)
}

/// Random `k`-hole configurations of size `w` drawn from `seed`; for every
/// node inside a maximal barrier the closed-form bound must equal the
/// distance-based `T`.
pub fn sweep_formula(w: i32, k: usize, samples: usize, seed: u64) -> CmdResult {
    if w < 2 {
        return Err(Failure::Invalid(format!("size must be at least 2 (got {w})")));
    }
    let interior: Vec<Position> = (1..w).flat_map(|y| (1..w).map(move |x| Position::new(x, y))).collect();
    if k > interior.len() {
        return Err(Failure::Invalid(format!("{k} holes do not fit in size {w}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut configs = Vec::with_capacity(samples);
    let mut rejected = 0usize;
    while configs.len() < samples {
        let holes: Vec<Position> = interior.choose_multiple(&mut rng, k).copied().collect();
        match sqhole::grid::validate(w as i64, &holes) {
            Ok(c) => configs.push(c),
            Err(_) => {
                rejected += 1;
                if rejected > 100 * samples.max(1) {
                    return Err(Failure::Invalid("almost every draw disconnects the square".into()));
                }
            }
        }
    }
    let results: Vec<(usize, Vec<Value>)> = configs
        .par_iter()
        .map(|c| {
            let rects = maximal_barriers(c);
            let mut checked = 0;
            let mut bad = Vec::new();
            for v in c.nodes() {
                if barrier_containing(&rects, v).is_none() {
                    continue;
                }
                checked += 1;
                let f = t_formula(c, v);
                let t = t_of(c, v);
                if !matches!((&f, &t), (Ok(f), Ok(t)) if *f == *t as i64) {
                    bad.push(json!({ "config": c, "v": v, "formula": f.ok(), "t": t.ok() }));
                }
            }
            (checked, bad)
        })
        .collect();
    let checked: usize = results.iter().map(|r| r.0).sum();
    let mismatches: Vec<Value> = results.into_iter().flat_map(|r| r.1).collect();
    let mut out = Outcome::json(json!({
        "w": w,
        "k": k,
        "samples": samples,
        "seed": seed,
        "rejected_draws": rejected,
        "barrier_nodes_checked": checked,
        "mismatches": mismatches,
    }));
    if !mismatches.is_empty() {
        out.code = crate::failure::EXIT_INTERNAL;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(w: i64, holes: &[(i32, i32)]) -> Configuration {
        Configuration::new(w, holes).unwrap()
    }

    #[test]
    fn parsers_accept_documented_forms() {
        assert_eq!(parse_position("3, 4"), Ok(Position::new(3, 4)));
        assert!(parse_position("3;4").is_err());
        assert_eq!(parse_half_plane("h1"), Ok(HalfPlane::H1));
        assert!(parse_half_plane("H3").is_err());
    }

    #[test]
    fn ck_two_matches_table_row() {
        let out = ck(2, Budget::default(), false).unwrap();
        assert_eq!(out.value, json!({"k":2,"c_k":1,"shapes":5,"pairs":4,"argmax_pairs":2}));
    }

    #[test]
    fn classify_rejects_small_sizes() {
        let err = classify(&cfg(9, &[(2, 2), (5, 5)]), false).unwrap_err();
        assert!(err.message().starts_with("UNSUPPORTED_SIZE"));
    }

    #[test]
    fn tvc_grid_is_north_first_with_holes_null() {
        let out = tvc(&cfg(3, &[(1, 2)]), true).unwrap();
        let grid = out.value["t"].as_array().unwrap();
        assert_eq!(grid.len(), 4);
        assert_eq!(grid[1][1], Value::Null);
        let max = grid.iter().flat_map(|r| r.as_array().unwrap()).filter_map(Value::as_u64).max();
        assert_eq!(max, out.value["max_t"].as_u64());
        assert_eq!(grid.iter().flat_map(|r| r.as_array().unwrap()).filter(|t| t.is_null()).count(), 1);
    }

    #[test]
    fn formula_sweep_is_seed_deterministic() {
        let a = sweep_formula(8, 3, 20, 7).unwrap().value;
        let b = sweep_formula(8, 3, 20, 7).unwrap().value;
        assert_eq!(a, b);
        assert_eq!(a["mismatches"], json!([]));
    }
}
