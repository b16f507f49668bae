//! JSON reports for computations and claim checks.
//!
//! Every report has the shape
//! `{"claim": str, "status": "pass" | "fail" | "not-applicable", "witnesses": [...], "numbers": {...}}`.
//! Object keys are emitted in sorted order, so identical inputs give
//! byte-identical output.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::brick::{Brick, DEFAULT_FIBER_CAP};
use crate::element_set::{ElementSet, DEFAULT_BRUTE_CAP};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::heisenberg::HeisenbergGroup;
use crate::residue_set::ResidueSet;
use crate::structure::{
    count_center_cosets, good_pair_set, prop2_verify, small_period_example, structured_period_checked,
    th13_analysis, th1_certificate,
};
use crate::sumprod::{covers_field, solution_profile, SumProdInstance};

/// Relative tolerance between the Fourier and exact solution counts.
pub const FOURIER_REL_TOL: f64 = 1e-6;

/// Resource limits shared by all commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest |H_n| enumerated explicitly.
    pub brute: u128,
    /// Largest number of (u, v) slices enumerated.
    pub fibers: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { brute: DEFAULT_BRUTE_CAP, fibers: DEFAULT_FIBER_CAP }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub claim: String,
    pub status: Status,
    pub witnesses: Vec<Value>,
    pub numbers: BTreeMap<String, Value>,
}

impl Report {
    fn new(claim: impl Into<String>) -> Self {
        Report { claim: claim.into(), status: Status::Pass, witnesses: Vec::new(), numbers: BTreeMap::new() }
    }

    fn num(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.numbers.insert(key.to_string(), serde_json::to_value(v).expect("serializable"));
        self
    }

    /// 0 for pass or not-applicable, 1 for fail.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Fail => 1,
            _ => 0,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    /// Scalar entries of `numbers` as `key,value` lines.
    pub fn to_csv(&self) -> String {
        let status = serde_json::to_value(self.status).expect("serializable");
        let mut out = format!("key,value\nstatus,{}\n", status.as_str().unwrap_or_default());
        for (k, v) in &self.numbers {
            let cell = match v {
                Value::Number(x) => x.to_string(),
                Value::Bool(b) => b.to_string(),
                Value::String(s) => s.clone(),
                _ => continue,
            };
            out.push_str(&format!("{k},{cell}\n"));
        }
        out
    }
}

fn brick_json(b: &Brick) -> Value {
    serde_json::to_value(b.to_spec()).expect("serializable")
}

/// Turns an internal inconsistency into a failing report; other errors propagate.
fn inconsistency_as_failure(claim: &str, r: Result<Report>) -> Result<Report> {
    match r {
        Err(Error::Inconsistency(msg)) => {
            let mut rep = Report::new(claim);
            rep.status = Status::Fail;
            rep.witnesses.push(json!({ "inconsistency": msg }));
            Ok(rep)
        }
        other => other,
    }
}

/// B·B as a fibered set.
pub fn product_report(brick: &Brick, caps: Caps, dump_fibers: bool) -> Result<Report> {
    let sq = brick.square(caps.fibers)?;
    let mut r = Report::new("product set B·B");
    r.num("p", brick.p())
        .num("n", brick.n())
        .num("brick_cardinality", brick.cardinality().to_string())
        .num("product_cardinality", sq.cardinality())
        .num("support_size", sq.support_len())
        .num("projections", sq.projections());
    if dump_fibers {
        let fibers: Vec<Value> = sq.iter().map(|(s, f)| json!({ "u": s.u, "v": s.v, "w": f })).collect();
        r.num("fibers", fibers);
    }
    Ok(r)
}

/// Structured period of B·B, with the exhaustive stabilizer when affordable.
pub fn period_report(brick: &Brick, caps: Caps) -> Result<Report> {
    let claim = "structured period of B·B";
    inconsistency_as_failure(claim, (|| {
        let sq = brick.square(caps.fibers)?;
        let pr = structured_period_checked(&sq, caps.brute)?;
        let mut r = Report::new(claim);
        r.num("period", &pr.period)
            .num("period_order", pr.period_order)
            .num("invariant_directions", pr.invariant_directions.names())
            .num("full_stabilizer_order", pr.full_stabilizer_order)
            .num("product_cardinality", sq.cardinality());
        Ok(r)
    })())
}

/// Cosets of the center inside B·B compared with |B|/p.
///
/// Fails only when |Z| > p/2, where the count is guaranteed to reach |B|/p.
pub fn cosets_report(brick: &Brick, caps: Caps) -> Result<Report> {
    let claim = "B·B contains at least |B|/p cosets of the center";
    inconsistency_as_failure(claim, (|| {
        let sq = brick.square(caps.fibers)?;
        let rep = count_center_cosets(&sq, brick)?;
        let cert = th1_certificate(brick)?;
        let mut r = Report::new(claim);
        let big_z = 2 * brick.z().len() > brick.p() as usize;
        r.status = match (rep.meets_threshold, big_z) {
            (true, _) => Status::Pass,
            (false, true) => Status::Fail,
            (false, false) => Status::NotApplicable,
        };
        if r.status == Status::Fail {
            r.witnesses.push(brick_json(brick));
        }
        r.num("center_coset_count", rep.center_coset_count)
            .num("threshold_count", crate::structure::ratio_to_string(&rep.threshold_count))
            .num("meets_threshold", rep.meets_threshold)
            .num("z_exceeds_half", big_z)
            .num("certificate", &cert)
            .num("coset_witnesses", &rep.coset_witnesses);
        Ok(r)
    })())
}

/// Solution profile and coverage of mZ + Σ X_j·Y_j.
pub fn sumprod_report(inst: &SumProdInstance) -> Result<Report> {
    let claim = "mZ + Σ X_j·Y_j = F under |Z|²Π|X_j||Y_j| > p^(n+2)";
    inconsistency_as_failure(claim, (|| {
        let cov = covers_field(inst)?;
        let prof = solution_profile::<f64>(inst)?;
        let mut r = Report::new(claim);
        let agrees = prof.agrees(FOURIER_REL_TOL);
        r.status = if !agrees {
            Status::Fail
        } else if cov.covered {
            Status::Pass
        } else {
            Status::NotApplicable
        };
        if !agrees {
            r.witnesses.push(json!({ "fourier_deviation": prof.max_relative_deviation }));
        }
        if let Some(u) = cov.missed {
            r.witnesses.push(json!({ "missed_residue": u }));
        }
        r.num("covered", cov.covered)
            .num("condition_holds", cov.condition_holds)
            .num("condition_margin", &cov.condition_margin)
            .num("min_count", cov.min_count.to_string())
            .num("argmin", cov.argmin)
            .num("max_relative_deviation", prof.max_relative_deviation)
            .num("positivity_margin", inst.positivity_margin())
            .num("m", inst.m());
        Ok(r)
    })())
}

/// Certificate coset, the good-pair set E, and coset counts, over a list of bricks.
pub fn verify_th1(bricks: &[Brick], caps: Caps) -> Result<Report> {
    let claim = "popular-shift certificate and good pairs give cosets [a, b, F] inside B·B";
    let outcomes: Vec<Result<(bool, bool, Value)>> = bricks
        .par_iter()
        .map(|b| -> Result<(bool, bool, Value)> {
            let cert = match th1_certificate(b) {
                Err(Error::Inconsistency(msg)) => {
                    return Ok((true, true, json!({ "brick": brick_json(b), "inconsistency": msg })))
                }
                other => other?,
            };
            let e = match good_pair_set(b, caps.fibers) {
                Ok(e) => Some(e),
                Err(Error::CapExceeded { .. }) => None,
                Err(other) => return Err(other),
            };
            let mut failed = cert.fiber_full == Some(false);
            let mut applicable = cert.condition_holds;
            let mut detail = json!({ "brick": brick_json(b), "certificate": cert });
            if let Some(e) = &e {
                applicable |= e.size > 0;
                failed |= !e.non_full_members.is_empty() || e.meets_two_step_bound == Some(false);
                failed |= e.final_bound_hypothesis && !e.meets_final_bound;
                detail["good_pairs"] = json!({
                    "size": e.size,
                    "non_full_members": e.non_full_members,
                    "two_step_bound": e.two_step_bound_f64(),
                    "final_bound": e.final_bound,
                    "final_bound_hypothesis": e.final_bound_hypothesis,
                });
            }
            Ok((applicable, failed, detail))
        })
        .collect();
    let mut r = Report::new(claim);
    let (mut applicable, mut failures, mut certs) = (0usize, 0usize, 0usize);
    for (i, o) in outcomes.into_iter().enumerate() {
        let (app, failed, mut detail) = o?;
        applicable += app as usize;
        certs += (detail["certificate"]["condition_holds"] == json!(true)) as usize;
        if failed {
            failures += 1;
            detail["instance"] = json!(i);
            r.witnesses.push(detail);
        }
    }
    r.status = if failures > 0 {
        Status::Fail
    } else if applicable > 0 {
        Status::Pass
    } else {
        Status::NotApplicable
    };
    r.num("instances", bricks.len()).num("applicable", applicable).num("certificates", certs).num("failures", failures);
    Ok(r)
}

/// Growth-versus-period inequality and the (√2)^k growth over a list of bricks.
pub fn verify_th13(bricks: &[Brick], caps: Caps) -> Result<Report> {
    let claim = "|B·B|/|B| ≥ (1/4)(|B|/|G|)^(ln 3 / (2 ln p)) with B·B·G = B·B";
    let outcomes: Vec<Result<Value>> = bricks
        .par_iter()
        .map(|b| {
            let a = th13_analysis(b, caps.fibers, caps.brute)?;
            Ok(json!({
                "brick": brick_json(b),
                "passed": a.passed() && a.pinned_cosets_full != Some(false),
                "recipe_is_period": a.recipe_is_period,
                "recipe_brute_check": a.recipe_brute_check,
                "analysis": a,
            }))
        })
        .collect();
    let mut r = Report::new(claim);
    let (mut failures, mut recipe_findings, mut large) = (0usize, 0usize, 0usize);
    let mut min_slack = f64::INFINITY;
    let mut summary = Vec::with_capacity(bricks.len());
    for (i, o) in outcomes.into_iter().enumerate() {
        let mut v = match o {
            Err(Error::Inconsistency(msg)) => json!({ "brick": brick_json(&bricks[i]), "passed": false, "inconsistency": msg }),
            other => other?,
        };
        let a = &v["analysis"];
        summary.push(json!({
            "k": a["k"],
            "l": a["l"],
            "recipe_group": a["recipe_group"],
            "verified_period": a["verified_period"],
            "ratio": a["ratio"],
            "ratio_lower_bound": a["ratio_lower_bound"],
            "passed": v["passed"],
        }));
        if v["analysis"]["l"].as_u64().unwrap_or(0) >= 3 {
            large += 1;
        }
        if let (Some(ratio), Some(bound)) = (
            v["analysis"]["ratio"].as_str().map(parse_ratio),
            v["analysis"]["ratio_lower_bound"].as_f64(),
        ) {
            min_slack = min_slack.min(ratio / bound);
        }
        let recipe_ok = v["recipe_is_period"] != json!(false);
        if !recipe_ok {
            recipe_findings += 1;
        }
        if v["passed"] != json!(true) || !recipe_ok {
            if v["passed"] != json!(true) {
                failures += 1;
            }
            v["instance"] = json!(i);
            r.witnesses.push(v);
        }
    }
    r.status = if failures > 0 { Status::Fail } else { Status::Pass };
    r.num("instances", bricks.len())
        .num("failures", failures)
        .num("large_instances", large)
        .num("recipe_not_period", recipe_findings)
        .num("min_ratio_over_bound", if min_slack.is_finite() { Some(min_slack) } else { None })
        .num("per_instance", summary);
    Ok(r)
}

fn parse_ratio(s: &str) -> f64 {
    match s.split_once('/') {
        Some((a, b)) => a.parse::<f64>().unwrap_or(f64::NAN) / b.parse::<f64>().unwrap_or(f64::NAN),
        None => s.parse().unwrap_or(f64::NAN),
    }
}

/// The square of [R, R, Z] contains no coset of a nontrivial subgroup.
pub fn verify_prop2(p: u32, n: usize, caps: Caps) -> Result<Report> {
    let claim = "B·B for B = [R, R, Z] contains only cosets of the trivial subgroup";
    let rep = prop2_verify(p, n, caps.fibers, caps.brute)?;
    let mut r = Report::new(claim);
    r.status = if rep.passed() { Status::Pass } else { Status::Fail };
    if !rep.passed() {
        r.witnesses.push(json!({
            "w_is_full": rep.w_is_full,
            "full_line_u": rep.full_line_u,
            "full_line_v": rep.full_line_v,
            "cyclic_coset": rep.cyclic_coset_witness,
            "structured_period": rep.structured_period,
        }));
    }
    r.num("p", p)
        .num("n", n)
        .num("relaxed_brick", true)
        .num("cardinality", &rep.cardinality)
        .num("size_bound", crate::structure::ratio_to_string(&rep.size_bound))
        .num("size_bound_f64", crate::structure::ratio_to_f64(&rep.size_bound))
        .num("size_bound_ok", rep.size_bound_ok)
        .num("R", &rep.r)
        .num("Z", &rep.z)
        .num("W", &rep.projections.w)
        .num("w_is_full", rep.w_is_full)
        .num("product_cardinality", rep.product_cardinality)
        .num("brute_matches_fibered", rep.brute_matches_fibered)
        .num("brute_stabilizer_order", rep.brute_stabilizer_order)
        .num("cyclic_coset_witness", &rep.cyclic_coset_witness);
    Ok(r)
}

/// Square of [X, X, F] with X = {t : 4t² < p}: growth below 4, period the center.
pub fn verify_small_period(p: u32, caps: Caps) -> Result<Report> {
    let claim = "|B·B| < 4|B| and the period of B·B is the center";
    inconsistency_as_failure(claim, (|| {
        let rep = small_period_example(p, caps.fibers)?;
        let mut r = Report::new(claim);
        r.status = if rep.passed() { Status::Pass } else { Status::Fail };
        if !rep.passed() {
            r.witnesses.push(json!({ "period": rep.period.period, "ratio": crate::structure::ratio_to_string(&rep.ratio) }));
        }
        r.num("p", p)
            .num("relaxed_brick", true)
            .num("X", &rep.x)
            .num("cardinality", &rep.cardinality)
            .num("product_cardinality", rep.product_cardinality)
            .num("ratio", crate::structure::ratio_to_string(&rep.ratio))
            .num("period", &rep.period.period)
            .num("period_is_center", rep.period_is_center);
        Ok(r)
    })())
}

/// Group axioms, nilpotency, Cauchy–Davenport and both covering lemmas at (p, n).
pub fn verify_lemmas(p: u32, n: usize, seed: u64, caps: Caps) -> Result<Report> {
    let field = PrimeField::new(p)?;
    let group = HeisenbergGroup::new(&field, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut r = Report::new("group law, two-step nilpotency, Cauchy–Davenport and covering lemmas");
    let fail = |r: &mut Report, what: &str, w: Value| {
        r.status = Status::Fail;
        r.witnesses.push(json!({ "check": what, "witness": w }));
    };

    let order = group.order();
    let explicit = order.filter(|&o| o <= caps.brute).map(|_| ElementSet::full_group(&group, caps.brute)).transpose()?;

    // associativity: exhaustive when |H|³ is small, random triples otherwise
    let triples: Vec<_> = match (&explicit, order) {
        (Some(all), Some(o)) if o.pow(3) <= 20_000_000 => {
            let elems: Vec<_> = all.iter().collect();
            let mut v = Vec::with_capacity(elems.len().pow(3));
            for a in &elems {
                for b in &elems {
                    for c in &elems {
                        v.push((a.clone(), b.clone(), c.clone()));
                    }
                }
            }
            v
        }
        _ => (0..1000).map(|_| (group.random_element(&mut rng), group.random_element(&mut rng), group.random_element(&mut rng))).collect(),
    };
    let assoc_bad = triples.par_iter().find_first(|(a, b, c)| {
        let l = group.mul(&group.mul(a, b).unwrap(), c).unwrap();
        let rr = group.mul(a, &group.mul(b, c).unwrap()).unwrap();
        l != rr
    });
    r.num("associativity_triples", triples.len());
    if let Some(t) = assoc_bad {
        fail(&mut r, "associativity", json!(t));
    }

    let inverse_pool: Vec<_> = match &explicit {
        Some(all) => all.iter().collect(),
        None => (0..1000).map(|_| group.random_element(&mut rng)).collect(),
    };
    let e = group.identity();
    if let Some(a) = inverse_pool.iter().find(|a| {
        let ai = group.inv(a).unwrap();
        group.mul(a, &ai).unwrap() != e || group.mul(&ai, a).unwrap() != e
    }) {
        fail(&mut r, "inverse", json!(a));
    }
    r.num("inverse_checks", inverse_pool.len());

    let nil: Vec<_> = (0..10_000)
        .map(|_| (group.random_element(&mut rng), group.random_element(&mut rng), group.random_element(&mut rng)))
        .collect();
    if let Some(t) = nil.iter().find(|(a, b, c)| !group.nilpotency_check(a, b, c).unwrap()) {
        fail(&mut r, "nilpotency", json!(t));
    }
    r.num("nilpotency_triples", nil.len());

    // Cauchy–Davenport and |A| + |B| > p ⇒ A + B = F
    let (cd_pairs, cd_bad) = cauchy_davenport_sweep(&field, &mut rng);
    r.num("cauchy_davenport_pairs", cd_pairs).num("cauchy_davenport_exhaustive", p <= 11);
    if let Some(w) = cd_bad {
        fail(&mut r, "cauchy-davenport", w);
    }

    // |S| + |T| > |G| ⇒ S·T = G
    if let Some(all) = &explicit {
        let o = all.len();
        let elems: Vec<_> = all.iter().collect();
        let mut trials = 0;
        for _ in 0..10 {
            let s_len = rng.gen_range(1..o);
            let t_len = rng.gen_range(o - s_len + 1..=o);
            let pick = |k: usize, rng: &mut ChaCha8Rng| {
                let idx = rand::seq::index::sample(rng, o, k);
                ElementSet::from_elements(&group, caps.brute, idx.into_iter().map(|i| &elems[i]))
            };
            let s = pick(s_len, &mut rng)?;
            let t = pick(t_len, &mut rng)?;
            trials += 1;
            if !s.product(&t)?.is_full() {
                fail(&mut r, "covering lemma", json!({ "s_len": s_len, "t_len": t_len }));
                break;
            }
        }
        r.num("covering_lemma_trials", trials);
    }
    r.num("p", p).num("n", n).num("seed", seed);
    Ok(r)
}

/// Exhaustive over all pairs of nonempty subsets for p ≤ 11, 10^4 random pairs otherwise.
fn cauchy_davenport_sweep(field: &PrimeField, rng: &mut ChaCha8Rng) -> (u64, Option<Value>) {
    let p = field.p() as usize;
    let check = |a: &ResidueSet, b: &ResidueSet| -> Option<Value> {
        let s = a.sumset(b).expect("same field");
        let lower = (a.len() + b.len() - 1).min(p);
        let covering_ok = a.len() + b.len() <= p || s.is_full();
        (s.len() < lower || !covering_ok).then(|| json!({ "A": a, "B": b, "sum": s }))
    };
    if p <= 11 {
        let masks: Vec<u64> = (1..1u64 << p).collect();
        let bad = masks.par_iter().find_map_first(|&ma| {
            let a = ResidueSet::from_mask(field, ma);
            masks.iter().find_map(|&mb| check(&a, &ResidueSet::from_mask(field, mb)))
        });
        ((masks.len() * masks.len()) as u64, bad)
    } else {
        let mut bad = None;
        for _ in 0..10_000 {
            let a = ResidueSet::from_fn(field, |_| rng.gen_bool(0.3));
            let b = ResidueSet::from_fn(field, |_| rng.gen_bool(0.3));
            if a.is_empty() || b.is_empty() {
                continue;
            }
            if let Some(w) = check(&a, &b) {
                bad = Some(w);
                break;
            }
        }
        (10_000, bad)
    }
}
