//! The battery of checks behind `lcs-lab verify` and the acceptance run.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::almost_law::{
    certify_pair, run_decay, seed_search, silver_ratio, DecayConfig, EstimateBudget,
    SeedSearchConfig, DEFAULT_NET_BUDGET,
};
use crate::construction::{build_default, check_identities, check_lengths, check_no_cancellation};
use crate::error::Result;
use crate::girth::{beta_bracket, check_nielsen_reduced, nielsen_reduce_traced, verify_three_x};
use crate::magnus::{lcs_depth, lcs_depth_profile, Depth, NcSeries};
use crate::quotient::{FreeAbelian2, PermQuotient};
use crate::search::{alpha, compare_printed, constants, Outcome, SearchReport, SearchSpec};
use crate::word::ReducedWord;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    Skipped,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
            Status::Skipped => "SKIPPED",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub status: Status,
    pub detail: String,
    pub data: Value,
    pub elapsed_secs: f64,
    pub limit_secs: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub construction_levels: usize,
    pub identity_levels: usize,
    pub depth_truncation: usize,
    pub law_pairs: usize,
    pub law_max_len: usize,
    pub law_truncation: usize,
    pub alpha_max_len: usize,
    pub agreement_max_len: usize,
    pub girth_max_len: usize,
    pub beta_max_len: usize,
    pub checkpoint: Option<PathBuf>,
    pub nielsen_lists: usize,
    pub nielsen_max_gens: usize,
    pub nielsen_max_len: usize,
    pub seed_max_len: usize,
    pub seed_panel: usize,
    pub samples: usize,
    pub polish_steps: usize,
    pub certify_eps: f64,
    pub net_budget: u64,
    pub decay_levels: usize,
    /// Per-check wall-clock budget for searches; exceeding it skips the check.
    pub budget_seconds: Option<f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 1,
            construction_levels: 14,
            identity_levels: 12,
            depth_truncation: 13,
            law_pairs: 1000,
            law_max_len: 12,
            law_truncation: 8,
            alpha_max_len: 16,
            agreement_max_len: 10,
            girth_max_len: 20,
            beta_max_len: 14,
            checkpoint: None,
            nielsen_lists: 500,
            nielsen_max_gens: 5,
            nielsen_max_len: 8,
            seed_max_len: 16,
            seed_panel: 64,
            samples: 10_000,
            polish_steps: 200,
            certify_eps: 0.01,
            net_budget: DEFAULT_NET_BUDGET,
            decay_levels: 8,
            budget_seconds: None,
        }
    }
}

impl VerifyConfig {
    fn spec(&self, max_len: usize) -> SearchSpec {
        SearchSpec::new(max_len).with_time_budget(self.budget_seconds.map(Duration::from_secs_f64))
    }
}

pub const CRITERIA: [(u8, &str, f64); 11] = [
    (1, "construction lengths", 10.0),
    (2, "no cancellation", 10.0),
    (3, "commutator identities", 30.0),
    (4, "magnus depths", 300.0),
    (5, "depth laws", 120.0),
    (6, "alpha table", 600.0),
    (7, "derived girth tripling", 600.0),
    (8, "beta(2) bracket", 1800.0),
    (9, "nielsen reduction", 120.0),
    (10, "almost law decay", 600.0),
    (11, "printed constants", 1.0),
];

struct Verdict {
    status: Status,
    detail: String,
    data: Value,
}

fn verdict(ok: bool, detail: String, data: Value) -> Verdict {
    Verdict {
        status: if ok { Status::Pass } else { Status::Fail },
        detail,
        data,
    }
}

/// Status of a search that was meant to find something.
fn search_status(r: &SearchReport) -> Option<Status> {
    match r.outcome {
        Outcome::Found => None,
        Outcome::Interrupted => Some(Status::Skipped),
        Outcome::NotFoundBelow => Some(Status::Inconclusive),
    }
}

fn lengths(cfg: &VerifyConfig) -> Result<Verdict> {
    let n = cfg.construction_levels;
    let seq = build_default(n)?;
    let table = check_lengths(&seq, n)?;
    let first: Vec<usize> = (0..=2.min(n)).map(|i| seq.b(i).len()).collect();
    let violations = table.violations();
    let ok = first == [1, 4, 14][..first.len()] && violations.is_empty();
    let equality = table.rows.iter().all(|r| r.recurrence_equality.unwrap_or(true));
    Ok(verdict(
        ok,
        format!(
            "l(b0..b2) = {first:?}, l(b{n}) = {}, violations {violations:?}, recurrence tight: {equality}",
            seq.b(n).len()
        ),
        serde_json::to_value(&table)?,
    ))
}

fn no_cancellation(cfg: &VerifyConfig) -> Result<Verdict> {
    let n = cfg.construction_levels;
    let seq = build_default(n)?;
    let bad: Vec<usize> = (0..=n).filter(|&i| !check_no_cancellation(&seq, i).holds).collect();
    Ok(verdict(
        bad.is_empty(),
        format!("8 products at levels 0..={n}, failing levels {bad:?}"),
        json!({ "failing_levels": bad }),
    ))
}

fn identities(cfg: &VerifyConfig) -> Result<Verdict> {
    let n = cfg.identity_levels;
    let seq = build_default(n)?;
    let mut bad = Vec::new();
    let mut reports = Vec::new();
    for i in 2..=n {
        let r = check_identities(&seq, i)?;
        if !r.all_hold() {
            bad.push(i);
        }
        reports.push(r);
    }
    Ok(verdict(
        bad.is_empty() && seq.verify_derivation(),
        format!("levels 2..={n}, failing levels {bad:?}"),
        serde_json::to_value(&reports)?,
    ))
}

fn depths(cfg: &VerifyConfig) -> Result<Verdict> {
    let d = cfg.depth_truncation;
    let seq = build_default(3)?;
    let gamma: Vec<Depth> = (0..=3)
        .map(|i| lcs_depth_profile::<num_bigint::BigInt>(seq.b(i), d).map(|p| p.depth))
        .collect::<Result<_>>()?;
    let mut ok = gamma[0] == Depth::Exact(1)
        && gamma[1] == Depth::Exact(2)
        && gamma[2].lower_bound() >= 5
        && gamma[3].lower_bound() >= 12;
    for n in 2..=3 {
        if let (Some(g), Some(g1), Some(g2)) = (gamma[n].exact(), gamma[n - 1].exact(), gamma[n - 2].exact()) {
            ok &= g >= 2 * g1 + g2;
        }
    }
    let shown: Vec<String> = gamma.iter().map(ToString::to_string).collect();
    Ok(verdict(
        ok,
        format!("gamma(b0..b3) at D={d}: {}", shown.join(", ")),
        serde_json::to_value(&gamma)?,
    ))
}

fn depth_laws(cfg: &VerifyConfig) -> Result<Verdict> {
    let d = cfg.law_truncation;
    let cap = d as u32 + 1;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut failures: Vec<String> = Vec::new();
    for _ in 0..cfg.law_pairs {
        let lu = rng.random_range(0..=cfg.law_max_len);
        let lv = rng.random_range(0..=cfg.law_max_len);
        let u = ReducedWord::random(&mut rng, lu);
        let v = ReducedWord::random(&mut rng, lv);
        let (du, dv) = (lcs_depth(&u, d)?, lcs_depth(&v, d)?);
        let product = lcs_depth(&u.mul(&v), d)?;
        let comm = lcs_depth(&u.commutator(&v), d)?;
        let conj = lcs_depth(&u.conjugate_by(&v), d)?;
        let hom = NcSeries::<num_bigint::BigInt>::expand(&u.mul(&v), d)?
            == NcSeries::expand(&u, d)?.mul(&NcSeries::expand(&v, d)?)?;
        let checks = [
            ("product", product.lower_bound() >= du.lower_bound().min(dv.lower_bound())),
            (
                "commutator",
                comm.lower_bound() >= du.lower_bound().saturating_add(dv.lower_bound()).min(cap),
            ),
            ("conjugation", conj == du),
            ("homomorphism", hom),
        ];
        for (name, ok) in checks {
            if !ok {
                failures.push(format!("{name} at ({u}, {v})"));
            }
        }
    }
    Ok(verdict(
        failures.is_empty(),
        format!("{} pairs, length <= {}, D={d}, {} failures", cfg.law_pairs, cfg.law_max_len, failures.len()),
        json!({ "failures": failures.iter().take(20).collect::<Vec<_>>() }),
    ))
}

fn alpha_table(cfg: &VerifyConfig) -> Result<Verdict> {
    let mut values = Vec::new();
    let mut data = Vec::new();
    for n in 1..=4 {
        let e = alpha(n, n.max(2), &cfg.spec(cfg.alpha_max_len))?;
        if let Some(s) = search_status(&e.search) {
            return Ok(Verdict {
                status: s,
                detail: format!("alpha({n}) not found below {}", e.exhausted_below),
                data: serde_json::to_value(&e)?,
            });
        }
        values.push(e.value.unwrap_or(0));
        data.push(serde_json::to_value(&e)?);
    }
    let mut disagree = Vec::new();
    for n in 1..=4 {
        let spec = cfg.spec(cfg.agreement_max_len);
        let pruned = alpha(n, n.max(2), &spec)?.search;
        let plain = alpha(n, n.max(2), &spec.clone().unpruned())?.search;
        if pruned.outcome == Outcome::Interrupted || plain.outcome == Outcome::Interrupted {
            return Ok(Verdict {
                status: Status::Skipped,
                detail: format!("agreement search for alpha({n}) ran out of time"),
                data: json!(data),
            });
        }
        if pruned.length() != plain.length() || pruned.exhausted_below != plain.exhausted_below {
            disagree.push(n);
        }
    }
    let ok = values[0] == 1
        && values[1] == 4
        && values.iter().enumerate().all(|(i, &a)| a > i)
        && values[3] <= values[1] * values[1]
        && disagree.is_empty();
    Ok(verdict(
        ok,
        format!(
            "alpha(1..4) = {values:?}; pruned/unpruned up to {} disagree at {disagree:?}",
            cfg.agreement_max_len
        ),
        json!(data),
    ))
}

fn three_x(cfg: &VerifyConfig) -> Result<Verdict> {
    let spec = cfg.spec(cfg.girth_max_len);
    let reports = vec![
        verify_three_x(&FreeAbelian2::new(), &spec)?,
        verify_three_x(&PermQuotient::parse("a=(1 2);b=(2 3)")?, &spec)?,
        verify_three_x(&PermQuotient::parse("a=(1 2);b=(3 4)")?, &spec)?,
    ];
    let mut status = Status::Pass;
    let mut rows = Vec::new();
    for r in &reports {
        let exact = r.lambda.exact && r.derived.exact;
        let s = match (r.holds, exact) {
            (Some(false), _) => Status::Fail,
            (Some(true), true) => Status::Pass,
            _ if r.lambda.outcome == Outcome::Interrupted || r.derived.outcome == Outcome::Interrupted => {
                Status::Skipped
            }
            _ => Status::Inconclusive,
        };
        if s != Status::Pass && status != Status::Fail {
            status = s;
        }
        rows.push(format!(
            "{}: {:?} vs {:?}",
            r.quotient, r.lambda.girth, r.derived.girth
        ));
    }
    Ok(Verdict {
        status,
        detail: rows.join("; "),
        data: serde_json::to_value(&reports)?,
    })
}

fn beta_two(cfg: &VerifyConfig) -> Result<Verdict> {
    let path = cfg
        .checkpoint
        .clone()
        .unwrap_or_else(|| std::env::temp_dir().join(format!("lcs-lab-beta2-{}.ckpt", std::process::id())));
    let spec = cfg.spec(cfg.beta_max_len).with_checkpoint(&path);
    let r = beta_bracket(2, &spec)?;
    let written = path.exists();
    if cfg.checkpoint.is_none() {
        let _ = std::fs::remove_file(&path);
    }
    let data = serde_json::to_value(&r)?;
    match r.exact {
        Some(b) => Ok(verdict(
            (9..=14).contains(&b) && r.consistent() && written,
            format!(
                "beta(2) = {b} (witness {}), bracket [{}, {}], checkpoint written: {written}",
                r.witness.as_ref().map_or(String::new(), ToString::to_string),
                r.lower,
                r.upper
            ),
            data,
        )),
        None => {
            let s = r.search.as_ref().map_or(Status::Inconclusive, |g| {
                if g.outcome == Outcome::Interrupted {
                    Status::Skipped
                } else {
                    Status::Inconclusive
                }
            });
            Ok(Verdict {
                status: s,
                detail: format!("no member found up to length {}", cfg.beta_max_len),
                data,
            })
        }
    }
}

fn nielsen(cfg: &VerifyConfig) -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(9));
    let mut failures = Vec::new();
    let mut steps = 0;
    for _ in 0..cfg.nielsen_lists {
        let k = rng.random_range(1..=cfg.nielsen_max_gens);
        let gens: Vec<ReducedWord> = (0..k)
            .map(|_| {
                let len = rng.random_range(0..=cfg.nielsen_max_len);
                ReducedWord::random(&mut rng, len)
            })
            .collect();
        let r = nielsen_reduce_traced(&gens)?;
        steps += r.steps;
        let reduced = check_nielsen_reduced(&r.basis).is_none();
        if !reduced || !r.verify_same_subgroup(&gens) {
            let shown: Vec<String> = gens.iter().map(ToString::to_string).collect();
            failures.push(shown.join(","));
        }
    }
    Ok(verdict(
        failures.is_empty(),
        format!("{} lists, {steps} transformations, {} failures", cfg.nielsen_lists, failures.len()),
        json!({ "failures": failures }),
    ))
}

fn almost_law(cfg: &VerifyConfig) -> Result<Verdict> {
    let budget = EstimateBudget {
        samples: cfg.samples,
        polish_steps: cfg.polish_steps,
    };
    let search_cfg = SeedSearchConfig {
        max_len: cfg.seed_max_len,
        panel: cfg.seed_panel,
        top: 8,
        budget,
        seed: cfg.seed,
    };
    let report = seed_search(&search_cfg)?;
    let best = report.best.first();
    let pair = certify_pair(&report, cfg.certify_eps, cfg.net_budget)?;
    let Some(((w, bw), (v, bv))) = pair else {
        return Ok(verdict(
            false,
            format!(
                "no certified seeds: {} of {} word classes up to length {} have a sampled value above 1/3; smallest sampled L is {:.6} at {}",
                report.ruled_out,
                report.candidates,
                cfg.seed_max_len,
                best.map_or(f64::NAN, |c| c.best_lower()),
                best.map_or(String::new(), |c| c.word.to_string()),
            ),
            serde_json::to_value(&report)?,
        ));
    };
    let mut dc = DecayConfig::new(cfg.decay_levels);
    dc.budget = budget;
    dc.seed = cfg.seed;
    let t = run_decay((&w, &v), (&bw, &bv), &dc)?;
    let inequality = t
        .rows
        .iter()
        .all(|r| r.minus_log_2upper >= t.fit.d_hat * silver_ratio().powi(r.n as i32));
    let ok = t.fit.d_hat > 0.0
        && inequality
        && t.all_sound()
        && t.nontrivial
        && (0.6..=0.8).contains(&t.fit.exponent);
    Ok(verdict(
        ok,
        format!(
            "seeds {w}, {v}: D = {:.4}, exponent = {:.4}, sound: {}",
            t.fit.d_hat,
            t.fit.exponent,
            t.all_sound()
        ),
        serde_json::to_value(&t)?,
    ))
}

/// Digits printed for each constant, with `,` kept where it was printed.
pub const PRINTED: [(&str, &str); 5] = [
    ("mu", "3,56155"),
    ("nu", "1,44115577304"),
    ("delta", "0,69391"),
    ("log2_3", "1.5849"),
    ("beta_upper", "1.8325"),
];

fn printed_constants(_: &VerifyConfig) -> Result<Verdict> {
    let all = constants();
    let mut ok = true;
    let mut rows = Vec::new();
    let mut shown = Vec::new();
    for (name, printed) in PRINTED {
        let value = all.iter().find(|c| c.name == name).map_or(f64::NAN, |c| c.value);
        let m = compare_printed(value, printed);
        ok &= m.matches;
        if !m.matches {
            shown.push(format!("{name}: printed {printed}, computed {value:.12}"));
        }
        rows.push(json!({ "name": name, "value": value, "comparison": m }));
    }
    Ok(verdict(
        ok,
        if shown.is_empty() {
            "all printed digits reproduced".to_string()
        } else {
            format!("mismatch: {}", shown.join("; "))
        },
        json!(rows),
    ))
}

/// Runs one criterion by number.
pub fn verify_one(cfg: &VerifyConfig, id: u8) -> CriterionResult {
    let (_, name, limit) = CRITERIA[(id as usize).clamp(1, 11) - 1];
    let start = Instant::now();
    let out = match id {
        1 => lengths(cfg),
        2 => no_cancellation(cfg),
        3 => identities(cfg),
        4 => depths(cfg),
        5 => depth_laws(cfg),
        6 => alpha_table(cfg),
        7 => three_x(cfg),
        8 => beta_two(cfg),
        9 => nielsen(cfg),
        10 => almost_law(cfg),
        _ => printed_constants(cfg),
    };
    let elapsed = start.elapsed().as_secs_f64();
    let mut v = out.unwrap_or_else(|e| Verdict {
        status: Status::Fail,
        detail: format!("error: {e}"),
        data: Value::Null,
    });
    if v.status == Status::Pass && elapsed > limit {
        v.status = Status::Fail;
        v.detail = format!("{} (took {elapsed:.2}s, limit {limit}s)", v.detail);
    }
    CriterionResult {
        id,
        name,
        status: v.status,
        detail: v.detail,
        data: v.data,
        elapsed_secs: elapsed,
        limit_secs: limit,
    }
}

pub fn verify_all(cfg: &VerifyConfig) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|&(id, _, _)| verify_one(cfg, id)).collect()
}

/// Exit status for a table: failures dominate inconclusive rows; skipped rows
/// alone do not fail the run.
pub fn overall(results: &[CriterionResult]) -> Status {
    if results.iter().any(|r| r.status == Status::Fail) {
        Status::Fail
    } else if results.iter().any(|r| r.status == Status::Inconclusive) {
        Status::Inconclusive
    } else {
        Status::Pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_budget_beta_is_inconclusive() {
        let cfg = VerifyConfig {
            beta_max_len: 10,
            ..VerifyConfig::default()
        };
        assert_eq!(verify_one(&cfg, 8).status, Status::Inconclusive);
    }

    #[test]
    fn cheap_criteria_pass() {
        let cfg = VerifyConfig {
            construction_levels: 8,
            identity_levels: 6,
            law_pairs: 50,
            nielsen_lists: 40,
            ..VerifyConfig::default()
        };
        for id in [1, 2, 3, 5, 9] {
            let r = verify_one(&cfg, id);
            assert_eq!(r.status, Status::Pass, "{id}: {}", r.detail);
        }
    }

    #[test]
    fn overall_status() {
        let mk = |s| CriterionResult {
            id: 1,
            name: "x",
            status: s,
            detail: String::new(),
            data: Value::Null,
            elapsed_secs: 0.0,
            limit_secs: 1.0,
        };
        assert_eq!(overall(&[mk(Status::Pass), mk(Status::Skipped)]), Status::Pass);
        assert_eq!(overall(&[mk(Status::Inconclusive), mk(Status::Pass)]), Status::Inconclusive);
        assert_eq!(overall(&[mk(Status::Inconclusive), mk(Status::Fail)]), Status::Fail);
    }
}
