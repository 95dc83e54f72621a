use std::path::PathBuf;
use std::time::Duration;

use lcs_core::almost_law::{
    certify_pair, certify_seed, estimate_l, run_decay, seed_search, silver_ratio, CertifiedBound,
    DecayConfig, EstimateBudget, SeedSearchConfig, DEFAULT_NET_BUDGET, SEED_BOUND,
};
use lcs_core::construction::build_with_budget;
use lcs_core::girth::{beta_bracket, girth, GirthResult};
use lcs_core::magnus::lcs_depth_profile;
use lcs_core::quotient::{FreeAbelian2, PermQuotient};
use lcs_core::search::{
    alpha, compare_printed, constants, report_constants, AlphaTable, BetaRow, DerivedOracle,
    KernelOracle, LcsOracle, Oracle, Outcome, SearchSpec,
};
use lcs_core::verify::{overall, verify_one, Status, VerifyConfig, CRITERIA, PRINTED};
use lcs_core::{Error, ReducedWord, Result};
use serde_json::{json, Value};

use crate::output::{Output, Table};
use crate::{Cli, Command};

fn word(s: &str) -> Result<ReducedWord> {
    ReducedWord::parse_reducing(s)
}

fn spec(cli: &Cli, max_len: usize, shards: usize, checkpoint: &Option<PathBuf>) -> SearchSpec {
    let mut s = SearchSpec::new(max_len)
        .with_shards(shards)
        .with_time_budget(cli.global.budget_seconds.map(Duration::from_secs_f64));
    if let Some(p) = checkpoint {
        s = s.with_checkpoint(p);
    }
    s
}

fn found_status(outcome: Outcome) -> Status {
    match outcome {
        Outcome::Found => Status::Pass,
        Outcome::NotFoundBelow => Status::Inconclusive,
        Outcome::Interrupted => Status::Skipped,
    }
}

pub fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Gen { n, seed_a, seed_b } => gen(cli, *n, seed_a, seed_b),
        Command::Depth { word: w, max_degree } => depth(w, *max_degree),
        Command::Girth {
            quotient,
            max_len,
            no_prune,
            shards,
            checkpoint,
        } => {
            let mut s = spec(cli, *max_len, *shards, checkpoint);
            if *no_prune {
                s = s.unpruned();
            }
            girth_cmd(quotient, &s)
        }
        Command::Alpha {
            n,
            max_len,
            degree,
            shards,
            checkpoint,
        } => {
            let e = alpha(*n, degree.unwrap_or(*n), &spec(cli, *max_len, *shards, checkpoint))?;
            let mut t = Table::new(&["n", "value", "exact", "exhausted_below", "witness"]);
            t.push(vec![
                e.n.to_string(),
                e.value.map_or(String::new(), |v| v.to_string()),
                e.exact.to_string(),
                e.exhausted_below.to_string(),
                e.witness.as_ref().map_or(String::new(), ToString::to_string),
            ]);
            Ok(Output {
                status: found_status(e.search.outcome),
                result: serde_json::to_value(&e)?,
                table: Some(t),
                note: None,
            })
        }
        Command::Beta {
            n,
            max_len,
            shards,
            checkpoint,
        } => {
            let r = beta_bracket(*n, &spec(cli, *max_len, *shards, checkpoint))?;
            let status = match &r.search {
                Some(g) => found_status(g.outcome),
                None => Status::Pass,
            };
            let status = if r.consistent() { status } else { Status::Fail };
            let mut t = Table::new(&["n", "lower", "upper", "exact", "witness"]);
            t.push(vec![
                r.n.to_string(),
                r.lower.to_string(),
                r.upper.to_string(),
                r.exact.map_or(String::new(), |v| v.to_string()),
                r.witness.as_ref().map_or(String::new(), ToString::to_string),
            ]);
            Ok(Output {
                status,
                result: serde_json::to_value(&r)?,
                table: Some(t),
                note: None,
            })
        }
        Command::Verify {
            only,
            checkpoint,
            samples,
        } => verify(cli, only, checkpoint, *samples),
        Command::Almostlaw { .. } => almostlaw(cli),
        Command::Report {
            alpha_n_max,
            alpha_max_len,
            beta_max_len,
        } => report(cli, *alpha_n_max, *alpha_max_len, *beta_max_len),
    }
}

fn gen(cli: &Cli, n: usize, seed_a: &Option<String>, seed_b: &Option<String>) -> Result<Output> {
    let seeds = match (seed_a, seed_b) {
        (Some(a), Some(b)) => (word(a)?, word(b)?),
        _ => (ReducedWord::a(), ReducedWord::b()),
    };
    let seq = build_with_budget(n, seeds, cli.global.budget_letters)?;
    let mut t = Table::new(&["n", "len_a", "len_b"]);
    let mut lengths = Vec::new();
    for i in 0..=n {
        t.push(vec![i.to_string(), seq.a(i).len().to_string(), seq.b(i).len().to_string()]);
        lengths.push(json!({ "n": i, "len_a": seq.a(i).len(), "len_b": seq.b(i).len() }));
    }
    let status = if seq.verify_derivation() { Status::Pass } else { Status::Fail };
    Ok(Output {
        status,
        result: json!({
            "n": n,
            "a_word": seq.a(n).to_string(),
            "b_word": seq.b(n).to_string(),
            "len": seq.b(n).len(),
            "derivation": seq.derivation_strings(),
            "lengths": lengths,
        }),
        table: Some(t),
        note: None,
    })
}

fn depth(w: &str, max_degree: usize) -> Result<Output> {
    let w = word(w)?;
    let p = lcs_depth_profile::<lcs_core::Integer>(&w, max_degree)?;
    let terms: Vec<Value> = p
        .terms
        .iter()
        .map(|(m, c)| json!({ "monomial": m.to_string(), "coefficient": c.to_string() }))
        .collect();
    let mut t = Table::new(&["word", "kind", "value", "nonzero_terms"]);
    t.push(vec![
        w.to_string(),
        p.depth.kind().to_string(),
        match p.depth {
            lcs_core::magnus::Depth::Infinite => String::new(),
            d => d.lower_bound().to_string(),
        },
        p.terms.len().to_string(),
    ]);
    Ok(Output {
        status: Status::Pass,
        result: json!({
            "word": w.to_string(),
            "depth": p.depth,
            "nonzero_terms_at_depth": terms,
        }),
        table: Some(t),
        note: None,
    })
}

enum QuotientArg {
    Z2,
    Perm(PermQuotient),
}

fn parse_quotient(s: &str) -> Result<QuotientArg> {
    match s {
        "z2" => Ok(QuotientArg::Z2),
        _ => match s.strip_prefix("perm:") {
            Some(rest) => Ok(QuotientArg::Perm(PermQuotient::parse(rest)?)),
            None => Err(Error::InvalidArgument(format!("unknown quotient {s:?}"))),
        },
    }
}

fn run_girth<O: Oracle>(o: &O, s: &SearchSpec) -> Result<GirthResult> {
    girth(o, s, true)
}

fn girth_cmd(quotient: &str, s: &SearchSpec) -> Result<Output> {
    let r = if let Some(n) = quotient.strip_prefix("lcs:") {
        let n: usize = n
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad series index in {quotient:?}")))?;
        if n == 0 {
            return Err(Error::InvalidArgument("series index must be at least 1".into()));
        }
        run_girth(&LcsOracle::new(n), s)?
    } else if quotient == "derived2" {
        run_girth(&DerivedOracle::new(FreeAbelian2::new()), s)?
    } else if let Some(q) = quotient.strip_prefix("derived:") {
        match parse_quotient(q)? {
            QuotientArg::Z2 => run_girth(&DerivedOracle::new(FreeAbelian2::new()), s)?,
            QuotientArg::Perm(p) => run_girth(&DerivedOracle::new(p), s)?,
        }
    } else {
        match parse_quotient(quotient)? {
            QuotientArg::Z2 => run_girth(&KernelOracle::new(FreeAbelian2::new()), s)?,
            QuotientArg::Perm(p) => run_girth(&KernelOracle::new(p), s)?,
        }
    };
    let status = match (r.outcome, r.reverified) {
        (_, Some(false)) => Status::Fail,
        (o, _) => found_status(o),
    };
    let mut t = Table::new(&["quotient", "girth", "exact", "exhausted_below", "witness", "shards", "elapsed"]);
    t.push(vec![
        quotient.to_string(),
        r.girth.map_or(String::new(), |g| g.to_string()),
        r.exact.to_string(),
        r.exhausted_below.to_string(),
        r.witness.as_ref().map_or(String::new(), ToString::to_string),
        r.shards.to_string(),
        format!("{:.6}", r.elapsed_secs),
    ]);
    Ok(Output {
        status,
        result: json!({
            "quotient": quotient,
            "oracle": r.oracle,
            "girth": r.girth,
            "witness": r.witness,
            "exact": r.exact,
            "outcome": r.outcome,
            "exhausted_below": r.exhausted_below,
            "search_bound": r.search_bound,
            "reverified": r.reverified,
            "shards": r.shards,
            "nodes": r.nodes,
            "elapsed": r.elapsed_secs,
        }),
        table: Some(t),
        note: None,
    })
}

fn verify(cli: &Cli, only: &[u8], checkpoint: &Option<PathBuf>, samples: usize) -> Result<Output> {
    let cfg = VerifyConfig {
        seed: cli.global.seed,
        checkpoint: checkpoint.clone(),
        samples,
        budget_seconds: cli.global.budget_seconds,
        ..VerifyConfig::default()
    };
    let ids: Vec<u8> = if only.is_empty() {
        CRITERIA.iter().map(|c| c.0).collect()
    } else {
        only.to_vec()
    };
    if let Some(bad) = ids.iter().find(|&&i| !(1..=11).contains(&i)) {
        return Err(Error::InvalidArgument(format!("no check numbered {bad}")));
    }
    let mut results = Vec::new();
    let mut t = Table::new(&["id", "name", "status", "elapsed_secs", "detail"]);
    for id in ids {
        let r = verify_one(&cfg, id);
        eprintln!("{} {:>2} {}: {}", r.status.label(), r.id, r.name, r.detail);
        t.push(vec![
            r.id.to_string(),
            r.name.to_string(),
            r.status.label().to_lowercase(),
            format!("{:.3}", r.elapsed_secs),
            r.detail.clone(),
        ]);
        results.push(r);
    }
    Ok(Output {
        status: overall(&results),
        result: json!({ "verify_config": cfg, "checks": results }),
        table: Some(t),
        note: None,
    })
}

fn almostlaw(cli: &Cli) -> Result<Output> {
    let Command::Almostlaw {
        k,
        n_max,
        samples,
        polish_steps,
        certify_eps,
        seed_a,
        seed_b,
        seed_max_len,
        assume_seed_bound,
    } = &cli.command
    else {
        unreachable!()
    };
    if *k < 2 {
        return Err(Error::InvalidArgument("k must be at least 2".into()));
    }
    let budget = EstimateBudget {
        samples: *samples,
        polish_steps: *polish_steps,
    };
    let seed = cli.global.seed;
    let header = ["n", "len", "upper", "lower", "minus_log_2upper", "ratio_to_(1+√2)^n"];

    let (w, v, bw, bv, search) = match (seed_a, seed_b) {
        (Some(a), Some(b)) => {
            let (w, v) = (word(a)?, word(b)?);
            let (bw, bv) = match assume_seed_bound {
                Some(u) => (CertifiedBound::assumed(*u)?, CertifiedBound::assumed(*u)?),
                None => {
                    if *k != 2 {
                        return Err(Error::InvalidArgument(
                            "grid certification needs k = 2; pass --assume-seed-bound".into(),
                        ));
                    }
                    (
                        certify_seed(&w, *certify_eps, DEFAULT_NET_BUDGET)?,
                        certify_seed(&v, *certify_eps, DEFAULT_NET_BUDGET)?,
                    )
                }
            };
            (w, v, bw, bv, Value::Null)
        }
        _ => {
            let cfg = SeedSearchConfig {
                max_len: *seed_max_len,
                panel: 64,
                top: 8,
                budget,
                seed,
            };
            let report = seed_search(&cfg)?;
            let pair = match assume_seed_bound {
                Some(u) => {
                    let mut it = report.best.iter().map(|c| c.word.clone());
                    match (it.next(), it.next()) {
                        (Some(a), Some(b)) => {
                            Some(((a, CertifiedBound::assumed(*u)?), (b, CertifiedBound::assumed(*u)?)))
                        }
                        _ => None,
                    }
                }
                None => certify_pair(&report, *certify_eps, DEFAULT_NET_BUDGET)?,
            };
            let report_json = serde_json::to_value(&report)?;
            match pair {
                Some(((w, bw), (v, bv))) => (w, v, bw, bv, report_json),
                None => {
                    let best = report.best.first();
                    let note = format!(
                        "no certified seeds: {} of {} candidate classes up to length {} excluded; smallest sampled L = {}",
                        report.ruled_out,
                        report.candidates,
                        seed_max_len,
                        best.map_or(f64::NAN, |c| c.best_lower())
                    );
                    eprintln!("{note}");
                    return Ok(Output {
                        status: Status::Fail,
                        result: json!({ "seed_search": report_json, "decay": Value::Null }),
                        table: Some(Table::new(&header)),
                        note: Some(note),
                    });
                }
            }
        }
    };

    for (word, b) in [(&w, &bw), (&v, &bv)] {
        if b.upper > SEED_BOUND {
            let e = estimate_l::<f64>(word, *k, budget, seed)?;
            let excluded = e.certain_lower() > SEED_BOUND;
            let note = format!(
                "seed {word}: upper {} above 1/3, sampled lower {}{}",
                b.upper,
                e.lower,
                if excluded { " also above 1/3" } else { "" }
            );
            eprintln!("{note}");
            return Ok(Output {
                status: if excluded { Status::Fail } else { Status::Inconclusive },
                result: json!({ "seed_search": search, "seed_bounds": [bw, bv], "seed_estimate": e, "decay": Value::Null }),
                table: Some(Table::new(&header)),
                note: Some(note),
            });
        }
    }

    let mut dc = DecayConfig::new(*n_max);
    dc.k = *k;
    dc.budget = budget;
    dc.seed = seed;
    dc.letter_budget = cli.global.budget_letters;
    let table = run_decay((&w, &v), (&bw, &bv), &dc)?;
    let mut t = Table::new(&header);
    for r in &table.rows {
        t.push(vec![
            r.n.to_string(),
            r.len.to_string(),
            format!("{:e}", r.upper()),
            r.lower.map_or(String::new(), |l| format!("{l:e}")),
            format!("{}", r.minus_log_2upper),
            format!("{}", r.minus_log_2upper / silver_ratio().powi(r.n as i32)),
        ]);
    }
    let ok = table.all_sound() && table.nontrivial && table.fit.d_hat > 0.0;
    let note = format!(
        "seeds {w}, {v}; proved bounds: {}; D = {}; C = {}; exponent = {}",
        table.proved, table.fit.d_hat, table.fit.c_hat, table.fit.exponent
    );
    Ok(Output {
        status: if ok { Status::Pass } else { Status::Fail },
        result: json!({ "seed_search": search, "decay": table }),
        table: Some(t),
        note: Some(note),
    })
}

/// `(ℓ(w), γ(w))` for the search witnesses and the first few `bₙ`.
fn scatter(table: &AlphaTable, budget_letters: usize) -> Result<Vec<Value>> {
    let d = lcs_core::magnus::DEFAULT_TRUNCATION;
    let mut words: Vec<(String, ReducedWord)> = table
        .entries
        .values()
        .filter_map(|e| e.witness.clone().map(|w| (format!("alpha({})", e.n), w)))
        .collect();
    let seq = build_with_budget(3, (ReducedWord::a(), ReducedWord::b()), budget_letters)?;
    words.extend((0..=3).map(|n| (format!("b{n}"), seq.b(n).clone())));
    words
        .into_iter()
        .map(|(source, w)| {
            let depth = lcs_core::magnus::lcs_depth(&w, d)?;
            Ok(json!({ "source": source, "len": w.len(), "depth": depth, "word": w.to_string() }))
        })
        .collect()
}

fn report(cli: &Cli, alpha_n_max: usize, alpha_max_len: usize, beta_max_len: usize) -> Result<Output> {
    let budget = cli.global.budget_seconds.map(Duration::from_secs_f64);
    let mut table = AlphaTable::default();
    for n in 1..=alpha_n_max {
        let s = SearchSpec::new(alpha_max_len).with_time_budget(budget);
        table.insert(alpha(n, n.max(2), &s)?);
    }
    let mut beta = Vec::new();
    for n in 0..=3 {
        let s = SearchSpec::new(beta_max_len).with_time_budget(budget);
        let b = beta_bracket(n, &s)?;
        beta.push(BetaRow {
            n,
            lower: b.lower,
            upper: b.upper,
            exact: b.exact,
        });
    }
    let rep = report_constants(&table, &beta);
    let scatter = scatter(&table, cli.global.budget_letters)?;
    let named = constants();
    let printed: Vec<Value> = PRINTED
        .iter()
        .map(|(name, digits)| {
            let value = named.iter().find(|c| c.name == *name).map_or(f64::NAN, |c| c.value);
            json!({ "name": name, "comparison": compare_printed(value, digits) })
        })
        .collect();
    let mut t = Table::new(&["name", "closed_form", "value"]);
    for c in &named {
        t.push(vec![c.name.to_string(), c.closed_form.to_string(), format!("{:.12}", c.value)]);
    }
    for e in table.entries.values() {
        let v = e.value.map_or_else(String::new, |v| v.to_string());
        let kind = if e.exact { "exact" } else { "upper bound" };
        t.push(vec![format!("alpha({})", e.n), kind.to_string(), v]);
    }
    for b in &beta {
        t.push(vec![format!("beta({}) lower", b.n), "3^n".to_string(), b.lower.to_string()]);
        t.push(vec![format!("beta({}) upper", b.n), "l(b_n)".to_string(), b.upper.to_string()]);
        if let Some(x) = b.exact {
            t.push(vec![format!("beta({})", b.n), "exact".to_string(), x.to_string()]);
        }
    }
    let checks = table.checks();
    let status = if checks.all_hold() && rep.quotients_at_least_one && rep.beta_monotone {
        Status::Pass
    } else {
        Status::Fail
    };
    Ok(Output {
        status,
        result: json!({
            "constants": rep,
            "printed": printed,
            "alpha_checks": checks,
            "alpha_entries": table,
            "length_depth_scatter": scatter,
        }),
        table: Some(t),
        note: None,
    })
}
