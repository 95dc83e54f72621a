//! Girths of normal subgroups `Λ` and of their derived subgroups `[Λ,Λ]`.

mod membership;
mod nielsen;

pub use membership::{fox_projections_vanish, in_derived_lambda, in_lambda, projected_fox};
pub use nielsen::{
    check_nielsen_reduced, nielsen_reduce, nielsen_reduce_traced, FormalWord, NielsenResult,
    NielsenViolation,
};

use serde::Serialize;

use crate::construction::build_default;
use crate::error::{Error, Result};
use crate::quotient::{FreeAbelian2, QuotientGroup};
use crate::search::{
    search, search_sequential, DerivedOracle, KernelOracle, LcsOracle, Oracle, Outcome, PruneFlags,
    SearchReport, SearchSpec,
};
use crate::word::ReducedWord;

/// `girth(Λ) = min{ℓ(w) | w ∈ Λ \ {e}}` as far as a bounded search can tell.
#[derive(Clone, Debug, Serialize)]
pub struct GirthResult {
    pub oracle: String,
    pub girth: Option<usize>,
    pub witness: Option<ReducedWord>,
    pub search_bound: usize,
    /// The value is the true girth.
    pub exact: bool,
    pub outcome: Outcome,
    /// Every length strictly below this holds no member.
    pub exhausted_below: usize,
    /// The witness was re-found by an independent single-threaded scan.
    pub reverified: Option<bool>,
    pub shards: usize,
    pub nodes: u64,
    pub elapsed_secs: f64,
}

impl GirthResult {
    fn from_report(r: SearchReport) -> Self {
        GirthResult {
            oracle: r.oracle,
            girth: r.witness.as_ref().map(|w| w.len()),
            witness: r.witness,
            search_bound: r.max_len,
            exact: r.outcome == Outcome::Found,
            outcome: r.outcome,
            exhausted_below: r.exhausted_below,
            reverified: None,
            shards: r.shards,
            nodes: r.nodes,
            elapsed_secs: r.elapsed_secs,
        }
    }

    /// Best certified lower bound on the girth.
    pub fn lower_bound(&self) -> usize {
        self.girth.unwrap_or(self.exhausted_below)
    }
}

fn accepts<O: Oracle>(oracle: &O, w: &ReducedWord) -> bool {
    let s = w.letters().iter().fold(oracle.root(), |s, &l| oracle.push(&s, l));
    oracle.accept(&s, w.letters())
}

/// Searches for the girth of the subgroup described by `oracle`. A found
/// witness is checked against the oracle and re-derived by a sequential scan
/// that uses neither automorphism pruning nor sharding.
pub fn girth<O: Oracle>(oracle: &O, spec: &SearchSpec, reverify: bool) -> Result<GirthResult> {
    let report = search(oracle, spec)?;
    let mut out = GirthResult::from_report(report);
    if let Some(w) = &out.witness {
        if !accepts(oracle, w) {
            return Err(Error::Numeric(format!("witness {w} rejected by {}", oracle.id())));
        }
        if reverify {
            let mut check = SearchSpec::new(w.len()).with_prune(PruneFlags {
                automorphisms: false,
                ..spec.prune
            });
            check.min_len = spec.min_len;
            let again = search_sequential(oracle, &check)?;
            out.reverified = Some(again.length() == Some(w.len()));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct ThreeXReport {
    pub quotient: String,
    pub lambda: GirthResult,
    pub derived: GirthResult,
    pub required: Option<usize>,
    /// `None` when the searches are inconclusive.
    pub holds: Option<bool>,
}

/// Measures `girth(Λ)` and `girth([Λ,Λ])` and compares with `3·girth(Λ)`.
pub fn verify_three_x<Q: QuotientGroup + Clone>(q: &Q, spec: &SearchSpec) -> Result<ThreeXReport> {
    let lambda = girth(&KernelOracle::new(q.clone()), spec, true)?;
    let derived = girth(&DerivedOracle::new(q.clone()), spec, true)?;
    let required = lambda.girth.map(|g| 3 * g);
    let holds = match (required, derived.girth) {
        (Some(r), Some(g)) => Some(g >= r),
        (Some(r), None) if derived.exhausted_below >= r => Some(true),
        _ => None,
    };
    Ok(ThreeXReport {
        quotient: q.describe(),
        lambda,
        derived,
        required,
        holds,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct BetaBracket {
    pub n: usize,
    /// `3ⁿ`.
    pub lower: usize,
    /// `ℓ(bₙ)`.
    pub upper: usize,
    pub exact: Option<usize>,
    pub witness: Option<ReducedWord>,
    pub search: Option<GirthResult>,
}

impl BetaBracket {
    pub fn consistent(&self) -> bool {
        self.exact.is_none_or(|b| self.lower <= b && b <= self.upper)
    }
}

/// Brackets `β(n) = girth(F₂⁽ⁿ⁾)` between `3ⁿ` and `ℓ(bₙ)`, searching for the
/// exact value when `n ≤ 2`.
pub fn beta_bracket(n: usize, spec: &SearchSpec) -> Result<BetaBracket> {
    let seq = build_default(n)?;
    let upper = seq.b(n).len();
    let lower = 3usize
        .checked_pow(n as u32)
        .ok_or(Error::Overflow("3^n"))?;
    let search = match n {
        0 => Some(girth(&LcsOracle::new(1), spec, true)?),
        1 => Some(girth(&KernelOracle::new(FreeAbelian2::new()), spec, true)?),
        2 => Some(girth(&DerivedOracle::new(FreeAbelian2::new()), spec, true)?),
        _ => None,
    };
    let (exact, witness) = match &search {
        Some(g) if g.exact => (g.girth, g.witness.clone()),
        _ => (None, None),
    };
    Ok(BetaBracket {
        n,
        lower,
        upper,
        exact,
        witness,
        search,
    })
}
