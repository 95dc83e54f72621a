use std::collections::BTreeMap;

use serde::Serialize;

use super::engine::{search, Outcome, SearchReport, SearchSpec};
use super::oracle::LcsOracle;
use crate::error::{Error, Result};
use crate::magnus::{lcs_depth, Depth};
use crate::word::ReducedWord;

/// One value `α(n)`: the length of a shortest nontrivial word in `γ_n(F₂)`.
#[derive(Clone, Debug, Serialize)]
pub struct AlphaEntry {
    pub n: usize,
    pub value: Option<usize>,
    pub witness: Option<ReducedWord>,
    /// `value` is the true minimum (every shorter length was exhausted).
    pub exact: bool,
    /// Lengths below this were searched exhaustively.
    pub exhausted_below: usize,
    /// Depth of the witness, recomputed with unbounded coefficients.
    pub witness_depth: Option<Depth>,
    pub search: SearchReport,
}

/// Computes `α(n)` by exhaustive search up to `max_len`; `degree` is the
/// truncation used to re-certify the witness.
pub fn alpha(n: usize, degree: usize, spec: &SearchSpec) -> Result<AlphaEntry> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if degree < n {
        return Err(Error::InvalidArgument(format!(
            "truncation degree {degree} must be at least n = {n}"
        )));
    }
    let report = search(&LcsOracle::new(n), spec)?;
    let witness_depth = match &report.witness {
        Some(w) => {
            let d = lcs_depth(w, degree)?;
            if d.lower_bound() < n as u32 {
                return Err(Error::Numeric(format!("witness {w} fails the depth recheck: {d}")));
            }
            Some(d)
        }
        None => None,
    };
    Ok(AlphaEntry {
        n,
        value: report.length(),
        witness: report.witness.clone(),
        exact: report.outcome == Outcome::Found,
        exhausted_below: report.exhausted_below,
        witness_depth,
        search: report,
    })
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct AlphaTable {
    pub entries: BTreeMap<usize, AlphaEntry>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlphaChecks {
    pub alpha_one_is_one: Option<bool>,
    pub at_least_n: bool,
    pub monotone: bool,
    /// `(n, m, α(nm), α(n)·α(m), holds)` over computed triples.
    pub submultiplicative: Vec<(usize, usize, usize, usize, bool)>,
}

impl AlphaChecks {
    pub fn all_hold(&self) -> bool {
        self.alpha_one_is_one != Some(false)
            && self.at_least_n
            && self.monotone
            && self.submultiplicative.iter().all(|t| t.4)
    }
}

impl AlphaTable {
    pub fn insert(&mut self, e: AlphaEntry) {
        self.entries.insert(e.n, e);
    }

    pub fn exact(&self, n: usize) -> Option<usize> {
        self.entries.get(&n).filter(|e| e.exact).and_then(|e| e.value)
    }

    /// `log₂α(n) / log₂n` for exact entries with `n ≥ 2`.
    pub fn quotients(&self) -> Vec<(usize, f64)> {
        self.entries
            .keys()
            .filter(|&&n| n >= 2)
            .filter_map(|&n| self.exact(n).map(|a| (n, (a as f64).log2() / (n as f64).log2())))
            .collect()
    }

    pub fn checks(&self) -> AlphaChecks {
        let exact: Vec<(usize, usize)> = self
            .entries
            .keys()
            .filter_map(|&n| self.exact(n).map(|a| (n, a)))
            .collect();
        let mut sub = Vec::new();
        for &(n, an) in &exact {
            for &(m, am) in &exact {
                if n <= m && n >= 2 {
                    if let Some(anm) = self.exact(n * m) {
                        sub.push((n, m, anm, an * am, anm <= an * am));
                    }
                }
            }
        }
        AlphaChecks {
            alpha_one_is_one: self.exact(1).map(|a| a == 1),
            at_least_n: exact.iter().all(|&(n, a)| a >= n),
            monotone: exact.windows(2).all(|w| w[0].1 <= w[1].1),
            submultiplicative: sub,
        }
    }
}
