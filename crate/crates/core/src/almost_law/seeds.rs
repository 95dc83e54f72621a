//! Search for seed words with `L₂ ≤ 1/3`.
//!
//! `L₂` is invariant under cyclic permutation, inversion and the letter
//! automorphisms, and every word outside `F′` has `L₂ = 2` (set `v = 1` and
//! choose `u` with `u^e = −1`). Candidates are therefore one representative
//! per symmetry class of cyclically reduced words in `F′`.

use rayon::prelude::*;
use serde::Serialize;

use super::certify::{certify_seed, CertifiedBound};
use super::decay::SEED_BOUND;
use super::estimate::{estimate_l, evaluation_error, EstimateBudget, Su2};
use super::unitary::haar;
use crate::error::Result;
use crate::quotient::FreeAbelian2;
use crate::search::{enumerate_accepted, KernelOracle, PruneFlags};
use crate::word::ReducedWord;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SeedSearchConfig {
    pub max_len: usize,
    /// Fixed random pairs every candidate is evaluated on.
    pub panel: usize,
    /// Candidates passed on to full estimation.
    pub top: usize,
    pub budget: EstimateBudget,
    pub seed: u64,
}

impl Default for SeedSearchConfig {
    fn default() -> Self {
        SeedSearchConfig {
            max_len: 16,
            panel: 64,
            top: 8,
            budget: EstimateBudget {
                samples: 10_000,
                polish_steps: 200,
            },
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeedCandidate {
    pub word: ReducedWord,
    /// Maximum of `d(1, w(u, v))` over the panel.
    pub panel_lower: f64,
    /// Sampled and polished lower bound, for the leading candidates.
    pub estimate: Option<f64>,
    /// A lower bound, net of rounding, exceeds the seed threshold.
    pub ruled_out: bool,
}

impl SeedCandidate {
    pub fn best_lower(&self) -> f64 {
        self.estimate.unwrap_or(self.panel_lower).max(self.panel_lower)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeedSearchReport {
    pub config: SeedSearchConfig,
    pub candidates: usize,
    pub ruled_out: usize,
    /// Leading candidates by lower bound, smallest first.
    pub best: Vec<SeedCandidate>,
}

impl SeedSearchReport {
    /// Candidates not excluded by a lower bound.
    pub fn survivors(&self) -> impl Iterator<Item = &SeedCandidate> {
        self.best.iter().filter(|c| !c.ruled_out)
    }
}

fn panel_pairs(n: usize, seed: u64) -> Vec<[Su2; 4]> {
    (0..n as u64)
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed_5eed_5eed);
            rng.set_stream(i);
            let u = haar::<f64, _>(2, &mut rng);
            let v = haar::<f64, _>(2, &mut rng);
            Su2::images(Su2::from_matrix(&u), Su2::from_matrix(&v))
        })
        .collect()
}

pub fn seed_search(cfg: &SeedSearchConfig) -> Result<SeedSearchReport> {
    let mut words = Vec::new();
    enumerate_accepted(
        &KernelOracle::new(FreeAbelian2::new()),
        cfg.max_len,
        PruneFlags::ALL,
        |w| words.push(w.clone()),
    );
    let panel = panel_pairs(cfg.panel.max(1), cfg.seed);
    let mut scored: Vec<SeedCandidate> = words
        .into_par_iter()
        .map(|w| {
            let panel_lower = panel
                .iter()
                .map(|img| Su2::eval(w.letters(), img).distance_to_identity())
                .fold(0.0, f64::max);
            let ruled_out = panel_lower - evaluation_error(2, w.len()) > SEED_BOUND;
            SeedCandidate {
                word: w,
                panel_lower,
                estimate: None,
                ruled_out,
            }
        })
        .collect();
    let candidates = scored.len();
    let ruled_out = scored.iter().filter(|c| c.ruled_out).count();
    scored.sort_by(|x, y| {
        x.panel_lower
            .total_cmp(&y.panel_lower)
            .then_with(|| x.word.cmp(&y.word))
    });
    scored.truncate(cfg.top);
    for c in &mut scored {
        let e = estimate_l::<f64>(&c.word, 2, cfg.budget, cfg.seed)?;
        c.ruled_out |= e.certain_lower() > SEED_BOUND;
        c.estimate = Some(e.lower);
    }
    scored.sort_by(|x, y| {
        x.best_lower()
            .total_cmp(&y.best_lower())
            .then_with(|| x.word.cmp(&y.word))
    });
    Ok(SeedSearchReport {
        config: *cfg,
        candidates,
        ruled_out,
        best: scored,
    })
}

/// Grid-certifies the surviving candidates and returns the first two whose
/// bounds reach the threshold and whose commutator is nontrivial.
pub fn certify_pair(
    report: &SeedSearchReport,
    eps: f64,
    net_budget: u64,
) -> Result<Option<((ReducedWord, CertifiedBound), (ReducedWord, CertifiedBound))>> {
    let mut good: Vec<(ReducedWord, CertifiedBound)> = Vec::new();
    for c in report.survivors() {
        let b = certify_seed(&c.word, eps, net_budget)?;
        if b.upper <= SEED_BOUND {
            if let Some(first) = good.first() {
                if !first.0.commutator(&c.word).is_identity() {
                    return Ok(Some((first.clone(), (c.word.clone(), b))));
                }
            }
            good.push((c.word.clone(), b));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_commutator_words_are_excluded() {
        let cfg = SeedSearchConfig {
            max_len: 8,
            panel: 16,
            top: 3,
            budget: EstimateBudget {
                samples: 200,
                polish_steps: 20,
            },
            seed: 1,
        };
        let r = seed_search(&cfg).unwrap();
        // abAB is the only class of length 4 in F′.
        assert!(r.candidates >= 1);
        assert_eq!(r.best.len(), 3);
        assert!(r.best.iter().all(|c| c.word.exponent_sums() == (0, 0)));
        assert!(r.best.iter().all(|c| c.word.is_cyclically_reduced()));
        assert_eq!(r.ruled_out, r.candidates);
        assert!(certify_pair(&r, 0.2, 1_000_000).unwrap().is_none());
    }
}
