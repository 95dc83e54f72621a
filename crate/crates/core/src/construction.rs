//! The recursive commutator pairs `a_{n+1} = [b_n⁻¹, a_n]`,
//! `b_{n+1} = [a_n, b_n]`, and checks of their combinatorial properties.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::{commutator, conjugate, Letter, ReducedWord};

/// Default cap on the length of any single constructed word.
pub const DEFAULT_LETTER_BUDGET: usize = 100_000_000;

/// Largest root of `λ² − 3λ − 2`, the growth rate of `ℓ(b_n)`.
pub fn mu() -> f64 {
    (3.0 + 17f64.sqrt()) / 2.0
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    A,
    B,
}

/// Reference to `a_level`, `b_level` or one of their inverses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct NodeRef {
    pub family: Family,
    pub level: usize,
    pub inverted: bool,
}

impl NodeRef {
    fn new(family: Family, level: usize, inverted: bool) -> Self {
        NodeRef {
            family,
            level,
            inverted,
        }
    }
}

impl fmt::Display for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.family {
            Family::A => 'a',
            Family::B => 'b',
        };
        write!(f, "{name}{}", self.level)?;
        if self.inverted {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

/// `target = [left, right]`: one node of the derivation tree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CommutatorNode {
    pub target: NodeRef,
    pub left: NodeRef,
    pub right: NodeRef,
}

impl fmt::Display for CommutatorNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = [{}, {}]", self.target, self.left, self.right)
    }
}

#[derive(Clone, Debug)]
pub struct PairSequence {
    pub a_words: Vec<ReducedWord>,
    pub b_words: Vec<ReducedWord>,
    pub seeds: (ReducedWord, ReducedWord),
    pub derivation: Vec<CommutatorNode>,
}

pub fn build(n_max: usize, seeds: (ReducedWord, ReducedWord)) -> Result<PairSequence> {
    build_with_budget(n_max, seeds, DEFAULT_LETTER_BUDGET)
}

pub fn build_default(n_max: usize) -> Result<PairSequence> {
    build(n_max, (ReducedWord::a(), ReducedWord::b()))
}

pub fn build_with_budget(
    n_max: usize,
    seeds: (ReducedWord, ReducedWord),
    budget: usize,
) -> Result<PairSequence> {
    if seeds.0.is_identity() || seeds.1.is_identity() {
        return Err(Error::InvalidArgument("seed words must be nontrivial".into()));
    }
    let mut a_words = vec![seeds.0.clone()];
    let mut b_words = vec![seeds.1.clone()];
    let mut derivation = Vec::with_capacity(2 * n_max);
    for n in 0..n_max {
        // Both next words are commutators of a_n and b_n^{±1}.
        let predicted = 2 * (a_words[n].len() as u128 + b_words[n].len() as u128);
        if predicted > budget as u128 {
            return Err(Error::LengthBudget {
                level: n + 1,
                predicted,
                budget,
            });
        }
        let (a, b) = (&a_words[n], &b_words[n]);
        let next_a = commutator(&b.inverse(), a);
        let next_b = commutator(a, b);
        a_words.push(next_a);
        b_words.push(next_b);
        derivation.push(CommutatorNode {
            target: NodeRef::new(Family::A, n + 1, false),
            left: NodeRef::new(Family::B, n, true),
            right: NodeRef::new(Family::A, n, false),
        });
        derivation.push(CommutatorNode {
            target: NodeRef::new(Family::B, n + 1, false),
            left: NodeRef::new(Family::A, n, false),
            right: NodeRef::new(Family::B, n, false),
        });
    }
    Ok(PairSequence {
        a_words,
        b_words,
        seeds,
        derivation,
    })
}

/// One of the letters of a possibly inverted word, read from the start or
/// the end without materialising the inverse.
fn oriented_letter(w: &ReducedWord, inverted: bool, from_end: bool, k: usize) -> Letter {
    let n = w.len();
    let letters = w.letters();
    match (inverted, from_end) {
        (false, false) => letters[k],
        (false, true) => letters[n - 1 - k],
        (true, false) => letters[n - 1 - k].inverse(),
        (true, true) => letters[k].inverse(),
    }
}

fn seam_cancellation(x: (&ReducedWord, bool), y: (&ReducedWord, bool)) -> usize {
    let limit = x.0.len().min(y.0.len());
    (0..limit)
        .take_while(|&k| oriented_letter(y.0, y.1, false, k) == oriented_letter(x.0, x.1, true, k).inverse())
        .count()
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductCancellation {
    pub product: String,
    pub cancelled: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct NoCancellationReport {
    pub n: usize,
    pub products: Vec<ProductCancellation>,
    pub holds: bool,
}

impl PairSequence {
    pub fn n_max(&self) -> usize {
        self.a_words.len() - 1
    }

    pub fn a(&self, n: usize) -> &ReducedWord {
        &self.a_words[n]
    }

    pub fn b(&self, n: usize) -> &ReducedWord {
        &self.b_words[n]
    }

    pub fn resolve(&self, r: NodeRef) -> ReducedWord {
        let w = match r.family {
            Family::A => &self.a_words[r.level],
            Family::B => &self.b_words[r.level],
        };
        if r.inverted {
            w.inverse()
        } else {
            w.clone()
        }
    }

    /// Confirms every stored derivation node is the commutator of its
    /// children; this witnesses `b_n ∈ F₂⁽ⁿ⁾`.
    pub fn verify_derivation(&self) -> bool {
        self.derivation.iter().all(|node| {
            let target = self.resolve(node.target);
            target == commutator(&self.resolve(node.left), &self.resolve(node.right))
        })
    }

    pub fn derivation_strings(&self) -> Vec<String> {
        self.derivation.iter().map(ToString::to_string).collect()
    }
}

/// Cancellation counts of the eight products `a a, b b, a⁻¹b, b⁻¹a,
/// a b⁻¹, b a⁻¹, a⁻¹b⁻¹, b a` at level `n`.
pub fn check_no_cancellation(seq: &PairSequence, n: usize) -> NoCancellationReport {
    let (a, b) = (seq.a(n), seq.b(n));
    let cases: [(&str, (&ReducedWord, bool), (&ReducedWord, bool)); 8] = [
        ("a a", (a, false), (a, false)),
        ("b b", (b, false), (b, false)),
        ("a^-1 b", (a, true), (b, false)),
        ("b^-1 a", (b, true), (a, false)),
        ("a b^-1", (a, false), (b, true)),
        ("b a^-1", (b, false), (a, true)),
        ("a^-1 b^-1", (a, true), (b, true)),
        ("b a", (b, false), (a, false)),
    ];
    let products: Vec<_> = cases
        .iter()
        .map(|(name, x, y)| ProductCancellation {
            product: (*name).to_string(),
            cancelled: seam_cancellation(*x, *y),
        })
        .collect();
    let holds = products.iter().all(|p| p.cancelled == 0);
    NoCancellationReport { n, products, holds }
}

#[derive(Clone, Debug, Serialize)]
pub struct LengthRow {
    pub n: usize,
    pub len_a: usize,
    pub len_b: usize,
    pub equal: bool,
    pub at_least_pow2: bool,
    /// `ℓ(b_n) ≥ 2ℓ(b_{n−1})`, for `n ≥ 1`.
    pub doubling: Option<bool>,
    /// `3ℓ(b_{n−1}) + 2ℓ(b_{n−2})`, for `n ≥ 2`.
    pub recurrence_bound: Option<usize>,
    pub recurrence_holds: Option<bool>,
    pub recurrence_equality: Option<bool>,
}

impl LengthRow {
    pub fn ok(&self) -> bool {
        self.equal
            && self.at_least_pow2
            && self.doubling.unwrap_or(true)
            && self.recurrence_holds.unwrap_or(true)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LengthTable {
    pub rows: Vec<LengthRow>,
    /// `max_n ℓ(b_n) / μⁿ` over the table.
    pub c_prime: f64,
}

impl LengthTable {
    pub fn violations(&self) -> Vec<usize> {
        self.rows.iter().filter(|r| !r.ok()).map(|r| r.n).collect()
    }
}

pub fn check_lengths(seq: &PairSequence, n_max: usize) -> Result<LengthTable> {
    if n_max > seq.n_max() {
        return Err(Error::InvalidArgument(format!(
            "level {n_max} not built (have {})",
            seq.n_max()
        )));
    }
    let lb = |n: usize| seq.b(n).len();
    let mut rows = Vec::with_capacity(n_max + 1);
    let mut c_prime = 0f64;
    for n in 0..=n_max {
        let (len_a, len_b) = (seq.a(n).len(), lb(n));
        let pow2 = 1u128 << n.min(127);
        let bound = (n >= 2).then(|| 3 * lb(n - 1) + 2 * lb(n - 2));
        rows.push(LengthRow {
            n,
            len_a,
            len_b,
            equal: len_a == len_b,
            at_least_pow2: len_b as u128 >= pow2,
            doubling: (n >= 1).then(|| len_b >= 2 * lb(n - 1)),
            recurrence_bound: bound,
            recurrence_holds: bound.map(|x| len_b <= x),
            recurrence_equality: bound.map(|x| len_b == x),
        });
        c_prime = c_prime.max(len_b as f64 / mu().powi(n as i32));
    }
    Ok(LengthTable { rows, c_prime })
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub n: usize,
    /// Both bracket identities at `(a, b)`.
    pub eqrel_generators: [bool; 2],
    /// Both identities at `(a_{n−2}, b_{n−2})`.
    pub eqrel_level: [bool; 2],
    /// Both identities at `(b_{n−2}, a_{n−2})`, the instance used to
    /// rewrite `b_n`.
    pub eqrel_swapped: [bool; 2],
    /// `b_n = [[a_{n−1}, b_{n−2}], b_{n−1}]`.
    pub nested_commutator: bool,
    /// `b_{n−2} a_{n−1} b_{n−2}⁻¹ = b_{n−1}`.
    pub conjugation: bool,
    /// `a_n = [[b_{n−2}, a_{n−1}⁻¹], a_{n−1}]`.
    pub nested_commutator_a: bool,
}

impl IdentityReport {
    pub fn all_hold(&self) -> bool {
        self.eqrel_generators.iter().all(|&x| x)
            && self.eqrel_level.iter().all(|&x| x)
            && self.eqrel_swapped.iter().all(|&x| x)
            && self.nested_commutator
            && self.conjugation
            && self.nested_commutator_a
    }
}

/// `[[x⁻¹,y],[x,y]] = [[[x⁻¹,y],x],[x,y]]` and
/// `[[x⁻¹,y],[y,x]] = [[[x⁻¹,y],x],[y,x]]`, as reduced-word equalities.
pub fn bracket_identities(x: &ReducedWord, y: &ReducedWord) -> [bool; 2] {
    let c = commutator(&x.inverse(), y);
    let cx = commutator(&c, x);
    let xy = commutator(x, y);
    let yx = commutator(y, x);
    [
        commutator(&c, &xy) == commutator(&cx, &xy),
        commutator(&c, &yx) == commutator(&cx, &yx),
    ]
}

pub fn check_identities(seq: &PairSequence, n: usize) -> Result<IdentityReport> {
    if n < 2 || n > seq.n_max() {
        return Err(Error::InvalidArgument(format!(
            "identity check needs 2 <= n <= {}, got {n}",
            seq.n_max()
        )));
    }
    let (a2, b2) = (seq.a(n - 2), seq.b(n - 2));
    let (a1, b1) = (seq.a(n - 1), seq.b(n - 1));
    Ok(IdentityReport {
        n,
        eqrel_generators: bracket_identities(&ReducedWord::a(), &ReducedWord::b()),
        eqrel_level: bracket_identities(a2, b2),
        eqrel_swapped: bracket_identities(b2, a2),
        nested_commutator: *seq.b(n) == commutator(&commutator(a1, b2), b1),
        conjugation: conjugate(a1, b2) == *b1,
        nested_commutator_a: *seq.a(n) == commutator(&commutator(b2, &a1.inverse()), a1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> ReducedWord {
        s.parse().unwrap()
    }

    #[test]
    fn first_levels() {
        let seq = build_default(2).unwrap();
        assert_eq!(*seq.a(0), w("a"));
        assert_eq!(*seq.b(0), w("b"));
        assert_eq!(*seq.b(1), w("abAB"));
        assert_eq!(*seq.a(1), w("BabA"));
        assert_eq!(seq.b(2).len(), 14);
        assert_eq!(*seq.b(2), w("BabbABaBAbbaBA"));
        assert!(seq.verify_derivation());
        assert_eq!(seq.derivation_strings()[0], "a1 = [b0^-1, a0]");
    }

    #[test]
    fn level_zero_is_seeds() {
        let seeds = (w("ab"), w("bA"));
        let seq = build(0, seeds.clone()).unwrap();
        assert_eq!((seq.a(0).clone(), seq.b(0).clone()), seeds);
        assert!(seq.derivation.is_empty());
    }

    #[test]
    fn rejects_trivial_seed_and_budget() {
        assert!(build(2, (ReducedWord::identity(), w("b"))).is_err());
        let err = build_with_budget(6, (w("a"), w("b")), 100).unwrap_err();
        assert!(matches!(err, Error::LengthBudget { level: 4, .. }), "{err}");
    }

    #[test]
    fn no_cancellation_small_levels() {
        let seq = build_default(6).unwrap();
        for n in 0..=6 {
            let r = check_no_cancellation(&seq, n);
            assert!(r.holds, "level {n}: {:?}", r.products);
            assert_eq!(r.products.len(), 8);
        }
    }

    #[test]
    fn seam_cancellation_matches_concat() {
        let seq = build_default(3).unwrap();
        let words = [seq.a(2), seq.b(2), seq.a(1), &w("aab")];
        for x in words {
            for y in words {
                for (ix, iy) in [(false, false), (false, true), (true, false), (true, true)] {
                    let xx = if ix { x.inverse() } else { x.clone() };
                    let yy = if iy { y.inverse() } else { y.clone() };
                    assert_eq!(seam_cancellation((x, ix), (y, iy)), xx.concat(&yy).cancelled);
                }
            }
        }
    }

    #[test]
    fn length_table() {
        let seq = build_default(8).unwrap();
        let t = check_lengths(&seq, 8).unwrap();
        assert!(t.violations().is_empty());
        let lens: Vec<usize> = t.rows.iter().map(|r| r.len_b).collect();
        assert_eq!(lens, vec![1, 4, 14, 50, 178, 634, 2258, 8042, 28642]);
        assert_eq!(t.rows[2].recurrence_bound, Some(14));
        assert_eq!(t.rows[2].recurrence_equality, Some(true));
        assert!(t.c_prime >= 1.0);
        assert!(check_lengths(&seq, 9).is_err());
    }

    #[test]
    fn identities() {
        let seq = build_default(6).unwrap();
        for n in 2..=6 {
            let r = check_identities(&seq, n).unwrap();
            assert!(r.all_hold(), "{r:?}");
        }
        assert!(check_identities(&seq, 1).is_err());
    }

    #[test]
    fn identities_hold_for_arbitrary_pairs() {
        for (x, y) in [("a", "b"), ("ab", "bbA"), ("aBa", "ba")] {
            assert_eq!(bracket_identities(&w(x), &w(y)), [true, true]);
        }
    }
}
