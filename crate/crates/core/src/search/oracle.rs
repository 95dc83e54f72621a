use crate::girth::fox_projections_vanish;
use crate::group_ring::GroupElement;
use crate::magnus::NcSeries;
use crate::quotient::QuotientGroup;
use crate::word::{Automorphism, Letter};

use super::symmetry::Invariance;

/// A membership predicate evaluated incrementally along a word.
pub trait Oracle: Sync {
    type State: Clone + Send;

    fn id(&self) -> String;

    fn invariance(&self) -> Invariance;

    fn root(&self) -> Self::State;

    fn push(&self, state: &Self::State, l: Letter) -> Self::State;

    /// `false` only if no completion with `remaining` more letters can be accepted.
    fn viable(&self, _state: &Self::State, _remaining: usize) -> bool {
        true
    }

    fn accept(&self, state: &Self::State, letters: &[Letter]) -> bool;
}

fn kernel_invariance<Q: QuotientGroup>(q: &Q) -> Invariance {
    Invariance {
        conjugation: true,
        inversion: true,
        automorphisms: Automorphism::all()
            .into_iter()
            .filter(|&s| q.preserves_kernel(s))
            .collect(),
    }
}

/// `w ∈ ker(F₂ → Q)`.
pub struct KernelOracle<Q> {
    pub q: Q,
    invariance: Invariance,
}

impl<Q: QuotientGroup> KernelOracle<Q> {
    pub fn new(q: Q) -> Self {
        let invariance = kernel_invariance(&q);
        KernelOracle { q, invariance }
    }
}

impl<Q: QuotientGroup> Oracle for KernelOracle<Q> {
    type State = Q::Elem;

    fn id(&self) -> String {
        format!("kernel:{}", self.q.describe())
    }

    fn invariance(&self) -> Invariance {
        self.invariance.clone()
    }

    fn root(&self) -> Q::Elem {
        self.q.identity()
    }

    fn push(&self, state: &Q::Elem, l: Letter) -> Q::Elem {
        state.op(self.q.letter_image(l))
    }

    fn viable(&self, state: &Q::Elem, remaining: usize) -> bool {
        self.q.distance_bound(state) <= remaining
    }

    fn accept(&self, state: &Q::Elem, letters: &[Letter]) -> bool {
        !letters.is_empty() && *state == self.q.identity()
    }
}

/// `w ∈ [Λ,Λ]` for `Λ = ker(F₂ → Q)`.
pub struct DerivedOracle<Q> {
    pub q: Q,
    invariance: Invariance,
}

impl<Q: QuotientGroup> DerivedOracle<Q> {
    pub fn new(q: Q) -> Self {
        let invariance = kernel_invariance(&q);
        DerivedOracle { q, invariance }
    }
}

impl<Q: QuotientGroup> Oracle for DerivedOracle<Q> {
    type State = Q::Elem;

    fn id(&self) -> String {
        format!("derived:{}", self.q.describe())
    }

    fn invariance(&self) -> Invariance {
        self.invariance.clone()
    }

    fn root(&self) -> Q::Elem {
        self.q.identity()
    }

    fn push(&self, state: &Q::Elem, l: Letter) -> Q::Elem {
        state.op(self.q.letter_image(l))
    }

    fn viable(&self, state: &Q::Elem, remaining: usize) -> bool {
        self.q.distance_bound(state) <= remaining
    }

    fn accept(&self, state: &Q::Elem, letters: &[Letter]) -> bool {
        !letters.is_empty() && *state == self.q.identity() && fox_projections_vanish(letters, &self.q)
    }
}

/// `w ∈ γ_n(F₂)`, tracked through the Magnus expansion truncated at degree `n−1`.
pub struct LcsOracle {
    n: usize,
}

impl LcsOracle {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "lower central series terms are indexed from 1");
        LcsOracle { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

impl Oracle for LcsOracle {
    type State = Option<NcSeries<i64>>;

    fn id(&self) -> String {
        format!("lcs:{}", self.n)
    }

    fn invariance(&self) -> Invariance {
        Invariance::full()
    }

    fn root(&self) -> Self::State {
        (self.n > 1).then(|| NcSeries::one(self.n - 1).expect("small truncation"))
    }

    fn push(&self, state: &Self::State, l: Letter) -> Self::State {
        state.as_ref().map(|s| {
            let mut s = s.clone();
            s.mul_letter(l).expect("coefficients fit in i64 at search lengths");
            s
        })
    }

    fn viable(&self, state: &Self::State, remaining: usize) -> bool {
        match state.as_ref().and_then(|s| s.linear_part()) {
            Some((ca, cb)) => (ca.unsigned_abs() + cb.unsigned_abs()) as usize <= remaining,
            None => true,
        }
    }

    fn accept(&self, state: &Self::State, letters: &[Letter]) -> bool {
        !letters.is_empty() && state.as_ref().is_none_or(|s| s.is_one())
    }
}

impl<O: Oracle + ?Sized> Oracle for &O {
    type State = O::State;

    fn id(&self) -> String {
        (**self).id()
    }

    fn invariance(&self) -> Invariance {
        (**self).invariance()
    }

    fn root(&self) -> O::State {
        (**self).root()
    }

    fn push(&self, state: &O::State, l: Letter) -> O::State {
        (**self).push(state, l)
    }

    fn viable(&self, state: &O::State, remaining: usize) -> bool {
        (**self).viable(state, remaining)
    }

    fn accept(&self, state: &O::State, letters: &[Letter]) -> bool {
        (**self).accept(state, letters)
    }
}
