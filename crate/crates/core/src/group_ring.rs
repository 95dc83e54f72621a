//! Integer group rings `ℤ[G]` with finitely supported elements.

use std::collections::BTreeMap;
use std::fmt::{self, Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;

use crate::coefficient::Coefficient;
use crate::error::{Error, Result};
use crate::word::ReducedWord;

/// A group element that knows how to multiply itself.
pub trait GroupElement: Clone + Eq + Ord + Hash + Debug + Send + Sync {
    fn op(&self, rhs: &Self) -> Self;
    fn inv(&self) -> Self;
}

impl GroupElement for ReducedWord {
    fn op(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }

    fn inv(&self) -> Self {
        self.inverse()
    }
}

/// `Σ c_g g` with no zero coefficient stored.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupRingElement<G, C> {
    terms: BTreeMap<G, C>,
}

/// Elements of `ℤ[F₂]` with unbounded coefficients.
pub type FreeGroupRingElement = GroupRingElement<ReducedWord, BigInt>;

impl<G: GroupElement, C: Coefficient> Default for GroupRingElement<G, C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<G: GroupElement, C: Coefficient> GroupRingElement<G, C> {
    pub fn zero() -> Self {
        GroupRingElement {
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(g: G, c: C) -> Self {
        let mut out = Self::zero();
        out.add_term(g, c).expect("adding to zero cannot overflow");
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, g: &G) -> C {
        self.terms.get(g).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&G, &C)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, g: G, c: C) -> Result<()> {
        if c.is_zero() {
            return Ok(());
        }
        match self.terms.get_mut(&g) {
            Some(slot) => {
                let sum = slot.add_checked(&c).ok_or(Error::Overflow("group ring sum"))?;
                if sum.is_zero() {
                    self.terms.remove(&g);
                } else {
                    *slot = sum;
                }
            }
            None => {
                self.terms.insert(g, c);
            }
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (g, c) in &rhs.terms {
            out.add_term(g.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        GroupRingElement {
            terms: self.terms.iter().map(|(g, c)| (g.clone(), -c.clone())).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        let mut out = Self::zero();
        for (g, c) in &self.terms {
            for (h, d) in &rhs.terms {
                let p = c.mul_checked(d).ok_or(Error::Overflow("group ring product"))?;
                out.add_term(g.op(h), p)?;
            }
        }
        Ok(out)
    }

    /// Augmentation `ε(Σ c_g g) = Σ c_g`.
    pub fn augmentation(&self) -> Result<C> {
        self.terms.values().try_fold(C::zero(), |acc, c| {
            acc.add_checked(c).ok_or(Error::Overflow("augmentation"))
        })
    }

    /// Push-forward along a map of groups, summing coefficients that land
    /// on the same element.
    pub fn map<H: GroupElement>(&self, f: impl Fn(&G) -> H) -> Result<GroupRingElement<H, C>> {
        let mut out = GroupRingElement::zero();
        for (g, c) in &self.terms {
            out.add_term(f(g), c.clone())?;
        }
        Ok(out)
    }
}

impl<G: Debug, C: Display> Debug for GroupRingElement<G, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(g, c)| format!("{c}·{g:?}")).collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl<G: Display, C: Display> Display for GroupRingElement<G, C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(g, c)| format!("{c}·{g}")).collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}
