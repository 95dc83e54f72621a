//! Degree-truncated power series in two noncommuting indeterminates.
//!
//! A monomial of degree `d` is a string over `{X_a, X_b}` packed into the
//! low `d` bits of an integer (first factor in the most significant bit,
//! `X_a = 0`, `X_b = 1`). Coefficients are stored densely, one layer of
//! `2^d` slots per degree.

use std::fmt;

use crate::coefficient::Coefficient;
use crate::error::{Error, Result};
use crate::word::{Generator, Letter, ReducedWord};

/// Upper limit on the total number of coefficient slots of one series.
pub const DEFAULT_SLOT_BUDGET: usize = 1 << 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    degree: u8,
    bits: u64,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { degree: 0, bits: 0 };

    pub fn new(degree: usize, bits: u64) -> Self {
        assert!(degree < 64, "monomial degree {degree} out of range");
        debug_assert!(degree == 0 || bits >> degree == 0);
        Monomial {
            degree: degree as u8,
            bits,
        }
    }

    pub fn from_indeterminates(xs: &[Generator]) -> Self {
        let bits = xs
            .iter()
            .fold(0u64, |acc, g| (acc << 1) | u64::from(*g == Generator::B));
        Monomial::new(xs.len(), bits)
    }

    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn indeterminates(&self) -> Vec<Generator> {
        (0..self.degree())
            .rev()
            .map(|i| {
                if (self.bits >> i) & 1 == 1 {
                    Generator::B
                } else {
                    Generator::A
                }
            })
            .collect()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree == 0 {
            return f.write_str("1");
        }
        for g in self.indeterminates() {
            f.write_str(match g {
                Generator::A => "Xa",
                Generator::B => "Xb",
            })?;
        }
        Ok(())
    }
}

/// Truncated noncommutative series `Σ c_m m` over monomials of degree `≤ D`.
#[derive(Clone, Debug, PartialEq)]
pub struct NcSeries<C> {
    truncation: usize,
    layers: Vec<Vec<C>>,
}

fn slot_count(truncation: usize) -> Option<usize> {
    1usize.checked_shl(truncation as u32 + 1).map(|n| n - 1)
}

fn check_budget(truncation: usize, budget: usize) -> Result<()> {
    match slot_count(truncation) {
        Some(n) if truncation < 63 && n <= budget => Ok(()),
        n => Err(Error::SeriesBudget {
            degree: truncation,
            terms: n.unwrap_or(usize::MAX),
            budget,
        }),
    }
}

#[inline]
fn gen_bit(g: Generator) -> usize {
    match g {
        Generator::A => 0,
        Generator::B => 1,
    }
}

impl<C: Coefficient> NcSeries<C> {
    pub fn zero(truncation: usize) -> Result<Self> {
        Self::zero_with_budget(truncation, DEFAULT_SLOT_BUDGET)
    }

    pub fn zero_with_budget(truncation: usize, budget: usize) -> Result<Self> {
        check_budget(truncation, budget)?;
        let layers = (0..=truncation).map(|d| vec![C::zero(); 1 << d]).collect();
        Ok(NcSeries { truncation, layers })
    }

    pub fn one(truncation: usize) -> Result<Self> {
        let mut s = Self::zero(truncation)?;
        s.layers[0][0] = C::one();
        Ok(s)
    }

    /// Image of a single letter: `a ↦ 1 + X_a`, `a⁻¹ ↦ Σ (−1)ⁱ X_aⁱ`.
    pub fn letter(l: Letter, truncation: usize) -> Result<Self> {
        let mut s = Self::one(truncation)?;
        s.mul_letter(l)?;
        Ok(s)
    }

    /// Magnus expansion of a word, truncated at degree `truncation`.
    pub fn expand(w: &ReducedWord, truncation: usize) -> Result<Self> {
        Self::expand_with_budget(w, truncation, DEFAULT_SLOT_BUDGET)
    }

    pub fn expand_with_budget(w: &ReducedWord, truncation: usize, budget: usize) -> Result<Self> {
        let mut s = Self::zero_with_budget(truncation, budget)?;
        s.layers[0][0] = C::one();
        for &l in w.letters() {
            s.mul_letter(l)?;
        }
        Ok(s)
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn coefficient(&self, m: Monomial) -> Option<&C> {
        self.layers.get(m.degree())?.get(m.bits as usize)
    }

    /// Right multiplication by the image of one letter, in place.
    ///
    /// Costs `O(2^D)` coefficient operations whatever the sign of the letter.
    pub fn mul_letter(&mut self, l: Letter) -> Result<()> {
        let bit = gen_bit(l.generator());
        if l.is_positive() {
            // S·(1+X): the coefficient of m·X gains that of m. Walk degrees
            // downward so every source layer is still the old one.
            for d in (0..self.truncation).rev() {
                let (lo, hi) = self.layers.split_at_mut(d + 1);
                let (src, dst) = (&lo[d], &mut hi[0]);
                for (idx, c) in src.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let slot = &mut dst[(idx << 1) | bit];
                    *slot = slot.add_checked(c).ok_or(Error::Overflow("series product"))?;
                }
            }
        } else {
            // T = S·(1+X)⁻¹ solves T(1+X) = S degree by degree upward.
            for d in 1..=self.truncation {
                let (lo, hi) = self.layers.split_at_mut(d);
                let (src, dst) = (&lo[d - 1], &mut hi[0]);
                for (idx, c) in src.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let slot = &mut dst[(idx << 1) | bit];
                    *slot = slot.sub_checked(c).ok_or(Error::Overflow("series product"))?;
                }
            }
        }
        Ok(())
    }

    /// Truncated product of two series with the same truncation degree.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.truncation != rhs.truncation {
            return Err(Error::InvalidArgument(format!(
                "truncation mismatch: {} vs {}",
                self.truncation, rhs.truncation
            )));
        }
        let mut out = Self::zero(self.truncation)?;
        for (d1, l1) in self.layers.iter().enumerate() {
            for (i, x) in l1.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (d2, l2) in rhs.layers.iter().enumerate().take(self.truncation - d1 + 1) {
                    for (j, y) in l2.iter().enumerate() {
                        if y.is_zero() {
                            continue;
                        }
                        let p = x.mul_checked(y).ok_or(Error::Overflow("series product"))?;
                        let slot = &mut out.layers[d1 + d2][(i << d2) | j];
                        *slot = slot.add_checked(&p).ok_or(Error::Overflow("series product"))?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Nonzero terms in increasing degree, then increasing monomial bits.
    pub fn terms(&self) -> impl Iterator<Item = (Monomial, &C)> + '_ {
        self.layers.iter().enumerate().flat_map(|(d, layer)| {
            layer
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(move |(i, c)| (Monomial::new(d, i as u64), c))
        })
    }

    pub fn terms_of_degree(&self, d: usize) -> Vec<(Monomial, C)> {
        self.layers
            .get(d)
            .map(|layer| {
                layer
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| (Monomial::new(d, i as u64), c.clone()))
                    .collect()
            })
            .unwrap_or_default()
    }

    /// Smallest positive degree carrying a nonzero coefficient.
    pub fn min_positive_degree(&self) -> Option<usize> {
        (1..=self.truncation).find(|&d| self.layers[d].iter().any(|c| !c.is_zero()))
    }

    pub fn is_one(&self) -> bool {
        self.layers[0][0].is_one() && self.min_positive_degree().is_none()
    }

    /// Degree-one coefficients `(c_{X_a}, c_{X_b})`; for an expansion these
    /// are the exponent sums.
    pub fn linear_part(&self) -> Option<(&C, &C)> {
        self.layers.get(1).map(|l| (&l[0], &l[1]))
    }
}

impl<C: Coefficient> fmt::Display for NcSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.terms() {
            if first {
                write!(f, "{c}")?;
            } else if c.is_negative() {
                write!(f, " - {}", c.abs())?;
            } else {
                write!(f, " + {c}")?;
            }
            if m.degree() > 0 {
                write!(f, "*{m}")?;
            }
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn m(s: &str) -> Monomial {
        let xs: Vec<Generator> = s
            .chars()
            .map(|c| if c == 'a' { Generator::A } else { Generator::B })
            .collect();
        Monomial::from_indeterminates(&xs)
    }

    fn coeffs(s: &NcSeries<i64>) -> Vec<(String, i64)> {
        s.terms().map(|(m, c)| (m.to_string(), *c)).collect()
    }

    #[test]
    fn letter_images() {
        let s = NcSeries::<i64>::letter(Letter::A, 2).unwrap();
        assert_eq!(coeffs(&s), vec![("1".into(), 1), ("Xa".into(), 1)]);
        let s = NcSeries::<i64>::letter(Letter::AInv, 2).unwrap();
        assert_eq!(
            coeffs(&s),
            vec![("1".into(), 1), ("Xa".into(), -1), ("XaXa".into(), 1)]
        );
        let s = NcSeries::<i64>::letter(Letter::BInv, 3).unwrap();
        assert_eq!(*s.coefficient(m("bbb")).unwrap(), -1);
    }

    #[test]
    fn letter_times_inverse_is_one() {
        for l in Letter::ALL {
            let x = NcSeries::<BigInt>::letter(l, 3).unwrap();
            let y = NcSeries::<BigInt>::letter(l.inverse(), 3).unwrap();
            assert!(x.mul(&y).unwrap().is_one());
        }
    }

    #[test]
    fn commutator_expansion_degree_two() {
        // (1+a)(1+b)(1-a+a²)(1-b+b²) up to degree 2, multiplied out by hand:
        // linear terms cancel; quadratic: ab - ba (a², b² and the mixed
        // terms from inverse pairs cancel).
        let w: ReducedWord = "abAB".parse().unwrap();
        let s = NcSeries::<i64>::expand(&w, 2).unwrap();
        assert_eq!(
            coeffs(&s),
            vec![("1".into(), 1), ("XaXb".into(), 1), ("XbXa".into(), -1)]
        );
    }

    #[test]
    fn expansion_examples() {
        let s = NcSeries::<i64>::expand(&ReducedWord::identity(), 5).unwrap();
        assert!(s.is_one());
        let s = NcSeries::<i64>::expand(&"aa".parse().unwrap(), 2).unwrap();
        assert_eq!(
            coeffs(&s),
            vec![("1".into(), 1), ("Xa".into(), 2), ("XaXa".into(), 1)]
        );
    }

    #[test]
    fn budget_and_overflow() {
        assert!(matches!(
            NcSeries::<i64>::zero_with_budget(10, 100),
            Err(Error::SeriesBudget { .. })
        ));
        let w = ReducedWord::a().pow(200);
        assert!(matches!(
            NcSeries::<i32>::expand(&w, 8),
            Err(Error::Overflow(_))
        ));
        assert!(NcSeries::<BigInt>::expand(&w, 8).is_ok());
    }

    #[test]
    fn monomial_roundtrip() {
        let x = m("abba");
        assert_eq!(x.degree(), 4);
        assert_eq!(x.bits(), 0b0110);
        assert_eq!(x.to_string(), "XaXbXbXa");
        assert_eq!(Monomial::from_indeterminates(&x.indeterminates()), x);
    }

    #[test]
    fn display() {
        let w: ReducedWord = "abAB".parse().unwrap();
        let s = NcSeries::<i64>::expand(&w, 2).unwrap();
        assert_eq!(s.to_string(), "1 + 1*XaXb - 1*XbXa");
    }
}
