//! Freely reduced words in the free group `F₂ = ⟨a, b⟩`.
//!
//! Text format: `a`, `A`, `b`, `B` stand for `a`, `a⁻¹`, `b`, `b⁻¹`; the
//! identity is written `1`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// One of the two free generators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    A,
    B,
}

/// Exponent sign of a letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// A letter of the alphabet `{a, a⁻¹, b, b⁻¹}`.
///
/// The discriminants give the canonical letter order `a < A < b < B` used
/// for lexicographic comparison of words and for choosing orbit
/// representatives during search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum Letter {
    A = 0,
    AInv = 1,
    B = 2,
    BInv = 3,
}

impl Letter {
    pub const ALL: [Letter; 4] = [Letter::A, Letter::AInv, Letter::B, Letter::BInv];

    pub fn new(generator: Generator, sign: Sign) -> Self {
        match (generator, sign) {
            (Generator::A, Sign::Plus) => Letter::A,
            (Generator::A, Sign::Minus) => Letter::AInv,
            (Generator::B, Sign::Plus) => Letter::B,
            (Generator::B, Sign::Minus) => Letter::BInv,
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Self {
        Self::ALL[i & 3]
    }

    #[inline]
    pub fn generator(self) -> Generator {
        if (self as u8) < 2 {
            Generator::A
        } else {
            Generator::B
        }
    }

    #[inline]
    pub fn sign(self) -> Sign {
        if (self as u8) & 1 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    #[inline]
    pub fn is_positive(self) -> bool {
        (self as u8) & 1 == 0
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Self::from_index(self.index() ^ 1)
    }

    pub fn to_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::AInv => 'A',
            Letter::B => 'b',
            Letter::BInv => 'B',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'a' => Some(Letter::A),
            'A' => Some(Letter::AInv),
            'b' => Some(Letter::B),
            'B' => Some(Letter::BInv),
            _ => None,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// Appends `letters` to an already reduced buffer, cancelling at the seam.
/// Returns the number of cancelled pairs.
fn push_reduced(buf: &mut Vec<Letter>, letters: impl IntoIterator<Item = Letter>) -> usize {
    let mut cancelled = 0;
    for l in letters {
        match buf.last() {
            Some(&last) if last == l.inverse() => {
                buf.pop();
                cancelled += 1;
            }
            _ => buf.push(l),
        }
    }
    cancelled
}

/// A freely reduced word; the empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ReducedWord {
    letters: Vec<Letter>,
}

/// Result of multiplying two reduced words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Concat {
    pub word: ReducedWord,
    /// Number of letter pairs cancelled at the seam.
    pub cancelled: usize,
}

/// Free reduction of an arbitrary letter sequence.
pub fn reduce(raw: &[Letter]) -> ReducedWord {
    let mut buf = Vec::with_capacity(raw.len());
    push_reduced(&mut buf, raw.iter().copied());
    ReducedWord { letters: buf }
}

/// Reduced product `uv` together with its cancellation count.
pub fn concat(u: &ReducedWord, v: &ReducedWord) -> Concat {
    let cancelled = u.cancellation_with(v);
    let mut letters = Vec::with_capacity(u.len() + v.len() - 2 * cancelled);
    letters.extend_from_slice(&u.letters[..u.len() - cancelled]);
    letters.extend_from_slice(&v.letters[cancelled..]);
    Concat {
        word: ReducedWord { letters },
        cancelled,
    }
}

/// `[u, v] = u v u⁻¹ v⁻¹`, reduced.
pub fn commutator(u: &ReducedWord, v: &ReducedWord) -> ReducedWord {
    let mut buf = Vec::with_capacity(2 * (u.len() + v.len()));
    push_reduced(&mut buf, u.letters.iter().copied());
    push_reduced(&mut buf, v.letters.iter().copied());
    push_reduced(&mut buf, u.letters.iter().rev().map(|l| l.inverse()));
    push_reduced(&mut buf, v.letters.iter().rev().map(|l| l.inverse()));
    ReducedWord { letters: buf }
}

/// `v u v⁻¹`, reduced.
pub fn conjugate(u: &ReducedWord, v: &ReducedWord) -> ReducedWord {
    let mut buf = Vec::with_capacity(u.len() + 2 * v.len());
    push_reduced(&mut buf, v.letters.iter().copied());
    push_reduced(&mut buf, u.letters.iter().copied());
    push_reduced(&mut buf, v.letters.iter().rev().map(|l| l.inverse()));
    ReducedWord { letters: buf }
}

impl ReducedWord {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn letter(l: Letter) -> Self {
        ReducedWord { letters: vec![l] }
    }

    pub fn a() -> Self {
        Self::letter(Letter::A)
    }

    pub fn b() -> Self {
        Self::letter(Letter::B)
    }

    /// Wraps a letter sequence that is already known to be reduced.
    pub fn from_reduced(letters: Vec<Letter>) -> Result<Self, Error> {
        if let Some(i) = letters.windows(2).position(|p| p[1] == p[0].inverse()) {
            return Err(Error::NotReduced { position: i });
        }
        Ok(ReducedWord { letters })
    }

    /// Parses a word and freely reduces it.
    pub fn parse_reducing(s: &str) -> Result<Self, Error> {
        Ok(reduce(&parse_letters(s)?))
    }

    /// A uniformly random reduced word of exactly `len` letters.
    pub fn random<R: rand::Rng + ?Sized>(rng: &mut R, len: usize) -> Self {
        let mut letters: Vec<Letter> = Vec::with_capacity(len);
        while letters.len() < len {
            let l = Letter::from_index(rng.random_range(0..4));
            if letters.last().is_none_or(|p| p.inverse() != l) {
                letters.push(l);
            }
        }
        ReducedWord { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.letters
    }

    /// Word length `ℓ(w)`.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    /// Number of pairs that cancel in the product `self · other`.
    pub fn cancellation_with(&self, other: &ReducedWord) -> usize {
        self.letters
            .iter()
            .rev()
            .zip(other.letters.iter())
            .take_while(|(x, y)| **y == x.inverse())
            .count()
    }

    pub fn concat(&self, other: &ReducedWord) -> Concat {
        concat(self, other)
    }

    /// Reduced product, discarding the cancellation count.
    pub fn mul(&self, other: &ReducedWord) -> ReducedWord {
        concat(self, other).word
    }

    pub fn inverse(&self) -> ReducedWord {
        ReducedWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn commutator(&self, other: &ReducedWord) -> ReducedWord {
        commutator(self, other)
    }

    /// `by · self · by⁻¹`.
    pub fn conjugate_by(&self, by: &ReducedWord) -> ReducedWord {
        conjugate(self, by)
    }

    pub fn pow(&self, k: i64) -> ReducedWord {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut buf = Vec::new();
        for _ in 0..k.unsigned_abs() {
            push_reduced(&mut buf, base.letters.iter().copied());
        }
        ReducedWord { letters: buf }
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(&f), Some(&l)) => self.letters.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    /// Splits `self = v c v⁻¹` with `c` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (CyclicWord, ReducedWord) {
        let n = self.letters.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.letters[k] == self.letters[n - 1 - k].inverse() {
            k += 1;
        }
        let core = ReducedWord {
            letters: self.letters[k..n - k].to_vec(),
        };
        let conjugator = ReducedWord {
            letters: self.letters[..k].to_vec(),
        };
        (CyclicWord { word: core }, conjugator)
    }

    /// `|w|`: the length of the cyclic reduction.
    pub fn cyclic_length(&self) -> usize {
        self.cyclic_reduce().0.len()
    }

    /// Signed counts of `a`- and `b`-letters (the image in `ℤ²`).
    pub fn exponent_sums(&self) -> (i64, i64) {
        exponent_sums(&self.letters)
    }

    /// Number of letters on generator `a` and on generator `b`.
    pub fn letter_counts(&self) -> (usize, usize) {
        let na = self
            .letters
            .iter()
            .filter(|l| l.generator() == Generator::A)
            .count();
        (na, self.letters.len() - na)
    }

    /// Substitutes `a ↦ image_a`, `b ↦ image_b` and reduces.
    pub fn substitute(&self, image_a: &ReducedWord, image_b: &ReducedWord) -> ReducedWord {
        let (ia, ib) = (image_a.inverse(), image_b.inverse());
        let mut buf = Vec::new();
        for l in &self.letters {
            let piece = match l {
                Letter::A => image_a,
                Letter::AInv => &ia,
                Letter::B => image_b,
                Letter::BInv => &ib,
            };
            push_reduced(&mut buf, piece.letters.iter().copied());
        }
        ReducedWord { letters: buf }
    }

    /// Applies a letter automorphism.
    pub fn apply(&self, aut: Automorphism) -> ReducedWord {
        ReducedWord {
            letters: self.letters.iter().map(|&l| aut.apply(l)).collect(),
        }
    }
}

pub(crate) fn exponent_sums(letters: &[Letter]) -> (i64, i64) {
    let mut s = (0i64, 0i64);
    for l in letters {
        match l {
            Letter::A => s.0 += 1,
            Letter::AInv => s.0 -= 1,
            Letter::B => s.1 += 1,
            Letter::BInv => s.1 -= 1,
        }
    }
    s
}

fn parse_letters(s: &str) -> Result<Vec<Letter>, Error> {
    let t = s.trim();
    if t == "1" || t.is_empty() {
        return Ok(Vec::new());
    }
    t.chars()
        .filter(|c| !c.is_whitespace())
        .enumerate()
        .map(|(i, c)| {
            Letter::from_char(c).ok_or_else(|| Error::Parse(format!("bad letter {c:?} at {i} in {s:?}")))
        })
        .collect()
}

impl Ord for ReducedWord {
    /// Shortlex: shorter words first, then lexicographic in `a < A < b < B`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for ReducedWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let s: String = self.letters.iter().map(|l| l.to_char()).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ReducedWord({self})")
    }
}

/// Strict parse: the text must already be freely reduced.
impl FromStr for ReducedWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ReducedWord::from_reduced(parse_letters(s)?)
    }
}

impl Serialize for ReducedWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ReducedWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A cyclically reduced word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CyclicWord {
    word: ReducedWord,
}

impl CyclicWord {
    pub fn new(word: ReducedWord) -> Result<Self, Error> {
        if word.is_cyclically_reduced() {
            Ok(CyclicWord { word })
        } else {
            Err(Error::NotCyclicallyReduced(word.to_string()))
        }
    }

    pub fn word(&self) -> &ReducedWord {
        &self.word
    }

    pub fn into_word(self) -> ReducedWord {
        self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Rotation starting at position `k`; stays cyclically reduced.
    pub fn rotate(&self, k: usize) -> CyclicWord {
        let n = self.word.len();
        if n == 0 {
            return self.clone();
        }
        let k = k % n;
        let mut letters = self.word.letters[k..].to_vec();
        letters.extend_from_slice(&self.word.letters[..k]);
        CyclicWord {
            word: ReducedWord { letters },
        }
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.word.fmt(f)
    }
}

/// One of the eight automorphisms of `F₂` that permute the letter set:
/// optionally swap `a ↔ b`, then optionally invert either generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Automorphism {
    pub swap: bool,
    pub flip_a: bool,
    pub flip_b: bool,
}

impl Automorphism {
    pub const IDENTITY: Automorphism = Automorphism {
        swap: false,
        flip_a: false,
        flip_b: false,
    };

    pub fn all() -> [Automorphism; 8] {
        let mut out = [Self::IDENTITY; 8];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = Automorphism {
                swap: i & 4 != 0,
                flip_a: i & 1 != 0,
                flip_b: i & 2 != 0,
            };
        }
        out
    }

    /// Letter permutation table indexed by `Letter::index`.
    pub fn table(self) -> [Letter; 4] {
        let mut t = [Letter::A; 4];
        for l in Letter::ALL {
            t[l.index()] = self.apply(l);
        }
        t
    }

    #[inline]
    pub fn apply(self, l: Letter) -> Letter {
        let mut i = l.index();
        if self.swap {
            i ^= 2;
        }
        let flip = if i < 2 { self.flip_a } else { self.flip_b };
        if flip {
            i ^= 1;
        }
        Letter::from_index(i)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> ReducedWord {
        s.parse().unwrap()
    }

    fn letters(s: &str) -> Vec<Letter> {
        s.chars().map(|c| Letter::from_char(c).unwrap()).collect()
    }

    #[test]
    fn four_letters() {
        let set: std::collections::HashSet<_> = Letter::ALL.iter().collect();
        assert_eq!(set.len(), 4);
        for l in Letter::ALL {
            assert_eq!(Letter::new(l.generator(), l.sign()), l);
            assert_eq!(l.inverse().inverse(), l);
            assert_ne!(l.inverse(), l);
        }
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce(&letters("aA")), ReducedWord::identity());
        assert_eq!(reduce(&letters("abBa")), w("aa"));
        assert_eq!(reduce(&letters("abAabAB")), w("abbAB"));
    }

    #[test]
    fn concat_examples() {
        let c = concat(&w("a"), &w("A"));
        assert_eq!((c.word, c.cancelled), (ReducedWord::identity(), 1));
        let c = concat(&w("ab"), &w("Ba"));
        assert_eq!((c.word, c.cancelled), (w("aa"), 1));
        let c = concat(&w("ab"), &w("ab"));
        assert_eq!((c.word, c.cancelled), (w("abab"), 0));
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(ReducedWord::identity().inverse(), ReducedWord::identity());
        assert_eq!(w("ab").inverse(), w("BA"));
        assert_eq!(w("abAB").inverse(), w("baBA"));
    }

    #[test]
    fn commutator_examples() {
        let (a, b) = (ReducedWord::a(), ReducedWord::b());
        assert_eq!(commutator(&a, &b), w("abAB"));
        assert_eq!(commutator(&a, &a), ReducedWord::identity());
        assert_eq!(commutator(&a, &a.inverse()), ReducedWord::identity());
        assert_eq!(commutator(&a, &ReducedWord::identity()), ReducedWord::identity());
        let c = commutator(&commutator(&a, &b), &commutator(&b, &a.inverse()));
        assert_eq!(c.len(), 14);
        assert_eq!(c, w("abAABabaBAAbaB"));
    }

    #[test]
    fn conjugate_examples() {
        let e = ReducedWord::identity();
        assert_eq!(conjugate(&w("a"), &e), w("a"));
        assert_eq!(conjugate(&e, &w("abA")), e);
        assert_eq!(conjugate(&w("a"), &w("b")), w("baB"));
    }

    #[test]
    fn cyclic_reduce_examples() {
        let (core, v) = w("abA").cyclic_reduce();
        assert_eq!((core.word().clone(), v), (w("b"), w("a")));
        let (core, v) = w("abAB").cyclic_reduce();
        assert_eq!((core.word().clone(), v), (w("abAB"), ReducedWord::identity()));
        let x = w("BaabAb");
        let (core, v) = x.cyclic_reduce();
        assert!(core.len() < x.len());
        assert_eq!((core.word().clone(), v.clone()), (w("ab"), w("Ba")));
        assert_eq!(conjugate(core.word(), &v), x);
        assert_eq!(w("a").cyclic_length(), 1);
    }

    #[test]
    fn exponent_sum_examples() {
        assert_eq!(ReducedWord::identity().exponent_sums(), (0, 0));
        assert_eq!(w("abAB").exponent_sums(), (0, 0));
        assert_eq!(w("aaB").exponent_sums(), (2, -1));
    }

    #[test]
    fn text_format() {
        assert_eq!(ReducedWord::identity().to_string(), "1");
        assert_eq!("1".parse::<ReducedWord>().unwrap(), ReducedWord::identity());
        assert!("aA".parse::<ReducedWord>().is_err());
        assert!("ax".parse::<ReducedWord>().is_err());
        assert_eq!(ReducedWord::parse_reducing("abBa").unwrap(), w("aa"));
        let json = serde_json::to_string(&w("abAB")).unwrap();
        assert_eq!(json, "\"abAB\"");
        assert_eq!(serde_json::from_str::<ReducedWord>(&json).unwrap(), w("abAB"));
    }

    #[test]
    fn automorphisms_are_letter_permutations() {
        let all = Automorphism::all();
        let set: std::collections::HashSet<_> = all.iter().map(|a| a.table()).collect();
        assert_eq!(set.len(), 8);
        for aut in all {
            for l in Letter::ALL {
                assert_eq!(aut.apply(l.inverse()), aut.apply(l).inverse());
            }
        }
    }

    pub(crate) fn raw_letters() -> impl Strategy<Value = Vec<Letter>> {
        prop::collection::vec((0usize..4).prop_map(Letter::from_index), 0..24)
    }

    pub(crate) fn reduced_word(max: usize) -> impl Strategy<Value = ReducedWord> {
        prop::collection::vec((0usize..4).prop_map(Letter::from_index), 0..max)
            .prop_map(|v| reduce(&v))
    }

    proptest! {
        #[test]
        fn reduce_idempotent(raw in raw_letters()) {
            let r = reduce(&raw);
            prop_assert_eq!(reduce(r.letters()), r.clone());
            prop_assert!(ReducedWord::from_reduced(r.into_letters()).is_ok());
        }

        #[test]
        fn concat_associative(u in reduced_word(12), v in reduced_word(12), x in reduced_word(12)) {
            prop_assert_eq!(u.mul(&v).mul(&x), u.mul(&v.mul(&x)));
        }

        #[test]
        fn concat_length_accounting(u in reduced_word(16), v in reduced_word(16)) {
            let c = concat(&u, &v);
            prop_assert_eq!(c.word.len() + 2 * c.cancelled, u.len() + v.len());
            prop_assert!(c.cancelled <= u.len().min(v.len()));
            prop_assert_eq!(c.word, reduce(&[u.letters(), v.letters()].concat()));
        }

        #[test]
        fn inverse_laws(u in reduced_word(16), v in reduced_word(16)) {
            prop_assert_eq!(u.inverse().inverse(), u.clone());
            prop_assert_eq!(u.inverse().len(), u.len());
            prop_assert!(u.mul(&u.inverse()).is_identity());
            prop_assert_eq!(commutator(&u, &v), commutator(&v, &u).inverse());
        }

        #[test]
        fn cyclic_length_bounds(u in reduced_word(16)) {
            let (core, v) = u.cyclic_reduce();
            prop_assert!(core.word().is_cyclically_reduced());
            prop_assert_eq!(conjugate(core.word(), &v), u.clone());
            prop_assert!(u.cyclic_length() <= u.len());
            prop_assert_eq!(u.cyclic_length() == u.len(), u.is_cyclically_reduced());
        }

        #[test]
        fn exponent_sums_homomorphism(u in reduced_word(16), v in reduced_word(16)) {
            let (p, q) = (u.exponent_sums(), v.exponent_sums());
            prop_assert_eq!(u.mul(&v).exponent_sums(), (p.0 + q.0, p.1 + q.1));
        }
    }
}
