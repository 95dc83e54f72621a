//! Quotients `F₂ → Q` whose kernels serve as normal subgroups `Λ`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group_ring::GroupElement;
use crate::word::{Automorphism, Letter};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum QuotientKind {
    FinitePermutation,
    FreeAbelianRank2,
}

/// A group with decidable equality together with images of `a` and `b`.
pub trait QuotientGroup: Send + Sync {
    type Elem: GroupElement;

    fn kind(&self) -> QuotientKind;

    fn identity(&self) -> Self::Elem;

    fn letter_image(&self, l: Letter) -> &Self::Elem;

    /// A lower bound on the length of any word mapping to `g`.
    fn distance_bound(&self, g: &Self::Elem) -> usize;

    /// Whether `ker(F₂ → Q)` is mapped onto itself by `aut`.
    fn preserves_kernel(&self, aut: Automorphism) -> bool;

    fn describe(&self) -> String;

    fn evaluate(&self, letters: &[Letter]) -> Self::Elem {
        letters
            .iter()
            .fold(self.identity(), |g, &l| g.op(self.letter_image(l)))
    }

    /// Whether every letter automorphism preserves the kernel.
    fn fully_symmetric(&self) -> bool {
        Automorphism::all().iter().all(|&s| self.preserves_kernel(s))
    }
}

/// A point of `ℤ²`; the group law is addition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Lattice(pub i64, pub i64);

impl GroupElement for Lattice {
    fn op(&self, rhs: &Self) -> Self {
        Lattice(self.0 + rhs.0, self.1 + rhs.1)
    }

    fn inv(&self) -> Self {
        Lattice(-self.0, -self.1)
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.0, self.1)
    }
}

/// Abelianisation `F₂ → ℤ²` by exponent sums; its kernel is `F₂⁽¹⁾ = γ₂(F₂)`.
#[derive(Clone, Debug)]
pub struct FreeAbelian2 {
    images: [Lattice; 4],
}

impl FreeAbelian2 {
    pub fn new() -> Self {
        FreeAbelian2 {
            images: [Lattice(1, 0), Lattice(-1, 0), Lattice(0, 1), Lattice(0, -1)],
        }
    }
}

impl Default for FreeAbelian2 {
    fn default() -> Self {
        Self::new()
    }
}

impl QuotientGroup for FreeAbelian2 {
    type Elem = Lattice;

    fn kind(&self) -> QuotientKind {
        QuotientKind::FreeAbelianRank2
    }

    fn identity(&self) -> Lattice {
        Lattice(0, 0)
    }

    fn letter_image(&self, l: Letter) -> &Lattice {
        &self.images[l.index()]
    }

    fn distance_bound(&self, g: &Lattice) -> usize {
        (g.0.unsigned_abs() + g.1.unsigned_abs()) as usize
    }

    fn preserves_kernel(&self, _aut: Automorphism) -> bool {
        true
    }

    fn describe(&self) -> String {
        "z2".into()
    }
}

/// A permutation of `{0, …, n−1}`, composed left to right:
/// `(p·q)(i) = q(p(i))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm((0..degree as u8).collect())
    }

    pub fn from_images(images: Vec<u8>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            let slot = seen
                .get_mut(i as usize)
                .ok_or_else(|| Error::Parse(format!("point {i} out of range")))?;
            if *slot {
                return Err(Error::Parse(format!("point {i} repeated")));
            }
            *slot = true;
        }
        Ok(Perm(images))
    }

    /// Parses products of cycles in 1-based notation, e.g. `(1 2)(3 4)`.
    pub fn parse_cycles(s: &str, degree: usize) -> Result<Self> {
        let mut images: Vec<u8> = (0..degree as u8).collect();
        let body = s.trim();
        let mut rest = body;
        while !rest.is_empty() {
            let open = rest
                .find('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in {body:?}")))?;
            if !rest[..open].trim().is_empty() {
                return Err(Error::Parse(format!("stray text in {body:?}")));
            }
            let close = rest[open..]
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in {body:?}")))?
                + open;
            let points: Vec<usize> = rest[open + 1..close]
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<usize>()
                        .ok()
                        .filter(|&p| p >= 1 && p <= degree)
                        .ok_or_else(|| Error::Parse(format!("bad point {t:?} in {body:?}")))
                })
                .collect::<Result<_>>()?;
            // Cycles compose left to right like the permutations themselves.
            let mut cycle: Vec<u8> = (0..degree as u8).collect();
            for (k, &p) in points.iter().enumerate() {
                cycle[p - 1] = (points[(k + 1) % points.len()] - 1) as u8;
            }
            let cycle = Perm::from_images(cycle)?;
            images = Perm(images).op(&cycle).0;
            rest = rest[close + 1..].trim_start();
        }
        Perm::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &p)| i == p as usize)
    }
}

impl GroupElement for Perm {
    fn op(&self, rhs: &Self) -> Self {
        Perm(self.0.iter().map(|&i| rhs.0[i as usize]).collect())
    }

    fn inv(&self) -> Self {
        let mut out = vec![0u8; self.0.len()];
        for (i, &p) in self.0.iter().enumerate() {
            out[p as usize] = i as u8;
        }
        Perm(out)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut any = false;
        for start in 0..n {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            any = true;
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push((i + 1).to_string());
                i = self.0[i] as usize;
            }
            write!(f, "({})", cycle.join(" "))?;
        }
        if !any {
            f.write_str("()")?;
        }
        Ok(())
    }
}

/// `F₂ → ⟨image_a, image_b⟩ ≤ S_n`.
#[derive(Clone, Debug)]
pub struct PermQuotient {
    degree: usize,
    images: [Perm; 4],
    /// Cayley-graph distance of every element of the image from the identity.
    distances: HashMap<Perm, usize>,
    /// One word (as letters) reaching each element, in BFS order.
    elements: Vec<(Perm, Vec<Letter>)>,
}

/// Refuses to enumerate image groups larger than this.
pub const MAX_PERM_GROUP_ORDER: usize = 1 << 20;

impl PermQuotient {
    pub fn new(image_a: Perm, image_b: Perm) -> Result<Self> {
        if image_a.degree() != image_b.degree() {
            return Err(Error::InvalidArgument("permutations of different degree".into()));
        }
        let degree = image_a.degree();
        let images = [image_a.clone(), image_a.inv(), image_b.clone(), image_b.inv()];
        let mut distances = HashMap::new();
        let mut elements = Vec::new();
        let mut queue = VecDeque::new();
        let id = Perm::identity(degree);
        distances.insert(id.clone(), 0);
        queue.push_back((id, Vec::new()));
        while let Some((g, word)) = queue.pop_front() {
            let d = distances[&g];
            for l in Letter::ALL {
                let h = g.op(&images[l.index()]);
                if !distances.contains_key(&h) {
                    if distances.len() >= MAX_PERM_GROUP_ORDER {
                        return Err(Error::InvalidArgument("permutation group too large".into()));
                    }
                    distances.insert(h.clone(), d + 1);
                    let mut w: Vec<Letter> = word.clone();
                    w.push(l);
                    queue.push_back((h, w));
                }
            }
            elements.push((g, word));
        }
        Ok(PermQuotient {
            degree,
            images,
            distances,
            elements,
        })
    }

    /// Parses `a=(1 2);b=(2 3)`; the degree is the largest point mentioned.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut a = None;
        let mut b = None;
        let parts: Vec<(&str, &str)> = spec
            .split(';')
            .filter(|p| !p.trim().is_empty())
            .map(|p| {
                p.split_once('=')
                    .map(|(k, v)| (k.trim(), v.trim()))
                    .ok_or_else(|| Error::Parse(format!("expected gen=cycles in {p:?}")))
            })
            .collect::<Result<_>>()?;
        let degree = spec
            .split(|c: char| !c.is_ascii_digit())
            .filter_map(|t| t.parse::<usize>().ok())
            .max()
            .unwrap_or(1)
            .max(1);
        if degree > 255 {
            return Err(Error::Parse("permutation degree above 255".into()));
        }
        for (k, v) in parts {
            let p = Perm::parse_cycles(v, degree)?;
            match k {
                "a" => a = Some(p),
                "b" => b = Some(p),
                _ => return Err(Error::Parse(format!("unknown generator {k:?}"))),
            }
        }
        match (a, b) {
            (Some(a), Some(b)) => Self::new(a, b),
            _ => Err(Error::Parse(format!("need images of both a and b in {spec:?}"))),
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = &Perm> {
        self.elements.iter().map(|(g, _)| g)
    }

    /// Checks closure, identity, inverses and associativity on the image.
    pub fn check_axioms(&self) -> bool {
        let id = self.identity();
        let elems: Vec<&Perm> = self.elements().collect();
        let closed = elems
            .iter()
            .all(|g| elems.iter().all(|h| self.distances.contains_key(&g.op(h))));
        let unit = elems.iter().all(|g| g.op(&id) == **g && id.op(g) == **g);
        let inverses = elems
            .iter()
            .all(|g| self.distances.contains_key(&g.inv()) && g.op(&g.inv()) == id);
        let assoc = elems.len() > 64
            || elems.iter().all(|x| {
                elems
                    .iter()
                    .all(|y| elems.iter().all(|z| x.op(y).op(z) == x.op(&y.op(z))))
            });
        closed && unit && inverses && assoc
    }
}

impl QuotientGroup for PermQuotient {
    type Elem = Perm;

    fn kind(&self) -> QuotientKind {
        QuotientKind::FinitePermutation
    }

    fn identity(&self) -> Perm {
        Perm::identity(self.degree)
    }

    fn letter_image(&self, l: Letter) -> &Perm {
        &self.images[l.index()]
    }

    fn distance_bound(&self, g: &Perm) -> usize {
        self.distances.get(g).copied().unwrap_or(0)
    }

    /// `aut` preserves the kernel iff `φ(w) ↦ φ(aut(w))` is a well-defined
    /// map on the image; then `ker φ ⊆ ker φ∘aut`, and equal indices force
    /// equality.
    fn preserves_kernel(&self, aut: Automorphism) -> bool {
        let mut map: HashMap<&Perm, Perm> = HashMap::with_capacity(self.elements.len());
        for (g, word) in &self.elements {
            let moved: Vec<Letter> = word.iter().map(|&l| aut.apply(l)).collect();
            map.insert(g, self.evaluate(&moved));
        }
        self.elements.iter().all(|(g, _)| {
            Letter::ALL.iter().all(|&l| {
                let target = g.op(self.letter_image(l));
                map[&target] == map[g].op(self.letter_image(aut.apply(l)))
            })
        })
    }

    fn describe(&self) -> String {
        format!("perm:a={};b={}", self.images[0], self.images[2])
    }
}
