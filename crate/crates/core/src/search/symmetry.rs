use std::cmp::Ordering;

use serde::Serialize;

use crate::word::{Automorphism, Letter};

/// Which symmetries a search may quotient by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PruneFlags {
    /// Enumerate cyclically reduced words up to rotation.
    pub cyclic: bool,
    pub inverse: bool,
    pub automorphisms: bool,
}

impl PruneFlags {
    pub const ALL: PruneFlags = PruneFlags {
        cyclic: true,
        inverse: true,
        automorphisms: true,
    };
    pub const NONE: PruneFlags = PruneFlags {
        cyclic: false,
        inverse: false,
        automorphisms: false,
    };
}

/// What an oracle guarantees about itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariance {
    pub conjugation: bool,
    pub inversion: bool,
    /// A subgroup of the eight letter automorphisms under which the oracle is
    /// invariant. Always contains the identity.
    pub automorphisms: Vec<Automorphism>,
}

impl Invariance {
    pub fn full() -> Self {
        Invariance {
            conjugation: true,
            inversion: true,
            automorphisms: Automorphism::all().to_vec(),
        }
    }

    pub fn none() -> Self {
        Invariance {
            conjugation: false,
            inversion: false,
            automorphisms: vec![Automorphism::IDENTITY],
        }
    }
}

/// The symmetry group actually used: requested flags intersected with what
/// the oracle declares.
#[derive(Clone, Debug)]
pub struct Symmetry {
    pub rotations: bool,
    pub inversion: bool,
    tables: Vec<[u8; 4]>,
}

impl Symmetry {
    pub fn new(flags: PruneFlags, inv: &Invariance) -> Self {
        let mut tables = vec![table(Automorphism::IDENTITY)];
        if flags.automorphisms {
            for &s in &inv.automorphisms {
                let t = table(s);
                if !tables.contains(&t) {
                    tables.push(t);
                }
            }
        }
        Symmetry {
            rotations: flags.cyclic && inv.conjugation,
            inversion: flags.inverse && inv.inversion,
            tables,
        }
    }

    pub fn trivial() -> Self {
        Symmetry::new(PruneFlags::NONE, &Invariance::none())
    }

    pub fn flags(&self) -> PruneFlags {
        PruneFlags {
            cyclic: self.rotations,
            inverse: self.inversion,
            automorphisms: self.tables.len() > 1,
        }
    }

    pub fn automorphism_count(&self) -> usize {
        self.tables.len()
    }

    /// Letters allowed in position 0 of a canonical word.
    pub fn first_letters(&self) -> Vec<Letter> {
        Letter::ALL
            .into_iter()
            .filter(|l| {
                let i = l.index() as u8;
                self.tables.iter().all(|t| t[i as usize] >= i)
            })
            .collect()
    }

    /// Every word in the orbit of `w`, including `w`.
    pub fn orbit(&self, w: &[Letter]) -> Vec<Vec<Letter>> {
        let n = w.len();
        let idx: Vec<u8> = w.iter().map(|l| l.index() as u8).collect();
        let mut bases = vec![idx.clone()];
        if self.inversion {
            bases.push(idx.iter().rev().map(|&i| i ^ 1).collect());
        }
        let mut out = Vec::new();
        for base in &bases {
            let shifts = if self.rotations { n.max(1) } else { 1 };
            for r in 0..shifts {
                for t in &self.tables {
                    let v: Vec<Letter> = (0..n)
                        .map(|k| Letter::from_index(t[base[(k + r) % n] as usize] as usize))
                        .collect();
                    out.push(v);
                }
            }
        }
        out.sort_by_key(|v| key(v));
        out.dedup();
        out
    }

    /// Whether `w` is the lexicographically least element of its orbit.
    pub fn is_canonical(&self, w: &[Letter]) -> bool {
        let n = w.len();
        let idx: Vec<u8> = w.iter().map(|l| l.index() as u8).collect();
        let inverse: Vec<u8> = idx.iter().rev().map(|&i| i ^ 1).collect();
        let shifts = if self.rotations { n.max(1) } else { 1 };
        let mut bases: Vec<&[u8]> = vec![&idx];
        if self.inversion {
            bases.push(&inverse);
        }
        for base in bases {
            for r in 0..shifts {
                for t in &self.tables {
                    for k in 0..n {
                        let c = t[base[(k + r) % n] as usize];
                        match c.cmp(&idx[k]) {
                            Ordering::Less => return false,
                            Ordering::Greater => break,
                            Ordering::Equal => {}
                        }
                    }
                }
            }
        }
        true
    }

    pub fn root(&self) -> PruneState {
        PruneState { ties: Vec::new() }
    }

    /// Extends the prefix tracker by the letter at position `k = prefix.len() - 1`.
    /// Returns `None` when no completion of `prefix` can be canonical.
    pub fn extend(&self, state: &PruneState, prefix: &[Letter]) -> Option<PruneState> {
        let k = prefix.len() - 1;
        let new = prefix[k].index() as u8;
        let at = |i: usize| prefix[i].index() as u8;
        let mut ties = Vec::with_capacity(state.ties.len() + self.tables.len());
        for &(start, ti) in &state.ties {
            let c = self.tables[ti as usize][new as usize];
            match c.cmp(&at(k - start as usize)) {
                Ordering::Less => return None,
                Ordering::Equal => ties.push((start, ti)),
                Ordering::Greater => {}
            }
        }
        let first = at(0);
        if k == 0 {
            for (ti, t) in self.tables.iter().enumerate().skip(1) {
                match t[new as usize].cmp(&first) {
                    Ordering::Less => return None,
                    Ordering::Equal => ties.push((0, ti as u8)),
                    Ordering::Greater => {}
                }
            }
        } else if self.rotations {
            for (ti, t) in self.tables.iter().enumerate() {
                match t[new as usize].cmp(&first) {
                    Ordering::Less => return None,
                    Ordering::Equal => ties.push((k as u8, ti as u8)),
                    Ordering::Greater => {}
                }
            }
        }
        if self.rotations && self.inversion {
            // The inverse word read from the image of position k backwards.
            for t in &self.tables {
                for j in 0..=k {
                    let c = t[(at(k - j) ^ 1) as usize];
                    match c.cmp(&at(j)) {
                        Ordering::Less => return None,
                        Ordering::Greater => break,
                        Ordering::Equal => {}
                    }
                }
            }
        }
        Some(PruneState { ties })
    }
}

/// Comparisons between the prefix and its symmetric images that are still tied.
#[derive(Clone, Debug, Default)]
pub struct PruneState {
    ties: Vec<(u8, u8)>,
}

fn table(s: Automorphism) -> [u8; 4] {
    let t = s.table();
    [
        t[0].index() as u8,
        t[1].index() as u8,
        t[2].index() as u8,
        t[3].index() as u8,
    ]
}

pub(crate) fn key(w: &[Letter]) -> Vec<u8> {
    w.iter().map(|l| l.index() as u8).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn all_reduced(len: usize) -> Vec<Vec<Letter>> {
        let mut out: Vec<Vec<Letter>> = vec![vec![]];
        for _ in 0..len {
            let mut next = Vec::new();
            for w in &out {
                for l in Letter::ALL {
                    if w.last().is_some_and(|&p| p == l.inverse()) {
                        continue;
                    }
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
            out = next;
        }
        out
    }

    fn cyclic(w: &[Letter]) -> bool {
        w.len() < 2 || w[0] != w[w.len() - 1].inverse()
    }

    /// Brute force: canonical words are exactly those that survive pruning.
    fn survivors(sym: &Symmetry, len: usize) -> BTreeSet<Vec<u8>> {
        all_reduced(len)
            .into_iter()
            .filter(|w| {
                let mut st = sym.root();
                for k in 0..w.len() {
                    match sym.extend(&st, &w[..=k]) {
                        Some(s) => st = s,
                        None => return false,
                    }
                }
                true
            })
            .map(|w| key(&w))
            .collect()
    }

    #[test]
    fn pruning_never_drops_canonical_words() {
        let configs = [
            PruneFlags::ALL,
            PruneFlags::NONE,
            PruneFlags {
                cyclic: true,
                inverse: true,
                automorphisms: false,
            },
            PruneFlags {
                cyclic: false,
                inverse: true,
                automorphisms: true,
            },
            PruneFlags {
                cyclic: true,
                inverse: false,
                automorphisms: true,
            },
        ];
        for flags in configs {
            let sym = Symmetry::new(flags, &Invariance::full());
            for len in 1..=7 {
                let surv = survivors(&sym, len);
                for w in all_reduced(len) {
                    if (!sym.rotations || cyclic(&w)) && sym.is_canonical(&w) {
                        assert!(surv.contains(&key(&w)), "{flags:?} {w:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn canonical_classes_partition_orbits() {
        let sym = Symmetry::new(PruneFlags::ALL, &Invariance::full());
        for len in 1..=7 {
            let words: Vec<Vec<Letter>> = all_reduced(len).into_iter().filter(|w| cyclic(w)).collect();
            let mut covered = BTreeSet::new();
            for w in words.iter().filter(|w| sym.is_canonical(w)) {
                for o in sym.orbit(w) {
                    assert!(covered.insert(key(&o)), "orbits overlap at {w:?}");
                }
            }
            assert_eq!(covered.len(), words.len());
        }
    }

    #[test]
    fn first_letter_fixed_by_automorphisms() {
        let sym = Symmetry::new(PruneFlags::ALL, &Invariance::full());
        assert_eq!(sym.first_letters(), vec![Letter::A]);
        let sym = Symmetry::new(PruneFlags::ALL, &Invariance::none());
        assert_eq!(sym.first_letters().len(), 4);
        assert!(!sym.rotations && !sym.inversion);
    }
}
