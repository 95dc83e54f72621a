use std::fmt;

use crate::error::{Error, Result};
use crate::word::ReducedWord;

const MAX_STEPS: usize = 1 << 20;

/// A reduced word in abstract generators `x₀, x₁, …`; `(i, true)` is `xᵢ⁻¹`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalWord(Vec<(usize, bool)>);

impl FormalWord {
    pub fn generator(i: usize) -> Self {
        FormalWord(vec![(i, false)])
    }

    pub fn letters(&self) -> &[(usize, bool)] {
        &self.0
    }

    fn push(&mut self, g: (usize, bool)) {
        if self.0.last() == Some(&(g.0, !g.1)) {
            self.0.pop();
        } else {
            self.0.push(g);
        }
    }

    pub fn mul(&self, rhs: &FormalWord) -> FormalWord {
        let mut out = self.clone();
        for &g in &rhs.0 {
            out.push(g);
        }
        out
    }

    pub fn inverse(&self) -> FormalWord {
        FormalWord(self.0.iter().rev().map(|&(i, s)| (i, !s)).collect())
    }

    fn pow_sign(&self, inverted: bool) -> FormalWord {
        if inverted {
            self.inverse()
        } else {
            self.clone()
        }
    }

    /// Replaces every occurrence of generator `i` by `by`.
    pub fn substitute(&self, i: usize, by: &FormalWord) -> FormalWord {
        let mut out = FormalWord::default();
        for &(j, s) in &self.0 {
            if j == i {
                for &g in &by.pow_sign(s).0 {
                    out.push(g);
                }
            } else {
                out.push((j, s));
            }
        }
        out
    }

    pub fn evaluate(&self, images: &[ReducedWord]) -> ReducedWord {
        self.0.iter().fold(ReducedWord::identity(), |acc, &(i, s)| {
            if s {
                acc.mul(&images[i].inverse())
            } else {
                acc.mul(&images[i])
            }
        })
    }
}

impl fmt::Display for FormalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&(i, s)| if s { format!("x{i}^-1") } else { format!("x{i}") })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Output of [`nielsen_reduce_traced`].
#[derive(Clone, Debug)]
pub struct NielsenResult {
    pub basis: Vec<ReducedWord>,
    /// Each basis element as a word in the inputs.
    pub basis_in_inputs: Vec<FormalWord>,
    /// Each input as a word in the basis.
    pub inputs_in_basis: Vec<FormalWord>,
    pub steps: usize,
}

impl NielsenResult {
    /// Both recorded rewritings evaluate correctly, so the two sets generate
    /// the same subgroup.
    pub fn verify_same_subgroup(&self, inputs: &[ReducedWord]) -> bool {
        self.basis_in_inputs
            .iter()
            .zip(&self.basis)
            .all(|(e, b)| e.evaluate(inputs) == *b)
            && self
                .inputs_in_basis
                .iter()
                .zip(inputs)
                .all(|(e, g)| e.evaluate(&self.basis) == *g)
            && self.inputs_in_basis.len() == inputs.len()
    }
}

type Signed = (usize, bool);

struct State {
    slots: Vec<Option<ReducedWord>>,
    in_inputs: Vec<FormalWord>,
    inputs_in_slots: Vec<FormalWord>,
}

impl State {
    fn word(&self, (i, s): Signed) -> ReducedWord {
        let w = self.slots[i].as_ref().expect("live slot");
        if s {
            w.inverse()
        } else {
            w.clone()
        }
    }

    fn live(&self) -> Vec<usize> {
        (0..self.slots.len()).filter(|&i| self.slots[i].is_some()).collect()
    }

    fn signed(&self) -> Vec<Signed> {
        self.live()
            .into_iter()
            .flat_map(|i| [(i, false), (i, true)])
            .collect()
    }

    fn substitute_everywhere(&mut self, i: usize, by: &FormalWord) {
        for e in &mut self.inputs_in_slots {
            *e = e.substitute(i, by);
        }
    }

    fn remove(&mut self, i: usize, by: FormalWord) {
        self.slots[i] = None;
        self.substitute_everywhere(i, &by);
    }

    /// `u ← u·v` for `u = x^±`, `v = y^±`, `x ≠ y`.
    fn right_multiply(&mut self, (x, sx): Signed, (y, sy): Signed) {
        let new_u = self.word((x, sx)).mul(&self.word((y, sy)));
        let yv = FormalWord(vec![(y, sy)]);
        let yinv = yv.inverse();
        let xf = FormalWord::generator(x);
        if !sx {
            // x' = x y^s, so x = x' y^-s.
            self.slots[x] = Some(new_u);
            self.in_inputs[x] = self.in_inputs[x].mul(&self.in_inputs[y].pow_sign(sy));
            self.substitute_everywhere(x, &xf.mul(&yinv));
        } else {
            // x'^-1 = x^-1 y^s, so x' = y^-s x and x = y^s x'.
            self.slots[x] = Some(new_u.inverse());
            self.in_inputs[x] = self.in_inputs[y].pow_sign(!sy).mul(&self.in_inputs[x]);
            self.substitute_everywhere(x, &yv.mul(&xf));
        }
    }

    /// `w ← v·w` for `w = z^±`, `v = y^±`, `z ≠ y`.
    fn left_multiply(&mut self, (z, sz): Signed, (y, sy): Signed) {
        // v·w = (w⁻¹·v⁻¹)⁻¹, i.e. right-multiply w⁻¹ by v⁻¹.
        self.right_multiply((z, !sz), (y, !sy));
    }
}

/// Returns a Nielsen-reduced generating set of the subgroup generated by `gens`.
pub fn nielsen_reduce(gens: &[ReducedWord]) -> Vec<ReducedWord> {
    nielsen_reduce_traced(gens)
        .expect("Nielsen reduction terminates")
        .basis
}

/// Nielsen reduction recording how inputs and outputs express each other.
///
/// Steps that shorten a generator restore condition (ii). When only (iii)
/// fails, some `v = pq` is cancelled exactly half from each side; replacing
/// `u` by `uv` or `w` by `vw`, whichever turns the larger of `p`, `q⁻¹` into
/// the smaller, keeps all lengths and lowers the initial halves, which cannot
/// go on forever.
pub fn nielsen_reduce_traced(gens: &[ReducedWord]) -> Result<NielsenResult> {
    let mut st = State {
        slots: gens.iter().cloned().map(Some).collect(),
        in_inputs: (0..gens.len()).map(FormalWord::generator).collect(),
        inputs_in_slots: (0..gens.len()).map(FormalWord::generator).collect(),
    };
    let mut steps = 0;
    'outer: loop {
        steps += 1;
        if steps > MAX_STEPS {
            return Err(Error::InvalidArgument("Nielsen reduction did not settle".into()));
        }
        let live = st.live();
        for &i in &live {
            if st.slots[i].as_ref().is_some_and(|w| w.is_identity()) {
                st.remove(i, FormalWord::default());
                continue 'outer;
            }
        }
        for (k, &i) in live.iter().enumerate() {
            for &j in &live[..k] {
                let (wi, wj) = (st.word((i, false)), st.word((j, false)));
                if wi == wj {
                    st.remove(i, FormalWord::generator(j));
                    continue 'outer;
                }
                if wi == wj.inverse() {
                    st.remove(i, FormalWord(vec![(j, true)]));
                    continue 'outer;
                }
            }
        }
        let signed = st.signed();
        for &u in &signed {
            for &v in &signed {
                if u.0 == v.0 {
                    continue;
                }
                let (wu, wv) = (st.word(u), st.word(v));
                let l = wu.mul(&wv).len();
                if l < wu.len() {
                    st.right_multiply(u, v);
                    continue 'outer;
                }
                if l < wv.len() {
                    st.left_multiply(v, u);
                    continue 'outer;
                }
            }
        }
        for &v in &signed {
            let wv = st.word(v);
            if wv.len() % 2 != 0 {
                continue;
            }
            let h = wv.len() / 2;
            let left = signed
                .iter()
                .copied()
                .find(|&u| u != (v.0, !v.1) && st.word(u).cancellation_with(&wv) == h);
            let right = signed
                .iter()
                .copied()
                .find(|&w| w != (v.0, !v.1) && wv.cancellation_with(&st.word(w)) == h);
            if let (Some(u), Some(w)) = (left, right) {
                let p = &wv.letters()[..h];
                let q_inv: Vec<_> = wv.letters()[h..].iter().rev().map(|l| l.inverse()).collect();
                let pk: Vec<usize> = p.iter().map(|l| l.index()).collect();
                let qk: Vec<usize> = q_inv.iter().map(|l| l.index()).collect();
                if qk < pk {
                    st.right_multiply(u, v);
                } else {
                    st.left_multiply(w, v);
                }
                continue 'outer;
            }
        }
        break;
    }
    let live = st.live();
    let basis: Vec<ReducedWord> = live.iter().map(|&i| st.word((i, false))).collect();
    let basis_in_inputs = live.iter().map(|&i| st.in_inputs[i].clone()).collect();
    let inputs_in_basis = st
        .inputs_in_slots
        .iter()
        .map(|e| {
            FormalWord(
                e.0.iter()
                    .map(|&(i, s)| (live.iter().position(|&j| j == i).expect("live"), s))
                    .collect(),
            )
        })
        .collect();
    Ok(NielsenResult {
        basis,
        basis_in_inputs,
        inputs_in_basis,
        steps,
    })
}

/// Which of the three defining conditions fails, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NielsenViolation {
    Identity(usize),
    Shortening { u: ReducedWord, v: ReducedWord },
    MiddleCancelled { u: ReducedWord, v: ReducedWord, w: ReducedWord },
}

/// Checks (i)–(iii) over all of `S ∪ S⁻¹` literally.
pub fn check_nielsen_reduced(gens: &[ReducedWord]) -> Option<NielsenViolation> {
    if let Some(i) = gens.iter().position(|g| g.is_identity()) {
        return Some(NielsenViolation::Identity(i));
    }
    let s: Vec<ReducedWord> = gens.iter().flat_map(|g| [g.clone(), g.inverse()]).collect();
    for u in &s {
        for v in &s {
            let uv = u.mul(v);
            if !uv.is_identity() && uv.len() < u.len().max(v.len()) {
                return Some(NielsenViolation::Shortening {
                    u: u.clone(),
                    v: v.clone(),
                });
            }
        }
    }
    for u in &s {
        for v in &s {
            let uv = u.mul(v);
            if uv.is_identity() {
                continue;
            }
            for w in &s {
                if v.mul(w).is_identity() {
                    continue;
                }
                let lhs = uv.mul(w).len() as i64;
                if lhs <= u.len() as i64 - v.len() as i64 + w.len() as i64 {
                    return Some(NielsenViolation::MiddleCancelled {
                        u: u.clone(),
                        v: v.clone(),
                        w: w.clone(),
                    });
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> ReducedWord {
        s.parse().unwrap()
    }

    #[test]
    fn small_examples() {
        assert_eq!(nielsen_reduce(&[w("a"), w("a")]), vec![w("a")]);
        assert_eq!(nielsen_reduce(&[w("1"), w("a")]), vec![w("a")]);
        let r = nielsen_reduce(&[w("ab"), w("b")]);
        assert!(r.iter().map(|g| g.len()).sum::<usize>() <= 3);
        assert!(check_nielsen_reduced(&r).is_none());
        let t = nielsen_reduce_traced(&[w("ab"), w("b")]).unwrap();
        assert!(t.verify_same_subgroup(&[w("ab"), w("b")]));
    }

    #[test]
    fn checker_detects_violations() {
        assert_eq!(check_nielsen_reduced(&[w("1")]), Some(NielsenViolation::Identity(0)));
        assert!(matches!(
            check_nielsen_reduced(&[w("ab"), w("b")]),
            Some(NielsenViolation::Shortening { .. })
        ));
        // v = ab loses its a to u = bbA and its b to w = Baa.
        assert!(matches!(
            check_nielsen_reduced(&[w("bbA"), w("ab"), w("Baa")]),
            Some(NielsenViolation::MiddleCancelled { .. })
        ));
        assert!(check_nielsen_reduced(&[w("a"), w("b")]).is_none());
    }

    #[test]
    fn middle_cancellation_is_repaired() {
        let gens = [w("bbA"), w("ab"), w("Baa")];
        let t = nielsen_reduce_traced(&gens).unwrap();
        assert!(check_nielsen_reduced(&t.basis).is_none(), "{:?}", t.basis);
        assert!(t.verify_same_subgroup(&gens));
    }

    #[test]
    fn formal_words() {
        let x = FormalWord::generator(0);
        let y = FormalWord::generator(1);
        let xy = x.mul(&y);
        assert_eq!(xy.mul(&xy.inverse()), FormalWord::default());
        assert_eq!(xy.to_string(), "x0 x1");
        let images = [w("ab"), w("B")];
        assert_eq!(xy.evaluate(&images), w("a"));
        assert_eq!(xy.substitute(1, &x).evaluate(&images), w("abab"));
    }
}
