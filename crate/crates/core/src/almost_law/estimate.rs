use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::unitary::{haar, rotation, rotation_directions, Real, UnitaryMatrix};
use crate::error::{Error, Result};
use crate::word::{Generator, Letter, ReducedWord, Sign};

/// Letters between two re-orthonormalisations during evaluation.
const REORTH_EVERY: usize = 64;

fn check_input<T: Real>(u: &UnitaryMatrix<T>, v: &UnitaryMatrix<T>) -> Result<()> {
    if u.dim() != v.dim() {
        return Err(Error::InvalidArgument("arguments of different size".into()));
    }
    let loose = T::epsilon().sqrt();
    if u.unitarity_defect() > loose || v.unitarity_defect() > loose {
        return Err(Error::Numeric("argument is not unitary".into()));
    }
    Ok(())
}

/// The word map `w(u, v)`.
pub fn evaluate<T: Real>(
    w: &ReducedWord,
    u: &UnitaryMatrix<T>,
    v: &UnitaryMatrix<T>,
) -> Result<UnitaryMatrix<T>> {
    check_input(u, v)?;
    evaluate_letters(w.letters(), u, v)
}

fn evaluate_letters<T: Real>(
    letters: &[Letter],
    u: &UnitaryMatrix<T>,
    v: &UnitaryMatrix<T>,
) -> Result<UnitaryMatrix<T>> {
    let images = [u.clone(), u.inverse(), v.clone(), v.inverse()];
    let mut acc = UnitaryMatrix::identity(u.dim());
    for (i, l) in letters.iter().enumerate() {
        acc = acc.mul(&images[l.index()]);
        if (i + 1) % REORTH_EVERY == 0 {
            acc = acc.reorthonormalized()?;
        }
    }
    acc.reorthonormalized()
}

/// `(aₙ(w, v), bₙ(w, v))` evaluated at `(u, v)` through the commutator
/// recursion, so the cost is linear in `n` rather than in the word length.
pub fn evaluate_composed<T: Real>(
    seeds: (&ReducedWord, &ReducedWord),
    n: usize,
    u: &UnitaryMatrix<T>,
    v: &UnitaryMatrix<T>,
) -> Result<(UnitaryMatrix<T>, UnitaryMatrix<T>)> {
    check_input(u, v)?;
    let mut a = evaluate_letters(seeds.0.letters(), u, v)?;
    let mut b = evaluate_letters(seeds.1.letters(), u, v)?;
    for _ in 0..n {
        let na = b.inverse().commutator(&a).reorthonormalized()?;
        let nb = a.commutator(&b).reorthonormalized()?;
        a = na;
        b = nb;
    }
    Ok((a, b))
}

/// Bound on the rounding error of one product of unitaries.
fn step_error(k: usize) -> f64 {
    16.0 * k as f64 * f64::EPSILON
}

fn precision_scale<T: Real>() -> f64 {
    T::epsilon().to_f64() / f64::EPSILON
}

/// Error bound for [`evaluate`] on a word of length `len`.
pub fn evaluation_error(k: usize, len: usize) -> f64 {
    (len as f64 + 1.0) * step_error(k)
}

/// Error bound for [`evaluate_composed`]; a commutator at most doubles the
/// sum of its arguments' errors.
pub fn composed_error(k: usize, seed_lens: (usize, usize), n: usize) -> f64 {
    let mut e = evaluation_error(k, seed_lens.0.max(seed_lens.1));
    for _ in 0..n {
        e = 4.0 * e + 4.0 * step_error(k);
    }
    e
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EstimateBudget {
    pub samples: usize,
    pub polish_steps: usize,
}

impl Default for EstimateBudget {
    fn default() -> Self {
        EstimateBudget {
            samples: 10_000,
            polish_steps: 200,
        }
    }
}

/// A sampled lower bound on `L_k(w)`.
#[derive(Clone, Debug, Serialize)]
pub struct LEstimate<T> {
    pub word: ReducedWord,
    pub k: usize,
    /// Best value of `d(1, w(u, v))` found.
    pub lower: T,
    /// `lower` is reproduced at `witness` within this error.
    pub error: f64,
    #[serde(skip)]
    pub witness: (UnitaryMatrix<T>, UnitaryMatrix<T>),
    pub samples: usize,
    pub polish_steps: usize,
    pub seed: u64,
}

impl<T: Real> LEstimate<T> {
    /// `lower` minus its error, clamped at zero.
    pub fn certain_lower(&self) -> f64 {
        (self.lower.to_f64() - self.error).max(0.0)
    }
}

fn sample_pair<T: Real>(k: usize, seed: u64, index: u64) -> (UnitaryMatrix<T>, UnitaryMatrix<T>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let u = haar(k, &mut rng);
    let v = haar(k, &mut rng);
    (u, v)
}

type Pair<T> = (UnitaryMatrix<T>, UnitaryMatrix<T>);

/// Maximises `objective` over Haar samples, then polishes the best sample by
/// coordinate moves along one-parameter subgroups. Ties keep the lowest index.
pub fn maximize<T, F>(k: usize, budget: EstimateBudget, seed: u64, objective: F) -> Result<(T, Pair<T>)>
where
    T: Real,
    F: Fn(&UnitaryMatrix<T>, &UnitaryMatrix<T>) -> Result<T> + Sync,
{
    if budget.samples == 0 {
        return Err(Error::InvalidArgument("sample budget must be positive".into()));
    }
    let best = (0..budget.samples as u64)
        .into_par_iter()
        .map(|i| {
            let (u, v) = sample_pair::<T>(k, seed, i);
            objective(&u, &v).map(|d| (d, i))
        })
        .try_reduce(
            || (T::neg_infinity(), u64::MAX),
            |x, y| Ok(if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x }),
        )?;
    let (mut value, idx) = best;
    let (mut u, mut v) = sample_pair::<T>(k, seed, idx);

    let dirs = rotation_directions(k);
    let mut h = T::from_f64(0.25);
    let min_h = T::from_f64(1e-9);
    for _ in 0..budget.polish_steps {
        let mut improved = false;
        for &(p, q, kind) in &dirs {
            for sign in [T::one(), -T::one()] {
                let r = rotation(k, p, q, kind, sign * h);
                for arg in 0..2 {
                    let (cu, cv) = if arg == 0 {
                        (u.mul(&r).reorthonormalized()?, v.clone())
                    } else {
                        (u.clone(), v.mul(&r).reorthonormalized()?)
                    };
                    let d = objective(&cu, &cv)?;
                    if d > value {
                        value = d;
                        u = cu;
                        v = cv;
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            h = h / T::from_f64(2.0);
            if h < min_h {
                break;
            }
        }
    }
    Ok((value, (u, v)))
}

/// Estimates `L_k(w) = max d(1, w(u, v))` from below.
pub fn estimate_l<T: Real>(
    w: &ReducedWord,
    k: usize,
    budget: EstimateBudget,
    seed: u64,
) -> Result<LEstimate<T>> {
    let (lower, witness) = maximize(k, budget, seed, |u, v| {
        Ok(evaluate_letters(w.letters(), u, v)?.distance_to_identity())
    })?;
    Ok(LEstimate {
        word: w.clone(),
        k,
        lower,
        error: evaluation_error(k, w.len()) * precision_scale::<T>(),
        witness,
        samples: budget.samples,
        polish_steps: budget.polish_steps,
        seed,
    })
}

/// Estimates `L_k(aₙ(w, v))` using the commutator recursion for evaluation.
pub fn estimate_composed<T: Real>(
    seeds: (&ReducedWord, &ReducedWord),
    n: usize,
    word: &ReducedWord,
    k: usize,
    budget: EstimateBudget,
    seed: u64,
) -> Result<LEstimate<T>> {
    let (lower, witness) = maximize(k, budget, seed, |u, v| {
        Ok(evaluate_composed(seeds, n, u, v)?.0.distance_to_identity())
    })?;
    Ok(LEstimate {
        word: word.clone(),
        k,
        lower,
        error: composed_error(k, (seeds.0.len(), seeds.1.len()), n) * precision_scale::<T>(),
        witness,
        samples: budget.samples,
        polish_steps: budget.polish_steps,
        seed,
    })
}

/// An element of `SU(2)` as `[[α, −β̄], [β, ᾱ]]`, stored as `(α, β)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Su2 {
    pub ar: f64,
    pub ai: f64,
    pub br: f64,
    pub bi: f64,
}

impl Su2 {
    pub const ONE: Su2 = Su2 {
        ar: 1.0,
        ai: 0.0,
        br: 0.0,
        bi: 0.0,
    };

    #[inline]
    pub fn mul(self, o: Su2) -> Su2 {
        // α = α₁α₂ − β̄₁β₂, β = β₁α₂ + ᾱ₁β₂
        Su2 {
            ar: self.ar * o.ar - self.ai * o.ai - (self.br * o.br + self.bi * o.bi),
            ai: self.ar * o.ai + self.ai * o.ar - (self.br * o.bi - self.bi * o.br),
            br: self.br * o.ar - self.bi * o.ai + (self.ar * o.br + self.ai * o.bi),
            bi: self.br * o.ai + self.bi * o.ar + (self.ar * o.bi - self.ai * o.br),
        }
    }

    #[inline]
    pub fn inverse(self) -> Su2 {
        Su2 {
            ar: self.ar,
            ai: -self.ai,
            br: -self.br,
            bi: -self.bi,
        }
    }

    /// `‖I − U‖`, written to avoid cancellation near the identity.
    #[inline]
    pub fn distance_to_identity(self) -> f64 {
        let s = self.ai * self.ai + self.br * self.br + self.bi * self.bi;
        let one_minus_re = if self.ar > 0.0 { s / (1.0 + self.ar) } else { 1.0 - self.ar };
        (one_minus_re * one_minus_re + s).sqrt()
    }

    /// Reads `(α, β)` off the first column of a `2 × 2` matrix.
    pub fn from_matrix(m: &UnitaryMatrix<f64>) -> Su2 {
        Su2 {
            ar: m.entry(0, 0).re,
            ai: m.entry(0, 0).im,
            br: m.entry(1, 0).re,
            bi: m.entry(1, 0).im,
        }
    }

    #[cfg(test)]
    pub fn to_matrix(self) -> UnitaryMatrix<f64> {
        use num_complex::Complex;
        let a = Complex::new(self.ar, self.ai);
        let b = Complex::new(self.br, self.bi);
        UnitaryMatrix::su2(a, b).expect("unit quaternion")
    }

    #[inline]
    pub fn eval(letters: &[Letter], images: &[Su2; 4]) -> Su2 {
        letters.iter().fold(Su2::ONE, |acc, l| acc.mul(images[l.index()]))
    }

    pub fn images(u: Su2, v: Su2) -> [Su2; 4] {
        let mut out = [Su2::ONE; 4];
        for l in Letter::ALL {
            let base = match l.generator() {
                Generator::A => u,
                Generator::B => v,
            };
            out[l.index()] = match l.sign() {
                Sign::Plus => base,
                Sign::Minus => base.inverse(),
            };
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    fn w(s: &str) -> ReducedWord {
        s.parse().unwrap()
    }

    fn pair(seed: u64) -> (UnitaryMatrix<f64>, UnitaryMatrix<f64>) {
        sample_pair(2, seed, 0)
    }

    #[test]
    fn trivial_evaluations() {
        let (u, v) = pair(1);
        assert_eq!(evaluate(&ReducedWord::identity(), &u, &v).unwrap().distance_to_identity(), 0.0);
        assert!(evaluate(&w("a"), &u, &v).unwrap().distance(&u) < 1e-14);
        assert!(evaluate(&w("abAB"), &u, &u).unwrap().distance_to_identity() < 1e-14);
    }

    #[test]
    fn evaluation_is_multiplicative() {
        for seed in 0..10 {
            let (u, v) = pair(seed);
            let x = w("abbAB");
            let y = w("BaBab");
            let lhs = evaluate(&x.mul(&y), &u, &v).unwrap();
            let rhs = evaluate(&x, &u, &v).unwrap().mul(&evaluate(&y, &u, &v).unwrap());
            assert!(lhs.distance(&rhs) < 1e-10);
        }
    }

    #[test]
    fn composed_matches_direct() {
        let seeds = (w("abAB"), w("aabAAB"));
        let seq = crate::construction::build(3, seeds.clone()).unwrap();
        for seed in 0..5 {
            let (u, v) = pair(seed);
            for n in 0..=3 {
                let (a, b) = evaluate_composed((&seeds.0, &seeds.1), n, &u, &v).unwrap();
                assert!(a.distance(&evaluate(seq.a(n), &u, &v).unwrap()) < 1e-10);
                assert!(b.distance(&evaluate(seq.b(n), &u, &v).unwrap()) < 1e-10);
            }
        }
    }

    #[test]
    fn fast_su2_agrees_with_matrices() {
        for seed in 0..20 {
            let (u, v) = pair(seed);
            let q = Su2::from_matrix;
            let word = w("abABaaBAbb");
            let fast = Su2::eval(word.letters(), &Su2::images(q(&u), q(&v)));
            let slow = evaluate(&word, &u, &v).unwrap();
            assert!(fast.to_matrix().distance(&slow) < 1e-12);
            assert!((fast.distance_to_identity() - slow.distance_to_identity()).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_word_estimates_zero() {
        let e = estimate_l::<f64>(&ReducedWord::identity(), 2, EstimateBudget { samples: 10, polish_steps: 5 }, 0).unwrap();
        assert_eq!(e.lower, 0.0);
    }

    #[test]
    fn generator_reaches_diameter() {
        // −I lies in SU(2) and sits at distance 2 from I.
        let minus = UnitaryMatrix::<f64>::su2(Complex::new(-1.0, 0.0), Complex::new(0.0, 0.0)).unwrap();
        assert!((minus.distance_to_identity() - 2.0).abs() < 1e-15);
        let small = estimate_l::<f64>(&w("a"), 2, EstimateBudget { samples: 50, polish_steps: 0 }, 9).unwrap();
        let big = estimate_l::<f64>(&w("a"), 2, EstimateBudget { samples: 50, polish_steps: 300 }, 9).unwrap();
        assert!(big.lower >= small.lower);
        assert!(big.lower > 2.0 - 1e-6, "{}", big.lower);
        assert!(big.lower <= 2.0 + 1e-12);
    }

    #[test]
    fn estimates_are_deterministic_and_monotone() {
        let c = w("abAB");
        let b1 = EstimateBudget { samples: 64, polish_steps: 0 };
        let b2 = EstimateBudget { samples: 256, polish_steps: 0 };
        let x = estimate_l::<f64>(&c, 2, b1, 5).unwrap();
        let y = estimate_l::<f64>(&c, 2, b1, 5).unwrap();
        let z = estimate_l::<f64>(&c, 2, b2, 5).unwrap();
        assert_eq!(x.lower, y.lower);
        assert!(z.lower >= x.lower);
        let again = evaluate(&c, &z.witness.0, &z.witness.1).unwrap().distance_to_identity();
        assert!((again - z.lower).abs() < 1e-10);
    }

    #[test]
    fn higher_rank_sampling() {
        let e = estimate_l::<f64>(&w("abAB"), 3, EstimateBudget { samples: 32, polish_steps: 3 }, 2).unwrap();
        assert!(e.lower > 0.0 && e.lower <= 2.0 + 1e-12);
        let f = estimate_l::<f32>(&w("abAB"), 2, EstimateBudget { samples: 32, polish_steps: 3 }, 2).unwrap();
        assert!(f.lower > 0.0);
    }
}
