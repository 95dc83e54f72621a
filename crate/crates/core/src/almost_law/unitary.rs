use std::fmt::{Debug, Display};

use nalgebra::DMatrix;
use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Scalar type for matrix entries.
pub trait Real: Float + FloatConst + NumAssign + Debug + Display + Send + Sync + 'static {
    fn from_f64(x: f64) -> Self {
        <Self as num_traits::NumCast>::from(x).expect("finite")
    }

    fn to_f64(self) -> f64 {
        <Self as num_traits::ToPrimitive>::to_f64(&self).expect("finite")
    }

    /// Largest unitarity defect accepted after re-orthonormalisation.
    fn unitarity_tolerance() -> Self {
        Self::epsilon() * Self::from_f64(4096.0)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// A special unitary `k × k` matrix, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix<T> {
    k: usize,
    m: Vec<Complex<T>>,
}

fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

impl<T: Real> UnitaryMatrix<T> {
    pub fn identity(k: usize) -> Self {
        let mut m = vec![c(T::zero(), T::zero()); k * k];
        for i in 0..k {
            m[i * k + i] = c(T::one(), T::zero());
        }
        UnitaryMatrix { k, m }
    }

    /// Accepts entries that are special unitary up to tolerance, then cleans them up.
    pub fn from_rows(k: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if k == 0 || entries.len() != k * k {
            return Err(Error::InvalidArgument(format!("expected {} entries", k * k)));
        }
        let raw = UnitaryMatrix { k, m: entries };
        let loose = T::from_f64(1e-6).max(T::unitarity_tolerance());
        if raw.unitarity_defect() > loose || (raw.det() - c(T::one(), T::zero())).norm() > loose {
            return Err(Error::Numeric("matrix is not special unitary".into()));
        }
        raw.reorthonormalized()
    }

    /// `[[α, −β̄], [β, ᾱ]]` with `|α|² + |β|² = 1`.
    pub fn su2(alpha: Complex<T>, beta: Complex<T>) -> Result<Self> {
        Self::from_rows(2, vec![alpha, -beta.conj(), beta, alpha.conj()])
    }

    /// `diag(e^{iθ}, e^{−iθ})`.
    pub fn su2_diagonal(theta: T) -> Self {
        UnitaryMatrix {
            k: 2,
            m: vec![
                c(theta.cos(), theta.sin()),
                c(T::zero(), T::zero()),
                c(T::zero(), T::zero()),
                c(theta.cos(), -theta.sin()),
            ],
        }
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex<T> {
        self.m[i * self.k + j]
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.m
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let k = self.k;
        let mut m = vec![c(T::zero(), T::zero()); k * k];
        for i in 0..k {
            for l in 0..k {
                let a = self.m[i * k + l];
                for j in 0..k {
                    m[i * k + j] += a * rhs.m[l * k + j];
                }
            }
        }
        UnitaryMatrix { k, m }
    }

    pub fn adjoint(&self) -> Self {
        let k = self.k;
        let mut m = vec![c(T::zero(), T::zero()); k * k];
        for i in 0..k {
            for j in 0..k {
                m[j * k + i] = self.m[i * k + j].conj();
            }
        }
        UnitaryMatrix { k, m }
    }

    pub fn inverse(&self) -> Self {
        self.adjoint()
    }

    /// `u v u⁻¹ v⁻¹`.
    pub fn commutator(&self, v: &Self) -> Self {
        self.mul(v).mul(&self.adjoint()).mul(&v.adjoint())
    }

    pub fn det(&self) -> Complex<T> {
        determinant(self.k, &self.m)
    }

    /// `‖U*U − I‖` in operator norm.
    pub fn unitarity_defect(&self) -> T {
        let mut p = self.adjoint().mul(self).m;
        for i in 0..self.k {
            p[i * self.k + i] -= c(T::one(), T::zero());
        }
        operator_norm(self.k, &p)
    }

    /// Gram–Schmidt on the rows, then a phase on the first row to restore `det = 1`.
    pub fn reorthonormalized(&self) -> Result<Self> {
        let k = self.k;
        let mut m = self.m.clone();
        for i in 0..k {
            for j in 0..i {
                let mut dot = c(T::zero(), T::zero());
                for l in 0..k {
                    dot += m[i * k + l] * m[j * k + l].conj();
                }
                for l in 0..k {
                    let sub = dot * m[j * k + l];
                    m[i * k + l] -= sub;
                }
            }
            let n = (0..k).map(|l| m[i * k + l].norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt();
            if n <= T::epsilon() {
                return Err(Error::Numeric("degenerate row during re-orthonormalisation".into()));
            }
            for l in 0..k {
                m[i * k + l] = m[i * k + l] / n;
            }
        }
        let d = determinant(k, &m);
        let phase = d.conj() / d.norm();
        for l in 0..k {
            m[l] = m[l] * phase;
        }
        let out = UnitaryMatrix { k, m };
        if out.unitarity_defect() > T::unitarity_tolerance() {
            return Err(Error::Numeric("unitarity defect above tolerance".into()));
        }
        Ok(out)
    }

    /// `d(1, U) = ‖I − U‖` in operator norm.
    pub fn distance_to_identity(&self) -> T {
        let mut d: Vec<Complex<T>> = self.m.iter().map(|&z| -z).collect();
        for i in 0..self.k {
            d[i * self.k + i] += c(T::one(), T::zero());
        }
        operator_norm(self.k, &d)
    }

    /// `‖U − V‖` in operator norm.
    pub fn distance(&self, other: &Self) -> T {
        let d: Vec<Complex<T>> = self.m.iter().zip(&other.m).map(|(&a, &b)| a - b).collect();
        operator_norm(self.k, &d)
    }

    /// The same matrix at another precision.
    pub fn cast<S: Real>(&self) -> UnitaryMatrix<S> {
        UnitaryMatrix {
            k: self.k,
            m: self
                .m
                .iter()
                .map(|z| c(S::from_f64(z.re.to_f64()), S::from_f64(z.im.to_f64())))
                .collect(),
        }
    }
}

/// Largest singular value. Closed form for `2 × 2`, generic SVD otherwise.
pub fn operator_norm<T: Real>(k: usize, m: &[Complex<T>]) -> T {
    if k == 1 {
        return m[0].norm();
    }
    if k == 2 {
        // Largest eigenvalue of M*M, from differences of its entries.
        let h11 = m[0].norm_sqr() + m[2].norm_sqr();
        let h22 = m[1].norm_sqr() + m[3].norm_sqr();
        let h12 = (m[0].conj() * m[1] + m[2].conj() * m[3]).norm();
        let two = T::from_f64(2.0);
        let half_gap = (h11 - h22) / two;
        let lambda = (h11 + h22) / two + (half_gap * half_gap + h12 * h12).sqrt();
        return lambda.max(T::zero()).sqrt();
    }
    let dm = DMatrix::from_fn(k, k, |i, j| {
        let z = m[i * k + j];
        Complex::new(z.re.to_f64(), z.im.to_f64())
    });
    let s = dm.singular_values();
    T::from_f64(s.iter().cloned().fold(0.0, f64::max))
}

fn determinant<T: Real>(k: usize, m: &[Complex<T>]) -> Complex<T> {
    if k == 2 {
        return m[0] * m[3] - m[1] * m[2];
    }
    let mut a = m.to_vec();
    let mut det = c(T::one(), T::zero());
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&x, &y| {
                a[x * k + col]
                    .norm()
                    .partial_cmp(&a[y * k + col].norm())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .expect("nonempty");
        if a[pivot * k + col].norm() == T::zero() {
            return c(T::zero(), T::zero());
        }
        if pivot != col {
            for j in 0..k {
                a.swap(pivot * k + j, col * k + j);
            }
            det = -det;
        }
        let p = a[col * k + col];
        det *= p;
        for r in col + 1..k {
            let f = a[r * k + col] / p;
            for j in col..k {
                let sub = f * a[col * k + j];
                a[r * k + j] -= sub;
            }
        }
    }
    det
}

/// Haar-distributed element of `SU(k)`.
pub fn haar<T: Real, R: Rng + ?Sized>(k: usize, rng: &mut R) -> UnitaryMatrix<T> {
    let mut normal = || -> f64 { rng.sample(StandardNormal) };
    if k == 2 {
        loop {
            let q = [normal(), normal(), normal(), normal()];
            let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
            if n > 1e-12 {
                let a = c(T::from_f64(q[0] / n), T::from_f64(q[1] / n));
                let b = c(T::from_f64(q[2] / n), T::from_f64(q[3] / n));
                return UnitaryMatrix {
                    k: 2,
                    m: vec![a, -b.conj(), b, a.conj()],
                };
            }
        }
    }
    loop {
        // Ginibre matrix, orthonormalised column by column.
        let mut g: Vec<Complex<f64>> = (0..k * k)
            .map(|_| Complex::new(normal(), normal()) / 2f64.sqrt())
            .collect();
        let mut ok = true;
        for j in 0..k {
            for p in 0..j {
                let mut dot = Complex::new(0.0, 0.0);
                for i in 0..k {
                    dot += g[i * k + j] * g[i * k + p].conj();
                }
                for i in 0..k {
                    let sub = dot * g[i * k + p];
                    g[i * k + j] -= sub;
                }
            }
            let n = (0..k).map(|i| g[i * k + j].norm_sqr()).sum::<f64>().sqrt();
            if n < 1e-12 {
                ok = false;
                break;
            }
            for i in 0..k {
                g[i * k + j] /= n;
            }
        }
        if !ok {
            continue;
        }
        let d = determinant(k, &g);
        let root = Complex::from_polar(1.0, -d.arg() / k as f64);
        let m = g
            .into_iter()
            .map(|z| {
                let z = z * root;
                c(T::from_f64(z.re), T::from_f64(z.im))
            })
            .collect();
        return UnitaryMatrix { k, m };
    }
}

/// One-parameter subgroups spanning `su(k)`, acting on coordinates `p < q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RotationKind {
    Real,
    Imaginary,
    Phase,
}

pub fn rotation<T: Real>(k: usize, p: usize, q: usize, kind: RotationKind, t: T) -> UnitaryMatrix<T> {
    let mut u = UnitaryMatrix::identity(k);
    let (s, co) = t.sin_cos();
    let z = T::zero();
    let (a, b, cc, d) = match kind {
        RotationKind::Real => (c(co, z), c(-s, z), c(s, z), c(co, z)),
        RotationKind::Imaginary => (c(co, z), c(z, s), c(z, s), c(co, z)),
        RotationKind::Phase => (c(co, s), c(z, z), c(z, z), c(co, -s)),
    };
    u.m[p * k + p] = a;
    u.m[p * k + q] = b;
    u.m[q * k + p] = cc;
    u.m[q * k + q] = d;
    u
}

/// All `(p, q, kind)` generator directions for `SU(k)`.
pub fn rotation_directions(k: usize) -> Vec<(usize, usize, RotationKind)> {
    let mut out = Vec::new();
    for p in 0..k {
        for q in p + 1..k {
            for kind in [RotationKind::Real, RotationKind::Imaginary, RotationKind::Phase] {
                out.push((p, q, kind));
            }
        }
    }
    out
}
