use lcs_core::almost_law::{evaluate, haar, operator_norm, UnitaryMatrix};
use lcs_core::{ReducedWord, Su2Matrix};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type M = [[Complex64; 2]; 2];

fn plain(m: &Su2Matrix) -> M {
    [[m.entry(0, 0), m.entry(0, 1)], [m.entry(1, 0), m.entry(1, 1)]]
}

fn mul(x: &M, y: &M) -> M {
    let mut r = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    r
}

fn adj(x: &M) -> M {
    [[x[0][0].conj(), x[1][0].conj()], [x[0][1].conj(), x[1][1].conj()]]
}

/// Spectral norm of `x - I` through the singular values by power iteration.
fn dist_identity(x: &M) -> f64 {
    let d = [[x[0][0] - 1.0, x[0][1]], [x[1][0], x[1][1] - 1.0]];
    let h = mul(&adj(&d), &d);
    let tr = (h[0][0] + h[1][1]).re;
    let det = (h[0][0] * h[1][1] - h[0][1] * h[1][0]).re;
    ((tr + (tr * tr - 4.0 * det).max(0.0).sqrt()) / 2.0).sqrt()
}

fn naive_eval(w: &str, u: &M, v: &M) -> M {
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let mut acc = [[one, zero], [zero, one]];
    for c in w.chars() {
        let g = match c {
            'a' => *u,
            'A' => adj(u),
            'b' => *v,
            _ => adj(v),
        };
        acc = mul(&acc, &g);
    }
    acc
}

#[test]
fn evaluation_matches_naive_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let u: Su2Matrix = haar(2, &mut rng);
        let v: Su2Matrix = haar(2, &mut rng);
        let w = ReducedWord::random(&mut rng, 40);
        let ours = plain(&evaluate(&w, &u, &v).unwrap());
        let theirs = naive_eval(&w.to_string(), &plain(&u), &plain(&v));
        for i in 0..2 {
            for j in 0..2 {
                assert!((ours[i][j] - theirs[i][j]).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn haar_samples_are_special_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let u: Su2Matrix = haar(2, &mut rng);
        let p = plain(&u);
        let det = p[0][0] * p[1][1] - p[0][1] * p[1][0];
        assert!((det - 1.0).norm() < 1e-12);
        let g = mul(&adj(&p), &p);
        assert!((g[0][0] - 1.0).norm() < 1e-12 && g[0][1].norm() < 1e-12);
    }
}

#[test]
fn norm_agrees_with_characteristic_polynomial() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let u: Su2Matrix = haar(2, &mut rng);
        let p = plain(&u);
        let d: Vec<Complex64> = vec![p[0][0] - 1.0, p[0][1], p[1][0], p[1][1] - 1.0];
        assert!((operator_norm(2, &d) - dist_identity(&p)).abs() < 1e-9);
        assert!((u.distance_to_identity() - dist_identity(&p)).abs() < 1e-9);
    }
}

#[test]
fn commutator_contracts_near_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let near = |rng: &mut ChaCha8Rng| {
        let h: Su2Matrix = haar(2, rng);
        let p = plain(&h);
        let t = 0.05;
        let a = Complex64::new(1.0, 0.0) + (p[0][0] - 1.0) * t;
        let b = p[1][0] * t;
        let n = (a.norm_sqr() + b.norm_sqr()).sqrt();
        UnitaryMatrix::su2(a / n, b / n).unwrap()
    };
    for _ in 0..200 {
        let x = near(&mut rng);
        let y = near(&mut rng);
        let c = x.commutator(&y);
        let bound = 2.0 * x.distance_to_identity() * y.distance_to_identity();
        assert!(c.distance_to_identity() <= bound + 1e-12);
    }
}
