//! Grid certification of `L₂(w)` from above.
//!
//! `d(1, w(u, v))` is invariant under simultaneous conjugation, so `u` may be
//! taken as `diag(e^{iθ}, e^{−iθ})` with `θ ∈ [0, π]`, and then `v` conjugated
//! by the torus so that its `β` entry is real and nonnegative. What remains of
//! `v` is a closed hemisphere of the unit sphere in `(Re α, Im α, β)`, on which
//! the operator norm distance is the chord length. The hemisphere is covered
//! by the radial projection of a grid on five faces of the cube `[−1, 1]³`;
//! radial projection onto the sphere is 1-Lipschitz from outside the ball.

use rayon::prelude::*;
use serde::Serialize;

use super::estimate::Su2;
use crate::error::{Error, Result};
use crate::word::ReducedWord;

pub const DEFAULT_NET_BUDGET: u64 = 200_000_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Grid {
        eps: f64,
        lipschitz: usize,
        net_points: u64,
        net_max: f64,
    },
    /// The larger of the two seed bounds.
    Seeds,
    /// `2·U(w)·U(v)` for a single commutator of the seeds.
    Commutator,
    Propagated {
        from: (usize, usize),
    },
    /// Supplied by the caller without proof.
    Assumed,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertifiedBound {
    pub n: usize,
    pub upper: f64,
    pub provenance: Provenance,
}

impl CertifiedBound {
    pub fn assumed(upper: f64) -> Result<Self> {
        if !(0.0..=2.0).contains(&upper) {
            return Err(Error::InvalidArgument(format!("bound {upper} outside [0, 2]")));
        }
        Ok(CertifiedBound {
            n: 0,
            upper,
            provenance: Provenance::Assumed,
        })
    }

    pub fn is_proved(&self) -> bool {
        !matches!(self.provenance, Provenance::Assumed)
    }
}

/// Grid sizes `(N_θ, M, H)`: torus cells, cells per cube edge, and cells on
/// the half-height of a side face.
pub fn net_shape(eps: f64) -> (u64, u64, u64) {
    let n_theta = (std::f64::consts::PI / (2.0 * eps)).ceil() as u64;
    let m = (2f64.sqrt() / eps).ceil() as u64;
    let h = m.div_ceil(2);
    (n_theta, m, h)
}

pub fn net_size(eps: f64) -> u64 {
    let (n_theta, m, h) = net_shape(eps);
    n_theta.saturating_mul(m * m + 4 * m * h)
}

fn centers(cells: u64, lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    let step = (hi - lo) / cells as f64;
    (0..cells).map(move |i| lo + (i as f64 + 0.5) * step)
}

/// Net points of the hemisphere, as unnormalised cube points.
fn hemisphere_points(m: u64, h: u64) -> Vec<[f64; 3]> {
    let mut pts = Vec::with_capacity((m * m + 4 * m * h) as usize);
    for x in centers(m, -1.0, 1.0) {
        for y in centers(m, -1.0, 1.0) {
            pts.push([x, y, 1.0]);
        }
    }
    for s in [-1.0, 1.0] {
        for t in centers(m, -1.0, 1.0) {
            for z in centers(h, 0.0, 1.0) {
                pts.push([s, t, z]);
                pts.push([t, s, z]);
            }
        }
    }
    pts
}

/// Upper bound on `L₂(w)`: the maximum over an `ε`-net of the reduced
/// domain plus `2·ℓ(w)·ε`.
pub fn certify_seed(w: &ReducedWord, eps: f64, budget: u64) -> Result<CertifiedBound> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidArgument(format!("net resolution {eps} must be positive")));
    }
    if w.is_identity() {
        return Ok(CertifiedBound {
            n: 0,
            upper: 0.0,
            provenance: Provenance::Grid {
                eps,
                lipschitz: 0,
                net_points: 0,
                net_max: 0.0,
            },
        });
    }
    let points = net_size(eps);
    if points > budget {
        return Err(Error::NetBudget { points, budget });
    }
    let (n_theta, m, h) = net_shape(eps);
    let vs: Vec<Su2> = hemisphere_points(m, h)
        .into_iter()
        .map(|p| {
            let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            Su2 {
                ar: p[0] / r,
                ai: p[1] / r,
                br: p[2] / r,
                bi: 0.0,
            }
        })
        .collect();
    let letters = w.letters();
    let net_max = (0..n_theta)
        .into_par_iter()
        .map(|i| {
            let theta = (i as f64 + 0.5) * std::f64::consts::PI / n_theta as f64;
            let u = Su2 {
                ar: theta.cos(),
                ai: theta.sin(),
                br: 0.0,
                bi: 0.0,
            };
            vs.iter()
                .map(|&v| Su2::eval(letters, &Su2::images(u, v)).distance_to_identity())
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    let len = w.len() as f64;
    let rounding = 64.0 * (len + 1.0) * f64::EPSILON;
    let upper = (net_max + 2.0 * len * eps + rounding).next_up();
    Ok(CertifiedBound {
        n: 0,
        upper,
        provenance: Provenance::Grid {
            eps,
            lipschitz: w.len(),
            net_points: points,
            net_max,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::almost_law::estimate::{estimate_l, EstimateBudget};

    fn w(s: &str) -> ReducedWord {
        s.parse().unwrap()
    }

    #[test]
    fn identity_is_zero() {
        assert_eq!(certify_seed(&ReducedWord::identity(), 0.1, 10).unwrap().upper, 0.0);
    }

    #[test]
    fn net_covers_hemisphere() {
        // Every point of a fine sample of the hemisphere lies within ε of the net.
        let eps = 0.3;
        let (_, m, h) = net_shape(eps);
        let net: Vec<[f64; 3]> = hemisphere_points(m, h)
            .into_iter()
            .map(|p| {
                let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
                [p[0] / r, p[1] / r, p[2] / r]
            })
            .collect();
        for i in 0..=40 {
            for j in 0..=80 {
                let polar = i as f64 / 40.0 * std::f64::consts::FRAC_PI_2;
                let az = j as f64 / 80.0 * 2.0 * std::f64::consts::PI;
                let q = [polar.sin() * az.cos(), polar.sin() * az.sin(), polar.cos()];
                let d = net
                    .iter()
                    .map(|p| ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt())
                    .fold(f64::INFINITY, f64::min);
                assert!(d <= eps, "gap {d} at {q:?}");
            }
        }
    }

    #[test]
    fn upper_dominates_sampled_lower() {
        for s in ["abAB", "abABaBAb", "a"] {
            let word = w(s);
            let c = certify_seed(&word, 0.05, DEFAULT_NET_BUDGET).unwrap();
            let e = estimate_l::<f64>(&word, 2, EstimateBudget { samples: 500, polish_steps: 50 }, 1).unwrap();
            assert!(e.lower <= c.upper, "{s}: {} > {}", e.lower, c.upper);
            let Provenance::Grid { net_max, .. } = c.provenance else { panic!() };
            // The net maximum is itself attained, so it is a lower bound too.
            assert!(net_max <= e.lower + 2.0 * word.len() as f64 * 0.05);
        }
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            certify_seed(&w("abAB"), 0.001, 1000),
            Err(Error::NetBudget { .. })
        ));
        assert!(certify_seed(&w("abAB"), 0.0, 1000).is_err());
    }
}
