//! Word maps on `SU(k)`: sampled lower bounds and certified upper bounds on
//! `L_k(w) = max d(1, w(u, v))`, and their decay along `wₙ = aₙ(w, v)`.

mod certify;
mod decay;
mod estimate;
mod seeds;
mod unitary;

pub use certify::{certify_seed, net_shape, net_size, CertifiedBound, Provenance, DEFAULT_NET_BUDGET};
pub use decay::{
    propagate, run_decay, silver_ratio, DecayConfig, DecayFit, DecayRow, DecayTable, SEED_BOUND,
};
pub use estimate::{
    composed_error, estimate_composed, estimate_l, evaluate, evaluate_composed, evaluation_error,
    maximize, EstimateBudget, LEstimate,
};
pub use seeds::{certify_pair, seed_search, SeedCandidate, SeedSearchConfig, SeedSearchReport};
pub use unitary::{haar, operator_norm, rotation, rotation_directions, Real, RotationKind, UnitaryMatrix};
