//! Magnus expansion, lower-central-series depth and Fox derivatives.

mod depth;
mod fox;
mod series;

pub use depth::{lcs_depth, lcs_depth_profile, Depth, DepthProfile, DEFAULT_TRUNCATION};
pub use fox::fox_derivative;
pub use series::{Monomial, NcSeries, DEFAULT_SLOT_BUDGET};
