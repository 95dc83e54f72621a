//! Lower central series, derived series and word maps in the free group of rank two.

pub mod almost_law;
pub mod coefficient;
pub mod construction;
pub mod error;
pub mod girth;
pub mod group_ring;
pub mod magnus;
pub mod quotient;
pub mod search;
pub mod verify;
pub mod word;

pub use error::{Error, Result};
pub use word::{Automorphism, CyclicWord, Generator, Letter, ReducedWord};

use num_bigint::BigInt;

/// Unbounded integer coefficients.
pub type Integer = BigInt;

/// Magnus expansions with unbounded integer coefficients.
pub type MagnusSeries = magnus::NcSeries<BigInt>;
/// Fast expansions for short words where `i64` cannot overflow.
pub type MagnusSeries64 = magnus::NcSeries<i64>;

pub type Su2Matrix = almost_law::UnitaryMatrix<f64>;
pub type Su2Matrix32 = almost_law::UnitaryMatrix<f32>;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
