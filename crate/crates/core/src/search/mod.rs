//! Exhaustive enumeration of reduced words with symmetry pruning, prefix
//! sharding and checkpointing.

mod alpha;
pub mod checkpoint;
mod constants;
mod engine;
mod oracle;
mod symmetry;

pub use alpha::{alpha, AlphaChecks, AlphaEntry, AlphaTable};
pub use constants::{
    beta_lower, beta_upper, compare_printed, constants, delta, log14_4, mu, nu, report_constants, BetaRow,
    ConstantsReport, NamedConstant, PrintedMatch,
};
pub use engine::{
    enumerate, enumerate_accepted, enumerate_with, orbit, search, search_sequential, Outcome, SearchReport,
    SearchSpec, DEFAULT_SHARDS, MAX_SEARCH_LEN,
};
pub use oracle::{DerivedOracle, KernelOracle, LcsOracle, Oracle};
pub use symmetry::{Invariance, PruneFlags, Symmetry};
