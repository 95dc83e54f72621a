use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("letter sequence is not freely reduced (adjacent inverse pair at {position})")]
    NotReduced { position: usize },

    #[error("word {0} is not cyclically reduced")]
    NotCyclicallyReduced(String),

    #[error("level {level} would need about {predicted} letters, over the budget of {budget}")]
    LengthBudget {
        level: usize,
        predicted: u128,
        budget: usize,
    },

    #[error("series of degree {degree} needs {terms} slots, over the budget of {budget}")]
    SeriesBudget {
        degree: usize,
        terms: usize,
        budget: usize,
    },

    #[error("coefficient overflow in {0}")]
    Overflow(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("search interrupted: {0}")]
    Interrupted(String),

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("seed bound {bound} exceeds 1/3; the commutator recursion need not contract")]
    SeedBoundTooLarge { bound: f64 },

    #[error("net of {points} points exceeds the budget of {budget}")]
    NetBudget { points: u64, budget: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
