use thiserror::Error;

use crate::urn::State;

pub type Result<T, E = UrnError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum UrnError {
    #[error("invalid urn specification: {0}")]
    InvalidSpec(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("state {0} has {1} colors, the urn has {2}")]
    DimensionMismatch(State, usize, usize),

    #[error("state {0} is absorbing")]
    AbsorbingState(State),

    #[error("drawing color {color} at {state} leads to a negative count")]
    NegativeCount { state: State, color: usize },

    #[error("drawing color {color} at {state} overflows a ball count")]
    CountOverflow { state: State, color: usize },

    #[error("no ball can be drawn at non-absorbing state {0}")]
    NoDrawableBall(State),

    #[error("{from} -> {to} is not a step of the urn")]
    IllegalStep { from: State, to: State },

    #[error("urn process does not terminate from {start}: {reason}")]
    NonTerminating { start: State, reason: String },

    #[error("start total {total} exceeds the enumeration cap {cap}")]
    CapExceeded { total: u64, cap: u64 },

    #[error("quadrature error estimate {error:e} exceeds tolerance {tolerance:e} after {panels} panels")]
    QuadratureFailure {
        error: f64,
        tolerance: f64,
        panels: usize,
    },
}
