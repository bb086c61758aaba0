use std::fmt;

use thiserror::Error;

use crate::padic::Valuation;

/// Coordinates of a finite level `(n, m)` at which a computation was run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Level {
    pub n: Option<u32>,
    pub m: Option<u32>,
}

impl Level {
    pub fn gamma(n: u32) -> Self {
        Level { n: Some(n), m: None }
    }

    pub fn h(m: u32) -> Self {
        Level { n: None, m: Some(m) }
    }

    pub fn both(n: u32, m: u32) -> Self {
        Level { n: Some(n), m: Some(m) }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.n, self.m) {
            (Some(n), Some(m)) => write!(f, "(n={n}, m={m})"),
            (Some(n), None) => write!(f, "n={n}"),
            (None, Some(m)) => write!(f, "m={m}"),
            (None, None) => write!(f, "unspecified level"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid prime context: {0}")]
    InvalidContext(String),

    #[error("mixed precision: (p={}, K={}) vs (p={}, K={})", .left.0, .left.1, .right.0, .right.1)]
    ContextMismatch { left: (u64, u32), right: (u64, u32) },

    #[error("element of valuation {0} is not a unit")]
    NonUnit(Valuation),

    #[error("degree {needed} exceeds the series cap {cap}")]
    CapExceeded { needed: usize, cap: usize },

    #[error("bad range: {0}")]
    BadRange(String),

    #[error("precision exhausted at K = {precision}")]
    PrecisionExhausted { precision: u32 },

    #[error("iterative division did not converge within {iterations} steps")]
    ConvergenceFailure { iterations: usize },

    #[error("quotient is infinite (free Z_p-rank {free_rank}) at {level}")]
    InfiniteModule { free_rank: usize, level: Level },

    #[error("no stabilization: {0}")]
    NoStabilization(String),

    #[error("bound violated at n = {n}: witnessed constant {witnessed} exceeds {allowed}")]
    BoundViolated { n: u64, witnessed: i128, allowed: i128 },

    #[error("level {requested} exceeds the working level {cap}")]
    LevelExceeded { requested: Level, cap: Level },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("insufficient data: need {needed} points, got {got}")]
    InsufficientData { needed: usize, got: usize },
}

impl Error {
    /// Attach a level to an `InfiniteModule` error raised without one.
    pub fn at_level(self, level: Level) -> Self {
        match self {
            Error::InfiniteModule { free_rank, .. } => Error::InfiniteModule { free_rank, level },
            other => other,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
