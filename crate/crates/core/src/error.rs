use thiserror::Error;

use crate::formulas::FormulaId;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series has zero constant term and cannot be inverted")]
    NotInvertible,
    #[error("truncation lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("constant-term matrix is singular; stencil system is malformed")]
    FlatLimitSingular,
    #[error("series solve lost too much precision (best {got} of {wanted} terms)")]
    PrecisionExhausted { got: usize, wanted: usize },
    #[error("collocation matrix is singular at eps = 0")]
    SingularAtFlatLimit,
    #[error("numerically singular system")]
    Singular,
    #[error("flat-limit mismatch for {formula}: {entry} is {got}, reference {expected}")]
    FlatLimitMismatch {
        formula: FormulaId,
        entry: String,
        got: String,
        expected: String,
    },
    #[error("derivative index {0:?} exceeds jet order {1}")]
    OutOfOrder(Vec<usize>, usize),
    #[error("no positive optimal-shape candidate")]
    NoOptimalEps,
    #[error("test function {0} is not defined in {1} dimension(s)")]
    ArityMismatch(String, usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
