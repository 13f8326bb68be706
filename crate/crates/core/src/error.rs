//! Crate-wide error type.

use thiserror::Error;

/// Coarse classification used by callers that map failures to exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    /// Malformed or inconsistent input.
    Validation,
    /// A configured resource bound was exceeded.
    Capacity,
    /// An iteration finished its budget without reaching tolerance.
    NonConvergence,
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("cyclic orders must be at least 1, got {order}")]
    InvalidCyclicOrder { order: u64 },

    #[error("group order overflows u64")]
    GroupOrderOverflow,

    #[error("element {element:?} is not a member of the group with cyclic orders {orders:?}")]
    ElementOutsideGroup { element: Vec<u64>, orders: Vec<u64> },

    #[error("mismatched group specs: {left:?} vs {right:?}")]
    SpecMismatch { left: Vec<u64>, right: Vec<u64> },

    #[error("{operation} requires a nonempty set")]
    EmptySet { operation: &'static str },

    #[error("element set is not a subgroup: {details}")]
    NotASubgroup { details: String },

    #[error("group order {order} exceeds the exhaustive-search bound {bound}")]
    EnumerationCapacity { order: u64, bound: u64 },

    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },

    #[error("weight for element {element:?} is negative")]
    NegativeWeight { element: Vec<u64> },

    #[error("weights must sum to 1, got {sum}")]
    WeightSum { sum: String },

    #[error("duplicate weight entry for element {element:?}")]
    DuplicateElement { element: Vec<u64> },

    #[error("coefficient constraints violated (symmetry or row sum) at pairs {pairs:?}")]
    Stochasticity { pairs: Vec<(Vec<u64>, Vec<u64>)> },

    #[error("requested {requested} iterations, budget is {budget}")]
    IterationBudget { requested: usize, budget: usize },

    #[error(
        "rational denominators reached {bits} bits at step {step} (bound {bound}); \
         switch to the float backend for long runs"
    )]
    DenominatorBlowup { step: usize, bits: u64, bound: u64 },

    #[error(
        "distance {last:?} did not reach tolerance {tolerance} within {budget} iterations"
    )]
    NonConvergence {
        tolerance: f64,
        budget: usize,
        /// Distance series d_0, d_1, ... observed before giving up.
        distances: Vec<f64>,
        last: Option<f64>,
    },

    #[error("unknown element key {key:?}")]
    UnknownElementKey { key: String },

    #[error("cannot parse weight from {value}")]
    MalformedWeight { value: String },

    #[error("malformed document: {details}")]
    MalformedDocument { details: String },

    #[error("invalid parameter: {what}")]
    InvalidParameter { what: String },
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::EnumerationCapacity { .. }
            | Error::IterationBudget { .. }
            | Error::DenominatorBlowup { .. } => ErrorCategory::Capacity,
            Error::NonConvergence { .. } => ErrorCategory::NonConvergence,
            _ => ErrorCategory::Validation,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
