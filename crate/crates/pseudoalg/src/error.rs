//! Library-wide error type.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("Jacobi identity fails on basis triple ({i},{j},{k}): defect {defect}")]
    JacobiViolation {
        i: usize,
        j: usize,
        k: usize,
        defect: String,
    },

    #[error("2-cocycle identity fails: {detail}")]
    CocycleViolation { detail: String },

    #[error("degree of the zero element is undefined")]
    ZeroElement,

    #[error("axiom check failed: {0}")]
    AxiomFailure(String),

    #[error("locality sweep exceeded the hard degree cap of {cap}")]
    LocalityCapExceeded { cap: u32 },

    #[error("no element with the required property was found: {0}")]
    NotFound(String),

    #[error("descent hit the left annihilator: {0}")]
    AnnihilatorHit(String),

    #[error("the generated subspace did not close under the operations: {0}")]
    NotClosed(String),

    #[error("the given span is not a subalgebra")]
    NotSubalgebra,

    #[error("dimension {dim} exceeds the supported bound {bound}")]
    DimTooLarge { dim: usize, bound: usize },

    #[error("action is not idempotent: {0}")]
    NotIdempotentAction(String),

    #[error("structures do not match: {0}")]
    ModelMismatch(String),

    #[error("degree-zero component is not simple: {0}")]
    NotSimpleZeroComponent(String),

    #[error("classification outside the supported family: {0}")]
    OutOfScope(String),

    #[error("invalid input: {0}")]
    Input(String),
}
