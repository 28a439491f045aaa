use thiserror::Error;

use crate::geometry::LatticeVector;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arithmetic overflow in exact geometry")]
    Overflow,

    #[error("coordinate {0} exceeds the magnitude bound {bound}", bound = crate::geometry::COORD_BOUND)]
    CoordinateBound(i128),

    #[error("half-plane normal {0} is zero or not primitive")]
    NonPrimitiveNormal(LatticeVector),

    #[error("half-plane intersection is unbounded")]
    UnboundedRegion,

    #[error("operation requires nonempty input")]
    EmptyInput,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("ray {index} {ray} is zero or not primitive")]
    NonPrimitiveRay { index: usize, ray: LatticeVector },

    #[error("ray {ray} appears twice (positions {first} and {second})")]
    DuplicateRay {
        ray: LatticeVector,
        first: usize,
        second: usize,
    },

    #[error("fan is not smooth: det(v{index}, v{next}) = {det}", next = index + 1)]
    NonSmoothFan { index: usize, det: i128 },

    #[error("fan is not complete: {0}")]
    NonCompleteFan(String),

    #[error("divisor has {got} coefficients but the fan has {expected} rays")]
    LengthMismatch { expected: usize, got: usize },

    #[error("fan would have {rays} rays, more than the limit of {limit}")]
    FanTooLarge { rays: usize, limit: usize },

    #[error("no divisor of class {class} found after {draws} draws")]
    SamplingExhausted { class: String, draws: u64 },

    #[error("no decomposition found for {point} although the hypotheses hold")]
    TheoremViolation { point: LatticeVector },

    #[error("decomposition candidate for {point} fails validation")]
    InvalidWitness { point: LatticeVector },

    #[error("structured and brute-force decompositions disagree at {point}")]
    OracleDisagreement { point: LatticeVector },

    #[error("{required} instances requested, budget is {budget}")]
    BudgetExceeded { required: u64, budget: u64 },

    #[error("{path}: {message}")]
    Parse { path: String, message: String },

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn out_of_range(msg: impl Into<String>) -> Self {
        Error::OutOfRange(msg.into())
    }
}
