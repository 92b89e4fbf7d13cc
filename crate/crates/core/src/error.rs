use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("elements belong to different algebra contexts")]
    ContextMismatch,

    #[error("the degree of the zero element is undefined")]
    ZeroDegree,

    #[error("element is not homogeneous: {0}")]
    Inhomogeneous(String),

    #[error("coefficient violates the reality condition at mode {mode:?}")]
    NotReal { mode: Vec<i64> },

    #[error("derivation has no image for generator {0}")]
    MissingImage(String),

    #[error("derivation image of {generator} has the wrong parity")]
    ImageParity { generator: String },

    #[error("exponential of a non-nilpotent element: {0}")]
    NotNilpotent(String),

    #[error("invalid Lie algebra: {kind} fails at indices {indices:?}")]
    InvalidLieAlgebra { kind: &'static str, indices: Vec<usize> },

    #[error("invalid formal table: {0}")]
    InvalidTable(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("input to the Cartan map contains θ factors")]
    ThetaInCartanInput,

    #[error("equivariant 3-form rejected: {condition} fails, residual {witness}")]
    InvalidThreeForm { condition: String, witness: String },

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error("mode cap exceeded applying {generator}: requires K >= {required}")]
    ModeCapExceeded { generator: String, required: i64 },

    #[error("operator {operator} leaves the truncated space: {detail}")]
    NotPreserved { operator: String, detail: String },

    #[error("differential does not square to zero on the truncation ({0})")]
    NonZeroSquare(String),

    #[error("incompatible truncations: {0}")]
    IncompatibleCaps(String),

    #[error("group-parametrized 2-form is not a cocycle; residual {0}")]
    NonCocycle(String),
}
