use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("not a Lie element: coproduct defect {defect}")]
    NotLieElement { defect: String },

    #[error("truncation overflow: degree {degree} exceeds truncation {truncation}")]
    TruncationOverflow { degree: usize, truncation: usize },

    #[error("decomposability violation: generator of degree {degree} (must be >= 2)")]
    Decomposability { degree: usize },

    #[error("construction failed at degree {degree}: obstruction {obstruction}")]
    ConstructionFailure { degree: usize, obstruction: String },

    #[error("equivariance failure: {0}")]
    Equivariance(String),

    #[error("inverse verification failed: {0}")]
    InverseVerification(String),

    #[error("automorphism not in filtration level {required}: first nonvanishing degree {first_nonvanishing}")]
    Filtration {
        required: usize,
        first_nonvanishing: usize,
    },

    #[error("incompatible inputs: {0}")]
    Incompatible(String),

    #[error("transport failed: {0}")]
    Transport(String),

    #[error("invalid Lie algebra data: {0}")]
    InvalidAlgebra(String),

    #[error("action is not a Lie algebra automorphism: {0}")]
    Action(String),

    #[error("unknown label: {0}")]
    LabelMismatch(String),

    #[error("unmatched edge endpoints in 2-cell {cell}: {detail}")]
    UnmatchedEdge { cell: usize, detail: String },

    #[error("malformed connection: {0}")]
    MalformedConnection(String),

    #[error("model inconsistency: {0}")]
    ModelInconsistency(String),

    #[error("identification failure: {0}")]
    Identification(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
