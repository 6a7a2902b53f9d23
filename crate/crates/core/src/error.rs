use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A difference vanished up to a finite truncation order, so its valuation is unknown.
    #[error("precision loss: difference is zero up to O(t^{order})")]
    PrecisionLoss { order: String },
    #[error("duplicate point: punctures {0} and {1} are equal")]
    DuplicatePoint(usize, usize),
    #[error("too few punctures: need at least 2, got {0}")]
    TooFewPunctures(usize),
    #[error("subdivision position {position} not strictly inside edge of length {length}")]
    PositionOutOfRange { position: String, length: String },
    #[error("divisor has total degree {0}, expected 0")]
    DegreeNonZero(i64),
    #[error("divisor is not principal on the skeleton: slope {slope} on edge {edge} is not an integer")]
    NonPrincipalOnTate { edge: usize, slope: String },
    #[error("unknown puncture `{0}`")]
    UnknownPuncture(String),
    #[error("tropical complex is disconnected ({0} components)")]
    DisconnectedComplex(usize),
    #[error("degenerate cell: dual edge between {0:?} and {1:?} has zero length")]
    DegenerateCell((i64, i64), (i64, i64)),
    #[error("complex has no cycle")]
    NoCycle,
    #[error("complex has {0} independent cycles, expected exactly one")]
    MultipleCycles(usize),
    #[error("cycle vertex {0} does not lie in the hyperplane")]
    CycleNotInHyperplane(usize),
    #[error("multiplicity {sum} is not divisible by the degree {degree}")]
    NonIntegralMultiplicity { sum: u64, degree: u64 },
    #[error("ray edge vectors do not close up: they sum to ({0}, {1})")]
    NotClosed(i64, i64),
    #[error("unknown scenario `{0}`")]
    UnknownScenario(String),
    #[error("unsupported ambient dimension {0} (only 2 can be drawn)")]
    UnsupportedDimension(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}
