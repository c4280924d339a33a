use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("schema violation at {0}")]
    Schema(String),

    #[error("unknown letter {0:?}")]
    UnknownLetter(String),

    #[error("malformed path: {0}")]
    MalformedPath(String),

    #[error("components {first:?} and {second:?} are isomorphic as labeled graphs")]
    DuplicateComponent { first: String, second: String },

    #[error("cycle enumeration exceeded its cap after {partial} cycles")]
    EnumerationOverflow { partial: usize },

    #[error("pieces of component {component:?} still extend past length cap {cap}")]
    PiecesInconclusive { component: String, cap: usize },

    #[error("edge {edge} lies on more than {cap} enumerated cycles or enumeration overflowed")]
    FinenessCap { edge: String, cap: usize },

    #[error("invalid lambda {0:?}: expected a rational p/q in (0, 1/2]")]
    InvalidLambda(String),

    #[error("presentation not certified: {0}")]
    NotCertified(String),

    #[error("ball exceeded size cap; layer sizes so far {layer_sizes:?}")]
    BallTooLarge { layer_sizes: Vec<usize> },

    #[error("insufficient radius: need {needed}, ball radius is {radius}")]
    InsufficientRadius { needed: usize, radius: usize },

    #[error("distance not certified; lower bound {lower_bound}")]
    UncertifiedDistance { lower_bound: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),

    #[error("window too large: words of length {shorter} cannot carry overlap {overlap}")]
    WindowTooLarge { shorter: usize, overlap: usize },

    #[error("census infeasible: {0}")]
    CensusInfeasible(String),

    #[error("usage: {0}")]
    Usage(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_)
            | Error::Json(_)
            | Error::Schema(_)
            | Error::UnknownLetter(_)
            | Error::MalformedPath(_)
            | Error::DuplicateComponent { .. }
            | Error::InvalidLambda(_)
            | Error::Usage(_)
            | Error::WindowTooLarge { .. } => 2,
            Error::InvariantViolation(_) => 1,
            _ => 3,
        }
    }

    /// Stable machine-readable tag used in JSON reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Schema(_) => "schema",
            Error::UnknownLetter(_) => "unknown-letter",
            Error::MalformedPath(_) => "malformed-path",
            Error::DuplicateComponent { .. } => "duplicate-component",
            Error::EnumerationOverflow { .. } => "enumeration-overflow",
            Error::PiecesInconclusive { .. } => "pieces-inconclusive",
            Error::FinenessCap { .. } => "fineness-cap",
            Error::InvalidLambda(_) => "invalid-lambda",
            Error::NotCertified(_) => "not-certified",
            Error::BallTooLarge { .. } => "ball-too-large",
            Error::InsufficientRadius { .. } => "insufficient-radius",
            Error::UncertifiedDistance { .. } => "uncertified-distance",
            Error::Precondition(_) => "precondition",
            Error::InvariantViolation(_) => "invariant-violation",
            Error::WindowTooLarge { .. } => "window-too-large",
            Error::CensusInfeasible(_) => "census-infeasible",
            Error::Usage(_) => "usage",
        }
    }
}
