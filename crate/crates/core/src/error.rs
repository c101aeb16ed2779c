use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cone generators must be nonzero (generator {index} is the zero vector)")]
    ZeroVector { index: usize },

    #[error("ambient rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },

    #[error("ambient rank {0} is outside the supported range 1..=4")]
    UnsupportedRank(usize),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("configuration is not pointed: {0}")]
    NotPointed(String),

    #[error("degenerate support: {0}")]
    Degenerate(String),

    #[error("resource guard exceeded: {0}")]
    Resource(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("fixture mismatch for {what}: computed {computed}, fixture {fixture}")]
    Integrity {
        what: String,
        computed: String,
        fixture: String,
    },

    #[error("polynomial parse error at byte {position}: {message}")]
    PolyParse { position: usize, message: String },

    #[error("relation {relation} is not homogeneous: term degrees {first:?} and {second:?}")]
    Homogeneity {
        relation: usize,
        first: Vec<i64>,
        second: Vec<i64>,
    },

    #[error("degree of generator {label} has length {found}, expected rank {expected}")]
    DegreeLength {
        label: String,
        expected: usize,
        found: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown model: {0}")]
    UnknownModel(String),

    #[error("class {0} lies outside the effective cone")]
    OutsideEffective(String),

    #[error("pullback matrix is not invertible over the integers (determinant {0})")]
    NotInvertible(String),

    #[error("malformed model document: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Unsupported(_) => 3,
            Error::Resource(_) => 4,
            _ => 2,
        }
    }
}
