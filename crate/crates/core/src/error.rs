use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{what} out of domain: {value}")]
    Domain { what: &'static str, value: f64 },

    #[error("quadrature did not reach tolerance {tolerance:e} within {evaluations} evaluations")]
    Quadrature { tolerance: f64, evaluations: usize },

    #[error("point group closure exceeded {limit} elements (expected {expected})")]
    ClosureOverflow { expected: usize, limit: usize },

    #[error("relation violated for {group}: {detail}")]
    RelationViolation { group: String, detail: String },

    #[error("kernel point is fixed by a non-identity element (word {word:?})")]
    StabilizerNotTrivial { word: Vec<usize> },

    #[error("no ball packing exists for q = {q} (need q >= 3)")]
    NoPackingExists { q: u32 },

    #[error("optimizer restarts disagree: densities {best} and {other} differ by more than {tolerance:e}")]
    ConvergenceFailure { best: f64, other: f64, tolerance: f64 },

    #[error("unknown group family `{0}`")]
    UnknownFamily(String),

    #[error("unknown group `{0}`")]
    UnknownGroup(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64) -> Self {
        Error::Domain { what, value }
    }
}
