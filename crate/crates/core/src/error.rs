use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("unknown builtin graph `{0}`")]
    UnknownBuiltin(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("size guard exceeded for {what}: estimated {estimate}, limit {limit}")]
    SizeGuard {
        what: &'static str,
        estimate: String,
        limit: String,
    },

    #[error("graph `{0}` is not chordal")]
    NotChordal(String),

    #[error("graph `{0}` is not series-parallel")]
    NotSeriesParallel(String),

    #[error("clique number {0} exceeds 3")]
    CliqueNumberTooLarge(usize),

    #[error("invalid elimination ordering: {0}")]
    InvalidOrdering(String),

    #[error("map is not a homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("no homomorphism exists, HDE is undefined")]
    NoHomomorphism,

    #[error("homomorphism enumeration exceeded cap {0}")]
    EnumerationCap(usize),

    #[error("linear program is {0}")]
    LpStatus(&'static str),

    #[error("infeasible input: {0}")]
    Infeasible(String),

    #[error("conditioning on a zero-probability event at vertex {0}")]
    ZeroProbability(usize),

    #[error("no qualifying target found: {0}")]
    NoTarget(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn guard(what: &'static str, estimate: impl ToString, limit: impl ToString) -> Self {
        Error::SizeGuard {
            what,
            estimate: estimate.to_string(),
            limit: limit.to_string(),
        }
    }
}
