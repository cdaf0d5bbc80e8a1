use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("edge {u}-{v} joins two vertices of the same parity")]
    NotBipartite { u: String, v: String },
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("vertex `{0}` has a nonpositive weight")]
    NonpositiveWeight(String),
    #[error("edge multiplicity must be at least 1 (edge {u}-{v})")]
    ZeroMultiplicity { u: String, v: String },
    #[error("either every vertex or no vertex must carry weight2")]
    PartialWeights,
    #[error("graph is disconnected; the Perron-Frobenius eigenvector is not unique")]
    Disconnected,
    #[error("power iteration did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("degree {got} exceeds the cap {cap}")]
    DegreeCap { got: usize, cap: usize },
    #[error("object mismatch: {0}")]
    ObjectMismatch(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
