use thiserror::Error;

/// Errors produced by graph construction, linear algebra, and sweeps.
#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("non-positive weight {w} on edge ({u}, {v})")]
    NonPositiveWeight { u: usize, v: usize, w: f64 },
    #[error("vertex sets overlap")]
    OverlappingSets,
    #[error("set must be a nonempty proper subset of the vertices")]
    EmptyOrFullSet,
    #[error("cut pair sets must both be nonempty")]
    EmptySet,
    #[error("vertex id {0} out of range")]
    UnknownVertex(usize),
    #[error("expected vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("right-hand side is not orthogonal to the all-ones vector")]
    NotInRange,
    #[error("iteration failed to converge within {0} rounds")]
    NoConvergence(usize),
    #[error("cannot eliminate the last remaining vertex")]
    LastVertex,
    #[error("retained vertex set is empty")]
    EmptyRetainedSet,
    #[error("graph too large for exhaustive computation (n = {n}, cap = {cap})")]
    TooLarge { n: usize, cap: usize },
    #[error("threshold q must be nonzero")]
    ZeroThreshold,
    #[error("no sweep threshold satisfies the certificate conditions (lambda estimate {lambda_hat:e})")]
    NoQualifyingThreshold { lambda_hat: f64 },
    #[error("singular eliminated block in Schur complement")]
    SingularBlock,
    #[error("bad generator parameters: {0}")]
    BadParams(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("empty graph")]
    EmptyGraph,
}

pub type Result<T> = std::result::Result<T, Error>;
