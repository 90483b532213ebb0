use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("empty set has no inf")]
    EmptySet,
    #[error("{condition} violated at index {index}: {detail}")]
    Condition { condition: String, index: usize, detail: String },
    #[error("{0}")]
    Domain(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("value mismatch at the gluing point: {0}")]
    ValueMismatch(String),
    #[error("slope condition k <= l fails: k={k}, l={l}")]
    SlopeCondition { k: usize, l: usize },
    #[error("P(v) is not proportional to P(u): {0}")]
    NotProportional(String),
    #[error("ratio {claimed} differs from v/u = {actual}")]
    RatioMismatch { claimed: String, actual: String },
    #[error("not self-similarly closable: {0}")]
    NotClosable(String),
    #[error("target not strictly increasing and positive: {0}")]
    TargetNotIncreasing(String),
    #[error("target not aligned with mesh {mesh}: {detail}")]
    MeshMisaligned { mesh: String, detail: String },
    #[error("target below P(v) at coordinate {index}")]
    TargetBelow { index: usize },
    #[error("horizon exhausted: {0}")]
    HorizonExhausted(String),
    #[error("not self-similar")]
    NotSelfSimilar,
    #[error("exponents of non-proper system excluded")]
    NotProper,
    #[error("invalid chain: {0}")]
    InvalidChain(String),
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("hull grows; retry with gap {suggested}")]
    GapTooLarge { suggested: String },
    #[error("no path: {0}")]
    NoPath(String),
    #[error("not a member of the spectrum")]
    NotMember,
}

pub type Result<T> = std::result::Result<T, Error>;
