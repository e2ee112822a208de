use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("value {0} does not fit in a finite double")]
    FloatOverflow(String),
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),
    #[error("start height {0} is outside the admissible interval {1}")]
    InvalidStartHeight(String, &'static str),
    #[error("degenerate recursion at column {column}: {reason}")]
    Degenerate { column: u64, reason: String },
    #[error("recursion identity failed at column {column}: {identity}")]
    IdentityFailed { column: u64, identity: &'static str },
    #[error("exact size budget exceeded at column {column}: {bits} bits > budget {budget}")]
    ExactBudget { column: u64, bits: u64, budget: u64 },
    #[error("states are not consecutive: columns {0} and {1}")]
    NonConsecutive(u64, u64),
    #[error("triangles are translation-congruent: {0}")]
    TranslationCongruent(String),
    #[error("no candidate accepted after {draws} draws for strip or copy {strip}")]
    DrawBudget { strip: usize, draws: usize },
    #[error("boundary spacing mismatch while stacking strip {strip}: {detail}")]
    SpacingMismatch { strip: usize, detail: String },
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(String),
    #[error("perturbation loses convexity in face {face}")]
    ConvexityLost { face: usize },
    #[error("perturbation magnitude exceeds cap")]
    PerturbationTooLarge,
    #[error("{0}")]
    Precondition(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
