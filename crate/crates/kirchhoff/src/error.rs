use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("expected a non-negative rational, got {0}")]
    NegativeInput(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("value 0 has a single continued fraction representation")]
    ZeroHasOneRepresentation,

    #[error("operation requires a proper (open-free) term")]
    ImproperTerm,

    #[error("marked graph is improper: {0}")]
    ImproperGraph(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("brute-force enumeration limited to {cap} edges, graph has {edges}")]
    BruteForceTooLarge { edges: usize, cap: usize },

    #[error("construction would exceed {cap} edges")]
    ConstructionTooLarge { cap: usize },

    #[error("decomposition has {parts} parts but the integer part only admits {max}")]
    TooManyParts { parts: usize, max: usize },

    #[error("no realization strategy produced a verified graph for {0}")]
    NoStrategySucceeded(String),

    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),

    #[error("cannot parse term from {0:?}")]
    ParseTerm(String),
}

pub type Result<T> = std::result::Result<T, Error>;
