use thiserror::Error;

use crate::symfunc::Basis;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("expected a symmetric function in the {expected} basis")]
    BasisMismatch { expected: Basis },

    #[error("partition parts must be positive")]
    ZeroPart,

    #[error("vertex {vertex} is out of range for a poset on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("relations force a cycle through vertex {0}")]
    Cycle(usize),

    #[error("{what} is {value}, above the supported bound {max}")]
    TooLarge {
        what: &'static str,
        value: usize,
        max: usize,
    },

    #[error("{0}")]
    Range(String),

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("edge {down}-{up} at byte {offset} is outside a {r}x{s} graph")]
    EdgeIndex {
        offset: usize,
        down: usize,
        up: usize,
        r: usize,
        s: usize,
    },

    #[error("parts {0} and {1} lie on shared or adjacent levels")]
    Adjacent(usize, usize),

    #[error("part {0} touches level 1 and cannot be lowered")]
    Level(usize),

    #[error("parts {lo}..={hi} span more than two adjacent levels")]
    Span { lo: usize, hi: usize },

    #[error("edge pair is invalid: {0}")]
    EdgePair(String),

    #[error("no part listing found: {0}")]
    NoListing(String),

    #[error("invalid JSON: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
