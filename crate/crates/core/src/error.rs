use thiserror::Error;

use crate::diagram::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid diagram: {}", format_violations(.0))]
    Invalid(Vec<Violation>),

    #[error("inadmissible coloring at vertex {vertex}")]
    InadmissibleColoring { vertex: String },

    #[error("coloring does not cover edge {edge}")]
    IncompleteColoring { edge: String },

    #[error("unmarked edge {edge} has different head and tail labels")]
    UnmarkedLabelMismatch { edge: String },

    #[error("label {label} out of range 1..={n}")]
    LabelOutOfRange { label: u32, n: usize },

    #[error("{vertex} is not an internal vertex")]
    NotInternal { vertex: String },

    #[error("unknown vertex {0}")]
    UnknownVertex(String),

    #[error("unbound label {0}")]
    UnboundLabel(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("diagram is not closed")]
    NotClosed,

    #[error("diagram is not framed")]
    NotFramed,

    #[error("fast path inapplicable: diagram has internal vertices")]
    FastPathInapplicable,

    #[error("invalid leaf partition: {0}")]
    InvalidPartition(String),

    #[error("incompatible formal sum terms: {0}")]
    IncompatibleTerms(String),

    #[error("identity is not homogeneous of degree {degree}")]
    NotHomogeneous { degree: usize },

    #[error("{0}")]
    Unsupported(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}
