//! Exact evaluation of trace diagrams.
//!
//! A trace diagram is a directed ciliated graph whose internal vertices all
//! have degree `n` and whose edges may be marked by `n x n` matrices. Its value
//! (or, when framed, its multilinear function) is a signed sum over edge
//! colorings. All arithmetic is over exact rationals.

pub mod algebra;
pub mod binding;
pub mod diagram;
pub mod dsl;
pub mod error;
pub mod eval;
pub mod library;
pub mod lab;
pub mod linalg;
pub mod perm;
pub mod scalar;

pub use algebra::{FormalSum, LeafPartition, RelationCheck, RelationMode};
pub use binding::MatrixBinding;
pub use diagram::{
    Coloring, DiagramBuilder, Dimension, Edge, EdgeEnd, End, Framing, Label, LeafColoring, Mark,
    TraceDiagram, Vertex, VertexKind, Violation,
};
pub use error::{Error, Result};
pub use eval::FunctionMatrix;
pub use linalg::Matrix;
pub use scalar::Scalar;
