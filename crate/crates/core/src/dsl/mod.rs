//! Line-oriented text formats: diagram sets (`.tdg`), relations (`.trel`) and
//! matrix bindings (`.tmat`).
//!
//! All three share one lexer. Statements end at a newline or `;` and `#`
//! starts a comment. Parse errors carry 1-based line and column; structural
//! problems in a diagram are left for [`TraceDiagram::validate`].
//!
//! [`TraceDiagram::validate`]: crate::diagram::TraceDiagram::validate

mod diagram;
mod lexer;
mod matrix;
mod relation;

use std::path::Path;

pub use diagram::{
    parse_diagram, parse_diagram_set, serialize_diagram, serialize_diagram_set, BuiltinRef,
    DiagramSet, Entry, DEFAULT_NAME,
};
pub use matrix::{load_matrix_file, parse_matrix_file, serialize_matrix_file};
pub use relation::{load_relation, parse_relation, parse_relation_with};

use crate::error::Result;

pub fn load_diagram_set(path: impl AsRef<Path>) -> Result<DiagramSet> {
    parse_diagram_set(&relation::read(path.as_ref())?)
}
