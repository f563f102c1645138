//! Algebra spec documents:
//!
//! ```text
//! { "name": "so3", "dim": 3,
//!   "constants": [{"i": 0, "j": 1, "k": 2, "v": 1.0}, ...],
//!   "sum": ["so3", "so3"] }
//! ```
//!
//! `sum` is optional and replaces `constants`.

use std::path::Path;

use gtorsion_core::{AlgebraSpec, LieAlgebra, SpecEntry};
use serde::Deserialize;

use crate::error::{RunError, RunResult};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    name: String,
    dim: i64,
    #[serde(default)]
    constants: Vec<Entry>,
    #[serde(default)]
    sum: Option<Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    i: usize,
    j: usize,
    k: usize,
    v: f64,
}

pub fn parse_spec(text: &str) -> RunResult<AlgebraSpec> {
    let doc: Document = serde_json::from_str(text).map_err(|e| RunError::Spec(e.to_string()))?;
    Ok(AlgebraSpec {
        name: doc.name,
        dim: doc.dim,
        constants: doc
            .constants
            .into_iter()
            .map(|e| SpecEntry { i: e.i, j: e.j, k: e.k, v: e.v })
            .collect(),
        sum: doc.sum,
    })
}

/// Parses and validates a spec document. Every failure, including Jacobi
/// violations, is a spec error.
pub fn algebra_from_str(text: &str) -> RunResult<LieAlgebra> {
    parse_spec(text)?.build().map_err(|e| RunError::Spec(e.to_string()))
}

pub fn load_algebra(path: &Path) -> RunResult<LieAlgebra> {
    let text = std::fs::read_to_string(path).map_err(|source| RunError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    algebra_from_str(&text)
}
