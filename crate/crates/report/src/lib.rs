//! Spec documents, diagnostics CSV, point-parallel evaluation and the report
//! commands built on `gtorsion-core`.

pub mod config;
pub mod csv;
pub mod error;
pub mod parallel;
pub mod report;
pub mod spec;

pub use config::{AlgebraSource, FrameChoice, RunConfig};
pub use error::{RunError, RunResult};
