//! Lie-bracket tensors, Killing metrics, adjoint cohomology with an explicit
//! primitive, and the adapted connection `∇ = D + A` of a bracket field with
//! its torsion, evaluated by finite differences on sampled charts.
//!
//! The crate is `no_std` and only needs `alloc`.
#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod cohomology;
pub mod error;
pub mod frame;
pub mod geometry;
pub mod lie;
pub mod linalg;
pub mod tensor;

pub use error::{Error, Result};
pub use lie::{AlgebraSpec, Classification, DualBasisPair, KillingMetric, LieAlgebra, SpecEntry};
pub use tensor::{Tensor3, Tensor4};
pub use frame::{Chart, Frame, FrameField, FrameKind};
pub use geometry::{BracketField, DiagnosticsReport, NormSet, PointDiagnostics};
