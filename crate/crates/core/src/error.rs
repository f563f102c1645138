use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Algebra dimension must be positive.
    NonPositiveDimension,
    IndexOutOfRange { index: usize, dim: usize },
    /// Two entries of an algebra spec disagree once antisymmetry is completed.
    ConflictingConstant { i: usize, j: usize, k: usize },
    /// A dense constant array is not antisymmetric in its lower indices.
    NotAntisymmetric { i: usize, j: usize, k: usize },
    LengthMismatch { expected: usize, found: usize },
    JacobiViolation { residual: f64 },
    UnknownAlgebra(String),
    InvalidSpec(String),
    /// Killing form is degenerate (ratio of smallest to largest |eigenvalue|).
    DegenerateKilling { ratio: f64 },
    DegreeOutOfRange { degree: usize },
    SingularFrame { condition: f64 },
    IllConditionedMetric { condition: f64 },
    ChartRadiusExceeded { bound: f64, limit: f64 },
    InvalidChart(&'static str),
}

impl Error {
    /// Whether the failure is numerical conditioning rather than a bad input
    /// or an unmet algebraic precondition.
    pub fn is_conditioning(&self) -> bool {
        matches!(
            self,
            Error::SingularFrame { .. }
                | Error::IllConditionedMetric { .. }
                | Error::ChartRadiusExceeded { .. }
                | Error::JacobiViolation { .. }
        )
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonPositiveDimension => write!(f, "algebra dimension must be positive"),
            Error::IndexOutOfRange { index, dim } => {
                write!(f, "index {index} out of range for dimension {dim}")
            }
            Error::ConflictingConstant { i, j, k } => {
                write!(f, "conflicting structure constant for [b{i}, b{j}] component {k}")
            }
            Error::NotAntisymmetric { i, j, k } => {
                write!(f, "structure constants not antisymmetric at ({i}, {j}) component {k}")
            }
            Error::LengthMismatch { expected, found } => {
                write!(f, "expected length {expected}, found {found}")
            }
            Error::JacobiViolation { residual } => {
                write!(f, "Jacobi identity violated (residual {residual:e})")
            }
            Error::UnknownAlgebra(name) => write!(f, "unknown algebra `{name}`"),
            Error::InvalidSpec(msg) => write!(f, "invalid algebra spec: {msg}"),
            Error::DegenerateKilling { ratio } => {
                write!(f, "Killing form is degenerate (eigenvalue ratio {ratio:e})")
            }
            Error::DegreeOutOfRange { degree } => {
                write!(f, "cochain degree {degree} outside the implemented complex")
            }
            Error::SingularFrame { condition } => {
                write!(f, "frame is singular or ill-conditioned (condition {condition:e})")
            }
            Error::IllConditionedMetric { condition } => {
                write!(f, "metric is ill-conditioned (condition {condition:e})")
            }
            Error::ChartRadiusExceeded { bound, limit } => {
                write!(f, "exponential chart bound {bound} exceeds limit {limit}")
            }
            Error::InvalidChart(msg) => write!(f, "invalid chart: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
