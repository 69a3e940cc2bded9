use thiserror::Error;

/// Errors raised by the geometric constructions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("point {point:?} lies outside the chart domain")]
    OutOfDomain { point: Vec<f64> },

    #[error("metric is not positive definite at {point:?}")]
    NotPositiveDefinite { point: Vec<f64> },

    #[error("invalid dimension {got}: {reason}")]
    InvalidDimension { got: usize, reason: &'static str },

    #[error("parameter constraint violated: {constraint} (a = {a}, b = {b}, tau = {tau})")]
    ParameterConstraint { constraint: &'static str, a: f64, b: f64, tau: f64 },

    #[error("degenerate field: {0}")]
    DegenerateField(&'static str),

    #[error("infeasible coefficient system: {0}")]
    Infeasible(&'static str),

    #[error("degenerate plane (gram determinant {gram_det:e})")]
    DegeneratePlane { gram_det: f64 },

    #[error("unsupported bracket operands: {0}")]
    UnsupportedOperands(&'static str),

    #[error("singular matrix encountered during inversion")]
    Singular,
}

pub type Result<T> = std::result::Result<T, GeometryError>;
