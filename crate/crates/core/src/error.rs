//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by spectral calculus, kernel evaluation, and quadrature.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("axis {axis} out of range for dimension {dimension}")]
    AxisOutOfRange { axis: usize, dimension: usize },

    #[error("expansion degree {degree} exceeds cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },

    #[error("degree {0} outside the supported oracle range 0..=12")]
    OracleRange(usize),

    #[error("argument {name} = {value} outside its domain {domain}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("kernel evaluation at coincident points x = y")]
    CoincidentPoints,

    #[error("quadrature did not converge: value {value:.6e}, error estimate {error_estimate:.6e}")]
    QuadratureNonConvergence { value: f64, error_estimate: f64 },

    #[error("integrand evaluation budget of {budget} calls exhausted")]
    BudgetExhausted { budget: usize },

    #[error("principal value truncations diverge: {0}")]
    PrincipalValueDiverges(String),

    #[error("calibration residual {residual:.3e} above tolerance {tolerance:.3e}")]
    CalibrationResidual { residual: f64, tolerance: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{0}")]
    Experiment(String),
}

pub type Result<T> = std::result::Result<T, Error>;
