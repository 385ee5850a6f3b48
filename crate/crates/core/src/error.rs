use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid axis: {0}")]
    InvalidAxis(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("argument outside supported domain: {0}")]
    Domain(String),
    #[error("window truncated by axis: {0}")]
    Truncation(String),
    #[error("grid too coarse for requested frequencies: {0}")]
    Aliasing(String),
    #[error("division by vanishing window value: {0}")]
    Singular(String),
    #[error("interpolation target outside grid support: {0}")]
    Range(String),
    #[error("unsupported polynomial degree {0} (maximum {1})")]
    Degree(usize, usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("consistency check failed: {0}")]
    Consistency(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("not implemented for this input: {0}")]
    NotImplemented(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Non-fatal numerical diagnostics attached to a result.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    /// Field does not decay at the grid edges; spectral and quadrature
    /// accuracy is degraded.
    EdgeMass { fraction: f64 },
    /// Amplitude is not (numerically) in the subspace of the window.
    InconsistentAmplitude { residual: f64 },
    /// Amplitude is not normalized.
    Normalization { norm_sq: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::EdgeMass { fraction } => {
                write!(f, "field mass at grid edges is {fraction:.3e} of total")
            }
            Warning::InconsistentAmplitude { residual } => {
                write!(f, "amplitude lies outside the window subspace (residual {residual:.3e})")
            }
            Warning::Normalization { norm_sq } => {
                write!(f, "amplitude is not normalized (norm^2 = {norm_sq:.12})")
            }
        }
    }
}

/// A value together with any warnings produced while computing it.
#[derive(Debug, Clone, PartialEq)]
pub struct Checked<T> {
    pub value: T,
    pub warnings: Vec<Warning>,
}

impl<T> Checked<T> {
    pub fn clean(value: T) -> Self {
        Checked { value, warnings: Vec::new() }
    }

    pub fn with(value: T, warnings: Vec<Warning>) -> Self {
        Checked { value, warnings }
    }

    pub fn is_clean(&self) -> bool {
        self.warnings.is_empty()
    }

    pub fn into_value(self) -> T {
        self.value
    }
}
