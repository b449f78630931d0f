//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A matrix that must be symmetric is not, within the stated tolerance.
    #[error("matrix is not symmetric (max asymmetry {max_asymmetry:.3e}, tolerance {tolerance:.1e})")]
    NotSymmetric { max_asymmetry: f64, tolerance: f64 },

    /// A covariance matrix violates the uncertainty principle.
    #[error("covariance matrix is not physical (smallest symplectic eigenvalue {nu_min} < 1)")]
    NonPhysical { nu_min: f64 },

    /// A Fock-space cutoff is too small for the requested state content.
    #[error("cutoff {cutoff} too small: {rule}")]
    CutoffTooSmall { cutoff: usize, rule: String },

    /// A numerical-accuracy guard was violated (operator arguments too large
    /// for the cutoff, state weight in the unreliable spectral band, ...).
    #[error("guard violation: {0}")]
    GuardViolation(String),

    /// A state failed validation (norm, trace, Hermiticity, positivity).
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Scenario parameters out of range (non-positive masses or separations,
    /// unsorted time grid, ...).
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    /// Phase-space grid extents do not cover the state.
    #[error("insufficient grid extent: {0}")]
    InsufficientExtent(String),

    /// Two grids that must share a sampling do not.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Malformed grid specification.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// The LAPACK backend reported a failure.
    #[error("linear algebra backend error: {routine} returned info={info}")]
    Lapack { routine: &'static str, info: i32 },
}

pub type Result<T> = std::result::Result<T, Error>;
