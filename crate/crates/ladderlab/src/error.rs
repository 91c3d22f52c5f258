//! Error taxonomy for the engine.
//!
//! Variants split into two broad classes that the CLI maps to distinct exit
//! codes: *domain/configuration* errors (bad labels, malformed grids, requests
//! off the lattice) and *numerical* errors (solver non-convergence, dilation
//! range violations, annihilated states). Everything carries enough context to
//! be printed as a single actionable line.

use thiserror::Error;

/// All failures surfaced by the library.
#[derive(Debug, Error)]
pub enum LadderError {
    /// Grid construction rejected the requested parameters.
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    /// Two wavefunctions from different grids were combined.
    #[error("grid mismatch between operands")]
    GridMismatch,

    /// Normalization of an (effectively) zero function was requested.
    #[error("cannot normalize a zero-norm wavefunction")]
    ZeroNorm,

    /// A dilation sampled outside the representable extension of the grid.
    #[error("dilation out of range: {0}")]
    DilationOutOfRange(String),

    /// A computation produced NaN or infinity.
    #[error("non-finite values produced by {0}")]
    NonFinite(String),

    /// A label or parameter is outside the operator-definable range.
    #[error("domain error: {0}")]
    Domain(String),

    /// A quantum-number pair is not on the model's bound-state lattice.
    #[error("lattice error: {0}")]
    Lattice(String),

    /// No ladder path reaches the requested labels.
    #[error("no ladder path to {0}")]
    NoPath(String),

    /// A ladder step annihilated the state (norm below 1e-12 of the input).
    #[error("state annihilated during ladder step at {0}")]
    Annihilated(String),

    /// The tridiagonal eigensolver failed to converge.
    #[error("eigensolver failed to converge: {0}")]
    Convergence(String),

    /// No oracle level lies within 10% of the requested target energy.
    #[error("no oracle level within 10% of target energy: {0}")]
    LevelMismatch(String),

    /// Bad verification-suite or CLI configuration.
    #[error("configuration error: {0}")]
    Config(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, LadderError>;

impl LadderError {
    /// True for errors caused by a malformed request (labels off the lattice,
    /// bad grids, bad configuration) rather than by numerics.
    #[must_use]
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            LadderError::InvalidGrid(_)
                | LadderError::Domain(_)
                | LadderError::Lattice(_)
                | LadderError::NoPath(_)
                | LadderError::Config(_)
        )
    }
}
