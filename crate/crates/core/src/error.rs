//! Error types shared across the crate.

use num_complex::Complex64;

/// Crate-wide error type. Numeric routines never return NaN; they return one
/// of these instead.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Gamma-function argument within tolerance of a nonpositive integer.
    #[error("gamma pole: argument {z} within {eps:e} of a nonpositive integer")]
    Pole { z: Complex64, eps: f64 },

    /// A coefficient denominator is (numerically) zero.
    #[error("degenerate denominator: {0}")]
    DegenerateDenominator(String),

    /// No vertical-line contour separates the pole families.
    #[error("no admissible contour: {0}")]
    Contour(String),

    /// Refinement budget exhausted before the requested tolerance was met.
    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),

    /// The evaluation target sits on a polar divisor.
    #[error("target lies on a pole: {0}")]
    PoleHit(String),

    /// A genericity hypothesis of a shift relation fails along every route.
    #[error("hypothesis failure: {0}")]
    HypothesisFailure(String),

    /// Two pole families coincide within tolerance.
    #[error("ambiguous pole classification: {0}")]
    AmbiguousClassification(String),

    /// The residue circle would enclose a second pole.
    #[error("residue circle too large: {0}")]
    CircleTooLarge(String),

    /// A gamma factor of a residue formula sits on a pole (non-generic `a`).
    #[error("gamma pole in residue formula: {0}")]
    GammaPole(String),

    /// An input constraint (e.g. a linear relation among arguments) is violated.
    #[error("constraint violation: {0}")]
    ConstraintViolation(String),

    /// A precondition on the arguments is violated.
    #[error("precondition violation: {0}")]
    PreconditionViolation(String),

    /// Interpolation nodes are too close together.
    #[error("ill-conditioned interpolation: {0}")]
    IllConditioned(String),

    /// Malformed parameters (wrong lengths, non-finite entries, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An operation produced a non-finite value.
    #[error("non-finite result: {0}")]
    NonFinite(String),
}

impl Error {
    /// Stable machine-readable tag, used by the CLI error payloads.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Pole { .. } => "PoleError",
            Error::DegenerateDenominator(_) => "DegenerateDenominator",
            Error::Contour(_) => "ContourError",
            Error::NonConvergence(_) => "NonConvergence",
            Error::PoleHit(_) => "PoleHit",
            Error::HypothesisFailure(_) => "HypothesisFailure",
            Error::AmbiguousClassification(_) => "AmbiguousClassification",
            Error::CircleTooLarge(_) => "CircleTooLarge",
            Error::GammaPole(_) => "GammaPole",
            Error::ConstraintViolation(_) => "ConstraintViolation",
            Error::PreconditionViolation(_) => "PreconditionViolation",
            Error::IllConditioned(_) => "IllConditioned",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::NonFinite(_) => "NonFinite",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
