//! Error types shared across the crate.

use thiserror::Error;

use crate::forms::FormBasis;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, GeomError>;

/// Everything that can go wrong in the geometric layer.
///
/// Scientific outcomes (a failed transversality verdict, a large residual) are
/// *data*, not errors; this enum covers genuine domain violations and
/// numerical breakdowns only.
#[derive(Debug, Error)]
pub enum GeomError {
    /// Model parameters violate their invariants (n ≥ 1, c > 0, steps and
    /// tolerances positive and finite).
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    /// A base point left the open unit ball of the model.
    #[error("base point outside the unit ball: |z| = {radius:.6} (need |z| < 1)")]
    OutsideBall { radius: f64 },

    /// An operation that differentiates in the base needs margin to the ball
    /// boundary and did not have it.
    #[error("too close to the ball boundary for finite differences: |z| = {radius:.6}, need |z| + step < {limit}")]
    FdDomain { radius: f64, limit: f64 },

    /// The 1-form β and everything built from it live on TM∖M.
    #[error("zero velocity: operation is defined only away from the zero section")]
    ZeroVelocity,

    /// A vector had the wrong length for the model dimension.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// Two-form matrices expressed in different bases were mixed.
    #[error("two-form basis mismatch: {left:?} vs {right:?}")]
    BasisMismatch { left: FormBasis, right: FormBasis },

    /// Gram–Schmidt could not complete an adapted frame.
    #[error("failed to build an adapted frame: {0}")]
    FrameConstruction(String),

    /// A dense solve against a 2-form failed: the form is singular or too
    /// ill-conditioned at this phase point.
    #[error("singular or ill-conditioned form: min/max singular value ratio {sigma_ratio:.3e}")]
    SingularForm { sigma_ratio: f64 },

    /// Numerical integration produced a non-finite state.
    #[error("non-finite state during integration at t = {t}")]
    NonFiniteState { t: f64 },

    /// Any other precondition violation on inputs.
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
