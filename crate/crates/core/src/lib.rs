//! Numerical toolkit for twisted symplectic geometry on the tangent bundle
//! of complex hyperbolic space.
//!
//! The base manifold is the complex ball model of CHⁿ with holomorphic
//! sectional curvature −c. On its tangent bundle TM the crate constructs:
//!
//! * the Sasaki splitting of T(TM) into horizontal and vertical subspaces,
//!   the canonical symplectic form ω₀ = dλ, and adapted J-invariant frames
//!   ([`sasaki`]);
//! * the twist primitive β(ξ) = ⟨Jv, Kξ⟩ / ‖v‖², its exterior derivative dβ
//!   in closed form, and the total form ω = ω₀ + dβ ([`twisted`]);
//! * the kinetic Hamiltonian flow of ω — a magnetic-type flow with velocity
//!   equation v̇ = cJv parallel-transported along the trajectory
//!   ([`dynamics`]);
//! * the 1-form α = λ + β and the contact-type analysis of the level sets
//!   ‖v‖² = a, ‖v‖² = b of twice the kinetic energy ([`contact`]).
//!
//! Every closed-form quantity is paired with an independent numerical check
//! (finite-difference derivatives, generic linear solves, Pfaffians), and the
//! [`checks`] module bundles those into a reproducible verification suite.
//!
//! A caveat discovered and pinned down by this toolkit: for n ≥ 2 the total
//! form ω = ω₀ + dβ degenerates exactly on the critical level ‖v‖² = c
//! (det ω = (1 − c/‖v‖²)^{2n−2} in an adapted frame), so the checks that
//! assert nondegeneracy *on* that level fail for n ≥ 2 by design rather than
//! by numerical accident. See the `checks` module documentation.

pub mod checks;
pub mod contact;
pub mod dynamics;
pub mod error;
pub mod forms;
pub mod model;
pub mod params;
pub mod sample;
pub mod sasaki;
pub mod twisted;

pub use error::{GeomError, Result};
pub use params::ModelParams;
