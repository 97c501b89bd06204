//! Uniform ("neutral") and density-weighted beliefs over parametric convex
//! polytopes.
//!
//! The crate is organised bottom-up:
//!
//! - [`convexsolve`]: dense simplex (float or exact rational), double-description
//!   vertex enumeration, minimum-norm-point and redundancy removal.
//! - [`geomkernel`]: the [`Polytope`] type with measures, metrics and the
//!   convex-body maps (Steiner point, radial function, inner radius, ...).
//! - [`beliefs`]: expectations under uniform/density beliefs, sampling and
//!   total-variation / Wasserstein-1 distances between beliefs.
//! - [`svmaps`]: polytope-valued maps `x ↦ S(x)` (built-in examples, linear
//!   bilevel solution maps, ε-argmin maps) and constructions on them.
//! - [`probe`]: sweeps, Lipschitz/calmness estimation and bound verification.

pub mod beliefs;
pub mod convexsolve;
mod error;
pub mod geomkernel;
pub(crate) mod linalg;
pub mod probe;
pub mod scalar;
pub mod svmaps;
mod tolerances;

pub use error::{Error, Result};
pub use geomkernel::{AffineFrame, Polytope};
pub use tolerances::Tolerances;
