//! Polytope approximation of convex bodies under the standard Gaussian measure.
//!
//! The crate is organised bottom-up:
//!
//! * [`rng`], [`special`], [`tails`], [`hermite`], [`estimate`] and [`mc`] hold the
//!   random streams, analytic probability functions and the chunked Monte Carlo engine.
//! * [`bodies`] defines the membership-oracle interface and concrete bodies.
//! * [`constructors`] builds random Nazarov polytopes, junta intersections and
//!   tangent (support-function) approximators, plus closed-form facet bounds.
//! * [`estimators`] measures volumes, distances, influences, noise sensitivity,
//!   zoom variance, Hermite coefficients and Cramér-type tail ratios.

pub mod bodies;
pub mod constructors;
pub mod error;
pub mod estimate;
pub mod estimators;
pub mod hermite;
pub mod mc;
pub mod optim;
pub mod rng;
pub mod special;
pub mod tails;

pub use error::{Error, Result};
pub use estimate::Estimate;
pub use rng::RandomStream;
