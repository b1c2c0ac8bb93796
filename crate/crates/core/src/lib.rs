//! Exact classifiers for energy equality and regularity of Beltrami-type
//! Euler and Navier-Stokes flows.
//!
//! The crate works entirely in exact rational arithmetic:
//!
//! * [`exponents`]: extended rationals and the Bochner-space calculus
//!   (Hoelder products, Sobolev lifting, scaling level).
//! * [`criteria`]: one-shot verdicts for gradient and vorticity hypotheses.
//! * [`bootstrap`]: the iteration that turns `omega = lambda u` with
//!   `lambda` in `L^alpha(L^beta)` into successively better gradient bounds.
//! * [`regularity`]: the closed-form interval decomposition of `beta > 3`
//!   and the exact time exponent needed for strong solutions.

pub mod bootstrap;
pub mod criteria;
pub mod error;
pub mod exponents;
pub mod regularity;

pub use error::{ExponentError, Result};
pub use exponents::{rat, BochnerSpec, ExtRational};
