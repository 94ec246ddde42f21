//! Solvers and diagnostics for the dependence of entropy solutions of
//! hyperbolic conservation laws on the flux function.
//!
//! - [`pwfun`]: piecewise-constant functions, total variation, exact L1 distances.
//! - [`scalar`]: scalar fluxes, exact Riemann fans, the sampled flux distance.
//! - [`evolution`]: front tracking and the Lax-Oleinik evaluator.
//! - [`linear`]: constant-coefficient systems and the matrix distance.
//! - [`euler`]: classical and relativistic isothermal p-systems.
//! - [`metrics`]: checks of the flux-stability inequalities.
//! - [`suite`]: named fluxes and data, bundled experiment cases.

pub mod error;
pub mod euler;
pub mod evolution;
pub mod interval;
pub mod linear;
pub mod metrics;
pub mod pwfun;
pub mod quad;
pub mod scalar;
pub mod suite;

pub use error::{Error, Result};
pub use interval::Interval;
pub use pwfun::{l1_distance, PiecewiseConstantFn};
