//! Scalar fluxes and their exact Riemann solvers.

pub mod flux;
pub mod hatd;
pub mod piecewise_linear;
pub mod riemann;

pub use flux::{FluxShape, ScalarFlux};
pub use hatd::{hat_d_estimate, FluxDistanceReport, RiemannSampler};
pub use piecewise_linear::PiecewiseLinearFlux;
pub use riemann::{eval_fan, fan_l1_diff, riemann_l1_diff, RiemannFan, RiemannFlux, Wave};
