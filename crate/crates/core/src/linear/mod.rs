//! Constant-coefficient hyperbolic systems with step data and the
//! distance between their coefficient matrices.

pub mod eigen;
pub mod hatd_lin;
pub mod matrix;

pub use eigen::{characteristic_polynomial, decompose, real_roots, EigenSystem};
pub use hatd_lin::{hat_d_lin, hat_d_lin_with, sphere_points, step_solution, HatDLinReport, SphereSearch};
pub use matrix::Matrix;
