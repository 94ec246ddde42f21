//! Isothermal Euler p-systems: classical and relativistic fluxes, their
//! Jacobian gap, and a finite-volume solver for the classical limit.

pub mod fv;
pub mod system;

pub use fv::{
    classical_limit_experiment, fv_evolve, ClassicalLimitReport, ClassicalLimitRow, ClassicalLimitSetup, FvOptions,
    FvRun, GridSolution,
};
pub use system::{
    common_speed_bound, jacobian_gap, recover_velocity, EulerState, StateBox, SystemFlux, SystemKind,
};
