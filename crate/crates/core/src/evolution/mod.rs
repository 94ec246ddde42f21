//! Exact scalar evolutions: front tracking for piecewise-linear fluxes and
//! the Lax-Oleinik formula for uniformly convex ones.

pub mod bounds;
pub mod front_tracking;
pub mod lax_oleinik;

pub use bounds::{
    front_tracking_gap, linfty_bound_check, oleinik_tv_bound_check, one_sided_lipschitz_check, rexp_counterexample, solution_tv,
    LinftyReport, LipschitzReport, OleinikTvReport, RexpReport,
};
pub use front_tracking::{
    ft_evolve, influence_window, semigroup_l1_diff, Front, FrontTrackingState, Semigroup, TrackingLimits,
};
pub use lax_oleinik::{lax_oleinik_eval, InitialData, LaxOleinikProblem, Minimizer, ShockTrace};
