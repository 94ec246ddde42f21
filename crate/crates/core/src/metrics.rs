//! Checks of the flux-stability inequalities on scalar examples.
//!
//! - [`check_pgeneral`]: the sampled flux distance dominates the
//!   derivative gap `max |f' - g'|`.
//! - [`check_tmain`]: `||S^f_T u - S^g_T u|| <= L d(f, g) int_0^T TV(S^g_t u) dt`.
//! - [`lerrest_diagnostic`]: the error of a trajectory against the sum of
//!   its one-step defects.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::front_tracking::{ft_evolve, influence_window, FrontTrackingState};
use crate::pwfun::{l1_distance, merge_sorted, PiecewiseConstantFn};
use crate::scalar::flux::ScalarFlux;
use crate::scalar::hatd::{hat_d_estimate, RiemannSampler};
use crate::scalar::piecewise_linear::PiecewiseLinearFlux;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PgeneralReport {
    pub lhs: f64,
    pub rhs: f64,
    pub argmax: (f64, f64),
    pub holds: bool,
}

/// `max_u |f'(u) - g'(u)|` on `samples` equispaced states of the shared domain.
pub fn derivative_gap(f: &ScalarFlux, g: &ScalarFlux, samples: usize) -> Result<f64> {
    let (kf, kg) = (f.domain(), g.domain());
    let k = crate::interval::Interval::new(kf.lo.max(kg.lo), kf.hi.min(kg.hi))?;
    Ok(k.linspace(samples.max(2))
        .into_iter()
        .map(|u| (f.derivative(u) - g.derivative(u)).abs())
        .fold(0.0, f64::max))
}

/// Largest slope difference of two piecewise-linear fluxes.
pub fn pl_slope_gap(f: &PiecewiseLinearFlux, g: &PiecewiseLinearFlux) -> f64 {
    let nodes = merge_sorted(f.nodes(), g.nodes());
    let (lo, hi) = (f.domain().lo.max(g.domain().lo), f.domain().hi.min(g.domain().hi));
    nodes
        .windows(2)
        .filter(|w| w[0] >= lo && w[1] <= hi)
        .map(|w| (f.chord(w[0], w[1]) - g.chord(w[0], w[1])).abs())
        .fold(0.0, f64::max)
}

/// The sampled distance against `0.95 max |f' - g'|`. Both sides are lower
/// bounds of their suprema, so only this one-sided comparison is checked.
pub fn check_pgeneral(
    f: &ScalarFlux,
    g: &ScalarFlux,
    sampler: &RiemannSampler,
    u_samples: usize,
) -> Result<PgeneralReport> {
    let d = hat_d_estimate(f, g, sampler)?;
    let rhs = derivative_gap(f, g, u_samples)?;
    Ok(PgeneralReport {
        lhs: d.estimate,
        rhs,
        argmax: d.argmax,
        holds: d.estimate >= 0.95 * rhs - 1e-12,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SemigroupGap {
    pub datum: String,
    pub t: f64,
    pub l1_gap: f64,
    /// `int_0^T TV(S^g_t u) dt`.
    pub tv_integral: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// One flux pair with its distances and the semigroup comparisons run on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub flux_f: String,
    pub flux_g: String,
    pub hat_d_estimate: f64,
    /// For scalar fluxes the linear distance of `f'(u)` and `g'(u)` is `|f'(u) - g'(u)|`.
    pub sup_hatd_lin_on_derivatives: f64,
    pub c0_derivative_gap: f64,
    /// Spatial Lipschitz constant of `S^f` (1 for scalar laws by L1 contraction).
    pub l_f: f64,
    pub semigroup_gaps: Vec<SemigroupGap>,
}

impl StabilityReport {
    pub fn new(f: &PiecewiseLinearFlux, g: &PiecewiseLinearFlux, sampler: &RiemannSampler, l_f: f64) -> Result<Self> {
        if !(l_f >= 1.0) {
            return Err(Error::InvalidArgument(format!("Lipschitz estimate {l_f} must be at least 1")));
        }
        let d = hat_d_estimate(f, g, sampler)?;
        let gap = pl_slope_gap(f, g);
        Ok(StabilityReport {
            flux_f: f.name().to_string(),
            flux_g: g.name().to_string(),
            hat_d_estimate: d.estimate,
            sup_hatd_lin_on_derivatives: gap,
            c0_derivative_gap: gap,
            l_f,
            semigroup_gaps: Vec::new(),
        })
    }

    /// Runs both semigroups from `u0` to `t` and records the comparison.
    pub fn add_run(
        &mut self,
        f: &PiecewiseLinearFlux,
        g: &PiecewiseLinearFlux,
        datum: &str,
        u0: &PiecewiseConstantFn,
        t: f64,
    ) -> Result<&SemigroupGap> {
        let sf = ft_evolve(f, u0, t)?;
        let sg = ft_evolve(g, u0, t)?;
        let lambda = f.lambda_hat().max(g.lambda_hat());
        let l1_gap = match influence_window(u0, lambda, t) {
            Some((lo, hi)) => l1_distance(&sf.profile(), &sg.profile(), lo, hi)?,
            None => 0.0,
        };
        let tv_integral = sg.tv_integral();
        let rhs = self.l_f * self.hat_d_estimate * tv_integral;
        self.semigroup_gaps.push(SemigroupGap {
            datum: datum.to_string(),
            t,
            l1_gap,
            tv_integral,
            rhs,
            holds: l1_gap <= rhs + 1e-9 * (1.0 + rhs),
        });
        Ok(self.semigroup_gaps.last().unwrap())
    }

    pub fn all_hold(&self) -> bool {
        self.semigroup_gaps.iter().all(|g| g.holds)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::InvalidArgument(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })
    }

    pub const CSV_HEADER: &'static str =
        "flux_f,flux_g,hat_d_estimate,sup_hatd_lin_on_derivatives,c0_derivative_gap,l_f,datum,t,l1_gap,tv_integral,rhs,holds";

    /// One row per semigroup comparison, full-precision decimals.
    pub fn to_csv_rows(&self) -> String {
        let mut out = String::new();
        for g in &self.semigroup_gaps {
            let _ = writeln!(
                out,
                "{},{},{:?},{:?},{:?},{:?},{},{:?},{:?},{:?},{:?},{}",
                self.flux_f,
                self.flux_g,
                self.hat_d_estimate,
                self.sup_hatd_lin_on_derivatives,
                self.c0_derivative_gap,
                self.l_f,
                g.datum,
                g.t,
                g.l1_gap,
                g.tv_integral,
                g.rhs,
                g.holds
            );
        }
        out
    }
}

/// Single comparison: `lhs = ||S^f_T u0 - S^g_T u0||`, `rhs = L d(f, g) int_0^T TV(S^g_t u0)`.
pub fn check_tmain(
    f: &PiecewiseLinearFlux,
    g: &PiecewiseLinearFlux,
    u0: &PiecewiseConstantFn,
    t: f64,
    l_f: f64,
    sampler: &RiemannSampler,
) -> Result<StabilityReport> {
    let mut r = StabilityReport::new(f, g, sampler, l_f)?;
    r.add_run(f, g, "u0", u0, t)?;
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LerrestReport {
    pub lhs: f64,
    pub riemann_sum_rhs: f64,
    pub steps: usize,
    pub holds: bool,
}

/// `w` is the `S^g` trajectory of `u0` sampled every `h` up to `t_end`.
/// Compares `||w(T) - S^f_T w(0)||` with `L sum_k ||S^f_h w(kh) - w((k+1)h)||`,
/// allowing 10% slack for the fixed step.
pub fn lerrest_diagnostic(
    f: &PiecewiseLinearFlux,
    g: &PiecewiseLinearFlux,
    u0: &PiecewiseConstantFn,
    h: f64,
    t_end: f64,
    l_f: f64,
) -> Result<LerrestReport> {
    if !(h > 0.0) || !(t_end > 0.0) {
        return Err(Error::InvalidArgument("need h > 0 and T > 0".into()));
    }
    let steps = (t_end / h).round() as usize;
    if steps == 0 || ((steps as f64) * h - t_end).abs() > 1e-9 * t_end {
        return Err(Error::InvalidArgument(format!("T = {t_end} is not a multiple of h = {h}")));
    }
    let lambda = f.lambda_hat().max(g.lambda_hat());
    let Some((lo, hi)) = influence_window(u0, lambda, t_end) else {
        return Ok(LerrestReport {
            lhs: 0.0,
            riemann_sum_rhs: 0.0,
            steps,
            holds: true,
        });
    };
    let mut traj = FrontTrackingState::new(g, u0)?;
    let w0 = traj.profile();
    let mut sum = 0.0;
    let mut w_k = w0.clone();
    for k in 0..steps {
        let t_next = if k + 1 == steps { t_end } else { h * (k + 1) as f64 };
        let tau = t_next - h * k as f64;
        traj.advance(g, t_next)?;
        let w_next = traj.profile();
        let sf = ft_evolve(f, &w_k, tau)?.profile();
        sum += l1_distance(&sf, &w_next, lo, hi)?;
        w_k = w_next;
    }
    let lhs = l1_distance(&w_k, &ft_evolve(f, &w0, t_end)?.profile(), lo, hi)?;
    let rhs = l_f * sum;
    Ok(LerrestReport {
        lhs,
        riemann_sum_rhs: rhs,
        steps,
        holds: lhs <= rhs * 1.1 + 1e-12,
    })
}
