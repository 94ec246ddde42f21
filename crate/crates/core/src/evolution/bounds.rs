//! Checks of the L-infinity flux-stability bound for uniformly convex
//! scalar laws, the Oleinik total-variation estimate, and the exact
//! sawtooth counterexample showing the bound cannot hold with TV alone.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::lax_oleinik::{InitialData, LaxOleinikProblem};
use crate::evolution::front_tracking::{ft_evolve, influence_window};
use crate::interval::Interval;
use crate::pwfun::PiecewiseConstantFn;
use crate::quad::midpoint_refined;
use crate::scalar::flux::ScalarFlux;
use crate::scalar::piecewise_linear::PiecewiseLinearFlux;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OleinikTvReport {
    pub tv: f64,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinftyReport {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    /// Panels used by the final quadrature pass.
    pub panels: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LipschitzReport {
    pub pairs: usize,
    /// Largest `u(x2) - u(x1) - (x2 - x1) / (kappa t)` seen; nonpositive when the bound holds.
    pub max_excess: f64,
    pub holds: bool,
}

/// Total variation of `u(t, .)` on the open interval `(lo, hi)`.
///
/// Between shocks the solution is nondecreasing, so increments on a sample
/// grid add up exactly; every cell whose endpoints decrease is searched for
/// its shock and the two one-sided limits are added separately.
pub fn solution_tv(p: &LaxOleinikProblem, t: f64, lo: f64, hi: f64) -> Result<f64> {
    if !(lo < hi) {
        return Ok(0.0);
    }
    let reach = p.flux.lambda_hat() * t;
    let pieces = p.data.pieces(lo - reach, hi + reach).len();
    let cells = (16 * pieces).max(4096);
    let h = (hi - lo) / cells as f64;
    // Open window: stay a hair inside the ends.
    let inset = 1e-13 * (1.0 + lo.abs().max(hi.abs()));
    let xs: Vec<f64> = (0..=cells)
        .map(|i| match i {
            0 => lo + inset,
            i if i == cells => hi - inset,
            i => lo + h * i as f64,
        })
        .collect();
    let us: Vec<f64> = xs
        .par_iter()
        .map(|&x| p.eval(t, x))
        .collect::<Result<_>>()?;
    let mut tv = 0.0;
    for i in 0..cells {
        let d = us[i + 1] - us[i];
        if d >= -1e-12 {
            tv += d.abs();
        } else {
            let (l, r) = bisect_shock(p, t, xs[i], xs[i + 1], us[i])?;
            let (ul, ur) = (p.eval(t, l)?, p.eval(t, r)?);
            tv += (ul - us[i]).abs() + (ur - ul).abs() + (us[i + 1] - ur).abs();
        }
    }
    Ok(tv)
}

fn bisect_shock(p: &LaxOleinikProblem, t: f64, mut l: f64, mut r: f64, ul: f64) -> Result<(f64, f64)> {
    let ur = p.eval(t, r)?;
    let mid_value = 0.5 * (ul + ur);
    for _ in 0..200 {
        let m = 0.5 * (l + r);
        if m <= l || m >= r {
            break;
        }
        if p.eval(t, m)? < mid_value {
            r = m;
        } else {
            l = m;
        }
    }
    Ok((l, r))
}

/// Oleinik estimate: TV of `u(t)` on `[a - 2 lambda t, b + 2 lambda t]`
/// against `2 diam(K) (b - a + 4 lambda t) / (kappa t)`.
pub fn oleinik_tv_bound_check(p: &LaxOleinikProblem, t: f64, a: f64, b: f64) -> Result<OleinikTvReport> {
    check_window(t, a, b)?;
    let lam = p.flux.lambda_hat();
    let tv = solution_tv(p, t, a - 2.0 * lam * t, b + 2.0 * lam * t)?;
    let bound = 2.0 * p.flux.domain().diam() * (b - a + 4.0 * lam * t) / (p.flux.kappa() * t);
    Ok(OleinikTvReport {
        tv,
        bound,
        holds: tv <= bound * (1.0 + 1e-12),
    })
}

/// One-sided Lipschitz bound `u(x2) - u(x1) <= (x2 - x1) / (kappa t)` at
/// `pairs` random pairs in `[a, b]`.
pub fn one_sided_lipschitz_check(
    p: &LaxOleinikProblem,
    t: f64,
    a: f64,
    b: f64,
    pairs: usize,
    seed: u64,
) -> Result<LipschitzReport> {
    check_window(t, a, b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<(f64, f64)> = (0..pairs)
        .map(|_| {
            let x1 = rng.gen_range(a..b);
            let x2 = rng.gen_range(a..b);
            if x1 <= x2 {
                (x1, x2)
            } else {
                (x2, x1)
            }
        })
        .collect();
    let rate = 1.0 / (p.flux.kappa() * t);
    let excess: Vec<f64> = xs
        .par_iter()
        .map(|&(x1, x2)| Ok(p.eval(t, x2)? - p.eval(t, x1)? - (x2 - x1) * rate))
        .collect::<Result<_>>()?;
    let max_excess = excess.into_iter().fold(f64::NEG_INFINITY, f64::max);
    Ok(LipschitzReport {
        pairs,
        max_excess,
        holds: max_excess <= 1e-9,
    })
}

/// `int_a^b |u(t) - w(t)|` for the solutions of `f` and `g` from `u0`,
/// against `2 diam(K) t ((b - a + 4 lambda t) / (kappa t)) max_K |f' - g'|`
/// with `kappa`, `lambda` taken over both fluxes. The `t` factors cancel;
/// the product is kept as written.
pub fn linfty_bound_check(
    f: &ScalarFlux,
    g: &ScalarFlux,
    u0: &InitialData,
    t: f64,
    a: f64,
    b: f64,
) -> Result<LinftyReport> {
    check_window(t, a, b)?;
    let k = shared_domain(f, g)?;
    let pf = LaxOleinikProblem::new(f.clone(), u0.clone())?;
    let pg = LaxOleinikProblem::new(g.clone(), u0.clone())?;
    let lhs = l1_gap(&pf, &pg, t, a, b)?;
    let kappa = f.kappa().min(g.kappa());
    let lam = f.lambda_hat().max(g.lambda_hat());
    let gap = k
        .linspace(4096)
        .into_iter()
        .map(|u| (f.derivative(u) - g.derivative(u)).abs())
        .fold(0.0, f64::max);
    let rhs = 2.0 * k.diam() * t * ((b - a + 4.0 * lam * t) / (kappa * t)) * gap;
    Ok(LinftyReport {
        lhs: lhs.value,
        rhs,
        holds: lhs.value <= rhs + 1e-9 * (1.0 + rhs),
        panels: lhs.panels,
    })
}

fn l1_gap(pf: &LaxOleinikProblem, pg: &LaxOleinikProblem, t: f64, a: f64, b: f64) -> Result<crate::quad::Refined> {
    // Evaluation errors surface through this slot; the quadrature closure is infallible.
    let failure = std::sync::Mutex::new(None);
    let integrand = |x: f64| match (pf.eval(t, x), pg.eval(t, x)) {
        (Ok(u), Ok(w)) => (u - w).abs(),
        (Err(e), _) | (_, Err(e)) => {
            failure.lock().unwrap().get_or_insert(e);
            0.0
        }
    };
    let r = midpoint_refined(&integrand, a, b, 14, 20, 1e-6);
    match failure.into_inner().unwrap() {
        Some(e) => Err(e),
        None => Ok(r),
    }
}

fn shared_domain(f: &ScalarFlux, g: &ScalarFlux) -> Result<Interval> {
    let (kf, kg) = (f.domain(), g.domain());
    if kf != kg {
        return Err(Error::InvalidArgument(format!(
            "fluxes must share K: [{}, {}] vs [{}, {}]",
            kf.lo, kf.hi, kg.lo, kg.hi
        )));
    }
    Ok(kf)
}

fn check_window(t: f64, a: f64, b: f64) -> Result<()> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("time {t} must be positive")));
    }
    if !(a < b) {
        return Err(Error::InvalidArgument(format!("empty window [{a}, {b}]")));
    }
    Ok(())
}

/// L1 distance at time `t` between front tracking under the piecewise-linear
/// flux `g` and the Lax-Oleinik solution for the smooth flux `f`, both from
/// `u0`, over the window reachable from the support of `u0`.
pub fn front_tracking_gap(f: &ScalarFlux, g: &PiecewiseLinearFlux, u0: &PiecewiseConstantFn, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("time {t} must be positive")));
    }
    let ft = ft_evolve(g, u0, t)?.profile();
    let p = LaxOleinikProblem::new(f.clone(), InitialData::pcf(u0.clone())?)?;
    let Some((a, b)) = influence_window(u0, f.lambda_hat().max(g.lambda_hat()), t) else {
        return Ok(0.0);
    };
    let failure = std::sync::Mutex::new(None);
    let integrand = |x: f64| match p.eval(t, x) {
        Ok(u) => (u - ft.eval_scalar(x)).abs(),
        Err(e) => {
            failure.lock().unwrap().get_or_insert(e);
            0.0
        }
    };
    let r = midpoint_refined(&integrand, a, b, 14, 20, 1e-6);
    match failure.into_inner().unwrap() {
        Some(e) => Err(e),
        None => Ok(r.value),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RexpReport {
    pub n: u32,
    pub t: f64,
    pub l1_distance_on_unit_interval: f64,
    pub panels: usize,
}

/// Burgers and `-v + v^2/2` from the sawtooth datum of level `n`, compared
/// at `t = 2^-n` on `[0, 1]`. The second solution is the first seen from
/// the frame `x -> x + t`.
pub fn rexp_counterexample(n: u32) -> Result<RexpReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("level must be at least 1".into()));
    }
    let k = Interval::new(-1.0, 1.0)?;
    let p = LaxOleinikProblem::new(ScalarFlux::burgers(k), InitialData::sawtooth(n))?;
    let t = 0.5f64.powi(n as i32);
    let integrand = |x: f64| {
        let u = p.eval(t, x).expect("t > 0");
        let v = p.eval(t, x + t).expect("t > 0");
        (v - u).abs()
    };
    let r = midpoint_refined(&integrand, 0.0, 1.0, 14, 20, 1e-6);
    Ok(RexpReport {
        n,
        t,
        l1_distance_on_unit_interval: r.value,
        panels: r.panels,
    })
}
