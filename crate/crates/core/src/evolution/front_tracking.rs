//! Exact wave-front tracking for scalar laws with a piecewise-linear flux.
//!
//! Piecewise-constant data with values at flux nodes stay piecewise
//! constant: every discontinuity travels at its chord speed until it meets
//! a neighbour, and each collision is resolved by the Riemann solver of the
//! same flux. Fronts colliding at the same time and place are resolved as a
//! single Riemann problem between the outermost states.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pwfun::{l1_distance, PiecewiseConstantFn};
use crate::scalar::piecewise_linear::PiecewiseLinearFlux;
use crate::scalar::riemann::{RiemannFlux, Wave};

/// Collision times closer than this are treated as simultaneous.
const SIMULTANEOUS: f64 = 1e-12;
/// Speed differences below this are treated as parallel fronts.
const PARALLEL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Front {
    pub position: f64,
    pub speed: f64,
    pub left: f64,
    pub right: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontTrackingState {
    pub time: f64,
    /// Value left of the first front.
    pub left_state: f64,
    /// Sorted by position, consecutive values chain.
    pub fronts: Vec<Front>,
    /// Number of interaction events resolved so far.
    pub events: usize,
    /// `(t, tv)`: total variation equals `tv` from `t` until the next entry.
    tv_log: Vec<(f64, f64)>,
}

/// Loop guards against runaway event or front counts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrackingLimits {
    pub max_events: usize,
    pub max_fronts: usize,
}

impl Default for TrackingLimits {
    fn default() -> Self {
        TrackingLimits {
            max_events: 2_000_000,
            max_fronts: 1_000_000,
        }
    }
}

impl FrontTrackingState {
    /// Starts front tracking from `u0`, projecting its values onto the flux nodes.
    pub fn new(flux: &PiecewiseLinearFlux, u0: &PiecewiseConstantFn) -> Result<Self> {
        if u0.dim() != 1 {
            return Err(Error::DimensionMismatch {
                left: 1,
                right: u0.dim(),
            });
        }
        let k = flux.domain();
        for v in u0.values() {
            k.check(v[0])?;
        }
        let proj = |i: usize| flux.project(u0.value(i)[0]);
        let mut fronts = Vec::new();
        for (i, &x) in u0.breakpoints().iter().enumerate() {
            let (ul, ur) = (proj(i), proj(i + 1));
            if ul != ur {
                emit(flux, x, ul, ur, &mut fronts)?;
            }
        }
        let mut s = FrontTrackingState {
            time: 0.0,
            left_state: proj(0),
            fronts,
            events: 0,
            tv_log: Vec::new(),
        };
        s.tv_log.push((0.0, s.total_variation()));
        Ok(s)
    }

    pub fn total_variation(&self) -> f64 {
        self.fronts.iter().map(|f| (f.right - f.left).abs()).sum()
    }

    /// `(t, tv)` pairs: total variation equals `tv` from `t` until the next entry.
    pub fn tv_history(&self) -> &[(f64, f64)] {
        &self.tv_log
    }

    /// `int_0^time TV(u(s)) ds`, exact since TV only changes at events.
    pub fn tv_integral(&self) -> f64 {
        self.tv_integral_until(self.time)
    }

    fn tv_integral_until(&self, t: f64) -> f64 {
        let mut acc = 0.0;
        for (i, &(t0, tv)) in self.tv_log.iter().enumerate() {
            if t0 >= t {
                break;
            }
            let t1 = self.tv_log.get(i + 1).map_or(t, |e| e.0.min(t));
            acc += tv * (t1 - t0);
        }
        acc
    }

    /// Solution profile at the current time; coincident fronts collapse
    /// into one breakpoint.
    pub fn profile(&self) -> PiecewiseConstantFn {
        let mut bps: Vec<f64> = Vec::with_capacity(self.fronts.len());
        let mut vals = vec![self.left_state];
        for f in &self.fronts {
            if bps.last() == Some(&f.position) {
                *vals.last_mut().unwrap() = f.right;
            } else {
                bps.push(f.position);
                vals.push(f.right);
            }
        }
        PiecewiseConstantFn::scalar(bps, vals)
            .expect("front positions are sorted")
            .simplify()
    }

    /// Advances to `t_end` with default guards.
    pub fn advance(&mut self, flux: &PiecewiseLinearFlux, t_end: f64) -> Result<()> {
        self.advance_with(flux, t_end, TrackingLimits::default())
    }

    pub fn advance_with(
        &mut self,
        flux: &PiecewiseLinearFlux,
        t_end: f64,
        limits: TrackingLimits,
    ) -> Result<()> {
        if t_end < self.time {
            return Err(Error::InvalidArgument(format!(
                "cannot go back from t = {} to t = {t_end}",
                self.time
            )));
        }
        loop {
            let mut t_next = f64::INFINITY;
            let mut hit = vec![f64::INFINITY; self.fronts.len().saturating_sub(1)];
            for (i, w) in self.fronts.windows(2).enumerate() {
                let ds = w[0].speed - w[1].speed;
                if ds > PARALLEL {
                    let gap = (w[1].position - w[0].position).max(0.0);
                    hit[i] = self.time + gap / ds;
                    t_next = t_next.min(hit[i]);
                }
            }
            if t_next > t_end {
                self.move_to(t_end);
                return Ok(());
            }
            self.move_to(t_next);
            self.resolve_collisions(flux, &hit, t_next)?;
            self.events += 1;
            self.tv_log.push((self.time, self.total_variation()));
            if self.events > limits.max_events || self.fronts.len() > limits.max_fronts {
                return Err(Error::FrontTrackingGuard(format!(
                    "{} events, {} fronts at t = {}",
                    self.events,
                    self.fronts.len(),
                    self.time
                )));
            }
        }
    }

    fn move_to(&mut self, t: f64) {
        let dt = t - self.time;
        if dt > 0.0 {
            for f in &mut self.fronts {
                f.position += f.speed * dt;
            }
            // Rounding must not reorder fronts.
            for i in 1..self.fronts.len() {
                if self.fronts[i].position < self.fronts[i - 1].position {
                    self.fronts[i].position = self.fronts[i - 1].position;
                }
            }
        }
        self.time = t;
    }

    fn resolve_collisions(&mut self, flux: &PiecewiseLinearFlux, hit: &[f64], t: f64) -> Result<()> {
        let tol = SIMULTANEOUS * (1.0 + t.abs());
        let mut out: Vec<Front> = Vec::with_capacity(self.fronts.len());
        let mut i = 0;
        while i < self.fronts.len() {
            let mut j = i;
            while j < hit.len() && hit[j] <= t + tol {
                j += 1;
            }
            if j == i {
                out.push(self.fronts[i]);
                i += 1;
                continue;
            }
            // Fronts i..=j meet at one point.
            let cluster = &self.fronts[i..=j];
            let x = cluster.iter().map(|f| f.position).sum::<f64>() / cluster.len() as f64;
            let (ul, ur) = (cluster[0].left, cluster[cluster.len() - 1].right);
            if ul != ur {
                emit(flux, x, ul, ur, &mut out)?;
            }
            i = j + 1;
        }
        self.fronts = out;
        Ok(())
    }

    /// Checks ordering, chaining and that every speed is the chord speed.
    pub fn check_invariants(&self, flux: &PiecewiseLinearFlux) -> Result<()> {
        let mut state = self.left_state;
        let mut last = f64::NEG_INFINITY;
        for f in &self.fronts {
            if f.position < last {
                return Err(Error::InvalidArgument("fronts out of order".into()));
            }
            if f.left != state {
                return Err(Error::InvalidArgument("front values do not chain".into()));
            }
            let chord = flux.chord(f.left, f.right);
            if (f.speed - chord).abs() > 1e-12 * (1.0 + chord.abs()) {
                return Err(Error::InvalidArgument(format!(
                    "front speed {} differs from chord {chord}",
                    f.speed
                )));
            }
            last = f.position;
            state = f.right;
        }
        Ok(())
    }
}

fn emit(flux: &PiecewiseLinearFlux, x: f64, ul: f64, ur: f64, out: &mut Vec<Front>) -> Result<()> {
    let fan = flux.solve_riemann(ul, ur)?;
    for w in fan.waves {
        let Wave::Shock { speed, left, right } = w else {
            unreachable!("piecewise-linear fans only contain jumps");
        };
        out.push(Front {
            position: x,
            speed,
            left,
            right,
        });
    }
    Ok(())
}

/// Entropy solution at time `t_end` of `u_t + f(u)_x = 0` with datum `u0`.
pub fn ft_evolve(
    flux: &PiecewiseLinearFlux,
    u0: &PiecewiseConstantFn,
    t_end: f64,
) -> Result<FrontTrackingState> {
    if !(t_end >= 0.0) {
        return Err(Error::InvalidArgument(format!("time {t_end} must be nonnegative")));
    }
    let mut s = FrontTrackingState::new(flux, u0)?;
    s.advance(flux, t_end)?;
    Ok(s)
}

/// A solution operator acting on scalar piecewise-constant data.
pub trait Semigroup {
    fn evolve(&self, u: &PiecewiseConstantFn, t: f64) -> Result<PiecewiseConstantFn>;
    /// Bound on propagation speed.
    fn speed_bound(&self) -> f64;
}

impl Semigroup for PiecewiseLinearFlux {
    fn evolve(&self, u: &PiecewiseConstantFn, t: f64) -> Result<PiecewiseConstantFn> {
        Ok(ft_evolve(self, u, t)?.profile())
    }

    fn speed_bound(&self) -> f64 {
        self.lambda_hat()
    }
}

/// Window outside which evolutions of `u0` up to time `t` under speeds
/// bounded by `lambda` are constant and equal.
pub fn influence_window(u0: &PiecewiseConstantFn, lambda: f64, t: f64) -> Option<(f64, f64)> {
    let (a, b) = u0.support()?;
    let pad = lambda * t * (1.0 + 1e-9) + 1e-12;
    Some((a - pad, b + pad))
}

/// `|| S^f_T u0 - S^g_T u0 ||_{L1}` by two front-tracking runs.
pub fn semigroup_l1_diff(
    flux_f: &PiecewiseLinearFlux,
    flux_g: &PiecewiseLinearFlux,
    u0: &PiecewiseConstantFn,
    t: f64,
) -> Result<f64> {
    let a = ft_evolve(flux_f, u0, t)?.profile();
    let b = ft_evolve(flux_g, u0, t)?.profile();
    let lambda = flux_f.lambda_hat().max(flux_g.lambda_hat());
    match influence_window(u0, lambda, t) {
        Some((lo, hi)) => l1_distance(&a, &b, lo, hi),
        None => Ok(0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;
    use crate::scalar::flux::ScalarFlux;

    fn burgers_pl(lo: f64, hi: f64, n: usize) -> PiecewiseLinearFlux {
        PiecewiseLinearFlux::sample(&ScalarFlux::burgers(Interval::new(lo, hi).unwrap()), n).unwrap()
    }

    #[test]
    fn single_shock_translates() {
        let f = burgers_pl(0.0, 1.0, 11);
        let u0 = PiecewiseConstantFn::step(0.2, vec![1.0], vec![0.0]).unwrap();
        let s = ft_evolve(&f, &u0, 2.0).unwrap();
        assert_eq!(s.fronts.len(), 1);
        assert!((s.fronts[0].position - 1.2).abs() < 1e-14);
        assert_eq!(s.events, 0);
        s.check_invariants(&f).unwrap();
    }

    #[test]
    fn constant_datum_is_unchanged() {
        let f = burgers_pl(0.0, 1.0, 11);
        let u0 = PiecewiseConstantFn::constant(vec![0.3]).unwrap();
        let s = ft_evolve(&f, &u0, 5.0).unwrap();
        assert!(s.fronts.is_empty());
        assert_eq!(s.profile(), u0);
    }

    #[test]
    fn two_shocks_merge() {
        // Burgers sampled at nodes 0, 1, 2: values 2 | 1 | 0 with jumps at 0 and 1.
        // Speeds 3/2 and 1/2 meet at t = 1, x = 3/2; the merged shock 2 -> 0
        // moves at speed 1, so at t = 3 it sits at 7/2.
        let f = burgers_pl(0.0, 2.0, 3);
        let u0 = PiecewiseConstantFn::scalar(vec![0.0, 1.0], vec![2.0, 1.0, 0.0]).unwrap();
        let before = ft_evolve(&f, &u0, 0.5).unwrap();
        assert_eq!(before.fronts.len(), 2);
        let s = ft_evolve(&f, &u0, 3.0).unwrap();
        assert_eq!(s.events, 1);
        assert_eq!(s.fronts.len(), 1);
        assert_eq!((s.fronts[0].left, s.fronts[0].right), (2.0, 0.0));
        assert_eq!(s.fronts[0].speed, 1.0);
        assert!((s.fronts[0].position - 3.5).abs() < 1e-14);
        // TV is 2 throughout
        assert!((s.tv_integral() - 6.0).abs() < 1e-14);
    }

    #[test]
    fn values_are_projected_to_nodes() {
        let f = burgers_pl(0.0, 1.0, 3);
        let u0 = PiecewiseConstantFn::step(0.0, vec![0.9], vec![0.1]).unwrap();
        let s = FrontTrackingState::new(&f, &u0).unwrap();
        assert_eq!(s.left_state, 1.0);
        assert_eq!(s.fronts[0].right, 0.0);
    }

    #[test]
    fn out_of_domain_data_rejected() {
        let f = burgers_pl(0.0, 1.0, 3);
        let u0 = PiecewiseConstantFn::step(0.0, vec![2.0], vec![0.0]).unwrap();
        assert!(ft_evolve(&f, &u0, 1.0).is_err());
    }

    #[test]
    fn guard_trips_on_tiny_budget() {
        let f = burgers_pl(0.0, 2.0, 3);
        let u0 = PiecewiseConstantFn::scalar(vec![0.0, 1.0], vec![2.0, 1.0, 0.0]).unwrap();
        let mut s = FrontTrackingState::new(&f, &u0).unwrap();
        let r = s.advance_with(
            &f,
            3.0,
            TrackingLimits {
                max_events: 0,
                max_fronts: 10,
            },
        );
        assert!(matches!(r, Err(Error::FrontTrackingGuard(_))));
    }

    #[test]
    fn linear_fluxes_translate_steps() {
        let k = Interval::new(-1.0, 1.0).unwrap();
        let fa = PiecewiseLinearFlux::sample(&ScalarFlux::linear(0.5, k).unwrap(), 9).unwrap();
        let fb = PiecewiseLinearFlux::sample(&ScalarFlux::linear(-0.25, k).unwrap(), 9).unwrap();
        let u0 = PiecewiseConstantFn::step(0.0, vec![-0.5], vec![0.75]).unwrap();
        let d = semigroup_l1_diff(&fa, &fb, &u0, 2.0).unwrap();
        assert!((d - 0.75 * 2.0 * 1.25).abs() < 1e-12);
        assert_eq!(semigroup_l1_diff(&fa, &fa, &u0, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn rarefaction_staircase_and_shock_interaction() {
        // pulse of height 1 on [0, 1]: the staircase rarefaction catches the
        // shock at t = 2 for the exact flux; mass is conserved throughout
        let f = burgers_pl(0.0, 1.0, 33);
        let u0 = PiecewiseConstantFn::scalar(vec![0.0, 1.0], vec![0.0, 1.0, 0.0]).unwrap();
        let mut s = FrontTrackingState::new(&f, &u0).unwrap();
        let mut tv = s.total_variation();
        for k in 1..=40 {
            s.advance(&f, 0.1 * k as f64).unwrap();
            s.check_invariants(&f).unwrap();
            let now = s.total_variation();
            assert!(now <= tv + 1e-12);
            tv = now;
            let p = s.profile();
            let mass = p.integral(-10.0, 10.0)[0];
            assert!((mass - 1.0).abs() < 1e-12, "{mass}");
        }
        // fronts above sqrt(2)/2 have been absorbed by t = 4: 32 (1 - sqrt(2)/2) ~ 9.4
        assert_eq!(s.events, 9);
    }
}
