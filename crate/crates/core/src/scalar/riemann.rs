//! Standard (Lax) Riemann solutions for scalar conservation laws and the
//! L1 comparison of two self-similar fans.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::quad::adaptive_simpson;
use crate::scalar::flux::ScalarFlux;
use crate::scalar::piecewise_linear::PiecewiseLinearFlux;

/// A flux for which the standard Riemann solution is available in closed form.
pub trait RiemannFlux {
    fn domain(&self) -> Interval;
    fn lambda_hat(&self) -> f64;
    fn flux_value(&self, u: f64) -> f64;
    fn solve_riemann(&self, ul: f64, ur: f64) -> Result<RiemannFan>;
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Wave {
    /// Discontinuity travelling at `speed` (contact when characteristic
    /// speeds on both sides agree).
    Shock { speed: f64, left: f64, right: f64 },
    /// Centred rarefaction spanning `[speed_lo, speed_hi]`.
    Rarefaction {
        speed_lo: f64,
        speed_hi: f64,
        left: f64,
        right: f64,
    },
}

impl Wave {
    pub fn left(&self) -> f64 {
        match *self {
            Wave::Shock { left, .. } | Wave::Rarefaction { left, .. } => left,
        }
    }

    pub fn right(&self) -> f64 {
        match *self {
            Wave::Shock { right, .. } | Wave::Rarefaction { right, .. } => right,
        }
    }

    fn speed_range(&self) -> (f64, f64) {
        match *self {
            Wave::Shock { speed, .. } => (speed, speed),
            Wave::Rarefaction {
                speed_lo, speed_hi, ..
            } => (speed_lo, speed_hi),
        }
    }
}

/// Self-similar solution of a Riemann problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RiemannFan {
    pub left: f64,
    pub right: f64,
    pub waves: Vec<Wave>,
    /// Flux whose inverse derivative gives rarefaction values.
    profile: Option<ScalarFlux>,
}

impl RiemannFan {
    pub fn is_empty(&self) -> bool {
        self.waves.is_empty()
    }

    /// Value at `xi = x / t`. On a shock speed the left state is returned.
    pub fn value_at(&self, xi: f64) -> f64 {
        for w in &self.waves {
            match *w {
                Wave::Shock { speed, left, .. } => {
                    if xi <= speed {
                        return left;
                    }
                }
                Wave::Rarefaction {
                    speed_lo,
                    speed_hi,
                    left,
                    right,
                } => {
                    if xi < speed_lo {
                        return left;
                    }
                    if xi <= speed_hi {
                        let f = self.profile.as_ref().expect("rarefaction needs a profile");
                        let (lo, hi) = if left < right { (left, right) } else { (right, left) };
                        return f.inverse_derivative(xi).clamp(lo, hi);
                    }
                }
            }
        }
        self.right
    }

    /// Sorted wave speeds (rarefaction edges included).
    pub fn speeds(&self) -> Vec<f64> {
        let mut s: Vec<f64> = self
            .waves
            .iter()
            .flat_map(|w| {
                let (a, b) = w.speed_range();
                if a == b {
                    vec![a]
                } else {
                    vec![a, b]
                }
            })
            .collect();
        s.sort_by(f64::total_cmp);
        s.dedup();
        s
    }

    /// True when the fan is constant on the open interval `(a, b)` of `x/t`.
    pub fn is_flat_on(&self, a: f64, b: f64) -> bool {
        !self.waves.iter().any(|w| match *w {
            Wave::Shock { speed, .. } => speed > a && speed < b,
            Wave::Rarefaction {
                speed_lo, speed_hi, ..
            } => speed_lo < b && speed_hi > a,
        })
    }

    /// Checks ordering, state chaining and Rankine-Hugoniot for every shock.
    pub fn check_structure<F: RiemannFlux + ?Sized>(&self, flux: &F, tol: f64) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        let mut state = self.left;
        let mut last_speed = f64::NEG_INFINITY;
        for w in &self.waves {
            if (w.left() - state).abs() > tol {
                return bad(format!("states do not chain: {} vs {state}", w.left()));
            }
            let (lo, hi) = w.speed_range();
            if lo < last_speed - tol || hi < lo {
                return bad(format!("wave speeds decrease at {lo}"));
            }
            last_speed = hi;
            if let Wave::Shock { speed, left, right } = *w {
                let rh = flux.flux_value(right) - flux.flux_value(left) - speed * (right - left);
                if rh.abs() > tol {
                    return bad(format!("Rankine-Hugoniot residual {rh} for {left} -> {right}"));
                }
            }
            state = w.right();
        }
        if (state - self.right).abs() > tol {
            return bad(format!("last state {state} is not the right state {}", self.right));
        }
        Ok(())
    }

    /// Lax admissibility `f'(u-) >= sigma >= f'(u+)` for each shock and
    /// `f'(u(xi)) = xi` inside each rarefaction.
    pub fn check_lax(&self, flux: &ScalarFlux, tol: f64) -> Result<()> {
        for w in &self.waves {
            match *w {
                Wave::Shock { speed, left, right } => {
                    let (dl, dr) = (flux.derivative(left), flux.derivative(right));
                    if dl < speed - tol || speed < dr - tol {
                        return Err(Error::InvalidArgument(format!(
                            "shock {left} -> {right} at {speed} violates Lax ({dl}, {dr})"
                        )));
                    }
                }
                Wave::Rarefaction {
                    speed_lo, speed_hi, ..
                } => {
                    for i in 0..=16 {
                        let xi = speed_lo + (speed_hi - speed_lo) * i as f64 / 16.0;
                        let u = self.value_at(xi);
                        if (flux.derivative(u) - xi).abs() > tol {
                            return Err(Error::InvalidArgument(format!(
                                "rarefaction value {u} at xi = {xi} has speed {}",
                                flux.derivative(u)
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Value of the self-similar solution at `(t, x)`.
pub fn eval_fan(fan: &RiemannFan, t: f64, x: f64) -> f64 {
    debug_assert!(t > 0.0);
    fan.value_at(x / t)
}

impl RiemannFlux for ScalarFlux {
    fn domain(&self) -> Interval {
        ScalarFlux::domain(self)
    }

    fn lambda_hat(&self) -> f64 {
        ScalarFlux::lambda_hat(self)
    }

    fn flux_value(&self, u: f64) -> f64 {
        self.eval(u)
    }

    fn solve_riemann(&self, ul: f64, ur: f64) -> Result<RiemannFan> {
        let k = ScalarFlux::domain(self);
        k.check(ul)?;
        k.check(ur)?;
        if !self.is_convex() {
            return Err(Error::UnsupportedFlux(format!(
                "{} is not convex on [{}, {}]; approximate it by a piecewise-linear flux",
                self.name(),
                k.lo,
                k.hi
            )));
        }
        let mut fan = RiemannFan {
            left: ul,
            right: ur,
            waves: Vec::new(),
            profile: None,
        };
        if ul == ur {
            return Ok(fan);
        }
        let (dl, dr) = (self.derivative(ul), self.derivative(ur));
        let contact = (dr - dl).abs() <= 1e-14 * (1.0 + ScalarFlux::lambda_hat(self));
        if ul > ur || contact {
            let speed = (self.eval(ur) - self.eval(ul)) / (ur - ul);
            fan.waves.push(Wave::Shock {
                speed,
                left: ul,
                right: ur,
            });
        } else {
            fan.waves.push(Wave::Rarefaction {
                speed_lo: dl,
                speed_hi: dr,
                left: ul,
                right: ur,
            });
            fan.profile = Some(self.clone());
        }
        Ok(fan)
    }
}

impl RiemannFlux for PiecewiseLinearFlux {
    fn domain(&self) -> Interval {
        PiecewiseLinearFlux::domain(self)
    }

    fn lambda_hat(&self) -> f64 {
        PiecewiseLinearFlux::lambda_hat(self)
    }

    fn flux_value(&self, u: f64) -> f64 {
        self.eval(u)
    }

    fn solve_riemann(&self, ul: f64, ur: f64) -> Result<RiemannFan> {
        let k = PiecewiseLinearFlux::domain(self);
        k.check(ul)?;
        k.check(ur)?;
        let mut fan = RiemannFan {
            left: ul,
            right: ur,
            waves: Vec::new(),
            profile: None,
        };
        if ul == ur {
            return Ok(fan);
        }
        let hull = self.envelope(ul, ur);
        fan.waves = hull
            .windows(2)
            .map(|p| Wave::Shock {
                speed: (p[1].1 - p[0].1) / (p[1].0 - p[0].0),
                left: p[0].0,
                right: p[1].0,
            })
            .collect();
        Ok(fan)
    }
}

/// `|| S^f_t u - S^g_t u ||_{L1}` for the Riemann datum `ul | ur` at the origin.
///
/// Both solutions are self-similar, so the distance is `t` times the
/// distance at `t = 1`. Cells where both fans are constant are integrated
/// exactly; cells crossing a rarefaction use adaptive Simpson (relative
/// target 1e-8, absolute floor 1e-12).
pub fn riemann_l1_diff<F, G>(f: &F, g: &G, ul: f64, ur: f64, t: f64) -> Result<f64>
where
    F: RiemannFlux + ?Sized,
    G: RiemannFlux + ?Sized,
{
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("time {t} must be positive")));
    }
    let ff = f.solve_riemann(ul, ur)?;
    let gg = g.solve_riemann(ul, ur)?;
    Ok(t * fan_l1_diff(&ff, &gg))
}

/// L1 distance in `xi` between two fans with the same end states.
pub fn fan_l1_diff(ff: &RiemannFan, gg: &RiemannFan) -> f64 {
    let mut cuts = ff.speeds();
    cuts.extend(gg.speeds());
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let inset = 1e-13 * (b - a);
        let diff = |xi: f64| {
            let xi = xi.clamp(a + inset, b - inset);
            ff.value_at(xi) - gg.value_at(xi)
        };
        if ff.is_flat_on(a, b) && gg.is_flat_on(a, b) {
            total += (b - a) * diff(0.5 * (a + b)).abs();
            continue;
        }
        // Split where the difference changes sign so that each part is smooth.
        let mut parts = vec![a];
        let (da, db) = (diff(a), diff(b));
        if da * db < 0.0 {
            let (mut lo, mut hi) = (a, b);
            for _ in 0..200 {
                let m = 0.5 * (lo + hi);
                if diff(m) * da > 0.0 {
                    lo = m;
                } else {
                    hi = m;
                }
                if hi - lo <= 1e-15 * (1.0 + m.abs()) {
                    break;
                }
            }
            parts.push(0.5 * (lo + hi));
        }
        parts.push(b);
        for p in parts.windows(2) {
            total += adaptive_simpson(&|xi: f64| diff(xi).abs(), p[0], p[1], 1e-8, 1e-12);
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn k() -> Interval {
        Interval::new(-1.0, 1.0).unwrap()
    }

    #[test]
    fn burgers_rarefaction() {
        let f = ScalarFlux::burgers(k());
        let fan = f.solve_riemann(0.0, 1.0).unwrap();
        assert_eq!(fan.waves.len(), 1);
        assert!(matches!(
            fan.waves[0],
            Wave::Rarefaction { speed_lo, speed_hi, .. } if speed_lo == 0.0 && speed_hi == 1.0
        ));
        for xi in [0.0, 0.2, 0.77, 1.0] {
            assert!((fan.value_at(xi) - xi).abs() < 1e-15);
        }
        assert_eq!(eval_fan(&fan, 2.0, 1.0), 0.5);
        assert_eq!(eval_fan(&fan, 1.0, -0.1), 0.0);
        fan.check_lax(&f, 1e-9).unwrap();
    }

    #[test]
    fn burgers_shock() {
        let f = ScalarFlux::burgers(k());
        let fan = f.solve_riemann(1.0, 0.0).unwrap();
        assert_eq!(
            fan.waves,
            vec![Wave::Shock {
                speed: 0.5,
                left: 1.0,
                right: 0.0
            }]
        );
        assert_eq!(eval_fan(&fan, 1.0, 0.4), 1.0);
        assert_eq!(eval_fan(&fan, 1.0, 0.5), 1.0);
        assert_eq!(eval_fan(&fan, 1.0, 0.6), 0.0);
        fan.check_structure(&f, 1e-9).unwrap();
        fan.check_lax(&f, 1e-9).unwrap();
    }

    #[test]
    fn equal_states_give_empty_fan() {
        let f = ScalarFlux::burgers(k());
        assert!(f.solve_riemann(0.3, 0.3).unwrap().is_empty());
        let p = PiecewiseLinearFlux::sample(&f, 9).unwrap();
        assert!(p.solve_riemann(0.25, 0.25).unwrap().is_empty());
    }

    #[test]
    fn states_outside_domain_rejected() {
        let f = ScalarFlux::burgers(k());
        assert!(matches!(f.solve_riemann(0.0, 1.5), Err(Error::OutsideDomain { .. })));
        let p = PiecewiseLinearFlux::sample(&f, 9).unwrap();
        assert!(p.solve_riemann(-2.0, 0.0).is_err());
    }

    #[test]
    fn nonconvex_smooth_flux_rejected() {
        let f = ScalarFlux::polynomial("w", vec![0.0, 0.0, 0.0, 1.0], k()).unwrap();
        assert!(matches!(f.solve_riemann(-0.5, 0.5), Err(Error::UnsupportedFlux(_))));
    }

    #[test]
    fn linear_flux_gives_contacts() {
        let f = ScalarFlux::linear(0.3, k()).unwrap();
        for (a, b) in [(0.0, 1.0), (1.0, -1.0)] {
            let fan = f.solve_riemann(a, b).unwrap();
            assert_eq!(fan.waves.len(), 1);
            assert!(matches!(fan.waves[0], Wave::Shock { speed, .. } if (speed - 0.3).abs() < 1e-15));
        }
    }

    #[test]
    fn pl_fan_is_staircase_of_chords() {
        let f = ScalarFlux::burgers(Interval::new(0.0, 1.0).unwrap());
        let p = PiecewiseLinearFlux::sample(&f, 5).unwrap();
        let fan = p.solve_riemann(0.0, 1.0).unwrap();
        let speeds: Vec<f64> = fan.speeds();
        assert_eq!(speeds, vec![0.125, 0.375, 0.625, 0.875]);
        fan.check_structure(&p, 1e-12).unwrap();
        let shock = p.solve_riemann(1.0, 0.0).unwrap();
        assert_eq!(shock.speeds(), vec![0.5]);
    }

    #[test]
    fn l1_diff_examples() {
        let f = ScalarFlux::burgers(k());
        assert_eq!(riemann_l1_diff(&f, &f, 0.2, -0.7, 1.0).unwrap(), 0.0);
        assert_eq!(riemann_l1_diff(&f, &f, -0.2, 0.7, 1.0).unwrap(), 0.0);

        let a = ScalarFlux::linear(0.4, k()).unwrap();
        let b = ScalarFlux::linear(-0.3, k()).unwrap();
        let d = riemann_l1_diff(&a, &b, 0.5, -0.25, 1.0).unwrap();
        assert!((d - 0.7 * 0.75).abs() < 1e-14);

        // shocks at 1/2 and alpha/2 with unit jump: the gap is |1 - alpha| / 2
        for alpha in [0.5, 1.5, 3.0] {
            let g = ScalarFlux::scaled_burgers(alpha, Interval::new(-1.0, 1.0).unwrap()).unwrap();
            let d = riemann_l1_diff(&f, &g, 1.0, 0.0, 1.0).unwrap();
            let expect = (1.0 - alpha as f64).abs() / 2.0;
            assert!((d - expect).abs() < 1e-14, "{alpha}: {d}");
            // independent check by brute-force midpoint sampling of the two fans
            let ff = f.solve_riemann(1.0, 0.0).unwrap();
            let gg = g.solve_riemann(1.0, 0.0).unwrap();
            let n = 200_000;
            let (lo, hi) = (-3.0, 3.0);
            let h = (hi - lo) / n as f64;
            let brute: f64 = (0..n)
                .map(|i| {
                    let xi = lo + (i as f64 + 0.5) * h;
                    (ff.value_at(xi) - gg.value_at(xi)).abs()
                })
                .sum::<f64>()
                * h;
            assert!((brute - expect).abs() < 1e-4);
        }
    }

    #[test]
    fn l1_diff_of_rarefactions_matches_brute_force() {
        let f = ScalarFlux::burgers(k());
        let g = ScalarFlux::convex_poly(0.8, 0.2, 0.0, k()).unwrap();
        let (ul, ur) = (-0.6, 0.9);
        let d = riemann_l1_diff(&f, &g, ul, ur, 1.0).unwrap();
        let ff = f.solve_riemann(ul, ur).unwrap();
        let gg = g.solve_riemann(ul, ur).unwrap();
        let n = 400_000;
        let (lo, hi) = (-2.0, 2.0);
        let h = (hi - lo) / n as f64;
        let brute: f64 = (0..n)
            .map(|i| {
                let xi = lo + (i as f64 + 0.5) * h;
                (ff.value_at(xi) - gg.value_at(xi)).abs()
            })
            .sum::<f64>()
            * h;
        assert!((d - brute).abs() < 1e-8, "{d} vs {brute}");
    }

    #[test]
    fn non_positive_time_rejected() {
        let f = ScalarFlux::burgers(k());
        assert!(riemann_l1_diff(&f, &f, 0.0, 1.0, 0.0).is_err());
    }

    fn arb_convex_spline() -> impl Strategy<Value = ScalarFlux> {
        (
            prop::collection::vec(0.2f64..3.0, 5),
            -1.0f64..1.0,
            -2.0f64..2.0,
        )
            .prop_map(|(second, f0, df0)| {
                ScalarFlux::spline("rand", k().linspace(5), second, f0, df0, k()).unwrap()
            })
    }

    proptest! {
        #[test]
        fn solver_output_is_admissible(f in arb_convex_spline(), ul in -1.0f64..1.0, ur in -1.0f64..1.0) {
            let fan = f.solve_riemann(ul, ur).unwrap();
            fan.check_structure(&f, 1e-6).unwrap();
            fan.check_lax(&f, 1e-6).unwrap();
        }

        #[test]
        fn pl_solver_output_is_admissible(f in arb_convex_spline(), ul in -1.0f64..1.0, ur in -1.0f64..1.0, n in 3usize..40) {
            let p = PiecewiseLinearFlux::sample(&f, n).unwrap();
            let fan = p.solve_riemann(ul, ur).unwrap();
            fan.check_structure(&p, 1e-9).unwrap();
        }

        #[test]
        fn fans_are_self_similar(
            f in arb_convex_spline(),
            ul in -1.0f64..1.0,
            ur in -1.0f64..1.0,
            t in 0.1f64..3.0,
            x in -4.0f64..4.0,
            s in 0.1f64..10.0,
        ) {
            let fan = f.solve_riemann(ul, ur).unwrap();
            let a = eval_fan(&fan, t, x);
            let b = eval_fan(&fan, s * t, s * x);
            prop_assert!((a - b).abs() <= 1e-9);
        }

        #[test]
        fn l1_diff_scales_with_time_and_is_symmetric(
            f in arb_convex_spline(),
            g in arb_convex_spline(),
            ul in -1.0f64..1.0,
            ur in -1.0f64..1.0,
            t in 0.1f64..5.0,
        ) {
            let d1 = riemann_l1_diff(&f, &g, ul, ur, 1.0).unwrap();
            let dt = riemann_l1_diff(&f, &g, ul, ur, t).unwrap();
            let dg = riemann_l1_diff(&g, &f, ul, ur, 1.0).unwrap();
            prop_assert!((dt - t * d1).abs() <= 1e-6 * dt.abs().max(1e-12));
            prop_assert!((d1 - dg).abs() <= 1e-8 * d1.abs().max(1e-10));
        }
    }
}
