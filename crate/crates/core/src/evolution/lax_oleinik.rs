//! Lax-Oleinik evaluation of entropy solutions for uniformly convex scalar
//! fluxes with bounded piecewise-constant or periodic square-wave data.
//!
//! `u(t, x) = (f')^{-1}((x - y*) / t)` where `y*` minimises
//! `U0(y) + t f*((x - y) / t)` over `[x - lambda t, x + lambda t]`, `U0` is
//! the primitive of the datum and `f*` the Legendre transform of `f` on `K`.
//! When several minimisers tie, the smallest is used, which yields the left
//! limit at a shock.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pwfun::PiecewiseConstantFn;
use crate::scalar::flux::ScalarFlux;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum InitialData {
    Pcf(PiecewiseConstantFn),
    /// `high` on `[offset + k period, offset + k period + high_len]`, `low`
    /// elsewhere, for every integer `k`.
    PeriodicSquare {
        period: f64,
        high_len: f64,
        high: f64,
        low: f64,
        offset: f64,
    },
}

impl InitialData {
    /// Square wave equal to 1 on `[k 2^{1-n}, k 2^{1-n} + 2^{-n}]` and -1 elsewhere.
    pub fn sawtooth(n: u32) -> Self {
        let half = 0.5f64.powi(n as i32);
        InitialData::PeriodicSquare {
            period: 2.0 * half,
            high_len: half,
            high: 1.0,
            low: -1.0,
            offset: 0.0,
        }
    }

    /// Validated piecewise-constant datum (scalar).
    pub fn pcf(u0: PiecewiseConstantFn) -> Result<Self> {
        if u0.dim() != 1 {
            return Err(Error::DimensionMismatch {
                left: 1,
                right: u0.dim(),
            });
        }
        Ok(InitialData::Pcf(u0))
    }

    pub fn range(&self) -> (f64, f64) {
        match self {
            InitialData::Pcf(f) => f
                .values()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v[0]), hi.max(v[0]))),
            InitialData::PeriodicSquare { high, low, .. } => (high.min(*low), high.max(*low)),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            InitialData::Pcf(f) => f.eval_scalar(x),
            InitialData::PeriodicSquare {
                period,
                high_len,
                high,
                low,
                offset,
            } => {
                let s = x - offset;
                let r = s - (s / period).floor() * period;
                if r <= *high_len {
                    *high
                } else {
                    *low
                }
            }
        }
    }

    /// `int_0^y u0`.
    pub fn primitive(&self, y: f64) -> f64 {
        match self {
            InitialData::Pcf(f) => {
                if y >= 0.0 {
                    f.integral(0.0, y)[0]
                } else {
                    -f.integral(y, 0.0)[0]
                }
            }
            InitialData::PeriodicSquare { .. } => self.periodic_cumulative(y) - self.periodic_cumulative(0.0),
        }
    }

    /// Antiderivative of the periodic wave vanishing at `offset`.
    fn periodic_cumulative(&self, y: f64) -> f64 {
        let InitialData::PeriodicSquare {
            period,
            high_len,
            high,
            low,
            offset,
        } = *self
        else {
            unreachable!()
        };
        let s = y - offset;
        let k = (s / period).floor();
        let r = s - k * period;
        let per_period = high * high_len + low * (period - high_len);
        let partial = if r <= high_len {
            high * r
        } else {
            high * high_len + low * (r - high_len)
        };
        k * per_period + partial
    }

    /// Constant pieces meeting `[a, b]`, clipped to it: `(lo, hi, value)`.
    pub fn pieces(&self, a: f64, b: f64) -> Vec<(f64, f64, f64)> {
        let mut out = Vec::new();
        match self {
            InitialData::Pcf(f) => {
                let mut i = f.piece_index(a);
                let mut lo = a;
                loop {
                    let hi = f.breakpoints().get(i).copied().unwrap_or(f64::INFINITY).min(b);
                    out.push((lo, hi, f.value(i)[0]));
                    if hi >= b {
                        break;
                    }
                    lo = hi;
                    i += 1;
                }
            }
            InitialData::PeriodicSquare {
                period,
                high_len,
                high,
                low,
                offset,
            } => {
                let mut k = ((a - offset) / period).floor() - 1.0;
                loop {
                    let start = offset + k * period;
                    if start > b {
                        break;
                    }
                    let mid = start + high_len;
                    let end = start + period;
                    for (p0, p1, v) in [(start, mid, *high), (mid, end, *low)] {
                        let (c0, c1) = (p0.max(a), p1.min(b));
                        if c1 > c0 || (c1 == c0 && a == b) {
                            out.push((c0, c1, v));
                        }
                    }
                    k += 1.0;
                }
                if out.is_empty() {
                    out.push((a, b, self.eval(a)));
                }
            }
        }
        out
    }

    /// Piecewise-constant copy on `[a, b]`, constant tails outside.
    pub fn to_pcf(&self, a: f64, b: f64) -> Result<PiecewiseConstantFn> {
        match self {
            InitialData::Pcf(f) => Ok(f.clone()),
            InitialData::PeriodicSquare { .. } => {
                let pieces = self.pieces(a, b);
                let mut bps = Vec::new();
                let mut vals = vec![pieces[0].2];
                for p in &pieces {
                    if p.0 > a {
                        bps.push(p.0);
                        vals.push(p.2);
                    }
                }
                Ok(PiecewiseConstantFn::scalar(bps, vals)?.simplify())
            }
        }
    }
}

/// Strategy for the minimisation over `y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Minimizer {
    /// Per-piece stationary points. The objective is convex on each piece
    /// of constant data, so its minimiser there is `x - t f'(c)` clamped to
    /// the piece.
    Pieces,
    /// Uniform scan on `cells` cells, then golden-section refinement of
    /// each discrete local minimum to `tol`.
    GridGolden { cells: usize, tol: f64 },
}

impl Default for Minimizer {
    fn default() -> Self {
        Minimizer::Pieces
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaxOleinikProblem {
    pub flux: ScalarFlux,
    pub data: InitialData,
    pub minimizer: Minimizer,
}

/// Shock of `u(t, .)` traced back to time 0 along its extreme characteristics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShockTrace {
    /// Shock position at time `t`.
    pub x: f64,
    pub xi_minus: f64,
    pub xi_plus: f64,
    pub u_minus: f64,
    pub u_plus: f64,
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

impl LaxOleinikProblem {
    pub fn new(flux: ScalarFlux, data: InitialData) -> Result<Self> {
        if !(flux.kappa() > 0.0) {
            return Err(Error::UnsupportedFlux(format!(
                "{} is not uniformly convex on its domain",
                flux.name()
            )));
        }
        let (lo, hi) = data.range();
        let k = flux.domain();
        k.check(lo)?;
        k.check(hi)?;
        Ok(LaxOleinikProblem {
            flux,
            data,
            minimizer: Minimizer::Pieces,
        })
    }

    pub fn with_minimizer(mut self, m: Minimizer) -> Self {
        self.minimizer = m;
        self
    }

    fn objective(&self, t: f64, x: f64, y: f64) -> f64 {
        self.data.primitive(y) + t * self.flux.legendre((x - y) / t)
    }

    /// Minimiser `y*` and the solution value at `(t, x)`.
    pub fn minimizer(&self, t: f64, x: f64) -> Result<(f64, f64)> {
        if !(t > 0.0) {
            return Err(Error::InvalidArgument(format!("time {t} must be positive")));
        }
        let reach = self.flux.lambda_hat() * t * (1.0 + 1e-9) + 1e-12;
        let (a, b) = (x - reach, x + reach);
        match self.minimizer {
            Minimizer::Pieces => Ok(self.minimize_pieces(t, x, a, b)),
            Minimizer::GridGolden { cells, tol } => Ok(self.minimize_grid(t, x, a, b, cells, tol)),
        }
    }

    fn minimize_pieces(&self, t: f64, x: f64, a: f64, b: f64) -> (f64, f64) {
        let pieces = self.data.pieces(a, b);
        let mut best: Option<(f64, f64, f64)> = None; // (value, y, u)
        for (i, &(lo, hi, c)) in pieces.iter().enumerate() {
            let stationary = x - t * self.flux.derivative(c);
            let y = stationary.clamp(lo, hi);
            let u = if y == stationary {
                c
            } else {
                // At a piece end: the speed lies between the two neighbouring states.
                let nb = if y == lo {
                    i.checked_sub(1).map(|j| pieces[j].2)
                } else {
                    pieces.get(i + 1).map(|p| p.2)
                };
                let raw = self.flux.inverse_derivative((x - y) / t);
                match nb {
                    Some(n) => raw.clamp(c.min(n), c.max(n)),
                    None => c,
                }
            };
            let val = self.objective(t, x, y);
            best = Some(match best {
                None => (val, y, u),
                Some(b) => pick(b, (val, y, u)),
            });
        }
        let (_, y, u) = best.expect("window meets at least one piece");
        (y, u)
    }

    fn minimize_grid(&self, t: f64, x: f64, a: f64, b: f64, cells: usize, tol: f64) -> (f64, f64) {
        let cells = cells.max(2);
        let h = (b - a) / cells as f64;
        let ys: Vec<f64> = (0..=cells).map(|i| a + h * i as f64).collect();
        let vals: Vec<f64> = ys.iter().map(|&y| self.objective(t, x, y)).collect();
        let mut best: Option<(f64, f64, f64)> = None;
        for i in 0..=cells {
            let left = if i > 0 { vals[i - 1] } else { f64::INFINITY };
            let right = if i < cells { vals[i + 1] } else { f64::INFINITY };
            if vals[i] > left || vals[i] > right {
                continue;
            }
            let (mut lo, mut hi) = (ys[i.saturating_sub(1)], ys[(i + 1).min(cells)]);
            let f = |y: f64| self.objective(t, x, y);
            let mut c = hi - GOLDEN * (hi - lo);
            let mut d = lo + GOLDEN * (hi - lo);
            let (mut fc, mut fd) = (f(c), f(d));
            while hi - lo > tol {
                if fc <= fd {
                    hi = d;
                    d = c;
                    fd = fc;
                    c = hi - GOLDEN * (hi - lo);
                    fc = f(c);
                } else {
                    lo = c;
                    c = d;
                    fc = fd;
                    d = lo + GOLDEN * (hi - lo);
                    fd = f(d);
                }
            }
            let mut cand = (vals[i], ys[i]);
            for y in [0.5 * (lo + hi), c, d] {
                let v = f(y);
                if v < cand.0 {
                    cand = (v, y);
                }
            }
            let u = self.flux.inverse_derivative((x - cand.1) / t);
            best = Some(match best {
                None => (cand.0, cand.1, u),
                Some(b) => pick(b, (cand.0, cand.1, u)),
            });
        }
        let (_, y, u) = best.expect("a discrete minimum always exists");
        (y, u)
    }

    /// Entropy solution at `(t, x)`.
    pub fn eval(&self, t: f64, x: f64) -> Result<f64> {
        Ok(self.minimizer(t, x)?.1)
    }

    /// Shocks of `u(t, .)` on `[a, b]`, detected as decreases between
    /// `samples` grid points and located by bisection.
    pub fn find_shocks(&self, t: f64, a: f64, b: f64, samples: usize) -> Result<Vec<ShockTrace>> {
        let samples = samples.max(2);
        let h = (b - a) / (samples - 1) as f64;
        let xs: Vec<f64> = (0..samples).map(|i| a + h * i as f64).collect();
        let us: Vec<f64> = xs.iter().map(|&x| self.eval(t, x)).collect::<Result<_>>()?;
        let mut out = Vec::new();
        for i in 0..samples - 1 {
            if us[i + 1] < us[i] - 1e-12 {
                let (l, r) = self.bisect_drop(t, xs[i], xs[i + 1])?;
                let (yl, ul) = self.minimizer(t, l)?;
                let (yr, ur) = self.minimizer(t, r)?;
                out.push(ShockTrace {
                    x: 0.5 * (l + r),
                    xi_minus: yl,
                    xi_plus: yr,
                    u_minus: ul,
                    u_plus: ur,
                });
            }
        }
        Ok(out)
    }

    fn bisect_drop(&self, t: f64, mut l: f64, mut r: f64) -> Result<(f64, f64)> {
        let ul = self.eval(t, l)?;
        while r - l > 1e-13 * (1.0 + l.abs()) {
            let m = 0.5 * (l + r);
            if m <= l || m >= r {
                break;
            }
            // Left of the jump the minimiser sits near the left branch.
            let um = self.eval(t, m)?;
            if um < ul - 0.5 * (ul - self.eval(t, r)?) {
                r = m;
            } else {
                l = m;
            }
        }
        Ok((l, r))
    }

    /// Datum with every shock of `u(t, .)` pre-formed at time 0: on each
    /// `(xi-, xi+)` the datum is replaced by `u-` up to the mass-balancing
    /// point and `u+` after it. Evolving it to time `t` reproduces `u(t, .)`.
    pub fn modified_datum(&self, shocks: &[ShockTrace]) -> Result<PiecewiseConstantFn> {
        let mut sorted: Vec<ShockTrace> = shocks.to_vec();
        sorted.sort_by(|a, b| a.xi_minus.total_cmp(&b.xi_minus));
        for w in sorted.windows(2) {
            if w[1].xi_minus < w[0].xi_plus {
                return Err(Error::InvalidShockList(format!(
                    "characteristic triangles overlap: [{}, {}] and [{}, {}]",
                    w[0].xi_minus, w[0].xi_plus, w[1].xi_minus, w[1].xi_plus
                )));
            }
        }
        let (lo, hi) = match sorted.as_slice() {
            [] => (0.0, 1.0),
            s => (s[0].xi_minus - 1.0, s[s.len() - 1].xi_plus + 1.0),
        };
        let base = self.data.to_pcf(lo, hi)?;
        let mut bps: Vec<f64> = Vec::new();
        let mut vals: Vec<f64> = Vec::new();
        let mut cursor = f64::NEG_INFINITY;
        let push = |bps: &mut Vec<f64>, vals: &mut Vec<f64>, x: f64, v: f64| {
            if bps.last().is_some_and(|&last| last >= x) {
                // Zero-width piece: overwrite its value.
                *vals.last_mut().unwrap() = v;
            } else {
                bps.push(x);
                vals.push(v);
            }
        };
        let copy_base = |bps: &mut Vec<f64>, vals: &mut Vec<f64>, from: f64, to: f64| {
            for (i, &x) in base.breakpoints().iter().enumerate() {
                if x > from && x < to {
                    push(bps, vals, x, base.value(i + 1)[0]);
                }
            }
        };
        vals.push(base.left_tail()[0]);
        for s in &sorted {
            if !(s.xi_minus <= s.xi_plus) {
                return Err(Error::InvalidShockList(format!(
                    "xi- = {} exceeds xi+ = {}",
                    s.xi_minus, s.xi_plus
                )));
            }
            if s.xi_minus == s.xi_plus {
                continue;
            }
            if s.u_minus == s.u_plus {
                return Err(Error::InvalidShockList(format!(
                    "shock at {} has equal states",
                    s.x
                )));
            }
            let mass = base.integral(s.xi_minus, s.xi_plus)[0];
            let cut = mass / (s.u_minus - s.u_plus)
                + (s.u_minus * s.xi_minus - s.u_plus * s.xi_plus) / (s.u_minus - s.u_plus);
            let slack = 1e-9 * (1.0 + s.xi_plus.abs().max(s.xi_minus.abs()));
            if cut < s.xi_minus - slack || cut > s.xi_plus + slack {
                return Err(Error::InvalidShockList(format!(
                    "mass-balancing point {cut} outside [{}, {}]",
                    s.xi_minus, s.xi_plus
                )));
            }
            let cut = cut.clamp(s.xi_minus, s.xi_plus);
            copy_base(&mut bps, &mut vals, cursor, s.xi_minus);
            // Value just right of xi- in the base datum may differ from u-.
            push(&mut bps, &mut vals, s.xi_minus, s.u_minus);
            push(&mut bps, &mut vals, cut, s.u_plus);
            push(&mut bps, &mut vals, s.xi_plus, base.eval_scalar(s.xi_plus));
            cursor = s.xi_plus;
        }
        copy_base(&mut bps, &mut vals, cursor, f64::INFINITY);
        Ok(PiecewiseConstantFn::scalar(bps, vals)?.simplify())
    }
}

/// Smaller objective wins; near-ties go to the smaller minimiser.
fn pick(a: (f64, f64, f64), b: (f64, f64, f64)) -> (f64, f64, f64) {
    let tie = 1e-13 * (1.0 + a.0.abs().max(b.0.abs()));
    if (a.0 - b.0).abs() <= tie {
        if b.1 < a.1 {
            b
        } else {
            a
        }
    } else if b.0 < a.0 {
        b
    } else {
        a
    }
}

/// Entropy solution at `(t, x)`.
pub fn lax_oleinik_eval(p: &LaxOleinikProblem, t: f64, x: f64) -> Result<f64> {
    p.eval(t, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;

    fn k() -> Interval {
        Interval::new(-1.0, 1.0).unwrap()
    }

    fn riemann(ul: f64, ur: f64) -> InitialData {
        InitialData::Pcf(PiecewiseConstantFn::step(0.0, vec![ul], vec![ur]).unwrap())
    }

    #[test]
    fn burgers_riemann_examples() {
        let p = LaxOleinikProblem::new(ScalarFlux::burgers(k()), riemann(0.0, 1.0)).unwrap();
        assert!((p.eval(1.0, 0.5).unwrap() - 0.5).abs() < 1e-14);
        assert_eq!(p.eval(1.0, -0.5).unwrap(), 0.0);
        assert_eq!(p.eval(1.0, 1.5).unwrap(), 1.0);
        let p = LaxOleinikProblem::new(ScalarFlux::burgers(k()), riemann(1.0, 0.0)).unwrap();
        assert_eq!(p.eval(1.0, 0.49).unwrap(), 1.0);
        assert_eq!(p.eval(1.0, 0.51).unwrap(), 0.0);
        // on the shock: left limit
        assert_eq!(p.eval(1.0, 0.5).unwrap(), 1.0);
    }

    #[test]
    fn rejects_linear_flux_and_bad_time() {
        let lin = ScalarFlux::linear(1.0, k()).unwrap();
        assert!(matches!(
            LaxOleinikProblem::new(lin, riemann(0.0, 1.0)),
            Err(Error::UnsupportedFlux(_))
        ));
        let p = LaxOleinikProblem::new(ScalarFlux::burgers(k()), riemann(0.0, 1.0)).unwrap();
        assert!(p.eval(0.0, 0.0).is_err());
        let out = LaxOleinikProblem::new(ScalarFlux::burgers(k()), riemann(0.0, 2.0));
        assert!(out.is_err());
    }

    #[test]
    fn periodic_primitive_matches_direct_integration() {
        let d = InitialData::sawtooth(2);
        let pcf = d.to_pcf(-3.0, 3.0).unwrap();
        for y in [-2.3, -0.6, -0.125, 0.0, 0.1, 0.26, 0.9, 2.75] {
            let direct = if y >= 0.0 {
                pcf.integral(0.0, y)[0]
            } else {
                -pcf.integral(y, 0.0)[0]
            };
            assert!((d.primitive(y) - direct).abs() < 1e-13, "{y}");
        }
        assert_eq!(d.eval(0.0), 1.0);
        assert_eq!(d.eval(0.25), 1.0);
        assert_eq!(d.eval(0.3), -1.0);
    }

    #[test]
    fn sawtooth_closed_form_at_critical_time() {
        for n in 1..=4u32 {
            let p = LaxOleinikProblem::new(ScalarFlux::burgers(k()), InitialData::sawtooth(n)).unwrap();
            let t = 0.5f64.powi(n as i32);
            let period = 2.0 * t;
            for kk in [-1.0, 0.0, 2.0] {
                for frac in [-0.9, -0.4, 0.0, 0.3, 0.99, 1.0] {
                    let x = kk * period + frac * t;
                    let expect = (x - kk * period) / t;
                    let got = p.eval(t, x).unwrap();
                    assert!((got - expect).abs() < 1e-12, "n={n} x={x}: {got} vs {expect}");
                }
            }
        }
    }

    #[test]
    fn grid_golden_agrees_with_pieces() {
        let data = InitialData::Pcf(
            PiecewiseConstantFn::scalar(vec![-0.5, 0.0, 0.4, 1.0], vec![0.2, -0.8, 0.9, -0.3, 0.5])
                .unwrap(),
        );
        let f = ScalarFlux::convex_poly(0.6, 0.1, 0.05, k()).unwrap();
        let exact = LaxOleinikProblem::new(f.clone(), data.clone()).unwrap();
        let grid = LaxOleinikProblem::new(f, data)
            .unwrap()
            .with_minimizer(Minimizer::GridGolden {
                cells: 4096,
                tol: 1e-10,
            });
        for i in 0..200 {
            let x = -1.5 + 3.5 * i as f64 / 199.0;
            let (ya, ua) = exact.minimizer(0.7, x).unwrap();
            let (yb, ub) = grid.minimizer(0.7, x).unwrap();
            // away from shocks both agree closely
            if (ya - yb).abs() < 1e-3 {
                assert!((ua - ub).abs() < 1e-6, "x={x}: {ua} vs {ub}");
            }
        }
    }

    #[test]
    fn modified_datum_degenerate_cases() {
        let p = LaxOleinikProblem::new(ScalarFlux::burgers(k()), riemann(1.0, 0.0)).unwrap();
        let shocks = p.find_shocks(1.0, -1.0, 2.0, 301).unwrap();
        assert_eq!(shocks.len(), 1);
        let s = shocks[0];
        // backward characteristics from the shock at (1, 0.5)
        assert!((s.x - 0.5).abs() < 1e-10);
        assert!((s.xi_minus + 0.5).abs() < 1e-10 && (s.xi_plus - 0.5).abs() < 1e-10);
        let InitialData::Pcf(u0) = &p.data else { unreachable!() };
        let m = p.modified_datum(&shocks).unwrap();
        assert_eq!(m.breakpoints().len(), 1);
        assert!(m.breakpoints()[0].abs() < 1e-9);
        let degenerate = ShockTrace {
            xi_minus: 0.0,
            xi_plus: 0.0,
            ..s
        };
        assert_eq!(&p.modified_datum(&[degenerate]).unwrap(), u0);
        assert_eq!(&p.modified_datum(&[]).unwrap(), u0);
    }

    #[test]
    fn modified_datum_rejects_overlaps() {
        let p = LaxOleinikProblem::new(ScalarFlux::burgers(k()), riemann(1.0, 0.0)).unwrap();
        let a = ShockTrace {
            x: 0.0,
            xi_minus: 0.0,
            xi_plus: 1.0,
            u_minus: 1.0,
            u_plus: 0.0,
        };
        let b = ShockTrace {
            xi_minus: 0.5,
            xi_plus: 2.0,
            ..a
        };
        assert!(matches!(p.modified_datum(&[a, b]), Err(Error::InvalidShockList(_))));
    }

    #[test]
    fn modified_datum_for_collapsed_pulse() {
        // pulse 1 on [0, 1]: for t >= 2 the shock sits at sqrt(2t) with
        // u- = sqrt(2/t), traced back to xi- = 0 and xi+ = sqrt(2t); mass 1
        // gives Xi = 1 / u-.
        let pulse = PiecewiseConstantFn::scalar(vec![0.0, 1.0], vec![0.0, 1.0, 0.0]).unwrap();
        let p = LaxOleinikProblem::new(ScalarFlux::burgers(k()), InitialData::Pcf(pulse)).unwrap();
        let t = 4.0;
        let shocks = p.find_shocks(t, -1.0, 5.0, 601).unwrap();
        assert_eq!(shocks.len(), 1);
        let s = shocks[0];
        let xs = (2.0 * t).sqrt();
        assert!((s.x - xs).abs() < 1e-9);
        assert!((s.u_minus - xs / t).abs() < 1e-9);
        assert!(s.xi_minus.abs() < 1e-8);
        assert!((s.xi_plus - xs).abs() < 1e-8);
        let m = p.modified_datum(&shocks).unwrap();
        assert_eq!(m.breakpoints().len(), 2);
        assert!((m.breakpoints()[1] - 1.0 / s.u_minus).abs() < 1e-8);
        let q = LaxOleinikProblem::new(ScalarFlux::burgers(k()), InitialData::Pcf(m)).unwrap();
        for i in 0..400 {
            let x = -1.0 + 6.0 * i as f64 / 399.0;
            if (x - xs).abs() < 1e-6 {
                continue;
            }
            let a = p.eval(t, x).unwrap();
            let b = q.eval(t, x).unwrap();
            assert!((a - b).abs() < 1e-8, "x={x}: {a} vs {b}");
        }
    }
}
