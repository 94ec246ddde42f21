//! Scalar flux functions with certified convexity and speed bounds on a
//! compact state interval.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Closed-form shape of a smooth scalar flux.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FluxShape {
    /// `sum_k c[k] u^k`, degree at most 4.
    Polynomial(Vec<f64>),
    /// C2 flux whose second derivative interpolates `second` linearly
    /// between `nodes`. `node_f`/`node_df` cache the flux and its slope at
    /// each node.
    Spline {
        nodes: Vec<f64>,
        second: Vec<f64>,
        node_f: Vec<f64>,
        node_df: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarFlux {
    name: String,
    shape: FluxShape,
    domain: Interval,
    kappa: f64,
    lambda_hat: f64,
}

fn poly_eval(c: &[f64], u: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ck| acc * u + ck)
}

fn poly_deriv(c: &[f64]) -> Vec<f64> {
    c.iter()
        .enumerate()
        .skip(1)
        .map(|(k, &ck)| k as f64 * ck)
        .collect()
}

/// Minimum of a polynomial of degree <= 2 on `[lo, hi]`.
fn quadratic_min(c: &[f64], k: Interval) -> f64 {
    let mut m = poly_eval(c, k.lo).min(poly_eval(c, k.hi));
    if c.len() == 3 && c[2] != 0.0 {
        let v = -c[1] / (2.0 * c[2]);
        if k.contains(v) {
            m = m.min(poly_eval(c, v));
        }
    }
    m
}

/// Real roots of a polynomial of degree <= 2 inside `k`.
fn quadratic_roots_in(c: &[f64], k: Interval) -> Vec<f64> {
    let c = |i: usize| c.get(i).copied().unwrap_or(0.0);
    let (a, b, c0) = (c(2), c(1), c(0));
    let mut roots = Vec::new();
    if a == 0.0 {
        if b != 0.0 {
            roots.push(-c0 / b);
        }
    } else {
        let disc = b * b - 4.0 * a * c0;
        if disc >= 0.0 {
            let q = -0.5 * (b + b.signum() * disc.sqrt());
            if q != 0.0 {
                roots.push(q / a);
                roots.push(c0 / q);
            } else {
                roots.push(0.0);
            }
        }
    }
    roots.retain(|r| k.contains(*r));
    roots
}

impl ScalarFlux {
    /// Polynomial flux `sum_k coeffs[k] u^k` of degree at most 4 on `domain`.
    pub fn polynomial(name: impl Into<String>, coeffs: Vec<f64>, domain: Interval) -> Result<Self> {
        let mut coeffs = coeffs;
        while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        if coeffs.len() > 5 {
            return Err(Error::UnsupportedFlux(format!(
                "polynomial degree {} exceeds 4",
                coeffs.len() - 1
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::UnsupportedFlux("non-finite coefficient".into()));
        }
        let d1 = poly_deriv(&coeffs);
        let d2 = poly_deriv(&d1);
        let kappa = quadratic_min(&d2, domain).max(0.0);
        // |f'| is maximised at an endpoint or at a root of f''.
        let mut lambda_hat = poly_eval(&d1, domain.lo)
            .abs()
            .max(poly_eval(&d1, domain.hi).abs());
        for r in quadratic_roots_in(&d2, domain) {
            lambda_hat = lambda_hat.max(poly_eval(&d1, r).abs());
        }
        Ok(ScalarFlux {
            name: name.into(),
            shape: FluxShape::Polynomial(coeffs),
            domain,
            kappa,
            lambda_hat: lambda_hat * (1.0 + 1e-12),
        })
    }

    /// `u^2 / 2`.
    pub fn burgers(domain: Interval) -> Self {
        Self::polynomial("burgers", vec![0.0, 0.0, 0.5], domain).expect("burgers is valid")
    }

    /// `alpha u^2 / 2`.
    pub fn scaled_burgers(alpha: f64, domain: Interval) -> Result<Self> {
        Self::polynomial(format!("scaled_burgers {alpha}"), vec![0.0, 0.0, 0.5 * alpha], domain)
    }

    /// `a u`.
    pub fn linear(a: f64, domain: Interval) -> Result<Self> {
        Self::polynomial(format!("linear {a}"), vec![0.0, a], domain)
    }

    /// `c2 u^2 + c3 u^3 + c4 u^4`.
    pub fn convex_poly(c2: f64, c3: f64, c4: f64, domain: Interval) -> Result<Self> {
        Self::polynomial(
            format!("convex_poly {c2} {c3} {c4}"),
            vec![0.0, 0.0, c2, c3, c4],
            domain,
        )
    }

    /// C2 flux with `f(nodes[0]) = f0`, `f'(nodes[0]) = df0` and second
    /// derivative interpolating `second` linearly. Nodes must span `domain`.
    pub fn spline(
        name: impl Into<String>,
        nodes: Vec<f64>,
        second: Vec<f64>,
        f0: f64,
        df0: f64,
        domain: Interval,
    ) -> Result<Self> {
        if nodes.len() < 2 || nodes.len() != second.len() {
            return Err(Error::UnsupportedFlux(
                "spline needs at least two nodes and one second derivative per node".into(),
            ));
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsupportedFlux("spline nodes must increase".into()));
        }
        if nodes[0] > domain.lo || nodes[nodes.len() - 1] < domain.hi {
            return Err(Error::UnsupportedFlux("spline nodes must span the domain".into()));
        }
        let mut node_f = vec![f0];
        let mut node_df = vec![df0];
        for i in 0..nodes.len() - 1 {
            let h = nodes[i + 1] - nodes[i];
            let (a, b) = (second[i], second[i + 1]);
            let (f, df) = (node_f[i], node_df[i]);
            node_df.push(df + h * (a + b) / 2.0);
            node_f.push(f + df * h + h * h * (2.0 * a + b) / 6.0);
        }
        let shape = FluxShape::Spline {
            nodes,
            second,
            node_f,
            node_df,
        };
        let mut flux = ScalarFlux {
            name: name.into(),
            shape,
            domain,
            kappa: 0.0,
            lambda_hat: 0.0,
        };
        flux.certify_spline();
        Ok(flux)
    }

    fn certify_spline(&mut self) {
        let FluxShape::Spline { nodes, second, .. } = &self.shape else {
            return;
        };
        let k = self.domain;
        // f'' is piecewise linear: its extremes on K sit at nodes inside K or at K's ends.
        let mut pts: Vec<f64> = nodes.iter().copied().filter(|x| k.contains(*x)).collect();
        pts.push(k.lo);
        pts.push(k.hi);
        let kappa = pts
            .iter()
            .map(|&u| self.second_derivative(u))
            .fold(f64::INFINITY, f64::min);
        let nonneg = second.iter().all(|&s| s >= 0.0);
        let mut lambda = self.derivative(k.lo).abs().max(self.derivative(k.hi).abs());
        if !nonneg {
            // f' no longer monotone; fall back to a dense scan.
            for u in k.linspace(4097) {
                lambda = lambda.max(self.derivative(u).abs());
            }
        }
        self.kappa = kappa.max(0.0);
        self.lambda_hat = lambda * (1.0 + 1e-12);
    }

    /// The flux plus `eps * u`.
    pub fn with_linear_term(&self, eps: f64) -> Result<Self> {
        let name = format!("{} + {eps} u", self.name);
        match &self.shape {
            FluxShape::Polynomial(c) => {
                let mut c = c.clone();
                if c.len() < 2 {
                    c.resize(2, 0.0);
                }
                c[1] += eps;
                Self::polynomial(name, c, self.domain)
            }
            FluxShape::Spline {
                nodes,
                second,
                node_f,
                node_df,
            } => Self::spline(
                name,
                nodes.clone(),
                second.clone(),
                node_f[0] + eps * nodes[0],
                node_df[0] + eps,
                self.domain,
            ),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn shape(&self) -> &FluxShape {
        &self.shape
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    /// Certified lower bound of `f''` on the domain (0 when not uniformly convex).
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Certified upper bound of `|f'|` on the domain.
    pub fn lambda_hat(&self) -> f64 {
        self.lambda_hat
    }

    pub fn is_linear(&self) -> bool {
        match &self.shape {
            FluxShape::Polynomial(c) => c.len() <= 2,
            FluxShape::Spline { second, .. } => second.iter().all(|&s| s == 0.0),
        }
    }

    /// True when `f'` is nondecreasing on the domain.
    pub fn is_convex(&self) -> bool {
        match &self.shape {
            FluxShape::Polynomial(c) => {
                let d2 = poly_deriv(&poly_deriv(c));
                quadratic_min(&d2, self.domain) >= 0.0
            }
            FluxShape::Spline { .. } => self.kappa > 0.0 || self.is_linear(),
        }
    }

    fn spline_cell(nodes: &[f64], u: f64) -> usize {
        nodes
            .partition_point(|&x| x <= u)
            .saturating_sub(1)
            .min(nodes.len() - 2)
    }

    pub fn eval(&self, u: f64) -> f64 {
        match &self.shape {
            FluxShape::Polynomial(c) => poly_eval(c, u),
            FluxShape::Spline {
                nodes,
                second,
                node_f,
                node_df,
            } => {
                let i = Self::spline_cell(nodes, u);
                let h = nodes[i + 1] - nodes[i];
                let s = u - nodes[i];
                let (a, b) = (second[i], second[i + 1]);
                node_f[i] + node_df[i] * s + a * s * s / 2.0 + (b - a) * s * s * s / (6.0 * h)
            }
        }
    }

    pub fn derivative(&self, u: f64) -> f64 {
        match &self.shape {
            FluxShape::Polynomial(c) => poly_eval(&poly_deriv(c), u),
            FluxShape::Spline {
                nodes,
                second,
                node_df,
                ..
            } => {
                let i = Self::spline_cell(nodes, u);
                let h = nodes[i + 1] - nodes[i];
                let s = u - nodes[i];
                let (a, b) = (second[i], second[i + 1]);
                node_df[i] + a * s + (b - a) * s * s / (2.0 * h)
            }
        }
    }

    pub fn second_derivative(&self, u: f64) -> f64 {
        match &self.shape {
            FluxShape::Polynomial(c) => poly_eval(&poly_deriv(&poly_deriv(c)), u),
            FluxShape::Spline { nodes, second, .. } => {
                let i = Self::spline_cell(nodes, u);
                let h = nodes[i + 1] - nodes[i];
                let s = (u - nodes[i]) / h;
                second[i] * (1.0 - s) + second[i + 1] * s
            }
        }
    }

    /// `(f')^{-1}(s)` restricted to the domain: speeds below `f'(lo)` map to
    /// `lo`, speeds above `f'(hi)` to `hi`. Requires a convex flux.
    pub fn inverse_derivative(&self, s: f64) -> f64 {
        let k = self.domain;
        let (dlo, dhi) = (self.derivative(k.lo), self.derivative(k.hi));
        if s <= dlo {
            return k.lo;
        }
        if s >= dhi {
            return k.hi;
        }
        if let FluxShape::Polynomial(c) = &self.shape {
            if c.len() == 3 && c[2] != 0.0 {
                return k.clamp((s - c[1]) / (2.0 * c[2]));
            }
        }
        // Safeguarded Newton on the monotone equation f'(u) = s.
        let (mut lo, mut hi) = (k.lo, k.hi);
        let mut u = lo + (hi - lo) * (s - dlo) / (dhi - dlo);
        for _ in 0..200 {
            let r = self.derivative(u) - s;
            if r == 0.0 {
                return u;
            }
            if r < 0.0 {
                lo = u;
            } else {
                hi = u;
            }
            let d2 = self.second_derivative(u);
            let newton = u - r / d2;
            let next = if d2 > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
            if (next - u).abs() <= 1e-15 * (1.0 + u.abs()) || hi - lo <= 1e-15 * (1.0 + u.abs()) {
                return next;
            }
            u = next;
        }
        u
    }

    /// Legendre transform of the flux restricted to the domain,
    /// `sup_{u in K} (s u - f(u))`.
    pub fn legendre(&self, s: f64) -> f64 {
        let u = self.inverse_derivative(s);
        s * u - self.eval(u)
    }

    /// Samples the structural invariants: derivative consistency with
    /// `eval`, monotone `f'` when `kappa > 0`, and `lambda_hat >= |f'|`.
    pub fn check_invariants(&self, tol: f64) -> Result<()> {
        let k = self.domain;
        let h = 1e-5 * k.diam().max(1e-300);
        for u in k.linspace(257) {
            let fd = (self.eval(u + h) - self.eval(u - h)) / (2.0 * h);
            let d = self.derivative(u);
            if (fd - d).abs() > tol * (1.0 + d.abs()) {
                return Err(Error::UnsupportedFlux(format!(
                    "{}: derivative inconsistent at u = {u}: {d} vs {fd}",
                    self.name
                )));
            }
            if d.abs() > self.lambda_hat {
                return Err(Error::UnsupportedFlux(format!(
                    "{}: |f'({u})| = {} exceeds lambda_hat {}",
                    self.name,
                    d.abs(),
                    self.lambda_hat
                )));
            }
        }
        if self.kappa > 0.0 {
            let pts = k.linspace(257);
            if pts.windows(2).any(|w| self.derivative(w[1]) <= self.derivative(w[0])) {
                return Err(Error::UnsupportedFlux(format!(
                    "{}: kappa > 0 but f' is not increasing",
                    self.name
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> Interval {
        Interval::new(-1.0, 1.0).unwrap()
    }

    #[test]
    fn burgers_bounds() {
        let f = ScalarFlux::burgers(k());
        assert_eq!(f.kappa(), 1.0);
        assert!((f.lambda_hat() - 1.0).abs() < 1e-11);
        assert_eq!(f.inverse_derivative(0.25), 0.25);
        assert_eq!(f.inverse_derivative(3.0), 1.0);
        assert_eq!(f.legendre(0.5), 0.125);
        f.check_invariants(1e-6).unwrap();
    }

    #[test]
    fn linear_has_zero_kappa() {
        let f = ScalarFlux::linear(-0.7, k()).unwrap();
        assert!(f.is_linear());
        assert!(f.is_convex());
        assert_eq!(f.kappa(), 0.0);
        assert!((f.lambda_hat() - 0.7).abs() < 1e-11);
    }

    #[test]
    fn quartic_bounds_and_inverse() {
        // f'' = 2 + 6u + 12u^2 >= 2 - 9/12 > 0
        let f = ScalarFlux::convex_poly(1.0, 1.0, 1.0, k()).unwrap();
        assert!((f.kappa() - (2.0 - 0.75)).abs() < 1e-12);
        // f' = 2u + 3u^2 + 4u^3 is increasing, max |f'| at u = 1
        assert!((f.lambda_hat() - 9.0).abs() < 1e-10);
        for s in [-0.9, -0.2, 0.0, 1.3, 8.5] {
            let u = f.inverse_derivative(s);
            assert!((f.derivative(u) - s).abs() < 1e-12);
        }
        f.check_invariants(1e-6).unwrap();
    }

    #[test]
    fn nonconvex_quartic_is_flagged() {
        let f = ScalarFlux::polynomial("w", vec![0.0, 0.0, 1.0, 0.0, -1.0], k()).unwrap();
        assert_eq!(f.kappa(), 0.0);
        assert!(!f.is_convex());
        // max |f'| = max |2u - 4u^3| is attained at the root u = 1/sqrt(6) of f''
        let u = 1.0 / 6f64.sqrt();
        let expect = (2.0 * u - 4.0 * u * u * u).abs().max(2.0);
        assert!((f.lambda_hat() - expect).abs() < 1e-10);
    }

    #[test]
    fn spline_matches_quadratic_when_second_is_constant() {
        let nodes = k().linspace(5);
        let s = ScalarFlux::spline("q", nodes, vec![1.0; 5], 0.5, -1.0, k()).unwrap();
        let b = ScalarFlux::burgers(k());
        for u in k().linspace(33) {
            assert!((s.eval(u) - b.eval(u)).abs() < 1e-14);
            assert!((s.derivative(u) - b.derivative(u)).abs() < 1e-14);
        }
        assert_eq!(s.kappa(), 1.0);
        let shifted = s.with_linear_term(0.25).unwrap();
        assert!((shifted.eval(0.5) - (0.125 + 0.125)).abs() < 1e-14);
    }

    #[test]
    fn spline_inverse_and_invariants() {
        let nodes = k().linspace(4);
        let s = ScalarFlux::spline("s", nodes, vec![0.5, 2.0, 1.0, 3.0], 0.0, -0.3, k()).unwrap();
        assert_eq!(s.kappa(), 0.5);
        s.check_invariants(1e-6).unwrap();
        for sp in [-0.2, 0.0, 0.7] {
            let u = s.inverse_derivative(sp);
            assert!((s.derivative(u) - sp).abs() < 1e-12, "{sp}");
        }
    }
}
