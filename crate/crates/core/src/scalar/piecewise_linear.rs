use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::scalar::flux::ScalarFlux;

/// Continuous piecewise-linear flux through `(nodes[i], values[i])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseLinearFlux {
    name: String,
    nodes: Vec<f64>,
    values: Vec<f64>,
    lambda_hat: f64,
}

impl PiecewiseLinearFlux {
    pub fn new(name: impl Into<String>, nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 || nodes.len() != values.len() {
            return Err(Error::UnsupportedFlux(
                "piecewise-linear flux needs at least two nodes and one value per node".into(),
            ));
        }
        if nodes.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::UnsupportedFlux(
                "piecewise-linear flux nodes must be strictly increasing".into(),
            ));
        }
        if nodes.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::UnsupportedFlux("non-finite node or value".into()));
        }
        let lambda_hat = nodes
            .windows(2)
            .zip(values.windows(2))
            .map(|(u, f)| ((f[1] - f[0]) / (u[1] - u[0])).abs())
            .fold(0.0, f64::max);
        Ok(PiecewiseLinearFlux {
            name: name.into(),
            nodes,
            values,
            lambda_hat,
        })
    }

    /// Interpolates `flux` at `n` equally spaced nodes of its domain.
    pub fn sample(flux: &ScalarFlux, n: usize) -> Result<Self> {
        let nodes = flux.domain().linspace(n);
        let values = nodes.iter().map(|&u| flux.eval(u)).collect();
        Self::new(format!("{} (pl {n})", flux.name()), nodes, values)
    }

    /// Same nodes, values shifted by `eps * u`.
    pub fn with_linear_term(&self, eps: f64) -> Result<Self> {
        let values = self
            .nodes
            .iter()
            .zip(&self.values)
            .map(|(u, f)| f + eps * u)
            .collect();
        Self::new(format!("{} + {eps} u", self.name), self.nodes.clone(), values)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node_values(&self) -> &[f64] {
        &self.values
    }

    pub fn domain(&self) -> Interval {
        Interval {
            lo: self.nodes[0],
            hi: self.nodes[self.nodes.len() - 1],
        }
    }

    pub fn lambda_hat(&self) -> f64 {
        self.lambda_hat
    }

    fn cell(&self, u: f64) -> usize {
        self.nodes
            .partition_point(|&x| x <= u)
            .saturating_sub(1)
            .min(self.nodes.len() - 2)
    }

    pub fn eval(&self, u: f64) -> f64 {
        let i = self.cell(u);
        if u == self.nodes[i] {
            return self.values[i];
        }
        let (u0, u1) = (self.nodes[i], self.nodes[i + 1]);
        let (f0, f1) = (self.values[i], self.values[i + 1]);
        f0 + (f1 - f0) * (u - u0) / (u1 - u0)
    }

    /// Chord slope between two states, the Rankine-Hugoniot speed.
    pub fn chord(&self, a: f64, b: f64) -> f64 {
        (self.eval(b) - self.eval(a)) / (b - a)
    }

    /// Nearest node to `u`.
    pub fn project(&self, u: f64) -> f64 {
        let i = self.nodes.partition_point(|&x| x < u);
        match (i.checked_sub(1).map(|j| self.nodes[j]), self.nodes.get(i)) {
            (Some(l), Some(&r)) => {
                if u - l <= r - u {
                    l
                } else {
                    r
                }
            }
            (Some(l), None) => l,
            (None, Some(&r)) => r,
            (None, None) => unreachable!("at least two nodes"),
        }
    }

    pub fn is_node(&self, u: f64) -> bool {
        self.nodes.binary_search_by(|x| x.total_cmp(&u)).is_ok()
    }

    /// Hull vertices from `ul` to `ur`: the lower convex envelope when
    /// `ul < ur`, the upper concave envelope when `ul > ur`. Collinear
    /// vertices are dropped so that each envelope segment is one wave.
    pub(crate) fn envelope(&self, ul: f64, ur: f64) -> Vec<(f64, f64)> {
        let (a, b) = if ul < ur { (ul, ur) } else { (ur, ul) };
        let lower = ul < ur;
        let mut pts = vec![(a, self.eval(a))];
        let first = self.nodes.partition_point(|&x| x <= a);
        for i in first..self.nodes.len() {
            if self.nodes[i] >= b {
                break;
            }
            pts.push((self.nodes[i], self.values[i]));
        }
        pts.push((b, self.eval(b)));

        let mut hull: Vec<(f64, f64)> = Vec::with_capacity(pts.len());
        for p in pts {
            while hull.len() >= 2 {
                let o = hull[hull.len() - 2];
                let m = hull[hull.len() - 1];
                let s_om = (m.1 - o.1) / (m.0 - o.0);
                let s_op = (p.1 - o.1) / (p.0 - o.0);
                let tol = 1e-13 * (1.0 + s_om.abs().max(s_op.abs()));
                let redundant = if lower {
                    s_op <= s_om + tol
                } else {
                    s_op >= s_om - tol
                };
                if redundant {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(p);
        }
        if !lower {
            hull.reverse();
        }
        hull
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_tables() {
        assert!(PiecewiseLinearFlux::new("x", vec![0.0], vec![0.0]).is_err());
        assert!(PiecewiseLinearFlux::new("x", vec![0.0, 0.0], vec![0.0, 1.0]).is_err());
        assert!(PiecewiseLinearFlux::new("x", vec![0.0, 1.0], vec![0.0]).is_err());
    }

    #[test]
    fn interpolation_and_projection() {
        let f = PiecewiseLinearFlux::new("t", vec![0.0, 1.0, 2.0], vec![0.0, 2.0, 0.0]).unwrap();
        assert_eq!(f.eval(0.5), 1.0);
        assert_eq!(f.eval(2.0), 0.0);
        assert_eq!(f.lambda_hat(), 2.0);
        assert_eq!(f.project(1.4), 1.0);
        assert_eq!(f.project(1.6), 2.0);
        assert_eq!(f.project(-3.0), 0.0);
        assert!(f.is_node(1.0));
        assert!(!f.is_node(1.5));
    }

    #[test]
    fn envelopes_of_sampled_burgers() {
        let k = Interval::new(0.0, 2.0).unwrap();
        let f = PiecewiseLinearFlux::sample(&ScalarFlux::burgers(k), 3).unwrap();
        // nodes 0,1,2 with values 0, 0.5, 2: convex, so the lower hull keeps all
        assert_eq!(f.envelope(0.0, 2.0), vec![(0.0, 0.0), (1.0, 0.5), (2.0, 2.0)]);
        // the upper hull is the chord
        assert_eq!(f.envelope(2.0, 0.0), vec![(2.0, 2.0), (0.0, 0.0)]);
    }

    #[test]
    fn collinear_nodes_merge() {
        let f = PiecewiseLinearFlux::new("lin", vec![0.0, 0.1, 0.3, 0.7], vec![0.0, 0.03, 0.09, 0.21])
            .unwrap();
        assert_eq!(f.envelope(0.0, 0.7).len(), 2);
        assert_eq!(f.envelope(0.7, 0.0).len(), 2);
    }
}
