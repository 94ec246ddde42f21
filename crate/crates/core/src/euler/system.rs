//! Classical and relativistic isothermal p-systems in the variables
//! `(rho, q)`, pressure `p = sigma^2 rho`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linear::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EulerState {
    pub rho: f64,
    pub q: f64,
}

impl EulerState {
    pub fn new(rho: f64, q: f64) -> Self {
        EulerState { rho, q }
    }

    pub fn as_array(&self) -> [f64; 2] {
        [self.rho, self.q]
    }
}

/// Rectangle `[rho_lo, rho_hi] x [q_lo, q_hi]` of states.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateBox {
    pub rho_lo: f64,
    pub rho_hi: f64,
    pub q_lo: f64,
    pub q_hi: f64,
}

impl Default for StateBox {
    fn default() -> Self {
        StateBox {
            rho_lo: 0.5,
            rho_hi: 4.0,
            q_lo: -2.0,
            q_hi: 2.0,
        }
    }
}

impl StateBox {
    pub fn new(rho_lo: f64, rho_hi: f64, q_lo: f64, q_hi: f64) -> Result<Self> {
        if !(0.0 < rho_lo && rho_lo < rho_hi && q_lo < q_hi) {
            return Err(Error::InvalidArgument(format!(
                "state box [{rho_lo}, {rho_hi}] x [{q_lo}, {q_hi}] needs 0 < rho_lo < rho_hi and q_lo < q_hi"
            )));
        }
        Ok(StateBox {
            rho_lo,
            rho_hi,
            q_lo,
            q_hi,
        })
    }

    /// `n x n` tensor grid including the corners.
    pub fn grid(&self, n: usize) -> Vec<EulerState> {
        let n = n.max(2);
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            let rho = self.rho_lo + (self.rho_hi - self.rho_lo) * i as f64 / (n - 1) as f64;
            for j in 0..n {
                let q = self.q_lo + (self.q_hi - self.q_lo) * j as f64 / (n - 1) as f64;
                out.push(EulerState { rho, q });
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SystemKind {
    Classical { sigma: f64 },
    Relativistic { sigma: f64, c: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemFlux {
    pub kind: SystemKind,
    pub domain: StateBox,
    pub rho_min: f64,
}

/// Velocity `v` with `|v| < c` solving `q = (rho + p/c^2) v / (1 - v^2/c^2)`,
/// i.e. the root of `(q/c^2) v^2 + (rho + sigma^2 rho / c^2) v - q = 0`.
pub fn recover_velocity(rho: f64, q: f64, c: f64, sigma: f64) -> Result<f64> {
    if !(rho > 0.0) || !q.is_finite() || !(c > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "no subluminal velocity for rho = {rho}, q = {q}, c = {c}"
        )));
    }
    let b = rho + sigma * sigma * rho / (c * c);
    let qc = q / c;
    Ok(2.0 * q / (b + (b * b + 4.0 * qc * qc).sqrt()))
}

impl SystemFlux {
    pub fn classical(sigma: f64) -> Self {
        SystemFlux {
            kind: SystemKind::Classical { sigma },
            domain: StateBox::default(),
            rho_min: 0.1,
        }
    }

    pub fn relativistic(sigma: f64, c: f64) -> Result<Self> {
        if !(c > sigma) {
            return Err(Error::InvalidArgument(format!(
                "light speed {c} must exceed the sound speed {sigma}"
            )));
        }
        Ok(SystemFlux {
            kind: SystemKind::Relativistic { sigma, c },
            domain: StateBox::default(),
            rho_min: 0.1,
        })
    }

    pub fn with_domain(mut self, domain: StateBox) -> Self {
        self.domain = domain;
        self
    }

    pub fn with_rho_min(mut self, rho_min: f64) -> Self {
        self.rho_min = rho_min;
        self
    }

    pub fn sigma(&self) -> f64 {
        match self.kind {
            SystemKind::Classical { sigma } | SystemKind::Relativistic { sigma, .. } => sigma,
        }
    }

    fn admissible(&self, s: EulerState) -> Result<()> {
        if !(s.rho >= self.rho_min) || !s.q.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "state ({}, {}) violates rho >= {}",
                s.rho, s.q, self.rho_min
            )));
        }
        Ok(())
    }

    /// Relativistic correction factor as printed:
    /// `1 + (1/c^2)(1 - v^2/c^2) p / (rho + (v^2/c^2)(p/c^2))`.
    pub fn phi_c(&self, s: EulerState) -> Result<f64> {
        self.admissible(s)?;
        match self.kind {
            SystemKind::Classical { .. } => Ok(1.0),
            SystemKind::Relativistic { sigma, c } => {
                let v = recover_velocity(s.rho, s.q, c, sigma)?;
                let p = sigma * sigma * s.rho;
                let b2 = (v / c).powi(2);
                Ok(1.0 + (1.0 / (c * c)) * (1.0 - b2) * p / (s.rho + b2 * (p / (c * c))))
            }
        }
    }

    /// `(phi_c - 1) q^2 / rho` in a cancellation-free form.
    pub fn relativistic_correction(&self, s: EulerState) -> Result<f64> {
        self.admissible(s)?;
        match self.kind {
            SystemKind::Classical { .. } => Ok(0.0),
            SystemKind::Relativistic { sigma, c } => {
                let v = recover_velocity(s.rho, s.q, c, sigma)?;
                let b2 = (v / c).powi(2);
                let s2 = sigma * sigma;
                Ok(s2 / (c * c) * (1.0 - b2) / (1.0 + b2 * s2 / (c * c)) * s.q * s.q / s.rho)
            }
        }
    }

    pub fn eval(&self, s: EulerState) -> Result<[f64; 2]> {
        let sigma = self.sigma();
        let classical = s.q * s.q / s.rho + sigma * sigma * s.rho;
        Ok([s.q, classical + self.relativistic_correction(s)?])
    }

    /// Jacobian: closed form for the classical part plus, for the
    /// relativistic flux, Richardson-extrapolated central differences of
    /// the correction term.
    pub fn jacobian(&self, s: EulerState) -> Result<Matrix> {
        self.admissible(s)?;
        let sigma = self.sigma();
        let u = s.q / s.rho;
        let mut m = Matrix::from_rows(&[vec![0.0, 1.0], vec![sigma * sigma - u * u, 2.0 * u]])?;
        if let SystemKind::Relativistic { .. } = self.kind {
            let scale_rho = self.domain.rho_hi - self.domain.rho_lo;
            let scale_q = self.domain.q_hi - self.domain.q_lo;
            let d_rho = richardson(|h| self.relativistic_correction(EulerState::new(s.rho + h, s.q)), 1e-5 * scale_rho)?;
            let d_q = richardson(|h| self.relativistic_correction(EulerState::new(s.rho, s.q + h)), 1e-5 * scale_q)?;
            m.set(1, 0, m.get(1, 0) + d_rho);
            m.set(1, 1, m.get(1, 1) + d_q);
        }
        Ok(m)
    }

    /// Central-difference Jacobian of the full flux (consistency checks).
    pub fn jacobian_fd(&self, s: EulerState, h: f64) -> Result<Matrix> {
        let fr = |ds: EulerState| self.eval(ds);
        let (rp, rm) = (fr(EulerState::new(s.rho + h, s.q))?, fr(EulerState::new(s.rho - h, s.q))?);
        let (qp, qm) = (fr(EulerState::new(s.rho, s.q + h))?, fr(EulerState::new(s.rho, s.q - h))?);
        Matrix::from_rows(&[
            vec![(rp[0] - rm[0]) / (2.0 * h), (qp[0] - qm[0]) / (2.0 * h)],
            vec![(rp[1] - rm[1]) / (2.0 * h), (qp[1] - qm[1]) / (2.0 * h)],
        ])
    }

    /// Characteristic speeds (eigenvalues of the Jacobian), ascending.
    pub fn speeds(&self, s: EulerState) -> Result<(f64, f64)> {
        let j = self.jacobian(s)?;
        let tr = j.trace();
        let det = j.get(0, 0) * j.get(1, 1) - j.get(0, 1) * j.get(1, 0);
        let disc = tr * tr / 4.0 - det;
        if disc < 0.0 {
            return Err(Error::NotDiagonalizable(format!(
                "complex characteristic speeds at ({}, {})",
                s.rho, s.q
            )));
        }
        let r = disc.sqrt();
        Ok((tr / 2.0 - r, tr / 2.0 + r))
    }

    /// `max |speed|` over a `n x n` grid of the state box.
    pub fn sampled_speed_bound(&self, n: usize) -> Result<f64> {
        self.domain.grid(n).into_iter().try_fold(0.0f64, |m, s| {
            let (a, b) = self.speeds(s)?;
            Ok(m.max(a.abs()).max(b.abs()))
        })
    }

    /// Classical bound `max |q/rho| + sigma` on the state box.
    pub fn classical_speed_bound(&self) -> f64 {
        let d = self.domain;
        d.q_lo.abs().max(d.q_hi.abs()) / d.rho_lo + self.sigma()
    }
}

/// One Richardson level on central differences with steps `h` and `h/2`.
fn richardson<F: Fn(f64) -> Result<f64>>(f: F, h: f64) -> Result<f64> {
    let d1 = (f(h)? - f(-h)?) / (2.0 * h);
    let d2 = (f(h / 2.0)? - f(-h / 2.0)?) / h;
    Ok((4.0 * d2 - d1) / 3.0)
}

/// Wave-speed bound shared by a set of fluxes: the largest classical and
/// sampled speed, times 1.1.
pub fn common_speed_bound(fluxes: &[SystemFlux], samples: usize) -> Result<f64> {
    let mut lam = 0.0f64;
    for f in fluxes {
        lam = lam.max(f.classical_speed_bound()).max(f.sampled_speed_bound(samples)?);
    }
    Ok(1.1 * lam)
}

/// `max_K ||Df_c - Df||` (spectral norm) on an `n x n` grid.
pub fn jacobian_gap(fc: &SystemFlux, f: &SystemFlux, n: usize) -> Result<f64> {
    if fc.sigma() != f.sigma() || fc.domain != f.domain {
        return Err(Error::InvalidArgument("fluxes must share sigma and K".into()));
    }
    fc.domain.grid(n).into_iter().try_fold(0.0f64, |m, s| {
        let d = fc.jacobian(s)?.sub(&f.jacobian(s)?)?;
        Ok(m.max(d.op_norm()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn velocity_examples() {
        assert_eq!(recover_velocity(1.0, 0.0, 10.0, 1.0).unwrap(), 0.0);
        let v = recover_velocity(1.0, 0.1, 1e6, 1.0).unwrap();
        assert!((v - 0.1).abs() < 1e-10);
        // bisection oracle on the defining relation
        let (rho, q, c, sigma) = (1.3, 1.7, 2.0, 0.8);
        let g = |v: f64| (rho + sigma * sigma * rho / (c * c)) * v / (1.0 - (v / c).powi(2)) - q;
        let (mut lo, mut hi) = (0.0, c * (1.0 - 1e-15));
        for _ in 0..200 {
            let m = 0.5 * (lo + hi);
            if g(m) > 0.0 {
                hi = m;
            } else {
                lo = m;
            }
        }
        let v = recover_velocity(rho, q, c, sigma).unwrap();
        assert!((v - lo).abs() < 1e-12, "{v} vs {lo}");
        assert!(v.abs() < c);
        assert_eq!(recover_velocity(rho, -q, c, sigma).unwrap(), -v);
        assert!(recover_velocity(0.0, 1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn velocity_is_increasing_in_q() {
        let mut prev = f64::NEG_INFINITY;
        for i in 0..=100 {
            let q = -5.0 + 0.1 * i as f64;
            let v = recover_velocity(0.7, q, 3.0, 1.0).unwrap();
            assert!(v > prev && v.abs() < 3.0);
            prev = v;
        }
    }

    #[test]
    fn flux_examples() {
        let f = SystemFlux::classical(1.0);
        assert_eq!(f.eval(EulerState::new(1.0, 0.0)).unwrap(), [0.0, 1.0]);
        let r = SystemFlux::relativistic(1.0, 7.0).unwrap();
        assert_eq!(r.eval(EulerState::new(1.0, 0.0)).unwrap(), [0.0, 1.0]);
        assert!((r.phi_c(EulerState::new(1.0, 0.0)).unwrap() - (1.0 + 1.0 / 49.0)).abs() < 1e-15);
        let s = EulerState::new(1.5, 0.3);
        let gap = |c: f64| {
            let r = SystemFlux::relativistic(1.0, c).unwrap();
            (r.eval(s).unwrap()[1] - f.eval(s).unwrap()[1]).abs()
        };
        assert!(gap(100.0) <= 1e-3);
        assert!((gap(200.0) / gap(100.0) - 0.25).abs() < 1e-3);
    }

    #[test]
    fn correction_matches_printed_factor() {
        let s = EulerState::new(2.2, -1.4);
        for c in [3.0, 10.0, 50.0] {
            let r = SystemFlux::relativistic(1.0, c).unwrap();
            let printed = (r.phi_c(s).unwrap() - 1.0) * s.q * s.q / s.rho;
            assert!((printed - r.relativistic_correction(s).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn phi_decays_like_inverse_square() {
        let k = StateBox::default();
        let mut prev = f64::INFINITY;
        for c in [5.0, 10.0, 20.0, 40.0] {
            let r = SystemFlux::relativistic(1.0, c).unwrap();
            let worst = k
                .grid(32)
                .into_iter()
                .map(|s| r.phi_c(s).unwrap() - 1.0)
                .fold(0.0f64, f64::max);
            assert!(worst >= 0.0 && worst < prev);
            assert!(worst * c * c <= 1.0 + 1e-12);
            prev = worst;
        }
    }

    #[test]
    fn jacobians_match_differences() {
        let k = StateBox::default();
        for f in [SystemFlux::classical(1.0), SystemFlux::relativistic(1.0, 4.0).unwrap()] {
            for s in k.grid(9) {
                let j = f.jacobian(s).unwrap();
                let fd = f.jacobian_fd(s, 1e-6).unwrap();
                let scale = j.max_abs().max(1.0);
                assert!(j.sub(&fd).unwrap().max_abs() <= 1e-6 * scale, "{s:?}");
            }
        }
    }

    #[test]
    fn classical_speeds_are_u_plus_minus_sigma() {
        let f = SystemFlux::classical(1.3);
        for s in StateBox::default().grid(7) {
            let (a, b) = f.speeds(s).unwrap();
            let u = s.q / s.rho;
            assert!((a - (u - 1.3)).abs() < 1e-12 && (b - (u + 1.3)).abs() < 1e-12);
            let e = crate::linear::decompose(&f.jacobian(s).unwrap()).unwrap();
            assert!((e.eigenvalues[0] - a).abs() < 1e-9 && (e.eigenvalues[1] - b).abs() < 1e-9);
        }
    }

    #[test]
    fn jacobian_gap_scaling() {
        let f = SystemFlux::classical(1.0);
        let g = |c: f64| jacobian_gap(&SystemFlux::relativistic(1.0, c).unwrap(), &f, 64).unwrap();
        let (g50, g100, g200) = (g(50.0), g(100.0), g(200.0));
        for r in [g100 / g50, g200 / g100] {
            assert!((r - 0.25).abs() < 0.0125, "{r}");
        }
        let spread = [g50 * 2500.0, g100 * 1e4, g200 * 4e4];
        let (lo, hi) = spread.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
        assert!((hi - lo) / hi <= 0.05);
        assert!(g(1e8) <= 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(SystemFlux::relativistic(1.0, 0.5).is_err());
        let f = SystemFlux::classical(1.0);
        assert!(f.eval(EulerState::new(0.05, 0.0)).is_err());
        assert!(StateBox::new(0.0, 1.0, -1.0, 1.0).is_err());
        assert!(jacobian_gap(&SystemFlux::relativistic(2.0, 10.0).unwrap(), &f, 4).is_err());
    }
}
