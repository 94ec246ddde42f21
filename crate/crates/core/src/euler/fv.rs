//! First-order finite volumes with an HLL flux for the 2x2 p-systems, and
//! the classical-limit sweep.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::euler::system::{common_speed_bound, EulerState, SystemFlux};
use crate::quad::loglog_slope;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSolution {
    pub x_lo: f64,
    pub dx: f64,
    pub cells: Vec<EulerState>,
    pub t: f64,
}

impl GridSolution {
    /// Cell averages of the Riemann datum `left | right` at `x = 0` on
    /// `[-half_width, half_width]` with `n` cells.
    pub fn riemann(left: EulerState, right: EulerState, half_width: f64, n: usize) -> Result<Self> {
        if n == 0 || !(half_width > 0.0) {
            return Err(Error::InvalidArgument("grid needs n > 0 and a positive width".into()));
        }
        let dx = 2.0 * half_width / n as f64;
        let cells = (0..n)
            .map(|i| {
                let (a, b) = (-half_width + dx * i as f64, -half_width + dx * (i + 1) as f64);
                if b <= 0.0 {
                    left
                } else if a >= 0.0 {
                    right
                } else {
                    let w = -a / dx;
                    EulerState::new(w * left.rho + (1.0 - w) * right.rho, w * left.q + (1.0 - w) * right.q)
                }
            })
            .collect();
        Ok(GridSolution {
            x_lo: -half_width,
            dx,
            cells,
            t: 0.0,
        })
    }

    pub fn centre(&self, i: usize) -> f64 {
        self.x_lo + self.dx * (i as f64 + 0.5)
    }

    /// `(sum rho dx, sum q dx)`.
    pub fn totals(&self) -> [f64; 2] {
        self.cells.iter().fold([0.0, 0.0], |acc, s| [acc[0] + s.rho * self.dx, acc[1] + s.q * self.dx])
    }

    /// `sum_i |U_i - V_i| dx`, Euclidean norm on `(rho, q)`.
    pub fn l1_distance(&self, other: &GridSolution) -> Result<f64> {
        if self.cells.len() != other.cells.len() || self.dx != other.dx || self.x_lo != other.x_lo {
            return Err(Error::InvalidArgument("grids differ".into()));
        }
        Ok(self
            .cells
            .iter()
            .zip(&other.cells)
            .map(|(a, b)| ((a.rho - b.rho).powi(2) + (a.q - b.q).powi(2)).sqrt())
            .sum::<f64>()
            * self.dx)
    }

    /// Average onto a grid coarser by an integer factor.
    pub fn coarsen(&self, factor: usize) -> Result<GridSolution> {
        if factor == 0 || self.cells.len() % factor != 0 {
            return Err(Error::InvalidArgument(format!("cannot coarsen by {factor}")));
        }
        let cells = self
            .cells
            .chunks(factor)
            .map(|c| {
                let n = c.len() as f64;
                EulerState::new(c.iter().map(|s| s.rho).sum::<f64>() / n, c.iter().map(|s| s.q).sum::<f64>() / n)
            })
            .collect();
        Ok(GridSolution {
            x_lo: self.x_lo,
            dx: self.dx * factor as f64,
            cells,
            t: self.t,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FvOptions {
    pub cfl: f64,
    /// Global wave-speed bound used on both sides of every interface.
    pub lambda_hat: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FvRun {
    pub solution: GridSolution,
    pub steps: usize,
    /// `|change of total + net boundary outflow| / (1 + |total|)` per component.
    pub conservation_residual: [f64; 2],
    pub min_rho: f64,
}

fn hll(f: &SystemFlux, l: EulerState, r: EulerState, lam: f64) -> Result<[f64; 2]> {
    // With the symmetric bounds -lam, lam the HLL flux reduces to this form.
    let (fl, fr) = (f.eval(l)?, f.eval(r)?);
    Ok([
        0.5 * (fl[0] + fr[0]) - 0.5 * lam * (r.rho - l.rho),
        0.5 * (fl[1] + fr[1]) - 0.5 * lam * (r.q - l.q),
    ])
}

/// Evolve to time `t_end` with outflow (zero-gradient) boundaries; the
/// last step is shortened to land on `t_end`.
pub fn fv_evolve(f: &SystemFlux, u0: &GridSolution, t_end: f64, opts: &FvOptions) -> Result<FvRun> {
    if !(opts.cfl > 0.0 && opts.cfl < 1.0) {
        return Err(Error::InvalidArgument(format!("cfl {} must lie in (0, 1)", opts.cfl)));
    }
    if !(opts.lambda_hat > 0.0) || !(t_end >= u0.t) {
        return Err(Error::InvalidArgument("need lambda_hat > 0 and t_end >= initial time".into()));
    }
    let mut u = u0.clone();
    let n = u.cells.len();
    for (i, s) in u.cells.iter().enumerate() {
        if !(s.rho >= f.rho_min) {
            return Err(Error::Inadmissible {
                cell: i,
                time: u.t,
                reason: format!("initial rho = {} below {}", s.rho, f.rho_min),
            });
        }
    }
    let start = u.totals();
    let mut outflow = [0.0f64; 2];
    let base_dt = opts.cfl * u.dx / opts.lambda_hat;
    let mut steps = 0;
    let mut min_rho = u.cells.iter().map(|s| s.rho).fold(f64::INFINITY, f64::min);
    while u.t < t_end {
        let dt = if u.t + base_dt >= t_end { t_end - u.t } else { base_dt };
        let fluxes: Vec<[f64; 2]> = (0..=n)
            .into_par_iter()
            .map(|k| {
                let l = u.cells[k.saturating_sub(1)];
                let r = u.cells[k.min(n - 1)];
                hll(f, l, r, opts.lambda_hat)
            })
            .collect::<Result<_>>()?;
        let ratio = dt / u.dx;
        for (i, s) in u.cells.iter_mut().enumerate() {
            s.rho -= ratio * (fluxes[i + 1][0] - fluxes[i][0]);
            s.q -= ratio * (fluxes[i + 1][1] - fluxes[i][1]);
        }
        for c in 0..2 {
            outflow[c] += dt * (fluxes[n][c] - fluxes[0][c]);
        }
        u.t = if dt == t_end - u.t { t_end } else { u.t + dt };
        steps += 1;
        for (i, s) in u.cells.iter().enumerate() {
            if !(s.rho >= f.rho_min) || !s.q.is_finite() {
                return Err(Error::Inadmissible {
                    cell: i,
                    time: u.t,
                    reason: format!("rho = {} below {}", s.rho, f.rho_min),
                });
            }
            min_rho = min_rho.min(s.rho);
        }
    }
    let end = u.totals();
    let residual = [0, 1].map(|c| (end[c] - start[c] + outflow[c]).abs() / (1.0 + start[c].abs()));
    Ok(FvRun {
        solution: u,
        steps,
        conservation_residual: residual,
        min_rho,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalLimitSetup {
    pub sigma: f64,
    pub left: EulerState,
    pub right: EulerState,
    pub t_end: f64,
    pub cells: usize,
    pub half_width: f64,
    pub cfl: f64,
}

impl Default for ClassicalLimitSetup {
    fn default() -> Self {
        ClassicalLimitSetup {
            sigma: 1.0,
            left: EulerState::new(2.0, 0.0),
            right: EulerState::new(1.0, 0.0),
            t_end: 0.2,
            cells: 2000,
            half_width: 1.5,
            cfl: 0.45,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalLimitRow {
    pub c: f64,
    pub l1_gap: f64,
    pub mass_residual: f64,
    pub momentum_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassicalLimitReport {
    pub rows: Vec<ClassicalLimitRow>,
    pub slope: f64,
    pub lambda_hat: f64,
}

/// L1 gap at `t_end` between the relativistic run for each `c` and the
/// classical run, all on the same grid, CFL and wave-speed bound.
pub fn classical_limit_experiment(c_list: &[f64], setup: &ClassicalLimitSetup) -> Result<ClassicalLimitReport> {
    if c_list.is_empty() {
        return Err(Error::InvalidArgument("empty list of light speeds".into()));
    }
    let classical = SystemFlux::classical(setup.sigma);
    let rel: Vec<SystemFlux> = c_list
        .iter()
        .map(|&c| SystemFlux::relativistic(setup.sigma, c))
        .collect::<Result<_>>()?;
    let mut all = rel.clone();
    all.push(classical);
    let lambda_hat = common_speed_bound(&all, 64)?;
    let opts = FvOptions {
        cfl: setup.cfl,
        lambda_hat,
    };
    let u0 = GridSolution::riemann(setup.left, setup.right, setup.half_width, setup.cells)?;
    let reference = fv_evolve(&classical, &u0, setup.t_end, &opts)?;
    let rows: Vec<ClassicalLimitRow> = rel
        .par_iter()
        .zip(c_list.par_iter())
        .map(|(f, &c)| {
            let run = fv_evolve(f, &u0, setup.t_end, &opts)?;
            Ok(ClassicalLimitRow {
                c,
                l1_gap: run.solution.l1_distance(&reference.solution)?,
                mass_residual: run.conservation_residual[0],
                momentum_residual: run.conservation_residual[1],
            })
        })
        .collect::<Result<_>>()?;
    let slope = if rows.len() >= 2 {
        let cs: Vec<f64> = rows.iter().map(|r| r.c).collect();
        let gaps: Vec<f64> = rows.iter().map(|r| r.l1_gap).collect();
        loglog_slope(&cs, &gaps)
    } else {
        f64::NAN
    };
    Ok(ClassicalLimitReport {
        rows,
        slope,
        lambda_hat,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(lam: f64) -> FvOptions {
        FvOptions {
            cfl: 0.45,
            lambda_hat: lam,
        }
    }

    #[test]
    fn constant_state_is_steady() {
        let s = EulerState::new(1.3, 0.4);
        let u0 = GridSolution::riemann(s, s, 1.0, 50).unwrap();
        for f in [SystemFlux::classical(1.0), SystemFlux::relativistic(1.0, 5.0).unwrap()] {
            let run = fv_evolve(&f, &u0, 0.3, &opts(3.0)).unwrap();
            assert_eq!(run.solution.t, 0.3);
            for c in &run.solution.cells {
                assert!((c.rho - s.rho).abs() < 1e-14 && (c.q - s.q).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn conservation_and_density_floor() {
        let u0 = GridSolution::riemann(EulerState::new(2.0, 0.5), EulerState::new(1.0, -0.3), 1.5, 300).unwrap();
        let f = SystemFlux::relativistic(1.0, 8.0).unwrap();
        let run = fv_evolve(&f, &u0, 0.4, &opts(5.5)).unwrap();
        assert!(run.conservation_residual.iter().all(|&r| r < 1e-10), "{:?}", run.conservation_residual);
        assert!(run.min_rho >= 0.95 * 1.0 - 1e-12);
    }

    #[test]
    fn classical_riemann_self_converges() {
        let f = SystemFlux::classical(1.0);
        let (l, r) = (EulerState::new(2.0, 0.0), EulerState::new(1.0, 0.0));
        let sol = |n: usize| {
            let u0 = GridSolution::riemann(l, r, 1.0, n).unwrap();
            fv_evolve(&f, &u0, 0.2, &opts(2.5)).unwrap().solution
        };
        let grids: Vec<GridSolution> = [200, 400, 800, 1600].iter().map(|&n| sol(n)).collect();
        let diffs: Vec<f64> = grids
            .windows(2)
            .map(|w| w[1].coarsen(2).unwrap().l1_distance(&w[0]).unwrap())
            .collect();
        for d in diffs.windows(2) {
            assert!(d[0] / d[1] >= 1.4, "{diffs:?}");
        }
    }

    #[test]
    fn vacuum_guard_reports_the_cell() {
        let u0 = GridSolution::riemann(EulerState::new(0.3, -2.0), EulerState::new(0.3, 2.0), 1.0, 40).unwrap();
        let f = SystemFlux::classical(1.0).with_rho_min(0.2);
        match fv_evolve(&f, &u0, 1.0, &opts(10.0)) {
            Err(Error::Inadmissible { cell, .. }) => assert!(cell < 40),
            other => panic!("expected a vacuum abort, got {other:?}"),
        }
    }

    #[test]
    fn limit_gap_is_linear_in_time() {
        let mut setup = ClassicalLimitSetup::default();
        let g2 = classical_limit_experiment(&[16.0], &setup).unwrap().rows[0].l1_gap;
        setup.t_end = 0.1;
        let g1 = classical_limit_experiment(&[16.0], &setup).unwrap().rows[0].l1_gap;
        let ratio = g2 / g1;
        assert!((1.6..=2.4).contains(&ratio), "{ratio}");
    }

    #[test]
    fn huge_light_speed_is_at_noise_level() {
        let setup = ClassicalLimitSetup {
            cells: 200,
            ..Default::default()
        };
        let r = classical_limit_experiment(&[1e8], &setup).unwrap();
        assert!(r.rows[0].l1_gap < 1e-13, "{}", r.rows[0].l1_gap);
    }
}
