//! Step-data solutions of `u_t + A u_x = 0` and the matrix distance
//! `sup_{|v| = 1} || A^1 * v - B^1 * v ||_{L1}`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linear::eigen::{decompose, EigenSystem};
use crate::linear::matrix::Matrix;
use crate::pwfun::{euclid as norm, PiecewiseConstantFn};

/// Solution at time `t` from the datum `v H(x)`:
/// `sum_i (l_i . v) r_i H(x - lambda_i t)`.
pub fn step_solution(e: &EigenSystem, v: &[f64], t: f64) -> Result<PiecewiseConstantFn> {
    if v.len() != e.n {
        return Err(Error::DimensionMismatch {
            left: e.n,
            right: v.len(),
        });
    }
    if !(t > 0.0) {
        return Err(Error::InvalidArgument(format!("time {t} must be positive")));
    }
    let vnorm = norm(v);
    if vnorm == 0.0 {
        return Err(Error::InvalidArgument("step height must be nonzero".into()));
    }
    let c = e.left.mul_vec(v);
    let mut bps = Vec::new();
    let mut vals = vec![0.0; e.n];
    let mut current = vec![0.0; e.n];
    let mut i = 0;
    while i < e.n {
        let lambda = e.eigenvalues[i];
        let mut jump = vec![0.0; e.n];
        while i < e.n && e.eigenvalues[i] == lambda {
            for (k, r) in e.right_vector(i).iter().enumerate() {
                jump[k] += c[i] * r;
            }
            i += 1;
        }
        if norm(&jump) <= 1e-14 * vnorm {
            continue;
        }
        for (cur, j) in current.iter_mut().zip(&jump) {
            *cur += j;
        }
        bps.push(lambda * t);
        vals.extend_from_slice(&current);
    }
    // The far right state is exactly v.
    let last = vals.len() - e.n;
    if !bps.is_empty() {
        vals[last..].copy_from_slice(v);
    }
    PiecewiseConstantFn::from_flat(e.n, bps, vals)
}

/// Cells of the time-1 difference: on `(x_k, x_{k+1})` it equals `M_k v`.
#[derive(Debug, Clone)]
struct DifferenceCells {
    widths: Vec<f64>,
    mats: Vec<Matrix>,
}

impl DifferenceCells {
    fn new(a: &EigenSystem, b: &EigenSystem) -> Result<Self> {
        let n = a.n;
        let mut xs: Vec<f64> = a.eigenvalues.iter().chain(&b.eigenvalues).copied().collect();
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        let projector = |e: &EigenSystem, below: f64| -> Matrix {
            let mut p = Matrix::zeros(n);
            for (i, &l) in e.eigenvalues.iter().enumerate() {
                if l < below {
                    let (r, lv) = (e.right_vector(i), e.left_vector(i));
                    for row in 0..n {
                        for col in 0..n {
                            p.set(row, col, p.get(row, col) + r[row] * lv[col]);
                        }
                    }
                }
            }
            p
        };
        let mut widths = Vec::new();
        let mut mats = Vec::new();
        for w in xs.windows(2) {
            let mid = 0.5 * (w[0] + w[1]);
            widths.push(w[1] - w[0]);
            mats.push(projector(a, mid).sub(&projector(b, mid))?);
        }
        Ok(DifferenceCells { widths, mats })
    }

    fn objective(&self, v: &[f64]) -> f64 {
        self.widths
            .iter()
            .zip(&self.mats)
            .map(|(w, m)| w * norm(&m.mul_vec(v)))
            .sum()
    }

    fn gradient(&self, v: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; v.len()];
        for (w, m) in self.widths.iter().zip(&self.mats) {
            let mv = m.mul_vec(v);
            let nm = norm(&mv);
            if nm > 0.0 {
                let back = m.transpose().mul_vec(&mv);
                for (gi, bi) in g.iter_mut().zip(back) {
                    *gi += w * bi / nm;
                }
            }
        }
        g
    }
}

fn unit(mut v: Vec<f64>) -> Vec<f64> {
    let n = norm(&v);
    for x in v.iter_mut() {
        *x /= n;
    }
    v
}

/// Search resolution for the sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereSearch {
    /// Directions scanned before local refinement.
    pub samples: usize,
    /// Best samples refined by local ascent.
    pub starts: usize,
    /// Projected-gradient steps per start (dimension >= 3).
    pub ascent_steps: usize,
}

impl Default for SphereSearch {
    fn default() -> Self {
        SphereSearch {
            samples: 4096,
            starts: 8,
            ascent_steps: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HatDLinReport {
    pub value: f64,
    pub argmax: Vec<f64>,
    /// `||B - A||` (largest singular value).
    pub op_norm_gap: f64,
    pub samples: usize,
    /// Always true: the supremum is estimated from below.
    pub lower_bound: bool,
}

/// Directions on the unit sphere of `R^n`, `n <= 4`, from a Kronecker
/// (additive golden-ratio) sequence mapped by area-preserving charts.
pub fn sphere_points(n: usize, count: usize) -> Vec<Vec<f64>> {
    use std::f64::consts::PI;
    // generalised golden ratios: the positive root of x^{d+1} = x + 1
    let alpha = |d: usize| -> Vec<f64> {
        let mut g = 2.0f64;
        for _ in 0..64 {
            g = (1.0 + g).powf(1.0 / (d as f64 + 1.0));
        }
        (1..=d).map(|k| (1.0 / g.powi(k as i32)).fract()).collect()
    };
    match n {
        1 => vec![vec![1.0]],
        2 => (0..count)
            .map(|i| {
                let th = PI * i as f64 / count as f64;
                vec![th.cos(), th.sin()]
            })
            .collect(),
        3 => {
            let a = alpha(2);
            (0..count)
                .map(|i| {
                    let u = (0.5 + a[0] * i as f64).fract();
                    let w = (0.5 + a[1] * i as f64).fract();
                    let z = 1.0 - 2.0 * u;
                    let s = (1.0 - z * z).max(0.0).sqrt();
                    vec![s * (2.0 * PI * w).cos(), s * (2.0 * PI * w).sin(), z]
                })
                .collect()
        }
        _ => {
            let a = alpha(3);
            (0..count)
                .map(|i| {
                    let u: Vec<f64> = a.iter().map(|ak| (0.5 + ak * i as f64).fract()).collect();
                    let (s1, s2) = ((1.0 - u[0]).sqrt(), u[0].sqrt());
                    let (t1, t2) = (2.0 * PI * u[1], 2.0 * PI * u[2]);
                    vec![s1 * t1.sin(), s1 * t1.cos(), s2 * t2.sin(), s2 * t2.cos()]
                })
                .collect()
        }
    }
}

/// Sampled lower bound of the matrix distance.
pub fn hat_d_lin(a: &Matrix, b: &Matrix) -> Result<HatDLinReport> {
    hat_d_lin_with(a, b, &SphereSearch::default())
}

pub fn hat_d_lin_with(a: &Matrix, b: &Matrix, search: &SphereSearch) -> Result<HatDLinReport> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            left: a.n(),
            right: b.n(),
        });
    }
    let (ea, eb) = (decompose(a)?, decompose(b)?);
    let cells = DifferenceCells::new(&ea, &eb)?;
    let n = a.n();
    let op_norm_gap = b.sub(a)?.op_norm();
    let points = sphere_points(n, search.samples.max(1));
    let values: Vec<f64> = points.par_iter().map(|v| cells.objective(v)).collect();
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]).then(i.cmp(&j)));
    let mut best = (values[order[0]], points[order[0]].clone());
    for &i in order.iter().take(search.starts.max(1)) {
        let refined = if n == 2 {
            refine_angle(&cells, i, points.len())
        } else {
            ascend(&cells, points[i].clone(), search.ascent_steps)
        };
        if refined.0 > best.0 {
            best = refined;
        }
    }
    Ok(HatDLinReport {
        value: best.0,
        argmax: best.1,
        op_norm_gap,
        samples: points.len(),
        lower_bound: true,
    })
}

/// Golden-section search on the angle bracket around sample `i`.
fn refine_angle(cells: &DifferenceCells, i: usize, count: usize) -> (f64, Vec<f64>) {
    use std::f64::consts::PI;
    let h = PI / count as f64;
    let centre = h * i as f64;
    let at = |th: f64| vec![th.cos(), th.sin()];
    let f = |th: f64| cells.objective(&at(th));
    let g = 0.618_033_988_749_894_8;
    let (mut lo, mut hi) = (centre - h, centre + h);
    let mut c = hi - g * (hi - lo);
    let mut d = lo + g * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..100 {
        if hi - lo < 1e-14 {
            break;
        }
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - g * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + g * (hi - lo);
            fd = f(d);
        }
    }
    [centre, c, d]
        .into_iter()
        .map(|th| (f(th), at(th)))
        .fold((f64::NEG_INFINITY, vec![]), |a, b| if b.0 > a.0 { b } else { a })
}

/// Projected gradient ascent with step halving.
fn ascend(cells: &DifferenceCells, mut v: Vec<f64>, steps: usize) -> (f64, Vec<f64>) {
    let mut fv = cells.objective(&v);
    let mut step = 0.5;
    for _ in 0..steps {
        let g = cells.gradient(&v);
        let radial: f64 = g.iter().zip(&v).map(|(a, b)| a * b).sum();
        let tangent: Vec<f64> = g.iter().zip(&v).map(|(gi, vi)| gi - radial * vi).collect();
        let tn = norm(&tangent);
        if tn < 1e-15 {
            break;
        }
        let mut improved = false;
        while step > 1e-12 {
            let cand = unit(v.iter().zip(&tangent).map(|(vi, ti)| vi + step * ti / tn).collect());
            let fc = cells.objective(&cand);
            if fc > fv {
                v = cand;
                fv = fc;
                improved = true;
                step *= 1.5;
                break;
            }
            step *= 0.5;
        }
        if !improved {
            break;
        }
    }
    (fv, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn step_solution_examples() {
        let e = decompose(&Matrix::diag(&[0.0, 2.0])).unwrap();
        let s = step_solution(&e, &[0.0, 1.0], 1.0).unwrap();
        assert_eq!(s.breakpoints(), &[2.0]);
        assert_eq!(s.left_tail(), &[0.0, 0.0]);
        assert_eq!(s.right_tail(), &[0.0, 1.0]);
        let e = decompose(&m(&[&[0.7]])).unwrap();
        let s = step_solution(&e, &[1.0], 1.0).unwrap();
        assert_eq!(s.breakpoints(), &[0.7]);
        assert!(step_solution(&e, &[0.0], 1.0).is_err());
    }

    #[test]
    fn step_solution_tails_and_homogeneity() {
        let a = m(&[&[1.0, 2.0, 0.0], &[0.5, -1.0, 0.3], &[0.0, 0.1, 0.4]]);
        let e = decompose(&a).unwrap();
        let v = [0.3, -1.2, 0.8];
        let s = step_solution(&e, &v, 1.5).unwrap();
        assert_eq!(s.left_tail(), &[0.0; 3]);
        assert_eq!(s.right_tail(), &v);
        let sv: Vec<f64> = v.iter().map(|x| -2.5 * x).collect();
        let s2 = step_solution(&e, &sv, 1.5).unwrap();
        for x in [-3.0, -0.5, 0.2, 0.9, 4.0] {
            for (p, q) in s.eval(x).iter().zip(s2.eval(x)) {
                assert!((-2.5 * p - q).abs() < 1e-12);
            }
        }
        let s1 = step_solution(&e, &v, 1.0).unwrap();
        assert_eq!(s1.dilate(1.5).unwrap().breakpoints(), s.breakpoints());
    }

    #[test]
    fn worked_diagonal_example() {
        let r = hat_d_lin(&Matrix::diag(&[0.0, 1.0]), &Matrix::diag(&[0.0, 2.0])).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12, "{}", r.value);
        assert!((r.op_norm_gap - 1.0).abs() < 1e-12);
        assert!(r.argmax[0].abs() < 1e-6);
    }

    #[test]
    fn scalar_and_identical() {
        let r = hat_d_lin(&m(&[&[0.3]]), &m(&[&[-1.1]])).unwrap();
        assert!((r.value - 1.4).abs() < 1e-12);
        let a = m(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(hat_d_lin(&a, &a).unwrap().value, 0.0);
    }

    #[test]
    fn agrees_with_brute_force_on_a_coupled_pair() {
        let a = m(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let b = m(&[&[0.5, 0.2], &[0.0, -0.5]]);
        let r = hat_d_lin(&a, &b).unwrap();
        // brute force over 20000 angles with exact pwfun distances
        let (ea, eb) = (decompose(&a).unwrap(), decompose(&b).unwrap());
        let mut best: f64 = 0.0;
        for i in 0..20000 {
            let th = std::f64::consts::PI * i as f64 / 20000.0;
            let v = [th.cos(), th.sin()];
            let d = crate::pwfun::l1_distance(
                &step_solution(&ea, &v, 1.0).unwrap(),
                &step_solution(&eb, &v, 1.0).unwrap(),
                -5.0,
                5.0,
            )
            .unwrap();
            best = best.max(d);
        }
        assert!(r.value >= best - 1e-12, "{} < {best}", r.value);
        assert!(r.value - best < 1e-6, "{} vs {best}", r.value);
        assert!(r.value >= r.op_norm_gap - 1e-9);
    }

    #[test]
    fn three_dimensional_ascent_finds_the_axis() {
        let a = Matrix::diag(&[0.0, 1.0, -1.0]);
        let b = Matrix::diag(&[0.0, 1.0, 1.5]);
        let r = hat_d_lin(&a, &b).unwrap();
        assert!((r.value - 2.5).abs() < 1e-9, "{}", r.value);
        let r4 = hat_d_lin(&Matrix::diag(&[0.0, 0.0, 0.0, 1.0]), &Matrix::diag(&[0.0, 0.0, 0.0, 3.0])).unwrap();
        assert!((r4.value - 2.0).abs() < 1e-9, "{}", r4.value);
    }

    #[test]
    fn sphere_points_are_unit() {
        for n in 1..=4 {
            for p in sphere_points(n, 500) {
                assert!((norm(&p) - 1.0).abs() < 1e-12);
            }
        }
    }
}
