//! Real eigen-decomposition of small diagonalizable matrices through the
//! characteristic polynomial.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linear::matrix::Matrix;

/// `A = R diag(eigenvalues) L` with `L = R^{-1}`. Columns of `right` are
/// unit eigenvectors, rows of `left` the dual basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenSystem {
    pub n: usize,
    pub eigenvalues: Vec<f64>,
    pub right: Matrix,
    pub left: Matrix,
}

impl EigenSystem {
    pub fn right_vector(&self, i: usize) -> Vec<f64> {
        self.right.col(i)
    }

    pub fn left_vector(&self, i: usize) -> Vec<f64> {
        self.left.row(i).to_vec()
    }

    /// Max entry of `L R - I` and of `A r_i - lambda_i r_i`.
    pub fn residuals(&self, a: &Matrix) -> (f64, f64) {
        let lr = self
            .left
            .mul(&self.right)
            .and_then(|m| m.sub(&Matrix::identity(self.n)))
            .map(|m| m.max_abs())
            .unwrap_or(f64::INFINITY);
        let mut eig = 0.0f64;
        for i in 0..self.n {
            let r = self.right_vector(i);
            let ar = a.mul_vec(&r);
            for (x, y) in ar.iter().zip(&r) {
                eig = eig.max((x - self.eigenvalues[i] * y).abs());
            }
        }
        (lr, eig)
    }
}

/// Characteristic polynomial `det(x I - A)`, coefficients in increasing
/// degree (monic), by the Faddeev-LeVerrier recursion.
pub fn characteristic_polynomial(a: &Matrix) -> Vec<f64> {
    let n = a.n();
    let mut c = vec![0.0; n + 1];
    c[n] = 1.0;
    let mut m = Matrix::zeros(n);
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = a.mul(&m).expect("same size");
        for i in 0..n {
            next.set(i, i, next.get(i, i) + c[n - k + 1]);
        }
        m = next;
        let am = a.mul(&m).expect("same size");
        c[n - k] = -am.trace() / k as f64;
    }
    c
}

fn poly_eval(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck)
}

fn poly_deriv(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(k, &ck)| k as f64 * ck).collect()
}

/// Size of the terms of `p(x)`; rounding in `p(x)` is a small multiple of this.
fn poly_scale(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ck| acc * x.abs() + ck.abs())
}

/// Real roots with multiplicities, ascending. A critical point where the
/// polynomial vanishes to rounding is a root of multiplicity one more than
/// its multiplicity in the derivative.
pub fn real_roots(c: &[f64]) -> Vec<(f64, usize)> {
    let mut c = c.to_vec();
    while c.len() > 1 && *c.last().unwrap() == 0.0 {
        c.pop();
    }
    let deg = c.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    if deg == 1 {
        return vec![(-c[0] / c[1], 1)];
    }
    let lead = c[deg];
    let bound = 1.0 + c[..deg].iter().map(|v| (v / lead).abs()).fold(0.0, f64::max);
    let crit = real_roots(&poly_deriv(&c));
    let tol = 1e-10;
    let mut roots: Vec<(f64, usize)> = Vec::new();
    let mut edges = vec![-bound];
    for &(x, m) in &crit {
        if poly_eval(&c, x).abs() <= tol * poly_scale(&c, x) {
            roots.push((x, m + 1));
        }
        edges.push(x);
    }
    edges.push(bound);
    for w in edges.windows(2) {
        let (mut lo, mut hi) = (w[0], w[1]);
        if !(lo < hi) {
            continue;
        }
        let (flo, fhi) = (poly_eval(&c, lo), poly_eval(&c, hi));
        let near_zero = |x: f64, fx: f64| fx.abs() <= tol * poly_scale(&c, x);
        if near_zero(lo, flo) || near_zero(hi, fhi) || flo.signum() == fhi.signum() {
            continue;
        }
        // bisection on a monotone bracket, then Newton polish
        let rising = fhi > 0.0;
        for _ in 0..200 {
            let m = 0.5 * (lo + hi);
            if m <= lo || m >= hi {
                break;
            }
            if (poly_eval(&c, m) > 0.0) == rising {
                hi = m;
            } else {
                lo = m;
            }
        }
        let mut x = 0.5 * (lo + hi);
        let dc = poly_deriv(&c);
        for _ in 0..3 {
            let d = poly_eval(&dc, x);
            if d == 0.0 {
                break;
            }
            let nx = x - poly_eval(&c, x) / d;
            if (nx - x).abs() > (hi - lo).max(1e-300) {
                break;
            }
            x = nx;
        }
        roots.push((x, 1));
    }
    roots.sort_by(|a, b| a.0.total_cmp(&b.0));
    roots
}

/// Null space of `m` by reduced row echelon form; one basis vector per free
/// column, carrying 1 at that column (the canonical basis when `m = 0`).
fn null_space(m: &Matrix, tol: f64) -> Vec<Vec<f64>> {
    let n = m.n();
    let mut a = m.rows();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        if row == n {
            break;
        }
        let p = (row..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        if a[p][col].abs() <= tol {
            for r in a.iter_mut().skip(row) {
                r[col] = 0.0;
            }
            continue;
        }
        a.swap(row, p);
        let d = a[row][col];
        for v in a[row].iter_mut() {
            *v /= d;
        }
        for i in 0..n {
            if i != row {
                let f = a[i][col];
                if f != 0.0 {
                    for j in 0..n {
                        a[i][j] -= f * a[row][j];
                    }
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0.0; n];
            v[free] = 1.0;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][free];
            }
            v
        })
        .collect()
}

fn normalise(mut v: Vec<f64>) -> Vec<f64> {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let sign = v.iter().find(|x| x.abs() > 1e-12 * norm).map_or(1.0, |x| x.signum());
    for x in v.iter_mut() {
        *x *= sign / norm;
    }
    v
}

/// Real eigen-decomposition for `n <= 4`; complex or defective spectra are
/// rejected.
pub fn decompose(a: &Matrix) -> Result<EigenSystem> {
    let n = a.n();
    if n > 4 {
        return Err(Error::InvalidArgument(format!("decompose supports n <= 4, got {n}")));
    }
    let roots = real_roots(&characteristic_polynomial(a));
    let found: usize = roots.iter().map(|r| r.1).sum();
    if found != n {
        return Err(Error::NotDiagonalizable(format!(
            "{} of {n} eigenvalues are real",
            found
        )));
    }
    let scale = a.max_abs().max(1.0);
    let mut values = Vec::with_capacity(n);
    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(n);
    for &(lambda, mult) in &roots {
        let mut shifted = a.clone();
        for i in 0..n {
            shifted.set(i, i, shifted.get(i, i) - lambda);
        }
        let basis = null_space(&shifted, 1e-8 * scale);
        if basis.len() != mult {
            return Err(Error::NotDiagonalizable(format!(
                "eigenvalue {lambda} has multiplicity {mult} but {} eigenvectors",
                basis.len()
            )));
        }
        for v in basis {
            values.push(lambda);
            vectors.push(normalise(v));
        }
    }
    let mut right = Matrix::zeros(n);
    for (j, v) in vectors.iter().enumerate() {
        for i in 0..n {
            right.set(i, j, v[i]);
        }
    }
    let left = right.inverse()?;
    Ok(EigenSystem {
        n,
        eigenvalues: values,
        right,
        left,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_and_diagonal_use_canonical_basis() {
        let e = decompose(&Matrix::identity(3)).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0; 3]);
        assert_eq!(e.right, Matrix::identity(3));
        assert_eq!(e.left, Matrix::identity(3));
        let e = decompose(&Matrix::diag(&[0.0, 2.0])).unwrap();
        assert_eq!(e.eigenvalues, vec![0.0, 2.0]);
        assert_eq!(e.right, Matrix::identity(2));
    }

    #[test]
    fn swap_matrix() {
        let a = Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let e = decompose(&a).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-12 && (e.eigenvalues[1] - 1.0).abs() < 1e-12);
        let s = 0.5f64.sqrt();
        let r0 = e.right_vector(0);
        let r1 = e.right_vector(1);
        assert!((r0[0] - s).abs() < 1e-12 && (r0[1] + s).abs() < 1e-12);
        assert!((r1[0] - s).abs() < 1e-12 && (r1[1] - s).abs() < 1e-12);
        let (lr, eig) = e.residuals(&a);
        assert!(lr < 1e-12 && eig < 1e-12);
    }

    #[test]
    fn rejects_rotation_and_jordan_block() {
        let rot = Matrix::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        assert!(matches!(decompose(&rot), Err(Error::NotDiagonalizable(_))));
        let jordan = Matrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(decompose(&jordan), Err(Error::NotDiagonalizable(_))));
        let big = Matrix::identity(5);
        assert!(decompose(&big).is_err());
    }

    #[test]
    fn characteristic_polynomial_of_companion() {
        // companion of (x-1)(x-2)(x-3) = x^3 - 6x^2 + 11x - 6
        let a = Matrix::from_rows(&[
            vec![0.0, 0.0, 6.0],
            vec![1.0, 0.0, -11.0],
            vec![0.0, 1.0, 6.0],
        ])
        .unwrap();
        let c = characteristic_polynomial(&a);
        for (x, y) in c.iter().zip([-6.0, 11.0, -6.0, 1.0]) {
            assert!((x - y).abs() < 1e-12);
        }
        let roots = real_roots(&c);
        assert_eq!(roots.len(), 3);
        for (r, want) in roots.iter().zip([1.0, 2.0, 3.0]) {
            assert!((r.0 - want).abs() < 1e-12 && r.1 == 1);
        }
    }

    #[test]
    fn repeated_eigenvalue_in_four_dimensions() {
        // similar to diag(1, 1, -2, 3)
        let r = Matrix::from_rows(&[
            vec![1.0, 0.0, 1.0, 0.0],
            vec![0.0, 1.0, 1.0, 1.0],
            vec![0.0, 0.0, 1.0, 1.0],
            vec![1.0, 0.0, 0.0, 1.0],
        ])
        .unwrap();
        let a = r
            .mul(&Matrix::diag(&[1.0, 1.0, -2.0, 3.0]))
            .unwrap()
            .mul(&r.inverse().unwrap())
            .unwrap();
        let e = decompose(&a).unwrap();
        let want = [-2.0, 1.0, 1.0, 3.0];
        for (x, y) in e.eigenvalues.iter().zip(want) {
            assert!((x - y).abs() < 1e-9, "{:?}", e.eigenvalues);
        }
        let (lr, eig) = e.residuals(&a);
        assert!(lr < 1e-9 && eig < 1e-9, "{lr} {eig}");
    }

    proptest! {
        #[test]
        fn similarity_transforms_decompose(
            d in proptest::collection::vec(-3.0f64..3.0, 3),
            r in proptest::collection::vec(-1.0f64..1.0, 9),
        ) {
            let mut rm = Matrix::new(3, r).unwrap();
            for i in 0..3 {
                rm.set(i, i, rm.get(i, i) + 3.0);
            }
            let mut d = d;
            d.sort_by(f64::total_cmp);
            prop_assume!(d.windows(2).all(|w| w[1] - w[0] > 1e-2));
            let a = rm.mul(&Matrix::diag(&d)).unwrap().mul(&rm.inverse().unwrap()).unwrap();
            let e = decompose(&a).unwrap();
            for (x, y) in e.eigenvalues.iter().zip(&d) {
                prop_assert!((x - y).abs() < 1e-8);
            }
            let (lr, eig) = e.residuals(&a);
            prop_assert!(lr < 1e-9 && eig < 1e-8, "{} {}", lr, eig);
        }
    }
}
