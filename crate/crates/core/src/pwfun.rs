//! Vector-valued piecewise-constant functions of one real variable.
//!
//! A function is stored as a strictly increasing list of breakpoints and one
//! value per open interval, including the two unbounded tails. The value at a
//! breakpoint itself is the right limit; integrals never depend on it.
//!
//! All vector norms are Euclidean.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseConstantFn {
    dim: usize,
    breakpoints: Vec<f64>,
    /// Row-major, `(breakpoints.len() + 1) * dim` entries.
    values: Vec<f64>,
}

pub(crate) fn euclid(v: &[f64]) -> f64 {
    match v.len() {
        1 => v[0].abs(),
        _ => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
    }
}

fn diff_norm(a: &[f64], b: &[f64]) -> f64 {
    match a.len() {
        1 => (a[0] - b[0]).abs(),
        _ => a
            .iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt(),
    }
}

impl PiecewiseConstantFn {
    pub fn from_flat(dim: usize, breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidFunction("dimension must be positive".into()));
        }
        if values.len() != (breakpoints.len() + 1) * dim {
            return Err(Error::InvalidFunction(format!(
                "{} breakpoints need {} values of dimension {dim}, got {} scalars",
                breakpoints.len(),
                breakpoints.len() + 1,
                values.len()
            )));
        }
        if let Some(x) = breakpoints.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidFunction(format!("non-finite breakpoint {x}")));
        }
        if let Some(w) = breakpoints.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidFunction(format!(
                "breakpoints not strictly increasing: {} then {}",
                w[0], w[1]
            )));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidFunction(format!("non-finite value {v}")));
        }
        Ok(PiecewiseConstantFn {
            dim,
            breakpoints,
            values,
        })
    }

    pub fn new(dim: usize, breakpoints: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: v.len(),
            });
        }
        Self::from_flat(dim, breakpoints, values.concat())
    }

    /// Scalar function with the given breakpoints and piece values.
    pub fn scalar(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        Self::from_flat(1, breakpoints, values)
    }

    pub fn constant(value: Vec<f64>) -> Result<Self> {
        Self::from_flat(value.len(), Vec::new(), value)
    }

    /// `left` on `(-inf, x0)`, `right` on `[x0, inf)`.
    pub fn step(x0: f64, left: Vec<f64>, right: Vec<f64>) -> Result<Self> {
        if left.len() != right.len() {
            return Err(Error::DimensionMismatch {
                left: left.len(),
                right: right.len(),
            });
        }
        let dim = left.len();
        Self::from_flat(dim, vec![x0], [left, right].concat())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn num_pieces(&self) -> usize {
        self.breakpoints.len() + 1
    }

    /// Value on piece `i`; piece 0 is the left tail.
    pub fn value(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn values(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.dim)
    }

    pub fn left_tail(&self) -> &[f64] {
        self.value(0)
    }

    pub fn right_tail(&self) -> &[f64] {
        self.value(self.breakpoints.len())
    }

    /// First and last breakpoint, if any.
    pub fn support(&self) -> Option<(f64, f64)> {
        Some((*self.breakpoints.first()?, *self.breakpoints.last()?))
    }

    /// Index of the piece containing `x` (right-continuous at breakpoints).
    pub fn piece_index(&self, x: f64) -> usize {
        self.breakpoints.partition_point(|&b| b <= x)
    }

    pub fn eval(&self, x: f64) -> &[f64] {
        self.value(self.piece_index(x))
    }

    /// Scalar shortcut for `eval(x)[0]`.
    pub fn eval_scalar(&self, x: f64) -> f64 {
        self.eval(x)[0]
    }

    /// Sum of jump norms at breakpoints strictly inside `window`
    /// (whole line when `None`).
    pub fn total_variation(&self, window: Option<(f64, f64)>) -> f64 {
        let (a, b) = window.unwrap_or((f64::NEG_INFINITY, f64::INFINITY));
        if a >= b {
            return 0.0;
        }
        self.breakpoints
            .iter()
            .enumerate()
            .filter(|(_, &x)| x > a && x < b)
            .map(|(i, _)| diff_norm(self.value(i), self.value(i + 1)))
            .sum()
    }

    /// Componentwise integral over `[a, b]`.
    pub fn integral(&self, a: f64, b: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        if a >= b {
            return out;
        }
        let mut left = a;
        let mut i = self.piece_index(a);
        loop {
            let right = self.breakpoints.get(i).copied().unwrap_or(f64::INFINITY).min(b);
            let w = right - left;
            if w > 0.0 {
                for (o, v) in out.iter_mut().zip(self.value(i)) {
                    *o += w * v;
                }
            }
            if right >= b {
                break;
            }
            left = right;
            i += 1;
        }
        out
    }

    /// Restriction to `(a, b)`: breakpoints outside are dropped and the
    /// tails take the values found just inside the window.
    pub fn restrict(&self, a: f64, b: f64) -> Result<Self> {
        if !(a < b) {
            return Err(Error::InvalidArgument(format!("empty window ({a}, {b})")));
        }
        let first = self.piece_index(a);
        let last = self.breakpoints.partition_point(|&x| x < b);
        let bps: Vec<f64> = self.breakpoints[first..last].to_vec();
        let vals = self.values[first * self.dim..(last + 1) * self.dim].to_vec();
        Self::from_flat(self.dim, bps, vals)
    }

    /// Drops breakpoints across which the value does not change.
    pub fn simplify(&self) -> Self {
        let mut bps = Vec::with_capacity(self.breakpoints.len());
        let mut vals = self.value(0).to_vec();
        for (i, &x) in self.breakpoints.iter().enumerate() {
            let next = self.value(i + 1);
            if next != &vals[vals.len() - self.dim..] {
                bps.push(x);
                vals.extend_from_slice(next);
            }
        }
        PiecewiseConstantFn {
            dim: self.dim,
            breakpoints: bps,
            values: vals,
        }
    }

    /// Copy with an extra breakpoint at every point of `xs` (values unchanged).
    pub fn refine(&self, xs: &[f64]) -> Self {
        let merged = merge_sorted(&self.breakpoints, xs);
        let mut vals = Vec::with_capacity((merged.len() + 1) * self.dim);
        vals.extend_from_slice(self.value(0));
        for &x in &merged {
            vals.extend_from_slice(self.eval(x));
        }
        PiecewiseConstantFn {
            dim: self.dim,
            breakpoints: merged,
            values: vals,
        }
    }

    /// `x -> f(x / s)`; breakpoints are multiplied by `s > 0`.
    pub fn dilate(&self, s: f64) -> Result<Self> {
        if !(s > 0.0) {
            return Err(Error::InvalidArgument(format!("dilation factor {s} must be positive")));
        }
        Self::from_flat(
            self.dim,
            self.breakpoints.iter().map(|x| x * s).collect(),
            self.values.clone(),
        )
    }

    /// `x -> f(x - d)`.
    pub fn translate(&self, d: f64) -> Self {
        PiecewiseConstantFn {
            dim: self.dim,
            breakpoints: self.breakpoints.iter().map(|x| x + d).collect(),
            values: self.values.clone(),
        }
    }

    pub fn scale_values(&self, s: f64) -> Self {
        PiecewiseConstantFn {
            dim: self.dim,
            breakpoints: self.breakpoints.clone(),
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }

    /// Line-oriented text form: `dim n`, then one `x v1 .. vn` row per
    /// piece where `x` is the piece's left end (`-inf` for the left tail).
    pub fn to_text(&self) -> String {
        let mut s = format!("dim {}\n", self.dim);
        for i in 0..self.num_pieces() {
            if i == 0 {
                s.push_str("-inf");
            } else {
                let _ = write!(s, "{:?}", self.breakpoints[i - 1]);
            }
            for v in self.value(i) {
                let _ = write!(s, " {v:?}");
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut dim: Option<usize> = None;
        let mut bps = Vec::new();
        let mut vals = Vec::new();
        let mut rows = 0usize;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse {
                line: lineno + 1,
                msg,
            };
            let mut toks = line.split_whitespace();
            let head = toks.next().unwrap_or_default();
            let Some(d) = dim else {
                if head != "dim" {
                    return Err(perr("expected `dim n` header".into()));
                }
                let n = toks
                    .next()
                    .and_then(|t| t.parse::<usize>().ok())
                    .ok_or_else(|| perr("bad dimension".into()))?;
                dim = Some(n);
                continue;
            };
            let x: f64 = head
                .parse()
                .map_err(|_| perr(format!("bad breakpoint `{head}`")))?;
            if rows == 0 {
                if x != f64::NEG_INFINITY {
                    return Err(perr("first row must start with -inf".into()));
                }
            } else {
                bps.push(x);
            }
            let row: Vec<f64> = toks
                .map(|t| t.parse::<f64>().map_err(|_| perr(format!("bad value `{t}`"))))
                .collect::<Result<_>>()?;
            if row.len() != d {
                return Err(perr(format!("expected {d} values, got {}", row.len())));
            }
            vals.extend(row);
            rows += 1;
        }
        let dim = dim.ok_or_else(|| Error::Parse {
            line: 0,
            msg: "missing `dim` header".into(),
        })?;
        if rows == 0 {
            return Err(Error::Parse {
                line: 0,
                msg: "no value rows".into(),
            });
        }
        Self::from_flat(dim, bps, vals)
    }
}

/// Sorted union of two sorted breakpoint lists, exact duplicates removed.
pub fn merge_sorted(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let x = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(&x), Some(&y)) if y < x => {
                j += 1;
                y
            }
            (Some(&x), Some(_)) => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        if out.last() != Some(&x) {
            out.push(x);
        }
    }
    out
}

pub fn merge_breakpoints(f: &PiecewiseConstantFn, g: &PiecewiseConstantFn) -> Vec<f64> {
    merge_sorted(&f.breakpoints, &g.breakpoints)
}

/// Exact `int_a^b |f(x) - g(x)| dx`.
pub fn l1_distance(
    f: &PiecewiseConstantFn,
    g: &PiecewiseConstantFn,
    a: f64,
    b: f64,
) -> Result<f64> {
    if f.dim != g.dim {
        return Err(Error::DimensionMismatch {
            left: f.dim,
            right: g.dim,
        });
    }
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::InvalidArgument(format!("bad window [{a}, {b}]")));
    }
    if a == b {
        return Ok(0.0);
    }
    let mut i = f.piece_index(a);
    let mut j = g.piece_index(a);
    let mut left = a;
    let mut total = 0.0;
    loop {
        let fi = f.breakpoints.get(i).copied().unwrap_or(f64::INFINITY);
        let gj = g.breakpoints.get(j).copied().unwrap_or(f64::INFINITY);
        let right = fi.min(gj).min(b);
        if right > left {
            total += (right - left) * diff_norm(f.value(i), g.value(j));
        }
        if right >= b {
            break;
        }
        if fi == right {
            i += 1;
        }
        if gj == right {
            j += 1;
        }
        left = right;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sawtooth_0_4() -> PiecewiseConstantFn {
        // 1 on [2k, 2k+1], -1 otherwise, restricted to a neighbourhood of (0, 4)
        PiecewiseConstantFn::scalar(
            vec![-1.0, 0.0, 1.0, 2.0, 3.0, 4.0, 5.0],
            vec![1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0],
        )
        .unwrap()
    }

    #[test]
    fn rejects_bad_construction() {
        assert!(PiecewiseConstantFn::scalar(vec![1.0, 1.0], vec![0.0; 3]).is_err());
        assert!(PiecewiseConstantFn::scalar(vec![1.0], vec![0.0; 3]).is_err());
        assert!(PiecewiseConstantFn::scalar(vec![], vec![f64::NAN]).is_err());
        assert!(PiecewiseConstantFn::new(2, vec![], vec![vec![1.0]]).is_err());
    }

    #[test]
    fn tv_examples() {
        let c = PiecewiseConstantFn::constant(vec![3.0, 4.0]).unwrap();
        assert_eq!(c.total_variation(None), 0.0);
        assert_eq!(c.total_variation(Some((-1.0, 1.0))), 0.0);

        let s = PiecewiseConstantFn::step(0.0, vec![0.0, 0.0], vec![3.0, 4.0]).unwrap();
        assert_eq!(s.total_variation(None), 5.0);

        // period-2 sawtooth: switches of height 2 at every integer, the ones
        // at 0 and 4 sit on the window boundary and are excluded
        let saw = sawtooth_0_4();
        assert_eq!(saw.total_variation(Some((0.0, 4.0))), 6.0);
        assert_eq!(saw.total_variation(Some((0.5, 2.5))), 4.0);
        assert_eq!(saw.total_variation(Some((-0.5, 4.5))), 10.0);
    }

    #[test]
    fn empty_window_tv_is_zero() {
        let saw = sawtooth_0_4();
        assert_eq!(saw.total_variation(Some((2.0, 2.0))), 0.0);
        assert_eq!(saw.total_variation(Some((3.0, 1.0))), 0.0);
    }

    #[test]
    fn l1_examples() {
        let v = vec![3.0, 4.0];
        let f = PiecewiseConstantFn::step(0.0, vec![0.0, 0.0], v.clone()).unwrap();
        let g = PiecewiseConstantFn::step(0.25, vec![0.0, 0.0], v).unwrap();
        assert_eq!(l1_distance(&f, &f, -1.0, 1.0).unwrap(), 0.0);
        assert!((l1_distance(&f, &g, -1.0, 1.0).unwrap() - 1.25).abs() < 1e-15);

    }

    #[test]
    fn l1_half_period_offset_sawtooth() {
        // period-1 square wave with values 0/1 on [k, k+1/2), and its copy
        // shifted by 1/2: they never agree, so the unit-window distance is 1.
        let mut bps = Vec::new();
        let mut vals = vec![0.0];
        for k in -2..=3 {
            bps.push(k as f64);
            vals.push(1.0);
            bps.push(k as f64 + 0.5);
            vals.push(0.0);
        }
        let f = PiecewiseConstantFn::scalar(bps.clone(), vals).unwrap();
        let g = f.translate(0.5);
        assert!((l1_distance(&f, &g, 0.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let f = PiecewiseConstantFn::constant(vec![1.0]).unwrap();
        let g = PiecewiseConstantFn::constant(vec![1.0, 2.0]).unwrap();
        assert!(matches!(
            l1_distance(&f, &g, 0.0, 1.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn integral_restrict_and_text() {
        let f = PiecewiseConstantFn::scalar(vec![0.0, 1.0, 3.0], vec![5.0, 1.0, 2.0, 0.0]).unwrap();
        assert_eq!(f.integral(0.0, 3.0), vec![5.0]);
        assert_eq!(f.integral(-1.0, 0.5), vec![5.5]);
        let r = f.restrict(0.5, 2.0).unwrap();
        assert_eq!(r.breakpoints(), &[1.0]);
        assert_eq!(r.left_tail(), &[1.0]);
        assert_eq!(r.right_tail(), &[2.0]);
        let back = PiecewiseConstantFn::from_text(&f.to_text()).unwrap();
        assert_eq!(back, f);
        assert!(PiecewiseConstantFn::from_text("dim 1\n0 1\n").is_err());
        assert!(PiecewiseConstantFn::from_text("1 2\n").is_err());
    }

    #[test]
    fn right_limit_at_breakpoints() {
        let f = PiecewiseConstantFn::scalar(vec![0.0], vec![1.0, 2.0]).unwrap();
        assert_eq!(f.eval_scalar(0.0), 2.0);
        assert_eq!(f.eval_scalar(-1e-300), 1.0);
    }

    fn arb_pcf(dim: usize) -> impl Strategy<Value = PiecewiseConstantFn> {
        (0usize..8).prop_flat_map(move |n| {
            (
                prop::collection::vec(-5.0f64..5.0, n),
                prop::collection::vec(-3.0f64..3.0, (n + 1) * dim),
            )
                .prop_map(move |(mut bps, vals)| {
                    bps.sort_by(|a, b| a.partial_cmp(b).unwrap());
                    bps.dedup();
                    let vals = vals[..(bps.len() + 1) * dim].to_vec();
                    PiecewiseConstantFn::from_flat(dim, bps, vals).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn l1_is_a_metric(f in arb_pcf(2), g in arb_pcf(2), h in arb_pcf(2)) {
            let (a, b) = (-4.0, 4.5);
            let fg = l1_distance(&f, &g, a, b).unwrap();
            let gf = l1_distance(&g, &f, a, b).unwrap();
            let gh = l1_distance(&g, &h, a, b).unwrap();
            let fh = l1_distance(&f, &h, a, b).unwrap();
            prop_assert!((fg - gf).abs() <= 1e-12);
            prop_assert!(fh <= fg + gh + 1e-12);
            prop_assert_eq!(l1_distance(&f, &f, a, b).unwrap(), 0.0);
        }

        #[test]
        fn zero_distance_iff_equal_on_window(f in arb_pcf(1), g in arb_pcf(1)) {
            let (a, b) = (-4.0, 4.5);
            let d = l1_distance(&f, &g, a, b).unwrap();
            let cuts = merge_breakpoints(&f, &g);
            let mut pts: Vec<f64> = vec![a];
            pts.extend(cuts.iter().copied().filter(|&x| x > a && x < b));
            pts.push(b);
            let differ = pts.windows(2).any(|w| {
                let m = 0.5 * (w[0] + w[1]);
                w[1] > w[0] && f.eval_scalar(m) != g.eval_scalar(m)
            });
            prop_assert_eq!(d == 0.0, !differ);
        }

        #[test]
        fn tv_subadditive_under_splitting(f in arb_pcf(2), c in -4.0f64..4.0) {
            let (a, b) = (-5.5, 5.5);
            let whole = f.total_variation(Some((a, b)));
            let parts = f.total_variation(Some((a, c))) + f.total_variation(Some((c, b)));
            prop_assert!(whole <= parts + 1e-12);
            if !f.breakpoints().contains(&c) {
                prop_assert!((whole - parts).abs() <= 1e-12);
            }
        }

        #[test]
        fn refine_preserves_pointwise_values(
            f in arb_pcf(2),
            extra in prop::collection::vec(-6.0f64..6.0, 0..6),
            samples in prop::collection::vec(-7.0f64..7.0, 1000),
        ) {
            let mut extra = extra;
            extra.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let r = f.refine(&extra);
            for x in samples {
                prop_assert_eq!(r.eval(x), f.eval(x));
            }
            prop_assert_eq!(r.simplify(), f.simplify());
        }
    }
}
