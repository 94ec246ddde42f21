//! One-dimensional quadrature used by the L1 comparisons.

/// Adaptive Simpson rule. Stops refining a panel once the Richardson error
/// estimate drops below `max(abs_floor, rel_tol * |panel estimate|)`.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_floor: f64,
) -> f64 {
    if b <= a {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, rel_tol, abs_floor, 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    rel_tol: f64,
    abs_floor: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let both = left + right;
    let err = (both - whole) / 15.0;
    if depth == 0 || err.abs() <= abs_floor.max(rel_tol * both.abs()) || (b - a) < 1e-15 * (1.0 + a.abs()) {
        return both + err;
    }
    simpson_step(f, a, m, fa, flm, fm, left, rel_tol, abs_floor / 2.0, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, rel_tol, abs_floor / 2.0, depth - 1)
}

/// Composite midpoint rule on `panels` equal panels.
pub fn midpoint<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    (0..panels).map(|i| f(a + (i as f64 + 0.5) * h)).sum::<f64>() * h
}

/// Result of a doubling quadrature sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Refined {
    pub value: f64,
    pub panels: usize,
    pub converged: bool,
}

/// Composite midpoint on `2^min_log2` panels, doubled until two successive
/// values differ by less than `rel_tol` relative (absolute floor 1e-15) or
/// `2^max_log2` panels are reached.
pub fn midpoint_refined<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    min_log2: u32,
    max_log2: u32,
    rel_tol: f64,
) -> Refined {
    let mut panels = 1usize << min_log2;
    let mut prev = midpoint(f, a, b, panels);
    while panels < (1usize << max_log2) {
        panels *= 2;
        let next = midpoint(f, a, b, panels);
        let scale = next.abs().max(prev.abs());
        if (next - prev).abs() <= rel_tol * scale || (next - prev).abs() <= 1e-15 {
            return Refined {
                value: next,
                panels,
                converged: true,
            };
        }
        prev = next;
    }
    Refined {
        value: prev,
        panels,
        converged: false,
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
