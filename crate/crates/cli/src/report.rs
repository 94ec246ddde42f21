//! CSV tables and SVG line plots.

use std::fmt::Write as _;

/// Column-ordered result table; cells are already formatted.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<String>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j].clone()).collect())
    }

    fn numeric(&self, name: &str) -> Option<Vec<f64>> {
        self.column(name)?.iter().map(|v| v.parse().ok()).collect()
    }

    /// `provenance` lines are written as `# ` comments ahead of the header.
    pub fn to_csv(&self, provenance: &[String]) -> String {
        let mut out = String::new();
        for p in provenance {
            let _ = writeln!(out, "# {p}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for r in &self.rows {
            let _ = writeln!(out, "{}", r.join(","));
        }
        out
    }
}

/// Shortest decimal that round-trips, never in exponent form.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub x: &'static str,
    pub y: &'static str,
    pub loglog: bool,
}

const W: f64 = 640.0;
const H: f64 = 420.0;
const PAD: f64 = 60.0;

/// Polyline plot of two table columns. `None` when the columns are missing,
/// have fewer than two points, or (on log axes) contain nonpositive values.
pub fn svg_plot(t: &Table, spec: &PlotSpec, title: &str) -> Option<String> {
    let xs = t.numeric(spec.x)?;
    let ys = t.numeric(spec.y)?;
    if xs.len() < 2 || xs.iter().chain(&ys).any(|v| !v.is_finite()) {
        return None;
    }
    let tf = |v: f64| if spec.loglog { v.log10() } else { v };
    if spec.loglog && xs.iter().chain(&ys).any(|&v| v <= 0.0) {
        return None;
    }
    let (px, py): (Vec<f64>, Vec<f64>) = (xs.iter().map(|&v| tf(v)).collect(), ys.iter().map(|&v| tf(v)).collect());
    let range = |v: &[f64]| {
        let lo = v.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi > lo {
            (lo, hi)
        } else {
            (lo - 0.5, hi + 0.5)
        }
    };
    let ((x0, x1), (y0, y1)) = (range(&px), range(&py));
    let sx = |v: f64| PAD + (v - x0) / (x1 - x0) * (W - 2.0 * PAD);
    let sy = |v: f64| H - PAD - (v - y0) / (y1 - y0) * (H - 2.0 * PAD);
    let label = |v: f64| if spec.loglog { format!("1e{v:.2}") } else { format!("{v:.4}") };
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, "<!-- fluxstab {} -->", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{}</text>"#,
        W / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r#"<path d="M{PAD} {PAD} V{} H{}" fill="none" stroke="black"/>"#,
        H - PAD,
        W - PAD
    );
    for (v, anchor, x, y) in [
        (x0, "start", PAD, H - PAD + 18.0),
        (x1, "end", W - PAD, H - PAD + 18.0),
    ] {
        let _ = writeln!(
            s,
            r#"<text x="{x}" y="{y}" text-anchor="{anchor}" font-family="sans-serif" font-size="11">{}</text>"#,
            label(v)
        );
    }
    for (v, y) in [(y0, H - PAD), (y1, PAD)] {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{y}" text-anchor="end" font-family="sans-serif" font-size="11">{}</text>"#,
            PAD - 6.0,
            label(v)
        );
    }
    let axes = if spec.loglog { " (log-log)" } else { "" };
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-family="sans-serif" font-size="12">{} vs {}{axes}</text>"#,
        W / 2.0,
        H - 16.0,
        escape(spec.y),
        escape(spec.x)
    );
    let pts: Vec<String> = px
        .iter()
        .zip(&py)
        .map(|(&x, &y)| format!("{:.2},{:.2}", sx(x), sy(y)))
        .collect();
    let _ = writeln!(
        s,
        r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="2"/>"#,
        pts.join(" ")
    );
    for p in &pts {
        let (x, y) = p.split_once(',').unwrap();
        let _ = writeln!(s, r#"<circle cx="{x}" cy="{y}" r="3" fill="steelblue"/>"#);
    }
    s.push_str("</svg>\n");
    Some(s)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> Table {
        let mut t = Table::new(&["c", "gap"]);
        for (c, g) in [(8.0, 1e-3), (16.0, 2.5e-4), (32.0, 6.25e-5)] {
            t.push(vec![num(c), num(g)]);
        }
        t
    }

    #[test]
    fn csv_layout() {
        let csv = table().to_csv(&["kind = x".into()]);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# kind = x");
        assert_eq!(lines[1], "c,gap");
        assert_eq!(lines[2], "8,0.001");
        assert_eq!(num(1e-20), "0.00000000000000000001");
        assert_eq!(num(0.1 + 0.2), "0.30000000000000004");
        assert_eq!(num(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn svg_plot_is_deterministic() {
        let spec = PlotSpec {
            x: "c",
            y: "gap",
            loglog: true,
        };
        let a = svg_plot(&table(), &spec, "gap & c").unwrap();
        assert_eq!(a, svg_plot(&table(), &spec, "gap & c").unwrap());
        assert!(a.contains("<polyline") && a.contains("gap &amp; c"));
        assert_eq!(a.matches("<circle").count(), 3);
        let mut neg = table();
        neg.rows[0][1] = "-1".into();
        assert!(svg_plot(&neg, &spec, "").is_none());
        assert!(svg_plot(&table(), &PlotSpec { x: "c", y: "missing", loglog: false }, "").is_none());
    }
}
