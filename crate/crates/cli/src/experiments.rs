//! Experiment kinds: declared parameters, validation, and execution.

use std::fmt;

use rayon::prelude::*;

use fluxstab::euler::{classical_limit_experiment, ClassicalLimitSetup, EulerState};
use fluxstab::evolution::{
    ft_evolve, linfty_bound_check, oleinik_tv_bound_check, one_sided_lipschitz_check, rexp_counterexample,
    FrontTrackingState, LaxOleinikProblem,
};
use fluxstab::linear::{hat_d_lin_with, Matrix, SphereSearch};
use fluxstab::metrics::{check_pgeneral, derivative_gap, lerrest_diagnostic, pl_slope_gap, StabilityReport};
use fluxstab::scalar::{hat_d_estimate, PiecewiseLinearFlux, RiemannFlux, RiemannSampler, ScalarFlux};
use fluxstab::suite::{DatumSpec, FluxSpec};
use fluxstab::Interval;

use crate::config::{ConfigError, ParamSpec, Params};
use crate::report::{num, PlotSpec, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Riemann,
    Evolve,
    Hatd,
    HatdLin,
    Tmain,
    Pgeneral,
    Linfty,
    OleinikTv,
    Rexp,
    ClassicalLimit,
    Lerrest,
}

impl Kind {
    pub const ALL: [Kind; 11] = [
        Kind::Riemann,
        Kind::Evolve,
        Kind::Hatd,
        Kind::HatdLin,
        Kind::Tmain,
        Kind::Pgeneral,
        Kind::Linfty,
        Kind::OleinikTv,
        Kind::Rexp,
        Kind::ClassicalLimit,
        Kind::Lerrest,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Kind::Riemann => "riemann",
            Kind::Evolve => "evolve",
            Kind::Hatd => "hatd",
            Kind::HatdLin => "hatd-lin",
            Kind::Tmain => "tmain",
            Kind::Pgeneral => "pgeneral",
            Kind::Linfty => "linfty",
            Kind::OleinikTv => "oleinik-tv",
            Kind::Rexp => "rexp",
            Kind::ClassicalLimit => "classical-limit",
            Kind::Lerrest => "lerrest",
        }
    }

    pub fn about(self) -> &'static str {
        match self {
            Kind::Riemann => "standard Riemann solution sampled at time t",
            Kind::Evolve => "front tracking or Lax-Oleinik solution at time t",
            Kind::Hatd => "sampled flux distance of two scalar fluxes",
            Kind::HatdLin => "distance of two constant-coefficient 2x2..4x4 systems",
            Kind::Tmain => "semigroup gap against L d(f,g) int TV",
            Kind::Pgeneral => "flux distance against the derivative gap",
            Kind::Linfty => "L-infinity flux bound for convex fluxes",
            Kind::OleinikTv => "Oleinik TV bound and one-sided Lipschitz check",
            Kind::Rexp => "sawtooth counterexample, integral over [0, 1]",
            Kind::ClassicalLimit => "relativistic vs classical p-system L1 gap over c",
            Kind::Lerrest => "trajectory error against summed one-step defects",
        }
    }

    pub fn params(self) -> &'static [ParamSpec] {
        const K: [ParamSpec; 2] = [
            ("k_lo", "-1", "lower end of the state interval K"),
            ("k_hi", "1", "upper end of K"),
        ];
        const SAMPLER: [ParamSpec; 3] = [
            ("grid", "64", "uniform grid size per axis of K x K"),
            ("near_diagonal", "64", "number of near-diagonal Riemann data"),
            ("gap", "0.001", "jump size of the near-diagonal data"),
        ];
        macro_rules! specs {
            ($($e:expr),* $(,)?) => {{
                const S: &[ParamSpec] = &[$($e),*];
                S
            }};
        }
        match self {
            Kind::Riemann => specs![
                ("f", "burgers", "flux descriptor"),
                ("nodes", "0", "0 for the smooth flux, else piecewise-linear node count"),
                ("ul", "1", "left state"),
                ("ur", "0", "right state"),
                ("t", "1", "time"),
                ("x_lo", "-2", "left end of the output grid"),
                ("x_hi", "2", "right end of the output grid"),
                ("samples", "401", "output points"),
                K[0],
                K[1],
            ],
            Kind::Evolve => specs![
                ("f", "burgers", "flux descriptor"),
                ("engine", "front-tracking", "front-tracking | lax-oleinik"),
                ("nodes", "129", "node count for front tracking"),
                ("datum", "pulse -0.5 0.5 0.8", "datum descriptor"),
                ("t", "1", "time"),
                ("x_lo", "-2", "left end of the output grid"),
                ("x_hi", "2", "right end of the output grid"),
                ("samples", "401", "output points"),
                K[0],
                K[1],
            ],
            Kind::Hatd => specs![
                ("f", "burgers", "flux descriptor"),
                ("g", "burgers + 0.05 u", "flux descriptor"),
                ("nodes", "0", "0 for smooth fluxes, else piecewise-linear node count"),
                SAMPLER[0],
                SAMPLER[1],
                SAMPLER[2],
                K[0],
                K[1],
            ],
            Kind::HatdLin => specs![
                ("A", "[[0,0],[0,1]]", "first matrix"),
                ("B", "[[0,0],[0,2]]", "second matrix"),
                ("samples", "4096", "sphere directions scanned"),
                ("starts", "8", "directions refined locally"),
                ("ascent_steps", "200", "gradient steps per start (n >= 3)"),
            ],
            Kind::Tmain => specs![
                ("f", "burgers", "flux descriptor"),
                ("g", "burgers + 0.05 u", "flux descriptor"),
                ("nodes", "129", "piecewise-linear node count"),
                ("datum", "pulse -0.5 0.5 0.8", "datum descriptor"),
                ("t", "0.25,0.5,1", "times"),
                ("l_f", "1", "Lipschitz constant of S^f"),
                SAMPLER[0],
                SAMPLER[1],
                SAMPLER[2],
                K[0],
                K[1],
            ],
            Kind::Pgeneral => specs![
                ("f", "burgers", "smooth flux descriptor"),
                ("g", "scaled_burgers 1.3", "smooth flux descriptor"),
                ("u_samples", "4096", "states for the derivative gap"),
                SAMPLER[0],
                SAMPLER[1],
                SAMPLER[2],
                K[0],
                K[1],
            ],
            Kind::Linfty => specs![
                ("f", "burgers", "convex flux descriptor"),
                ("g", "burgers + 0.05 u", "convex flux descriptor"),
                ("datum", "sawtooth 2", "datum descriptor"),
                ("t", "0.25,0.5,1", "times"),
                ("a", "0", "left end of the window"),
                ("b", "1", "right end of the window"),
                K[0],
                K[1],
            ],
            Kind::OleinikTv => specs![
                ("f", "burgers", "convex flux descriptor"),
                ("datum", "sawtooth 3", "datum descriptor"),
                ("t", "0.125,0.25,0.5", "times"),
                ("a", "0", "left end of the window"),
                ("b", "1", "right end of the window"),
                ("pairs", "10000", "random pairs for the Lipschitz check"),
                K[0],
                K[1],
            ],
            Kind::Rexp => specs![("n", "1,2,3,4,5,6", "sawtooth levels")],
            Kind::ClassicalLimit => specs![
                ("sigma", "1", "sound speed"),
                ("c_list", "8,16,32,64", "light speeds"),
                ("cells", "2000", "grid cells"),
                ("t", "0.2", "final time"),
                ("half_width", "1.5", "grid covers [-half_width, half_width]"),
                ("cfl", "0.45", "CFL number"),
                ("left", "2,0", "left state rho,q"),
                ("right", "1,0", "right state rho,q"),
            ],
            Kind::Lerrest => specs![
                ("f", "burgers", "flux descriptor"),
                ("g", "burgers + 0.05 u", "flux descriptor"),
                ("nodes", "129", "piecewise-linear node count"),
                ("datum", "pulse -0.5 0.5 0.8", "datum descriptor"),
                ("h", "0.25,0.125,0.0625", "step sizes"),
                ("t", "1", "final time, a multiple of every h"),
                ("l_f", "1", "Lipschitz constant of S^f"),
                K[0],
                K[1],
            ],
        }
    }

    /// Table columns followed by summary keys; the names checks may refer to.
    pub fn outputs(self) -> Vec<&'static str> {
        match self {
            Kind::Riemann => vec!["x", "u", "waves"],
            Kind::Evolve => vec!["x", "u", "tv"],
            Kind::Hatd => vec!["estimate", "argmax_ul", "argmax_ur", "derivative_gap", "samples"],
            Kind::HatdLin => vec!["value", "op_norm_gap", "argmax", "samples"],
            Kind::Tmain => StabilityReport::CSV_HEADER.split(',').collect(),
            Kind::Pgeneral => vec!["lhs", "rhs", "argmax_ul", "argmax_ur", "holds"],
            Kind::Linfty => vec!["t", "lhs", "rhs", "holds", "panels"],
            Kind::OleinikTv => vec!["t", "tv", "bound", "tv_holds", "max_excess", "lipschitz_holds"],
            Kind::Rexp => vec!["n", "t", "l1_distance", "panels"],
            Kind::ClassicalLimit => vec!["c", "l1_gap", "mass_residual", "momentum_residual", "slope", "lambda_hat"],
            Kind::Lerrest => vec!["h", "steps", "lhs", "rhs", "holds"],
        }
    }

    fn plot(self) -> Option<PlotSpec> {
        let p = |x, y, loglog| Some(PlotSpec { x, y, loglog });
        match self {
            Kind::Riemann | Kind::Evolve => p("x", "u", false),
            Kind::Tmain => p("t", "l1_gap", true),
            Kind::Linfty => p("t", "lhs", true),
            Kind::OleinikTv => p("t", "tv", true),
            Kind::Rexp => p("n", "l1_distance", false),
            Kind::ClassicalLimit => p("c", "l1_gap", true),
            Kind::Lerrest => p("h", "rhs", true),
            Kind::Hatd | Kind::HatdLin | Kind::Pgeneral => None,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Kind {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Kind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| ConfigError::new(format!("unknown experiment kind '{s}'")))
    }
}

pub struct Outcome {
    pub table: Table,
    pub summary: Vec<(String, String)>,
    pub plot: Option<PlotSpec>,
    pub json: Option<String>,
}

impl Outcome {
    fn new(kind: Kind, table: Table) -> Self {
        Outcome {
            table,
            summary: Vec::new(),
            plot: kind.plot(),
            json: None,
        }
    }

    fn note(mut self, key: &str, value: impl ToString) -> Self {
        self.summary.push((key.to_string(), value.to_string()));
        self
    }

    /// Values of a table column, or the single summary value of that name.
    pub fn values(&self, name: &str) -> Vec<String> {
        if let Some(col) = self.table.column(name) {
            return col;
        }
        self.summary
            .iter()
            .filter(|(k, _)| k == name)
            .map(|(_, v)| v.clone())
            .collect()
    }
}

pub type Job = Box<dyn FnOnce(u64) -> fluxstab::Result<Outcome> + Send>;

fn cfg<T>(r: fluxstab::Result<T>) -> Result<T, ConfigError> {
    r.map_err(|e| match e {
        fluxstab::Error::Parse { msg, .. } => ConfigError::new(msg),
        other => ConfigError::new(other.to_string()),
    })
}

fn domain(p: &Params) -> Result<Interval, ConfigError> {
    cfg(Interval::new(p.f64("k_lo")?, p.f64("k_hi")?))
}

fn sampler(p: &Params) -> Result<RiemannSampler, ConfigError> {
    let s = RiemannSampler {
        grid: p.usize("grid")?,
        near_diagonal: p.usize("near_diagonal")?,
        gap: p.f64("gap")?,
    };
    if s.grid < 2 || s.gap < 0.0 {
        return Err(ConfigError::new("need grid >= 2 and gap >= 0"));
    }
    Ok(s)
}

fn smooth(p: &Params, key: &str, k: Interval) -> Result<ScalarFlux, ConfigError> {
    cfg(FluxSpec::parse(p.str(key)).and_then(|s| s.smooth(k))).map_err(|e| ConfigError::new(format!("{key}: {}", e.msg)))
}

fn piecewise(p: &Params, key: &str, k: Interval, nodes: usize) -> Result<PiecewiseLinearFlux, ConfigError> {
    if nodes < 2 {
        return Err(ConfigError::new("nodes must be at least 2"));
    }
    cfg(FluxSpec::parse(p.str(key)).and_then(|s| s.piecewise_linear(k, nodes)))
        .map_err(|e| ConfigError::new(format!("{key}: {}", e.msg)))
}

fn datum(p: &Params) -> Result<DatumSpec, ConfigError> {
    cfg(DatumSpec::parse(p.str("datum"))).map_err(|e| ConfigError::new(format!("datum: {}", e.msg)))
}

fn window(p: &Params) -> Result<(f64, f64), ConfigError> {
    let (a, b) = (p.f64("a")?, p.f64("b")?);
    if a < b {
        Ok((a, b))
    } else {
        Err(ConfigError::new(format!("window [{a}, {b}] is empty")))
    }
}

fn grid(p: &Params) -> Result<Vec<f64>, ConfigError> {
    let (lo, hi, n) = (p.f64("x_lo")?, p.f64("x_hi")?, p.usize("samples")?);
    if !(lo < hi) || n < 2 {
        return Err(ConfigError::new("output grid needs x_lo < x_hi and samples >= 2"));
    }
    Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
}

fn state(p: &Params, key: &str) -> Result<EulerState, ConfigError> {
    match p.f64_list(key)?.as_slice() {
        &[rho, q] if rho > 0.0 => Ok(EulerState::new(rho, q)),
        _ => Err(ConfigError::new(format!("{key} must be 'rho,q' with rho > 0"))),
    }
}

fn check_datum_in(d: &DatumSpec, k: Interval) -> Result<(), ConfigError> {
    let (lo, hi) = cfg(d.initial_data())?.range();
    if k.contains(lo) && k.contains(hi) {
        Ok(())
    } else {
        Err(ConfigError::new(format!(
            "datum takes values in [{lo}, {hi}], outside K = [{}, {}]",
            k.lo, k.hi
        )))
    }
}

/// Resolves and validates everything the run needs; errors here are configuration errors.
pub fn prepare(kind: Kind, p: &Params) -> Result<Job, ConfigError> {
    let job: Job = match kind {
        Kind::Riemann => {
            let k = domain(p)?;
            let nodes = p.usize("nodes")?;
            let (ul, ur, t) = (p.f64("ul")?, p.f64("ur")?, p.positive("t")?);
            cfg(k.check(ul).and(k.check(ur)))?;
            let xs = grid(p)?;
            let fan = if nodes == 0 {
                cfg(smooth(p, "f", k)?.solve_riemann(ul, ur))?
            } else {
                cfg(piecewise(p, "f", k, nodes)?.solve_riemann(ul, ur))?
            };
            Box::new(move |_| {
                let mut t_out = Table::new(&["x", "u"]);
                for x in xs {
                    t_out.push(vec![num(x), num(fan.value_at(x / t))]);
                }
                let speeds: Vec<String> = fan.speeds().into_iter().map(num).collect();
                Ok(Outcome::new(kind, t_out)
                    .note("waves", fan.waves.len())
                    .note("speeds", speeds.join(" ")))
            })
        }
        Kind::Evolve => {
            let k = domain(p)?;
            let d = datum(p)?;
            check_datum_in(&d, k)?;
            let t = p.positive("t")?;
            let xs = grid(p)?;
            match p.str("engine") {
                "front-tracking" => {
                    let f = piecewise(p, "f", k, p.usize("nodes")?)?;
                    let pad = f.lambda_hat() * t + 1.0;
                    let u0 = cfg(d.pcf((xs[0] - pad, xs[xs.len() - 1] + pad)))?;
                    cfg(FrontTrackingState::new(&f, &u0))?;
                    Box::new(move |_| {
                        let s = ft_evolve(&f, &u0, t)?;
                        let prof = s.profile();
                        let mut t_out = Table::new(&["x", "u"]);
                        for x in xs {
                            t_out.push(vec![num(x), num(prof.eval_scalar(x))]);
                        }
                        Ok(Outcome::new(kind, t_out)
                            .note("tv", num(s.total_variation()))
                            .note("events", s.events)
                            .note("fronts", s.fronts.len()))
                    })
                }
                "lax-oleinik" => {
                    let prob = cfg(LaxOleinikProblem::new(smooth(p, "f", k)?, cfg(d.initial_data())?))?;
                    Box::new(move |_| {
                        let us: Vec<f64> = xs.par_iter().map(|&x| prob.eval(t, x)).collect::<fluxstab::Result<_>>()?;
                        let mut t_out = Table::new(&["x", "u"]);
                        let mut tv = 0.0;
                        for (i, (x, u)) in xs.iter().zip(&us).enumerate() {
                            if i > 0 {
                                tv += (u - us[i - 1]).abs();
                            }
                            t_out.push(vec![num(*x), num(*u)]);
                        }
                        Ok(Outcome::new(kind, t_out).note("tv", num(tv)))
                    })
                }
                other => return Err(ConfigError::new(format!("engine '{other}' is not front-tracking or lax-oleinik"))),
            }
        }
        Kind::Hatd => {
            let k = domain(p)?;
            let s = sampler(p)?;
            let nodes = p.usize("nodes")?;
            const COLUMNS: [&str; 5] = ["estimate", "argmax_ul", "argmax_ur", "derivative_gap", "samples"];
            let row = move |r: fluxstab::scalar::FluxDistanceReport, gap: f64| {
                let mut t = Table::new(&COLUMNS);
                t.push(vec![
                    num(r.estimate),
                    num(r.argmax.0),
                    num(r.argmax.1),
                    num(gap),
                    r.samples.to_string(),
                ]);
                Outcome::new(kind, t)
            };
            if nodes == 0 {
                let (f, g) = (smooth(p, "f", k)?, smooth(p, "g", k)?);
                Box::new(move |_| Ok(row(hat_d_estimate(&f, &g, &s)?, derivative_gap(&f, &g, 4096)?)))
            } else {
                let (f, g) = (piecewise(p, "f", k, nodes)?, piecewise(p, "g", k, nodes)?);
                Box::new(move |_| Ok(row(hat_d_estimate(&f, &g, &s)?, pl_slope_gap(&f, &g))))
            }
        }
        Kind::HatdLin => {
            let parse = |key: &str| -> Result<Matrix, ConfigError> {
                p.str(key)
                    .parse::<Matrix>()
                    .map_err(|e| ConfigError::new(format!("{key}: {e}")))
            };
            let (a, b) = (parse("A")?, parse("B")?);
            if a.n() != b.n() || a.n() > 4 {
                return Err(ConfigError::new("A and B must have the same size, at most 4"));
            }
            let search = SphereSearch {
                samples: p.usize("samples")?.max(1),
                starts: p.usize("starts")?,
                ascent_steps: p.usize("ascent_steps")?,
            };
            Box::new(move |_| {
                let r = hat_d_lin_with(&a, &b, &search)?;
                let mut t = Table::new(&["value", "op_norm_gap", "argmax", "samples"]);
                let arg: Vec<String> = r.argmax.iter().map(|&v| num(v)).collect();
                t.push(vec![num(r.value), num(r.op_norm_gap), arg.join(";"), r.samples.to_string()]);
                Ok(Outcome::new(kind, t))
            })
        }
        Kind::Tmain => {
            let k = domain(p)?;
            let nodes = p.usize("nodes")?;
            let (f, g) = (piecewise(p, "f", k, nodes)?, piecewise(p, "g", k, nodes)?);
            let d = datum(p)?;
            check_datum_in(&d, k)?;
            let ts = p.positive_list("t")?;
            let pad = f.lambda_hat().max(g.lambda_hat()) * ts.iter().copied().fold(0.0, f64::max) + 1.0;
            let u0 = cfg(d.pcf((-pad, 1.0 + pad)))?;
            let l_f = p.f64("l_f")?;
            if !(l_f >= 1.0) {
                return Err(ConfigError::new("l_f must be at least 1"));
            }
            let s = sampler(p)?;
            let label = p.str("datum").to_string();
            Box::new(move |_| {
                let base = StabilityReport::new(&f, &g, &s, l_f)?;
                let runs = ts
                    .par_iter()
                    .map(|&t| {
                        let mut r = base.clone();
                        r.add_run(&f, &g, &label, &u0, t).cloned()
                    })
                    .collect::<fluxstab::Result<Vec<_>>>()?;
                let mut report = base;
                report.semigroup_gaps = runs;
                let mut t = Table::new(&StabilityReport::CSV_HEADER.split(',').collect::<Vec<_>>());
                for line in report.to_csv_rows().lines() {
                    t.push(line.split(',').map(str::to_string).collect());
                }
                let mut out = Outcome::new(kind, t).note("all_hold", report.all_hold());
                out.json = Some(report.to_json()?);
                Ok(out)
            })
        }
        Kind::Pgeneral => {
            let k = domain(p)?;
            let (f, g) = (smooth(p, "f", k)?, smooth(p, "g", k)?);
            let s = sampler(p)?;
            let n = p.usize("u_samples")?;
            Box::new(move |_| {
                let r = check_pgeneral(&f, &g, &s, n)?;
                let mut t = Table::new(&["lhs", "rhs", "argmax_ul", "argmax_ur", "holds"]);
                t.push(vec![
                    num(r.lhs),
                    num(r.rhs),
                    num(r.argmax.0),
                    num(r.argmax.1),
                    r.holds.to_string(),
                ]);
                Ok(Outcome::new(kind, t))
            })
        }
        Kind::Linfty => {
            let k = domain(p)?;
            let (f, g) = (smooth(p, "f", k)?, smooth(p, "g", k)?);
            let u0 = cfg(datum(p)?.initial_data())?;
            cfg(LaxOleinikProblem::new(f.clone(), u0.clone()))?;
            cfg(LaxOleinikProblem::new(g.clone(), u0.clone()))?;
            let ts = p.positive_list("t")?;
            let (a, b) = window(p)?;
            Box::new(move |_| {
                let rows = ts
                    .par_iter()
                    .map(|&t| linfty_bound_check(&f, &g, &u0, t, a, b))
                    .collect::<fluxstab::Result<Vec<_>>>()?;
                let mut t_out = Table::new(&["t", "lhs", "rhs", "holds", "panels"]);
                for (t, r) in ts.iter().zip(rows) {
                    t_out.push(vec![num(*t), num(r.lhs), num(r.rhs), r.holds.to_string(), r.panels.to_string()]);
                }
                Ok(Outcome::new(kind, t_out))
            })
        }
        Kind::OleinikTv => {
            let k = domain(p)?;
            let prob = cfg(LaxOleinikProblem::new(smooth(p, "f", k)?, cfg(datum(p)?.initial_data())?))?;
            let ts = p.positive_list("t")?;
            let (a, b) = window(p)?;
            let pairs = p.usize("pairs")?;
            Box::new(move |seed| {
                let rows = ts
                    .iter()
                    .enumerate()
                    .map(|(i, &t)| {
                        let tv = oleinik_tv_bound_check(&prob, t, a, b)?;
                        let lip = one_sided_lipschitz_check(&prob, t, a, b, pairs, seed.wrapping_add(i as u64))?;
                        Ok((t, tv, lip))
                    })
                    .collect::<fluxstab::Result<Vec<_>>>()?;
                let mut t_out = Table::new(&["t", "tv", "bound", "tv_holds", "max_excess", "lipschitz_holds"]);
                for (t, tv, lip) in rows {
                    t_out.push(vec![
                        num(t),
                        num(tv.tv),
                        num(tv.bound),
                        tv.holds.to_string(),
                        num(lip.max_excess),
                        lip.holds.to_string(),
                    ]);
                }
                Ok(Outcome::new(kind, t_out))
            })
        }
        Kind::Rexp => {
            let ns = p.f64_list("n")?;
            if let Some(bad) = ns.iter().find(|&&n| !(1.0..=20.0).contains(&n) || n.fract() != 0.0) {
                return Err(ConfigError::new(format!("n: levels must be integers in [1, 20], got {bad}")));
            }
            let ns: Vec<u32> = ns.into_iter().map(|n| n as u32).collect();
            Box::new(move |_| {
                let rows = ns
                    .par_iter()
                    .map(|&n| rexp_counterexample(n))
                    .collect::<fluxstab::Result<Vec<_>>>()?;
                let mut t = Table::new(&["n", "t", "l1_distance", "panels"]);
                for r in rows {
                    t.push(vec![
                        r.n.to_string(),
                        num(r.t),
                        num(r.l1_distance_on_unit_interval),
                        r.panels.to_string(),
                    ]);
                }
                Ok(Outcome::new(kind, t))
            })
        }
        Kind::ClassicalLimit => {
            let setup = ClassicalLimitSetup {
                sigma: p.positive("sigma")?,
                left: state(p, "left")?,
                right: state(p, "right")?,
                t_end: p.positive("t")?,
                cells: p.usize("cells")?,
                half_width: p.positive("half_width")?,
                cfl: p.positive("cfl")?,
            };
            if setup.cells < 2 || setup.cfl > 1.0 {
                return Err(ConfigError::new("need cells >= 2 and cfl <= 1"));
            }
            let cs = p.positive_list("c_list")?;
            if let Some(bad) = cs.iter().find(|&&c| c <= setup.sigma) {
                return Err(ConfigError::new(format!("light speed {bad} must exceed sigma")));
            }
            Box::new(move |_| {
                let r = classical_limit_experiment(&cs, &setup)?;
                let mut t = Table::new(&["c", "l1_gap", "mass_residual", "momentum_residual"]);
                for row in &r.rows {
                    t.push(vec![
                        num(row.c),
                        num(row.l1_gap),
                        num(row.mass_residual),
                        num(row.momentum_residual),
                    ]);
                }
                Ok(Outcome::new(kind, t)
                    .note("slope", num(r.slope))
                    .note("lambda_hat", num(r.lambda_hat)))
            })
        }
        Kind::Lerrest => {
            let k = domain(p)?;
            let nodes = p.usize("nodes")?;
            let (f, g) = (piecewise(p, "f", k, nodes)?, piecewise(p, "g", k, nodes)?);
            let d = datum(p)?;
            check_datum_in(&d, k)?;
            let t_end = p.positive("t")?;
            let hs = p.positive_list("h")?;
            for &h in &hs {
                let m = (t_end / h).round();
                if m < 1.0 || (m * h - t_end).abs() > 1e-9 * t_end {
                    return Err(ConfigError::new(format!("t = {t_end} is not a multiple of h = {h}")));
                }
            }
            let pad = f.lambda_hat().max(g.lambda_hat()) * t_end + 1.0;
            let u0 = cfg(d.pcf((-pad, 1.0 + pad)))?;
            let l_f = p.f64("l_f")?;
            Box::new(move |_| {
                let rows = hs
                    .par_iter()
                    .map(|&h| lerrest_diagnostic(&f, &g, &u0, h, t_end, l_f))
                    .collect::<fluxstab::Result<Vec<_>>>()?;
                let mut t = Table::new(&["h", "steps", "lhs", "rhs", "holds"]);
                for (h, r) in hs.iter().zip(rows) {
                    t.push(vec![
                        num(*h),
                        r.steps.to_string(),
                        num(r.lhs),
                        num(r.riemann_sum_rhs),
                        r.holds.to_string(),
                    ]);
                }
                Ok(Outcome::new(kind, t))
            })
        }
    };
    Ok(job)
}
