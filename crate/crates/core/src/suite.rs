//! Named fluxes and data, and the bundled experiment cases.
//!
//! Flux descriptors:
//!
//! ```text
//! burgers | scaled_burgers ALPHA | linear A | convex_poly C2 C3 C4
//! table U0:F0 U1:F1 ...          piecewise-linear node table
//! ```
//!
//! Any built-in may carry a trailing `+ EPS u`.
//!
//! Datum descriptors:
//!
//! ```text
//! pulse A B H                    H on [A, B), 0 elsewhere
//! step X0 UL UR
//! sawtooth N                     +-1 square wave of period 2^(1-N)
//! square PERIOD LEN HIGH LOW OFFSET
//! pcf V0 X1 V1 X2 V2 ...         left tail V0, value Vi from Xi on
//! ```

use crate::error::{Error, Result};
use crate::evolution::lax_oleinik::InitialData;
use crate::interval::Interval;
use crate::pwfun::PiecewiseConstantFn;
use crate::scalar::flux::ScalarFlux;
use crate::scalar::piecewise_linear::PiecewiseLinearFlux;

#[derive(Debug, Clone, PartialEq)]
pub enum FluxBase {
    Burgers,
    ScaledBurgers(f64),
    Linear(f64),
    ConvexPoly(f64, f64, f64),
    Table(Vec<f64>, Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FluxSpec {
    pub base: FluxBase,
    pub eps: f64,
}

pub const FLUX_NAMES: &[(&str, &str)] = &[
    ("burgers", "u^2/2"),
    ("scaled_burgers ALPHA", "ALPHA u^2/2"),
    ("linear A", "A u"),
    ("convex_poly C2 C3 C4", "C2 u^2 + C3 u^3 + C4 u^4"),
    ("table U:F ...", "piecewise-linear interpolant of the nodes"),
];

pub const DATUM_NAMES: &[(&str, &str)] = &[
    ("pulse A B H", "H on [A, B), 0 elsewhere"),
    ("step X0 UL UR", "single jump at X0"),
    ("sawtooth N", "+-1 square wave, period 2^(1-N), high on the first half"),
    ("square PERIOD LEN HIGH LOW OFFSET", "periodic square wave"),
    ("pcf V0 X1 V1 ...", "general piecewise-constant datum"),
];

fn num(tok: Option<&str>, what: &str, desc: &str) -> Result<f64> {
    let tok = tok.ok_or_else(|| Error::Parse {
        line: 0,
        msg: format!("'{desc}': missing {what}"),
    })?;
    tok.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Parse {
            line: 0,
            msg: format!("'{desc}': {what} '{tok}' is not a finite number"),
        })
}

fn no_more<'a>(mut toks: impl Iterator<Item = &'a str>, desc: &str) -> Result<()> {
    match toks.next() {
        None => Ok(()),
        Some(t) => Err(Error::Parse {
            line: 0,
            msg: format!("'{desc}': unexpected token '{t}'"),
        }),
    }
}

impl FluxSpec {
    pub fn parse(desc: &str) -> Result<Self> {
        let (head, eps) = match desc.split_once('+') {
            Some((h, tail)) => {
                let tail = tail.trim();
                let coeff = tail.strip_suffix('u').ok_or_else(|| Error::Parse {
                    line: 0,
                    msg: format!("'{desc}': expected '+ EPS u'"),
                })?;
                (h, num(Some(coeff.trim()), "linear coefficient", desc)?)
            }
            None => (desc, 0.0),
        };
        let mut toks = head.split_whitespace();
        let name = toks.next().ok_or_else(|| Error::Parse {
            line: 0,
            msg: "empty flux descriptor".into(),
        })?;
        let base = match name {
            "burgers" => FluxBase::Burgers,
            "scaled_burgers" => FluxBase::ScaledBurgers(num(toks.next(), "ALPHA", desc)?),
            "linear" => FluxBase::Linear(num(toks.next(), "A", desc)?),
            "convex_poly" => FluxBase::ConvexPoly(
                num(toks.next(), "C2", desc)?,
                num(toks.next(), "C3", desc)?,
                num(toks.next(), "C4", desc)?,
            ),
            "table" => {
                let (mut us, mut fs) = (Vec::new(), Vec::new());
                for tok in toks.by_ref() {
                    let (u, f) = tok.split_once(':').ok_or_else(|| Error::Parse {
                        line: 0,
                        msg: format!("'{desc}': node '{tok}' is not U:F"),
                    })?;
                    us.push(num(Some(u), "node", desc)?);
                    fs.push(num(Some(f), "node value", desc)?);
                }
                FluxBase::Table(us, fs)
            }
            other => {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("unknown flux '{other}'"),
                })
            }
        };
        no_more(toks, desc)?;
        Ok(FluxSpec { base, eps })
    }

    /// Smooth flux on `k`; node tables have no smooth form.
    pub fn smooth(&self, k: Interval) -> Result<ScalarFlux> {
        let f = match &self.base {
            FluxBase::Burgers => ScalarFlux::burgers(k),
            FluxBase::ScaledBurgers(a) => ScalarFlux::scaled_burgers(*a, k)?,
            FluxBase::Linear(a) => ScalarFlux::linear(*a, k)?,
            FluxBase::ConvexPoly(c2, c3, c4) => ScalarFlux::convex_poly(*c2, *c3, *c4, k)?,
            FluxBase::Table(..) => {
                return Err(Error::UnsupportedFlux("a node table is only piecewise linear".into()))
            }
        };
        if self.eps != 0.0 {
            f.with_linear_term(self.eps)
        } else {
            Ok(f)
        }
    }

    /// Piecewise-linear flux: the table itself, or the smooth flux sampled at `nodes` points of `k`.
    pub fn piecewise_linear(&self, k: Interval, nodes: usize) -> Result<PiecewiseLinearFlux> {
        let f = match &self.base {
            FluxBase::Table(us, fs) => PiecewiseLinearFlux::new("table", us.clone(), fs.clone())?,
            _ => {
                let base = FluxSpec {
                    base: self.base.clone(),
                    eps: 0.0,
                };
                PiecewiseLinearFlux::sample(&base.smooth(k)?, nodes)?
            }
        };
        if self.eps != 0.0 {
            f.with_linear_term(self.eps)
        } else {
            Ok(f)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum DatumSpec {
    Pcf(PiecewiseConstantFn),
    Square {
        period: f64,
        high_len: f64,
        high: f64,
        low: f64,
        offset: f64,
    },
}

impl DatumSpec {
    pub fn parse(desc: &str) -> Result<Self> {
        let mut toks = desc.split_whitespace();
        let name = toks.next().ok_or_else(|| Error::Parse {
            line: 0,
            msg: "empty datum descriptor".into(),
        })?;
        let bad = |e: Error| Error::Parse {
            line: 0,
            msg: format!("'{desc}': {e}"),
        };
        let d = match name {
            "pulse" => {
                let a = num(toks.next(), "A", desc)?;
                let b = num(toks.next(), "B", desc)?;
                let h = num(toks.next(), "H", desc)?;
                DatumSpec::Pcf(PiecewiseConstantFn::scalar(vec![a, b], vec![0.0, h, 0.0]).map_err(bad)?)
            }
            "step" => {
                let x0 = num(toks.next(), "X0", desc)?;
                let l = num(toks.next(), "UL", desc)?;
                let r = num(toks.next(), "UR", desc)?;
                DatumSpec::Pcf(PiecewiseConstantFn::step(x0, vec![l], vec![r]).map_err(bad)?)
            }
            "sawtooth" => {
                let n = num(toks.next(), "N", desc)?;
                if n < 1.0 || n > 30.0 || n.fract() != 0.0 {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("'{desc}': N must be an integer in [1, 30]"),
                    });
                }
                let half = 0.5f64.powi(n as i32);
                DatumSpec::Square {
                    period: 2.0 * half,
                    high_len: half,
                    high: 1.0,
                    low: -1.0,
                    offset: 0.0,
                }
            }
            "square" => {
                let period = num(toks.next(), "PERIOD", desc)?;
                let high_len = num(toks.next(), "LEN", desc)?;
                let high = num(toks.next(), "HIGH", desc)?;
                let low = num(toks.next(), "LOW", desc)?;
                let offset = num(toks.next(), "OFFSET", desc)?;
                if !(period > 0.0 && high_len > 0.0 && high_len < period) {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("'{desc}': need 0 < LEN < PERIOD"),
                    });
                }
                DatumSpec::Square {
                    period,
                    high_len,
                    high,
                    low,
                    offset,
                }
            }
            "pcf" => {
                let rest: Vec<&str> = toks.by_ref().collect();
                if rest.is_empty() || rest.len() % 2 == 0 {
                    return Err(Error::Parse {
                        line: 0,
                        msg: format!("'{desc}': expected V0 followed by X V pairs"),
                    });
                }
                let mut vals = vec![num(Some(rest[0]), "V0", desc)?];
                let mut bps = Vec::new();
                for pair in rest[1..].chunks(2) {
                    bps.push(num(Some(pair[0]), "X", desc)?);
                    vals.push(num(Some(pair[1]), "V", desc)?);
                }
                DatumSpec::Pcf(PiecewiseConstantFn::scalar(bps, vals).map_err(bad)?)
            }
            other => {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("unknown datum '{other}'"),
                })
            }
        };
        no_more(toks, desc)?;
        Ok(d)
    }

    pub fn initial_data(&self) -> Result<InitialData> {
        match self {
            DatumSpec::Pcf(p) => InitialData::pcf(p.clone()),
            &DatumSpec::Square {
                period,
                high_len,
                high,
                low,
                offset,
            } => Ok(InitialData::PeriodicSquare {
                period,
                high_len,
                high,
                low,
                offset,
            }),
        }
    }

    /// Piecewise-constant form; periodic data are cut to `window` and
    /// extended by their value at the nearest end.
    pub fn pcf(&self, window: (f64, f64)) -> Result<PiecewiseConstantFn> {
        match self {
            DatumSpec::Pcf(p) => Ok(p.clone()),
            DatumSpec::Square { .. } => self.initial_data()?.to_pcf(window.0, window.1),
        }
    }
}

fn k_unit() -> Interval {
    Interval { lo: -1.0, hi: 1.0 }
}

/// The flux domain used by every bundled case.
pub fn bundled_domain() -> Interval {
    k_unit()
}

/// Uniformly convex smooth pairs on `[-1, 1]`.
pub fn convex_pairs() -> Vec<(ScalarFlux, ScalarFlux)> {
    let k = k_unit();
    let b = ScalarFlux::burgers(k);
    vec![
        (b.clone(), ScalarFlux::scaled_burgers(1.3, k).unwrap()),
        (b.clone(), b.with_linear_term(0.05).unwrap()),
        (b.clone(), ScalarFlux::convex_poly(0.5, 0.1, 0.05, k).unwrap()),
        (
            ScalarFlux::scaled_burgers(0.7, k).unwrap(),
            ScalarFlux::scaled_burgers(1.5, k).unwrap(),
        ),
        (
            ScalarFlux::convex_poly(0.5, 0.0, 0.1, k).unwrap(),
            ScalarFlux::convex_poly(0.6, 0.05, 0.1, k).unwrap(),
        ),
    ]
}

pub fn linear_pairs() -> Vec<(ScalarFlux, ScalarFlux)> {
    let k = k_unit();
    [(0.5, -0.25), (1.0, 0.2), (-0.3, -0.9)]
        .into_iter()
        .map(|(a, b)| (ScalarFlux::linear(a, k).unwrap(), ScalarFlux::linear(b, k).unwrap()))
        .collect()
}

#[derive(Debug, Clone)]
pub struct SmoothCase {
    pub name: String,
    pub f: ScalarFlux,
    pub g: ScalarFlux,
    pub datum: InitialData,
    pub t: f64,
    pub a: f64,
    pub b: f64,
}

/// Smooth convex pairs with sawtooth and pulse data. The first four cases
/// compare Burgers with Burgers minus `u` on the sawtooth at `t = 2^-n`,
/// where the two solutions are translates and the gap on `[0, 1]` is 1.
pub fn smooth_suite() -> Vec<SmoothCase> {
    let k = k_unit();
    let burgers = ScalarFlux::burgers(k);
    let shifted = burgers.with_linear_term(-1.0).unwrap();
    let pulse = |a: f64, b: f64, h: f64| {
        InitialData::Pcf(PiecewiseConstantFn::scalar(vec![a, b], vec![0.0, h, 0.0]).unwrap())
    };
    let mut out: Vec<SmoothCase> = (1..=4)
        .map(|n| SmoothCase {
            name: format!("burgers vs burgers-u, sawtooth {n}"),
            f: burgers.clone(),
            g: shifted.clone(),
            datum: InitialData::sawtooth(n),
            t: 0.5f64.powi(n as i32),
            a: 0.0,
            b: 1.0,
        })
        .collect();
    let case = |name: &str, f: &ScalarFlux, g: ScalarFlux, datum: InitialData, t: f64, a: f64, b: f64| SmoothCase {
        name: name.to_string(),
        f: f.clone(),
        g,
        datum,
        t,
        a,
        b,
    };
    out.push(case(
        "burgers vs scaled 1.2, sawtooth 2",
        &burgers,
        ScalarFlux::scaled_burgers(1.2, k).unwrap(),
        InitialData::sawtooth(2),
        0.5,
        0.0,
        1.0,
    ));
    out.push(case(
        "burgers vs burgers+0.05u, pulse",
        &burgers,
        burgers.with_linear_term(0.05).unwrap(),
        pulse(-0.5, 0.5, 0.8),
        1.0,
        -1.0,
        2.0,
    ));
    out.push(case(
        "burgers vs convex_poly, pulse",
        &burgers,
        ScalarFlux::convex_poly(0.5, 0.1, 0.05, k).unwrap(),
        pulse(-0.25, 0.25, -0.6),
        0.5,
        -1.0,
        1.0,
    ));
    out.push(case(
        "scaled 0.8 vs scaled 1.5, step",
        &ScalarFlux::scaled_burgers(0.8, k).unwrap(),
        ScalarFlux::scaled_burgers(1.5, k).unwrap(),
        InitialData::Pcf(PiecewiseConstantFn::step(0.0, vec![1.0], vec![-1.0]).unwrap()),
        1.0,
        -2.0,
        2.0,
    ));
    out.push(case(
        "convex_poly pair, square wave",
        &ScalarFlux::convex_poly(0.5, 0.0, 0.1, k).unwrap(),
        ScalarFlux::convex_poly(0.5, 0.1, 0.1, k).unwrap(),
        InitialData::PeriodicSquare {
            period: 1.0,
            high_len: 0.3,
            high: 0.9,
            low: -0.4,
            offset: 0.0,
        },
        0.25,
        0.0,
        2.0,
    ));
    out.push(case(
        "burgers vs burgers+0.2u, sawtooth 3",
        &burgers,
        burgers.with_linear_term(0.2).unwrap(),
        InitialData::sawtooth(3),
        0.125,
        0.0,
        1.0,
    ));
    out
}

#[derive(Debug, Clone)]
pub struct PlCase {
    pub name: String,
    pub f: PiecewiseLinearFlux,
    pub g: PiecewiseLinearFlux,
    pub datum: PiecewiseConstantFn,
    pub t: f64,
}

/// Piecewise-linear pairs for the semigroup comparison. The first case is
/// a linear pair with a single jump.
pub fn pl_suite() -> Vec<PlCase> {
    let k = k_unit();
    let pl = |desc: &str| FluxSpec::parse(desc).unwrap().piecewise_linear(k, 129).unwrap();
    let datum = |desc: &str| match DatumSpec::parse(desc).unwrap() {
        DatumSpec::Pcf(p) => p,
        DatumSpec::Square { .. } => unreachable!(),
    };
    let case = |name: &str, f: &str, g: &str, d: &str, t: f64| PlCase {
        name: name.to_string(),
        f: pl(f),
        g: pl(g),
        datum: datum(d),
        t,
    };
    vec![
        case("linear single jump", "linear 0.6", "linear -0.2", "step 0 -0.75 0.5", 1.5),
        case("burgers vs burgers+0.05u, pulse", "burgers", "burgers + 0.05 u", "pulse -0.5 0.5 0.8", 1.0),
        case("burgers vs scaled 1.3, pulse", "burgers", "scaled_burgers 1.3", "pulse -0.5 0.5 0.8", 1.0),
        case(
            "convex_poly vs burgers, two pulses",
            "convex_poly 0.5 0.1 0.05",
            "burgers",
            "pcf 0 -1 0.9 -0.4 0 0.2 -0.7 0.6 0",
            0.5,
        ),
        case(
            "scaled 0.7 vs scaled 1.5, staircase",
            "scaled_burgers 0.7",
            "scaled_burgers 1.5",
            "pcf -1 -0.5 -0.25 0 0.5 0.5 1",
            2.0,
        ),
    ]
}
