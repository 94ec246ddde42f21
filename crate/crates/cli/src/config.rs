//! Experiment configuration files.
//!
//! Grammar (one item per line):
//!
//! ```text
//! file     := { line }
//! line     := blank | comment | section | entry
//! comment  := ('#' | ';') any-text
//! section  := '[' name ']'            one of experiment, params, checks, output
//! entry    := key '=' value           whitespace around key and value is trimmed
//! key      := [A-Za-z0-9_.-]+
//! ```
//!
//! Entries before the first section header belong to `params`. A key may
//! appear once per section. Command-line overrides use the same `key=value`
//! form; `section.key=value` addresses a section other than `params`.
//!
//! `[checks]` entries are evaluated against the result, each printing one
//! PASS/FAIL line:
//!
//! ```text
//! column = LO..HI        every value within [LO, HI]
//! column = V +- TOL      every value within TOL of V
//! column = true|false    every value equal
//! ```

use std::collections::BTreeMap;
use std::fmt;

/// `line` is 1-based; 0 when the error is not tied to a line.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub origin: String,
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "{}:{}: {}", self.origin, self.line, self.msg)
        } else {
            write!(f, "{}: {}", self.origin, self.msg)
        }
    }
}

impl std::error::Error for ConfigError {}

impl ConfigError {
    pub fn new(msg: impl Into<String>) -> Self {
        ConfigError {
            origin: "config".into(),
            line: 0,
            msg: msg.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Section {
    Experiment,
    Params,
    Checks,
    Output,
}

impl Section {
    fn parse(name: &str) -> Option<Self> {
        Some(match name {
            "experiment" => Section::Experiment,
            "params" => Section::Params,
            "checks" => Section::Checks,
            "output" => Section::Output,
            _ => return None,
        })
    }
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Section::Experiment => "experiment",
            Section::Params => "params",
            Section::Checks => "checks",
            Section::Output => "output",
        })
    }
}

/// Raw entries in insertion order per section.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RawConfig {
    pub entries: BTreeMap<Section, Vec<(String, String)>>,
}

fn valid_key(k: &str) -> bool {
    !k.is_empty() && k.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '-'))
}

impl RawConfig {
    pub fn parse(text: &str, origin: &str) -> Result<Self, ConfigError> {
        let mut cfg = RawConfig::default();
        let mut section = Section::Params;
        for (i, raw) in text.lines().enumerate() {
            let err = |msg: String| ConfigError {
                origin: origin.to_string(),
                line: i + 1,
                msg,
            };
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| err(format!("unterminated section header '{line}'")))?
                    .trim();
                section = Section::parse(name).ok_or_else(|| err(format!("unknown section [{name}]")))?;
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, found '{line}'")))?;
            cfg.insert(section, k.trim(), v.trim()).map_err(err)?;
        }
        Ok(cfg)
    }

    fn insert(&mut self, section: Section, key: &str, value: &str) -> Result<(), String> {
        if !valid_key(key) {
            return Err(format!("invalid key '{key}'"));
        }
        let list = self.entries.entry(section).or_default();
        if list.iter().any(|(k, _)| k == key) {
            return Err(format!("duplicate key '{key}' in [{section}]"));
        }
        list.push((key.to_string(), value.to_string()));
        Ok(())
    }

    /// Applies a command-line `key=value` or `section.key=value`, replacing earlier values.
    pub fn apply_override(&mut self, item: &str) -> Result<(), ConfigError> {
        let err = |msg: String| ConfigError {
            origin: "command line".into(),
            line: 0,
            msg,
        };
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| err(format!("override '{item}' is not key=value")))?;
        let (section, key) = match k.trim().split_once('.') {
            Some((s, key)) => (
                Section::parse(s).ok_or_else(|| err(format!("unknown section '{s}' in '{item}'")))?,
                key,
            ),
            None => (Section::Params, k.trim()),
        };
        if let Some(list) = self.entries.get_mut(&section) {
            list.retain(|(existing, _)| existing != key);
        }
        self.insert(section, key, v.trim()).map_err(err)
    }

    pub fn section(&self, s: Section) -> &[(String, String)] {
        self.entries.get(&s).map_or(&[], |v| v.as_slice())
    }

    #[cfg(test)]
    pub fn get(&self, s: Section, key: &str) -> Option<&str> {
        self.section(s).iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

/// A declared parameter: name, default value, help text.
pub type ParamSpec = (&'static str, &'static str, &'static str);

/// Parameters of one experiment, resolved against its declared keys.
#[derive(Debug, Clone, PartialEq)]
pub struct Params {
    values: Vec<(&'static str, String)>,
}

impl Params {
    pub fn resolve(specs: &[ParamSpec], given: &[(String, String)]) -> Result<Self, ConfigError> {
        for (k, _) in given {
            if !specs.iter().any(|(name, ..)| name == k) {
                let known: Vec<&str> = specs.iter().map(|s| s.0).collect();
                return Err(ConfigError::new(format!(
                    "unknown parameter '{k}' (expected one of: {})",
                    known.join(", ")
                )));
            }
        }
        let values = specs
            .iter()
            .map(|&(name, default, _)| {
                let v = given
                    .iter()
                    .find(|(k, _)| k == name)
                    .map_or(default.to_string(), |(_, v)| v.clone());
                (name, v)
            })
            .collect();
        Ok(Params { values })
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.values.iter().map(|(k, v)| (*k, v.as_str()))
    }

    pub fn str(&self, key: &str) -> &str {
        self.values
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| v.as_str())
            .unwrap_or_else(|| panic!("parameter '{key}' is not declared"))
    }

    pub fn f64(&self, key: &str) -> Result<f64, ConfigError> {
        parse_f64(key, self.str(key))
    }

    pub fn usize(&self, key: &str) -> Result<usize, ConfigError> {
        let v = self.str(key);
        v.parse()
            .map_err(|_| ConfigError::new(format!("{key}: '{v}' is not a nonnegative integer")))
    }

    /// Comma-separated list of numbers.
    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>, ConfigError> {
        let list: Vec<f64> = self
            .str(key)
            .split(',')
            .map(|s| parse_f64(key, s.trim()))
            .collect::<Result<_, _>>()?;
        Ok(list)
    }

    pub fn positive(&self, key: &str) -> Result<f64, ConfigError> {
        let v = self.f64(key)?;
        if v > 0.0 {
            Ok(v)
        } else {
            Err(ConfigError::new(format!("{key} must be positive, got {v}")))
        }
    }

    pub fn positive_list(&self, key: &str) -> Result<Vec<f64>, ConfigError> {
        let list = self.f64_list(key)?;
        if let Some(bad) = list.iter().find(|v| !(**v > 0.0)) {
            return Err(ConfigError::new(format!("{key}: entries must be positive, got {bad}")));
        }
        Ok(list)
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64, ConfigError> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| ConfigError::new(format!("{key}: '{v}' is not a finite number")))
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expect {
    Range(f64, f64),
    Bool(bool),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub column: String,
    pub expect: Expect,
    pub text: String,
}

impl Check {
    pub fn parse(column: &str, text: &str) -> Result<Self, ConfigError> {
        let err = || ConfigError::new(format!("check '{column} = {text}': expected LO..HI, V +- TOL or true/false"));
        let num = |s: &str| s.trim().parse::<f64>().ok().filter(|x| !x.is_nan()).ok_or_else(err);
        let expect = match text.trim() {
            "true" => Expect::Bool(true),
            "false" => Expect::Bool(false),
            t => {
                if let Some((lo, hi)) = t.split_once("..") {
                    Expect::Range(num(lo)?, num(hi)?)
                } else if let Some((v, tol)) = t.split_once("+-") {
                    let (v, tol) = (num(v)?, num(tol)?);
                    if tol < 0.0 {
                        return Err(err());
                    }
                    Expect::Range(v - tol, v + tol)
                } else {
                    return Err(err());
                }
            }
        };
        if let Expect::Range(lo, hi) = expect {
            if lo > hi {
                return Err(err());
            }
        }
        Ok(Check {
            column: column.to_string(),
            expect,
            text: text.trim().to_string(),
        })
    }

    /// True when every value satisfies the expectation (and there is at least one).
    pub fn evaluate(&self, values: &[String]) -> bool {
        !values.is_empty()
            && values.iter().all(|v| match self.expect {
                Expect::Bool(b) => v.parse::<bool>() == Ok(b),
                Expect::Range(lo, hi) => v.parse::<f64>().is_ok_and(|x| x >= lo && x <= hi),
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_overrides() {
        let text = "n = 3\n# comment\n[experiment]\nkind = rexp\n\n[checks]\nl1_distance = 1 +- 1e-3\n";
        let mut c = RawConfig::parse(text, "x.cfg").unwrap();
        assert_eq!(c.get(Section::Params, "n"), Some("3"));
        assert_eq!(c.get(Section::Experiment, "kind"), Some("rexp"));
        c.apply_override("n=1,2").unwrap();
        c.apply_override("checks.t=0..1").unwrap();
        assert_eq!(c.get(Section::Params, "n"), Some("1,2"));
        assert_eq!(c.section(Section::Checks).len(), 2);
    }

    #[test]
    fn reports_line_numbers() {
        let e = RawConfig::parse("a = 1\n[bogus]\n", "f.cfg").unwrap_err();
        assert_eq!((e.line, e.origin.as_str()), (2, "f.cfg"));
        assert_eq!(RawConfig::parse("a = 1\na = 2", "f").unwrap_err().line, 2);
        assert!(RawConfig::parse("novalue", "f").is_err());
        assert!(RawConfig::parse("[params\n", "f").is_err());
        assert!(RawConfig::parse("bad key = 1", "f").is_err());
    }

    #[test]
    fn params_resolve_defaults_and_reject_unknown() {
        let specs: &[ParamSpec] = &[("t", "1", ""), ("c_list", "8,16", "")];
        let p = Params::resolve(specs, &[("t".into(), "0.5".into())]).unwrap();
        assert_eq!(p.f64("t").unwrap(), 0.5);
        assert_eq!(p.f64_list("c_list").unwrap(), vec![8.0, 16.0]);
        assert!(Params::resolve(specs, &[("s".into(), "1".into())]).is_err());
        let p = Params::resolve(specs, &[("t".into(), "-1".into())]).unwrap();
        assert!(p.positive("t").is_err());
        assert!(Params::resolve(specs, &[("t".into(), "inf".into())]).unwrap().f64("t").is_err());
    }

    #[test]
    fn checks() {
        let c = Check::parse("x", "1 +- 1e-3").unwrap();
        assert!(c.evaluate(&["1.0005".into(), "0.9999".into()]));
        assert!(!c.evaluate(&["1.01".into()]));
        assert!(!c.evaluate(&[]));
        let r = Check::parse("slope", "-2.3..-1.7").unwrap();
        assert_eq!(r.expect, Expect::Range(-2.3, -1.7));
        assert!(Check::parse("h", "true").unwrap().evaluate(&["true".into()]));
        assert!(!Check::parse("h", "true").unwrap().evaluate(&["nan".into()]));
        for bad in ["", "2..1", "abc", "1 +- -1"] {
            assert!(Check::parse("x", bad).is_err(), "{bad}");
        }
    }
}
