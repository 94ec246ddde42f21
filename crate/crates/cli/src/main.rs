//! `fluxstab`: runs one experiment from a config file and writes CSV/SVG/JSON
//! artifacts.
//!
//! Exit status: 0 success, 1 a config check failed, 2 configuration or
//! command-line error (nothing written), 3 numerical or I/O failure.

mod config;
mod experiments;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{Check, ConfigError, Params, RawConfig, Section};
use experiments::{prepare, Kind, Outcome};
use fluxstab::suite::{DATUM_NAMES, FLUX_NAMES};
use report::svg_plot;

#[derive(Parser, Debug)]
#[command(name = "fluxstab", version, about = "Conservation-law flux stability experiments")]
struct Cli {
    /// List experiments, built-in fluxes and data (or a subcommand's parameters)
    #[arg(long, global = true)]
    list: bool,

    #[command(subcommand)]
    cmd: Option<Cmd>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    Riemann(RunArgs),
    Evolve(RunArgs),
    Hatd(RunArgs),
    HatdLin(RunArgs),
    Tmain(RunArgs),
    Pgeneral(RunArgs),
    Linfty(RunArgs),
    OleinikTv(RunArgs),
    Rexp(RunArgs),
    ClassicalLimit(RunArgs),
    Lerrest(RunArgs),
}

impl Cmd {
    fn split(&self) -> (Kind, &RunArgs) {
        match self {
            Cmd::Riemann(a) => (Kind::Riemann, a),
            Cmd::Evolve(a) => (Kind::Evolve, a),
            Cmd::Hatd(a) => (Kind::Hatd, a),
            Cmd::HatdLin(a) => (Kind::HatdLin, a),
            Cmd::Tmain(a) => (Kind::Tmain, a),
            Cmd::Pgeneral(a) => (Kind::Pgeneral, a),
            Cmd::Linfty(a) => (Kind::Linfty, a),
            Cmd::OleinikTv(a) => (Kind::OleinikTv, a),
            Cmd::Rexp(a) => (Kind::Rexp, a),
            Cmd::ClassicalLimit(a) => (Kind::ClassicalLimit, a),
            Cmd::Lerrest(a) => (Kind::Lerrest, a),
        }
    }
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Config file (sections [experiment], [params], [checks], [output])
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output directory
    #[arg(long, default_value = "out")]
    out: PathBuf,

    /// Seed for randomized sampling; overrides experiment.seed
    #[arg(long)]
    seed: Option<u64>,

    /// Worker threads (default: all cores)
    #[arg(long)]
    jobs: Option<usize>,

    /// Overrides: key=value for [params], section.key=value otherwise
    #[arg(value_name = "KEY=VALUE")]
    overrides: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("numerical failure: {0}")]
    Numerical(#[from] fluxstab::Error),
    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Numerical(_) | Failure::Io { .. } => 3,
        }
    }
}

/// Everything resolved from file, overrides and flags before running.
struct Resolved {
    kind: Kind,
    seed: u64,
    params: Params,
    checks: Vec<Check>,
    svg: bool,
    name: String,
}

impl Resolved {
    fn provenance(&self) -> Vec<String> {
        let mut out = vec![
            format!("fluxstab {}", env!("CARGO_PKG_VERSION")),
            format!("experiment.kind = {}", self.kind),
            format!("experiment.seed = {}", self.seed),
        ];
        out.extend(self.params.iter().map(|(k, v)| format!("params.{k} = {v}")));
        out.extend(self.checks.iter().map(|c| format!("checks.{} = {}", c.column, c.text)));
        out.push(format!("output.svg = {}", self.svg));
        out.push(format!("output.name = {}", self.name));
        out
    }
}

fn resolve(kind: Kind, args: &RunArgs) -> Result<Resolved, ConfigError> {
    let mut raw = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| ConfigError {
                origin: path.display().to_string(),
                line: 0,
                msg: e.to_string(),
            })?;
            RawConfig::parse(&text, &path.display().to_string())?
        }
        None => RawConfig::default(),
    };
    for o in &args.overrides {
        raw.apply_override(o)?;
    }
    let mut seed = 0u64;
    for (k, v) in raw.section(Section::Experiment) {
        match k.as_str() {
            "kind" => {
                let named: Kind = v.parse()?;
                if named != kind {
                    return Err(ConfigError::new(format!("config is for '{named}', not '{kind}'")));
                }
            }
            "seed" => {
                seed = v
                    .parse()
                    .map_err(|_| ConfigError::new(format!("seed '{v}' is not a nonnegative integer")))?
            }
            other => return Err(ConfigError::new(format!("unknown key '{other}' in [experiment]"))),
        }
    }
    if let Some(s) = args.seed {
        seed = s;
    }
    let (mut svg, mut name) = (false, kind.name().to_string());
    for (k, v) in raw.section(Section::Output) {
        match k.as_str() {
            "svg" => {
                svg = v
                    .parse()
                    .map_err(|_| ConfigError::new(format!("output.svg '{v}' is not true/false")))?
            }
            "name" => {
                if v.is_empty() || v.contains(['/', '\\']) || v.starts_with('.') {
                    return Err(ConfigError::new(format!("output.name '{v}' is not a plain file stem")));
                }
                name = v.clone();
            }
            other => return Err(ConfigError::new(format!("unknown key '{other}' in [output]"))),
        }
    }
    let params = Params::resolve(kind.params(), raw.section(Section::Params))?;
    let outputs = kind.outputs();
    let checks = raw
        .section(Section::Checks)
        .iter()
        .map(|(col, text)| {
            if !outputs.contains(&col.as_str()) {
                return Err(ConfigError::new(format!(
                    "check on unknown column '{col}' (available: {})",
                    outputs.join(", ")
                )));
            }
            Check::parse(col, text)
        })
        .collect::<Result<_, _>>()?;
    Ok(Resolved {
        kind,
        seed,
        params,
        checks,
        svg,
        name,
    })
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|source| Failure::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn print_outcome(r: &Resolved, out: &Outcome) {
    println!("fluxstab {} (seed {})", r.kind, r.seed);
    let t = &out.table;
    if t.rows.len() == 1 {
        for (c, v) in t.columns.iter().zip(&t.rows[0]) {
            println!("  {c} = {v}");
        }
    } else if t.rows.len() <= 12 {
        println!("  {}", t.columns.join("  "));
        for row in &t.rows {
            println!("  {}", row.join("  "));
        }
    } else {
        println!("  {} rows", t.rows.len());
    }
    for (k, v) in &out.summary {
        println!("  {k} = {v}");
    }
}

fn execute(kind: Kind, args: &RunArgs) -> Result<bool, Failure> {
    let r = resolve(kind, args)?;
    let job = prepare(kind, &r.params)?;
    if let Some(n) = args.jobs {
        if n == 0 {
            return Err(ConfigError::new("--jobs must be at least 1").into());
        }
        // the global pool can only be set once per process; later calls keep the first size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let out = job(r.seed)?;
    print_outcome(&r, &out);
    fs::create_dir_all(&args.out).map_err(|source| Failure::Io {
        path: args.out.clone(),
        source,
    })?;
    let provenance = r.provenance();
    let csv = args.out.join(format!("{}.csv", r.name));
    write(&csv, &out.table.to_csv(&provenance))?;
    println!("  wrote {}", csv.display());
    if let Some(json) = &out.json {
        let path = args.out.join(format!("{}.json", r.name));
        write(&path, json)?;
        println!("  wrote {}", path.display());
    }
    if r.svg {
        match out.plot.as_ref().and_then(|p| svg_plot(&out.table, p, &format!("fluxstab {}", r.kind))) {
            Some(svg) => {
                let path = args.out.join(format!("{}.svg", r.name));
                write(&path, &svg)?;
                println!("  wrote {}", path.display());
            }
            None => println!("  no plot for this result"),
        }
    }
    let mut all = true;
    for c in &r.checks {
        let ok = c.evaluate(&out.values(&c.column));
        all &= ok;
        println!("{} {} = {}", if ok { "PASS" } else { "FAIL" }, c.column, c.text);
    }
    Ok(all)
}

fn print_list(kind: Option<Kind>) {
    match kind {
        Some(k) => {
            println!("{k}: {}", k.about());
            for (name, default, help) in k.params() {
                println!("  {name:<14} {default:<22} {help}");
            }
            println!("  outputs: {}", k.outputs().join(", "));
        }
        None => {
            println!("experiments:");
            for k in Kind::ALL {
                println!("  {:<16} {}", k.name(), k.about());
            }
            println!("fluxes:");
            for (name, about) in FLUX_NAMES {
                println!("  {name:<34} {about}");
            }
            println!("  (any built-in may end in '+ EPS u')");
            println!("data:");
            for (name, about) in DATUM_NAMES {
                println!("  {name:<34} {about}");
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cmd = match (&cli.cmd, cli.list) {
        (c, true) => {
            print_list(c.as_ref().map(|c| c.split().0));
            return ExitCode::SUCCESS;
        }
        (None, false) => {
            eprintln!("no experiment given; see --help or --list");
            return ExitCode::from(2);
        }
        (Some(c), false) => c,
    };
    let (kind, args) = cmd.split();
    match execute(kind, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("fluxstab {kind}: {e}");
            ExitCode::from(e.code())
        }
    }
}
