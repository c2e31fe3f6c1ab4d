//! `klab`: command-line front end for the estimators, scans and tables.
//!
//! Every subcommand reads an optional JSON config (`--config`), merges the
//! flags on top, validates the result against `docs/config.schema.json`,
//! computes, writes JSON/CSV/SVG into `--out` and prints one summary line.
//!
//! Exit status: 0 ok, 1 invalid configuration, 2 certified violation,
//! 3 inconclusive verdict under `--require-certain`, 4 computation failure.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use commands::{Exit, Failure};
use config::{merge, parse_point, RunConfig, SchemaError};

#[derive(Parser)]
#[command(name = "klab", version, about = "Kobayashi metric and boundary localization lab")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Default)]
struct Common {
    /// JSON run configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Domain shorthand (disc, ball2, polydisc2, half-plane, lens,
    /// punctured-plane, ellipsoid:1,2) or a JSON descriptor.
    #[arg(long, global = true)]
    domain: Option<String>,
    /// Boundary point, comma-separated complex coordinates.
    #[arg(long, global = true, allow_hyphen_values = true)]
    point: Option<String>,
    /// Interior base point.
    #[arg(long, global = true, allow_hyphen_values = true)]
    o: Option<String>,
    /// Output directory (default klab-out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// RNG seed for sampling and multistarts (default 0xC0B1).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Comma-separated subset of json,csv,svg.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Disable closed-form oracles so every bracket comes from discs,
    /// projections and inclusions.
    #[arg(long, global = true)]
    no_oracles: bool,
    /// Exit with status 3 on inconclusive verdicts or refused rows.
    #[arg(long, global = true)]
    require_certain: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Kobayashi–Royden metric bracket at z in direction v.
    Metric {
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        v: Option<String>,
    },
    /// Kobayashi distance and Lempert function brackets.
    Distance {
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        w: Option<String>,
    },
    /// Certified ε-geodesic between z and w.
    Geodesic {
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        w: Option<String>,
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Boundary-point scans at --point.
    Classify {
        /// wpoint, weak-w, vpoint, gromov, kpoint, hyperbolic-at,
        /// hyperbolic-near, well-behaved or all.
        #[arg(long)]
        scan: Option<String>,
        /// Second boundary point for the vpoint and gromov scans.
        #[arg(long, allow_hyphen_values = true)]
        q: Option<String>,
        /// Number of dyadic steps t_n = 2^-n (4 to 16).
        #[arg(long)]
        steps: Option<usize>,
        /// Radius of the neighbourhood U = ball(p, radius).
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Multiplicative and additive localization tables at --point.
    Localize {
        /// multiplicative, additive or both.
        #[arg(long)]
        table: Option<String>,
        /// Number of dyadic steps t_n = 2^-n (4 to 16).
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Royden localization audit on a subdomain.
    Royden {
        /// half-disc, cap or a JSON neighbourhood.
        #[arg(long)]
        sub: Option<String>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// The full classifier and localization suite on the model instances.
    Report,
}

fn point(m: &mut Map<String, Value>, key: &str, s: &Option<String>) -> Result<(), SchemaError> {
    if let Some(s) = s {
        m.insert(key.into(), parse_point(s)?);
    }
    Ok(())
}

fn json_or_string(s: &str) -> Value {
    if s.trim_start().starts_with('{') {
        serde_json::from_str(s).unwrap_or_else(|_| Value::String(s.into()))
    } else {
        Value::String(s.into())
    }
}

fn overrides(cli: &Cli) -> Result<Map<String, Value>, SchemaError> {
    let c = &cli.common;
    let mut m = Map::new();
    if let Some(d) = &c.domain {
        m.insert("domain".into(), json_or_string(d));
    }
    point(&mut m, "point", &c.point)?;
    point(&mut m, "o", &c.o)?;
    if let Some(o) = &c.out {
        m.insert("output".into(), json!(o));
    }
    if let Some(s) = c.seed {
        m.insert("seed".into(), json!(s));
    }
    if let Some(f) = &c.format {
        m.insert("formats".into(), json!(f.split(',').map(str::trim).collect::<Vec<_>>()));
    }
    if c.no_oracles {
        m.insert("estimator".into(), json!({ "oracles": false }));
    }
    if c.require_certain {
        m.insert("require_certain".into(), json!(true));
    }
    let mut schedule = Map::new();
    match &cli.command {
        Command::Metric { z, v } => {
            point(&mut m, "z", z)?;
            point(&mut m, "v", v)?;
        }
        Command::Distance { z, w } => {
            point(&mut m, "z", z)?;
            point(&mut m, "w", w)?;
        }
        Command::Geodesic { z, w, epsilon } => {
            point(&mut m, "z", z)?;
            point(&mut m, "w", w)?;
            if let Some(e) = epsilon {
                m.insert("epsilon".into(), json!(e));
            }
        }
        Command::Classify { scan, q, steps, radius } => {
            if let Some(s) = scan {
                m.insert("scan".into(), json!(s));
            }
            point(&mut m, "q", q)?;
            if let Some(s) = steps {
                schedule.insert("steps".into(), json!(s));
            }
            if let Some(r) = radius {
                schedule.insert("radius".into(), json!(r));
            }
        }
        Command::Localize { table, steps, radius } => {
            if let Some(t) = table {
                m.insert("table".into(), json!(t));
            }
            if let Some(s) = steps {
                schedule.insert("steps".into(), json!(s));
            }
            if let Some(r) = radius {
                schedule.insert("radius".into(), json!(r));
            }
        }
        Command::Royden { sub, samples } => {
            if let Some(s) = sub {
                m.insert("sub".into(), json_or_string(s));
            }
            if let Some(n) = samples {
                m.insert("samples".into(), json!(n));
            }
        }
        Command::Report => {}
    }
    if !schedule.is_empty() {
        m.insert("schedule".into(), Value::Object(schedule));
    }
    Ok(m)
}

fn load(cli: &Cli) -> Result<RunConfig, Failure> {
    let base = match &cli.common.config {
        None => None,
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| SchemaError(format!("{}: {e}", path.display())))?;
            Some(serde_json::from_str(&text).map_err(|e| SchemaError(format!("{}: {e}", path.display())))?)
        }
    };
    let doc = merge(base, overrides(cli)?)?;
    Ok(RunConfig::from_value(&doc)?)
}

/// `KLAB_THREADS` caps the worker pool; outputs do not depend on it.
fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("KLAB_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| SchemaError(format!("KLAB_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure {
            exit: Exit::Failure,
            message: e.to_string(),
        })
}

fn run(cli: &Cli) -> Result<Exit, Failure> {
    configure_threads()?;
    let cfg = load(cli)?;
    let outcome = match cli.command {
        Command::Metric { .. } => commands::cmd_metric(&cfg),
        Command::Distance { .. } => commands::cmd_distance(&cfg),
        Command::Geodesic { .. } => commands::cmd_geodesic(&cfg),
        Command::Classify { .. } => commands::cmd_classify(&cfg),
        Command::Localize { .. } => commands::cmd_localize(&cfg),
        Command::Royden { .. } => commands::cmd_royden(&cfg),
        Command::Report => commands::cmd_report(&cfg),
    }?;
    let written = commands::write_files(&cfg, &outcome.files)?;
    println!("{} [{written} files in {}]", outcome.summary, cfg.output.display());
    Ok(outcome.exit)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(exit) => ExitCode::from(exit as u8),
        Err(f) => {
            eprintln!("klab: {}", f.message);
            ExitCode::from(f.exit as u8)
        }
    }
}
