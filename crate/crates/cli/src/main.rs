mod report;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use etatrace::braid;
use etatrace::cache::{self, ModuleCache};
use etatrace::fraction::{is_positive, parse_ratio, Rational};
use etatrace::identities::{theta_report, Engine};
use etatrace::qmodule::DEFAULT_SIZE_LIMIT;
use etatrace::qseries::{euler_phi, jacobi_cube_series, partition_series, pentagonal_series};
use etatrace::rootdata::{parse_weight, RootDatum, Weight};
use etatrace::Error;

#[derive(Parser, Debug)]
#[command(name = "etatrace", version, about = "Exact braid-operator traces and eta-power identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Module cache directory [default: $ETATRACE_CACHE, else ~/.cache/etatrace]
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Modules above this dimension are refused.
    #[arg(long, global = true, default_value_t = DEFAULT_SIZE_LIMIT, value_parser = clap::value_parser!(u64).range(1..))]
    size_limit: u64,
    /// Worker threads, or "auto".
    #[arg(long, global = true, default_value = "auto")]
    threads: String,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Identity {
    Main,
    Kostant,
    TwoVar,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SeriesKind {
    Pentagonal,
    Jacobi,
    Euler,
    Partition,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a truncated identity.
    Verify {
        #[arg(value_enum)]
        identity: Identity,
        #[arg(long = "type")]
        lie_type: String,
        #[arg(long)]
        cutoff: String,
    },
    /// Trace of the Coxeter braid operator on one module.
    Trace {
        #[arg(long = "type")]
        lie_type: String,
        #[arg(long)]
        weight: String,
    },
    /// Action of the full twist on one module.
    Theta {
        #[arg(long = "type")]
        lie_type: String,
        #[arg(long)]
        weight: String,
    },
    /// Build one module; optionally dump it or a braid operator on it.
    Module {
        #[arg(long = "type")]
        lie_type: String,
        #[arg(long)]
        weight: String,
        /// Print the module (basis weights and generator matrices).
        #[arg(long)]
        dump: bool,
        /// Print the operator `S_{i1} ... S_{ik}` for a 1-based word like "1,2".
        #[arg(long)]
        dump_operator: Option<String>,
    },
    /// Root datum of a type.
    Roots {
        #[arg(long = "type")]
        lie_type: String,
    },
    /// Truncated reference series.
    Series {
        #[arg(value_enum)]
        kind: SeriesKind,
        #[arg(long)]
        cutoff: String,
        /// Exponent scale for `euler`.
        #[arg(long, default_value = "1")]
        scale: String,
    },
    /// Run the invariant suite on a built-in set of modules.
    Selftest {
        /// Comma-separated types [default: A1,A2,B2,G2]
        #[arg(long)]
        types: Option<String>,
    },
}

/// Resolved global settings.
struct RunConfig {
    format: Format,
    engine: Engine,
}

enum Failure {
    Usage(String),
    Mismatch(String),
    SizeLimit(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::SizeLimit { .. } => Failure::SizeLimit(e.to_string()),
            Error::InvalidLieType(_)
            | Error::InvalidWeight(_)
            | Error::InvalidArgument(_)
            | Error::Parse(_)
            | Error::QBinomialRange { .. } => Failure::Usage(e.to_string()),
            other => Failure::Other(other.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn cache_dir(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| std::env::var_os("ETATRACE_CACHE").map(PathBuf::from))
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("etatrace")))
}

fn positive_cutoff(s: &str) -> Result<Rational, Failure> {
    let c = parse_ratio(s)?;
    if !is_positive(&c) {
        return Err(Failure::Usage(format!("cutoff must be positive, got {s}")));
    }
    Ok(c)
}

fn datum_and_weight(t: &str, w: &str) -> Result<(RootDatum, Weight), Failure> {
    let d = RootDatum::parse(t)?;
    let w = parse_weight(w)?;
    if w.len() != d.rank() {
        return Err(Failure::Usage(format!("{t} has rank {}, but the weight has {} coordinates", d.rank(), w.len())));
    }
    d.check_dominant(&w)?;
    Ok((d, w))
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values always serialize"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads != "auto" {
        match cli.threads.parse::<usize>() {
            Ok(n) if n >= 1 => {
                // fails only if a pool already exists, which cannot happen here
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: --threads must be a positive integer or \"auto\"");
                return ExitCode::from(2);
            }
        }
    }
    let cfg = RunConfig {
        format: cli.format,
        engine: Engine::new(cli.size_limit, cache_dir(cli.cache_dir).map(ModuleCache::new)),
    };
    let result = match cli.command {
        Command::Verify { identity, lie_type, cutoff } => cmd_verify(&cfg, identity, &lie_type, &cutoff),
        Command::Trace { lie_type, weight } => cmd_trace(&cfg, &lie_type, &weight),
        Command::Theta { lie_type, weight } => cmd_theta(&cfg, &lie_type, &weight),
        Command::Module { lie_type, weight, dump, dump_operator } => {
            cmd_module(&cfg, &lie_type, &weight, dump, dump_operator.as_deref())
        }
        Command::Roots { lie_type } => cmd_roots(&cfg, &lie_type),
        Command::Series { kind, cutoff, scale } => cmd_series(&cfg, kind, &cutoff, &scale),
        Command::Selftest { types } => selftest::run(&cfg.engine, types.as_deref()).map_err(|e| match e {
            selftest::Outcome::Failed(name) => Failure::Mismatch(format!("selftest failed: {name}")),
            selftest::Outcome::Error(e) => e.into(),
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Mismatch(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Other(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::SizeLimit(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn cmd_verify(cfg: &RunConfig, which: Identity, t: &str, cutoff: &str) -> CmdResult {
    let d = RootDatum::parse(t)?;
    let cutoff = positive_cutoff(cutoff)?;
    let r = match which {
        Identity::Main => cfg.engine.verify_main_identity(&d, &cutoff)?,
        Identity::Kostant => cfg.engine.verify_kostant_classical(&d, &cutoff)?,
        Identity::TwoVar => cfg.engine.two_variable_series(&d, &cutoff)?,
    };
    match cfg.format {
        Format::Json => println!("{}", serde_json::to_string(&r).map_err(Error::from)?),
        Format::Text => print!("{}", report::identity_text(&r)),
    }
    if r.matches {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!("{} identity for {} does not match below cutoff", r.identity, r.lie_type)))
    }
}

fn cmd_trace(cfg: &RunConfig, t: &str, w: &str) -> CmdResult {
    let (d, w) = datum_and_weight(t, w)?;
    let m = cfg.engine.module(&d, &w)?;
    let pi = braid::coxeter_operator(&m)?;
    let detail = cfg.engine.trace_detail_with(&d, &m, &pi)?;
    let theta = theta_report(&d, &m, &pi)?;
    match cfg.format {
        Format::Json => print_json(&report::trace_json(&d, &detail, &theta)),
        Format::Text => print!("{}", report::trace_text(&d, &detail, &theta)),
    }
    Ok(())
}

fn cmd_theta(cfg: &RunConfig, t: &str, w: &str) -> CmdResult {
    let (d, w) = datum_and_weight(t, w)?;
    let r = cfg.engine.verify_theta_scalars(&d, &w)?;
    match cfg.format {
        Format::Json => print_json(&report::theta_json(&d, &r)),
        Format::Text => print!("{}", report::theta_text(&d, &r)),
    }
    if r.pass() {
        Ok(())
    } else {
        Err(Failure::Mismatch("theta is not the expected scalar on v_lambda and the zero-weight space".into()))
    }
}

fn cmd_module(cfg: &RunConfig, t: &str, w: &str, dump: bool, word: Option<&str>) -> CmdResult {
    let (d, w) = datum_and_weight(t, w)?;
    let m = cfg.engine.module(&d, &w)?;
    if let Some(word) = word {
        let word = parse_word(word, d.rank())?;
        let ops = braid::all_s_operators(&m)?;
        let chosen: Vec<_> = word.iter().map(|&i| ops[i].clone()).collect();
        let op = braid::compose(&chosen)?;
        let one_based: Vec<usize> = op.word.iter().map(|i| i + 1).collect();
        let v = json!({
            "type": d.lie_type.to_string(),
            "lambda": m.lambda,
            "word": one_based,
            "matrix": cache::matrix_to_json(&op.matrix),
        });
        match cfg.format {
            Format::Json => println!("{}", serde_json::to_string(&v).map_err(Error::from)?),
            Format::Text => print!("{}", report::operator_text(&m, &op)),
        }
        return Ok(());
    }
    match (dump, cfg.format) {
        (true, Format::Json) => println!("{}", serde_json::to_string(&cache::module_to_json(&m)).map_err(Error::from)?),
        (true, Format::Text) => print!("{}{}", report::module_text(&m), report::module_matrices_text(&m)),
        (false, Format::Json) => print_json(&report::module_summary_json(&m)),
        (false, Format::Text) => print!("{}", report::module_text(&m)),
    }
    Ok(())
}

fn parse_word(s: &str, rank: usize) -> Result<Vec<usize>, Failure> {
    s.split(',')
        .map(|p| match p.trim().parse::<usize>() {
            Ok(i) if (1..=rank).contains(&i) => Ok(i - 1),
            _ => Err(Failure::Usage(format!("braid word entries must be in 1..={rank}, got {p:?}"))),
        })
        .collect()
}

fn cmd_roots(cfg: &RunConfig, t: &str) -> CmdResult {
    let d = RootDatum::parse(t)?;
    match cfg.format {
        Format::Json => print_json(&d.to_json()),
        Format::Text => print!("{}", report::roots_text(&d)),
    }
    Ok(())
}

fn cmd_series(cfg: &RunConfig, kind: SeriesKind, cutoff: &str, scale: &str) -> CmdResult {
    let cutoff = positive_cutoff(cutoff)?;
    let s = match kind {
        SeriesKind::Pentagonal => pentagonal_series(&cutoff)?,
        SeriesKind::Jacobi => jacobi_cube_series(&cutoff)?,
        SeriesKind::Euler => {
            let scale = parse_ratio(scale)?;
            if !is_positive(&scale) {
                return Err(Failure::Usage(format!("scale must be positive, got {scale}")));
            }
            euler_phi(&scale, &cutoff)?
        }
        SeriesKind::Partition => partition_series(&cutoff)?,
    };
    match cfg.format {
        Format::Json => println!("{}", serde_json::to_string(&s).map_err(Error::from)?),
        Format::Text => println!("{s}"),
    }
    Ok(())
}
