use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use drinfeld_core::algebra::field::FiniteField;
use drinfeld_core::algebra::parse::{parse_matrix, parse_poly};
use drinfeld_core::algebra::poly::{Poly, PolyRing};
use drinfeld_core::Error;

mod cache;
mod commands;
mod verify;

#[derive(Parser, Debug)]
#[command(name = "drinfeld", version, about = "Exact computations with Drinfeld modules over F_q[T]")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Output::Text, global = true)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeriesKind {
    /// Δ by the product formula
    Delta,
    /// Δ = g_r through the Eisenstein series
    DeltaEisenstein,
    /// E_{q^k−1}
    Eisenstein,
    /// g_k
    G,
    /// u_k
    U,
    /// j_k
    J,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Number of sublattices with quotient A/nA.
    Count {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long)]
        n: String,
    },
    /// Hermite matrices of the sublattices with quotient A/nA.
    Enumerate {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long)]
        n: String,
    },
    /// Smith invariants of a square matrix over A, rows split by ';'.
    Snf {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        matrix: String,
    },
    /// F_k, G_k, H_k for k up to K.
    Bridge {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Read and write the polynomials here, checked by SHA-256.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Expansion of an invariant at the cusp.
    Expand {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long, value_enum)]
        series: SeriesKind,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Absolute precision in the cusp parameter t.
        #[arg(long, default_value_t = 12)]
        precision: i64,
    },
    /// Rank-2 modular polynomial for j at level n.
    Modpoly {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: String,
        /// Guard window in s (default 2(q−1)|n|).
        #[arg(long)]
        precision: Option<i64>,
    },
    /// Seeded self-checks.
    Verify {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = verify::Suite::All)]
        suite: verify::Suite,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

/// Result of a command: the JSON document and its text rendering.
pub struct Report {
    pub json: Value,
    pub text: String,
    /// Verification outcome; false turns into exit status 4.
    pub ok: bool,
}

pub fn field(q: u64) -> Result<FiniteField, Error> {
    FiniteField::with_order(q)
}

pub fn monic(field: &FiniteField, src: &str) -> Result<Poly, Error> {
    let n = parse_poly(field, src, "T")?;
    if !n.is_monic() {
        return Err(Error::InvalidArgument(format!("{src} is not monic")));
    }
    Ok(n)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        e if e.is_verification_failure() => 4,
        _ => 3,
    }
}

fn run(cli: &Cli) -> Result<Report, Error> {
    match &cli.command {
        Command::Count { q, r, n } => {
            let f = field(*q)?;
            commands::count(&f, &monic(&f, n)?, *r)
        }
        Command::Enumerate { q, r, n } => {
            let f = field(*q)?;
            commands::enumerate(&f, &monic(&f, n)?, *r)
        }
        Command::Snf { q, matrix } => {
            let f = field(*q)?;
            commands::snf(&PolyRing::new(f.clone()), &parse_matrix(&f, matrix, "T")?)
        }
        Command::Bridge { q, k, cache_dir } => commands::bridge(&field(*q)?, *k, cache_dir.as_deref()),
        Command::Expand { q, r, series, k, precision } => commands::expand(&field(*q)?, *r, *series, *k, *precision),
        Command::Modpoly { q, n, precision } => {
            let f = field(*q)?;
            commands::modpoly(&f, &monic(&f, n)?, *precision)
        }
        Command::Verify { q, suite, seed } => verify::run(&field(*q)?, *suite, *seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(report) => {
            match cli.output {
                Output::Json => {
                    let mut doc = json!({ "schema": 1 });
                    if let (Some(d), Some(m)) = (doc.as_object_mut(), report.json.as_object()) {
                        d.extend(m.clone());
                    }
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                }
                Output::Text => println!("{}", report.text),
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(4)
            }
        }
        Err(e) => {
            let doc = json!({ "schema": 1, "error": { "kind": e.kind(), "message": e.to_string() } });
            match cli.output {
                Output::Json => println!("{}", serde_json::to_string_pretty(&doc).unwrap()),
                Output::Text => eprintln!("error[{}]: {e}", e.kind()),
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
