//! Command-line surface: lattice queries, gluing reports, K3 moduli
//! invariants, the genus-indexed comparison table, and the randomized
//! verification campaigns.
//!
//! Exit codes are a contract: 0 on success, 2 on any input or validation
//! problem, 1 when an internal invariant fails (always a bug). Reports go
//! to standard output as compact JSON (default) or a Markdown table;
//! diagnostics go to standard error. Every value printed is an integer,
//! boolean, or string — never a float.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{Map, Value};

use latlab::jsonio::{
    campaign_report_value, comparison_row_value, counterexample_table_value, glue_report_value,
    int_to_value, lattice_from_json, moduli_report_value, render_markdown, sublattice_from_json,
    sublattice_to_value, to_json_string,
};
use latlab::k3::{
    counterexample_report, l_equivalence_obstruction, moduli_invariants, K3Config, MukaiVector,
};
use latlab::lattice::parse_vector;
use latlab::glue::Gluing;
use latlab::oracle::{run_all_campaigns, FuzzConfig};
use latlab::{Error, Result};

#[derive(Parser)]
#[command(
    name = "latlab",
    about = "Exact-arithmetic toolkit for even lattices, discriminant groups, and K3 moduli invariants",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Discriminant (absolute determinant) of a lattice.
    LatticeDisc {
        /// Lattice JSON file.
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Divisibility of a vector: gcd of its pairings with the lattice.
    LatticeDiv {
        /// Lattice JSON file.
        #[arg(long = "in")]
        input: PathBuf,
        /// Comma-separated integer coordinates, e.g. 1,0,-3.
        #[arg(long)]
        vector: String,
    },
    /// Orthogonal complement of a sublattice, as a sublattice of the same
    /// ambient lattice.
    LatticeOrtho {
        /// Sublattice JSON file (ambient plus basis).
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Gluing report for a primitive nondegenerate sublattice: group order
    /// and invariant factors, the three discriminants, and the structural
    /// checks.
    Glue {
        /// Sublattice JSON file (ambient plus basis).
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Moduli-space invariants of a Mukai vector: half-dimension,
    /// divisibility, coarseness, transcendental discriminant, gluing-group
    /// order, and the Picard discriminant of the moduli space.
    K3Moduli {
        /// Genus of the polarized surface (Picard rank one, degree 2g-2).
        #[arg(long, conflicts_with = "ns")]
        genus: Option<u64>,
        /// Neron-Severi lattice JSON file (general mode).
        #[arg(long)]
        ns: Option<PathBuf>,
        /// Mukai vector: rank, curve-class coordinates, Euler component.
        #[arg(long, allow_hyphen_values = true)]
        mukai: String,
        /// Skip the effectiveness test on the vector.
        #[arg(long)]
        allow_ineffective: bool,
    },
    /// Compare the gluing-group obstruction for two Mukai vectors on the
    /// same genus-g surface.
    K3Compare {
        #[arg(long)]
        genus: u64,
        /// First Mukai vector, comma-separated.
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        /// Second Mukai vector, comma-separated.
        #[arg(long, allow_hyphen_values = true)]
        u: String,
    },
    /// Obstruction table comparing the degree-0 and degree-(g-1) Picard
    /// moduli vectors for each genus in a range.
    K3Counterexample {
        #[arg(long)]
        g_min: u64,
        #[arg(long)]
        g_max: u64,
    },
    /// Run the randomized verification campaigns (glue identities against
    /// exhaustive enumeration, divisibility, determinants). The
    /// LATLAB_SEED environment variable overrides --seed.
    OracleVerify {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        trials: u32,
        #[arg(long, default_value_t = 4)]
        max_rank: usize,
        #[arg(long, default_value_t = 6)]
        max_entry: i64,
    },
}

fn read_file(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parameter(format!("cannot read {}: {e}", path.display())))
}

fn singleton(field: &str, value: &BigInt) -> Value {
    let mut map = Map::new();
    map.insert(field.into(), int_to_value(value));
    Value::Object(map)
}

fn emit(format: Format, value: &Value) {
    match format {
        Format::Json => println!("{}", to_json_string(value)),
        Format::Md => print!("{}", render_markdown(value)),
    }
}

fn mukai_from_arg(arg: &str) -> Result<MukaiVector> {
    MukaiVector::from_coords(&parse_vector(arg)?)
}

/// Runs one command; returns the report to print, plus an override exit
/// status for reports that carry their own pass/fail meaning.
fn run(command: &Command) -> Result<(Value, ExitCode)> {
    match command {
        Command::LatticeDisc { input } => {
            let lattice = lattice_from_json(&read_file(input)?)?;
            Ok((singleton("disc", &lattice.disc()), ExitCode::SUCCESS))
        }
        Command::LatticeDiv { input, vector } => {
            let lattice = lattice_from_json(&read_file(input)?)?;
            let x = parse_vector(vector)?;
            Ok((
                singleton("div", &lattice.divisibility(&x)?),
                ExitCode::SUCCESS,
            ))
        }
        Command::LatticeOrtho { input } => {
            let sub = sublattice_from_json(&read_file(input)?)?;
            Ok((
                sublattice_to_value(&sub.orthogonal_complement()),
                ExitCode::SUCCESS,
            ))
        }
        Command::Glue { input } => {
            let sub = sublattice_from_json(&read_file(input)?)?;
            let gluing = Gluing::new(&sub)?;
            Ok((glue_report_value(&gluing)?, ExitCode::SUCCESS))
        }
        Command::K3Moduli {
            genus,
            ns,
            mukai,
            allow_ineffective,
        } => {
            let cfg = match (genus, ns) {
                (Some(g), None) => K3Config::picard_rank_one(*g)?,
                (None, Some(path)) => K3Config::general(lattice_from_json(&read_file(path)?)?),
                _ => {
                    return Err(Error::Parameter(
                        "exactly one of --genus and --ns is required".into(),
                    ))
                }
            };
            let v = mukai_from_arg(mukai)?;
            let inv = moduli_invariants(&cfg, &v, !allow_ineffective)?;
            Ok((moduli_report_value(&inv), ExitCode::SUCCESS))
        }
        Command::K3Compare { genus, v, u } => {
            let cfg = K3Config::picard_rank_one(*genus)?;
            let report =
                l_equivalence_obstruction(&cfg, &mukai_from_arg(v)?, &mukai_from_arg(u)?)?;
            Ok((
                comparison_row_value(*genus, &report, true),
                ExitCode::SUCCESS,
            ))
        }
        Command::K3Counterexample { g_min, g_max } => {
            let rows = counterexample_report(*g_min, *g_max)?;
            Ok((counterexample_table_value(&rows), ExitCode::SUCCESS))
        }
        Command::OracleVerify {
            seed,
            trials,
            max_rank,
            max_entry,
        } => {
            let seed = match std::env::var("LATLAB_SEED") {
                Ok(s) => s.parse::<u64>().map_err(|_| {
                    Error::Parameter(format!("LATLAB_SEED must be an unsigned integer, got `{s}`"))
                })?,
                Err(_) => *seed,
            };
            let cfg = FuzzConfig::new(seed, *trials, *max_rank, *max_entry)?;
            let outcomes = run_all_campaigns(&cfg);
            let all_passed = outcomes.iter().all(|o| o.passed());
            let report = campaign_report_value(seed, *trials, &outcomes);
            if all_passed {
                Ok((report, ExitCode::SUCCESS))
            } else {
                // A failed campaign means a proven identity did not hold:
                // that is an internal bug, not an input problem.
                eprintln!("error: verification campaign found a violated invariant");
                Ok((report, ExitCode::from(1)))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok((report, status)) => {
            emit(cli.format, &report);
            status
        }
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_internal() {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
