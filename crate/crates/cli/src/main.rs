//! `sqhole`: command-line front end for firing squad synchronization on
//! squares with holes.
//!
//! Exit codes: 0 success, 1 internal failure, 2 invalid input, 3 a search
//! found nothing (NOT_FOUND), 4 the enumeration budget was exceeded.

mod commands;
mod failure;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;
use sqhole::{HalfPlane, Position};

use commands::{Inputs, TableFormat};
use failure::{CmdResult, Outcome};
use report::{inputs_digest, RunReport};

/// Seed used by randomized sweeps when `--seed` is not given.
const DEFAULT_SEED: u64 = 0x5eed_2024;

#[derive(Parser, Debug)]
#[command(name = "sqhole", version, about = "Firing squad synchronization on squares with holes")]
struct Cli {
    /// Seed for randomized sweeps (decimal or 0x-prefixed hex).
    #[arg(long, global = true, default_value_t = DEFAULT_SEED, value_parser = parse_seed)]
    seed: u64,
    /// Worker threads for parallel computations (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Also write a JSON run report (command, input digest, seed, results, timing) to this file.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Pretty-print JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse and validate a configuration file (JSON or ASCII; `-` for stdin).
    Validate {
        config: PathBuf,
        /// Print the configuration in the ASCII grid format.
        #[arg(long, conflicts_with = "canonical")]
        ascii: bool,
        /// Print the canonical JSON document.
        #[arg(long)]
        canonical: bool,
    },
    /// Run a simulator.
    #[command(subcommand)]
    Simulate(Simulate),
    /// List the maximal barriers of a configuration.
    Barriers {
        config: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Compute c_k by exhaustive barrier-shape enumeration.
    Ck {
        #[arg(long)]
        k: usize,
        /// List every maximizing (shape, node) pair instead of counting them.
        #[arg(long)]
        list_argmax: bool,
        /// Raise the enumeration cap to include k = 7.
        #[arg(long)]
        allow_k7: bool,
    },
    /// Print the per-node time bound T and its maximum.
    Tvc {
        config: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Minimum firing time of a two-hole configuration (w >= 11) with evidence.
    Classify {
        config: PathBuf,
        /// Include the full certificate (chain or verified witness plan).
        #[arg(long)]
        certificate: bool,
    },
    /// Search for a chain of pattern-preserving moves to a critical pair.
    Certify { config: PathBuf },
    /// Compare two configurations.
    Equiv {
        first: PathBuf,
        second: PathBuf,
        /// Time horizon for the node-local equivalence.
        #[arg(long)]
        t: Option<u32>,
        /// Node for the node-local equivalence, as `x,y`.
        #[arg(long, value_parser = commands::parse_position, allow_hyphen_values = true)]
        v: Option<Position>,
        /// Check pattern equality on a half-plane set (H0, H1 or H2).
        #[arg(long, value_parser = commands::parse_half_plane)]
        half_plane: Option<HalfPlane>,
    },
    /// Recompute the c_k table and compare it with the published values.
    ReproTables {
        /// Values of k (comma separated).
        #[arg(long, value_delimiter = ',', default_values_t = vec![2, 3, 4, 5, 6])]
        k: Vec<usize>,
        #[arg(long, value_enum, default_value = "markdown")]
        format: TableFormat,
        /// Raise the enumeration cap to include k = 7.
        #[arg(long)]
        allow_k7: bool,
    },
    /// Exhaustive or seeded random verification sweeps.
    #[command(subcommand)]
    Sweep(Sweep),
}

#[derive(Subcommand, Debug)]
enum Simulate {
    /// The minimal-time line synchronizer on n cells.
    Line {
        #[arg(long)]
        n: usize,
        /// Print the space-time diagram.
        #[arg(long)]
        trace: bool,
    },
    /// The minimal-time square synchronizer (at most one hole).
    Sh1 {
        config: PathBuf,
        /// Print the grid after every step.
        #[arg(long)]
        trace: bool,
    },
    /// A message plan run against a configuration.
    Plan { config: PathBuf, plan: PathBuf },
}

#[derive(Subcommand, Debug)]
enum Sweep {
    /// Classify every two-hole configuration of size w and re-verify each certificate.
    Certify {
        #[arg(long)]
        w: i32,
        /// Also check the node-local equivalence at every chain step.
        #[arg(long)]
        equiv: bool,
    },
    /// Check the distance bound and its four exceptions over every two-hole configuration.
    Appendix {
        #[arg(long)]
        w: i32,
    },
    /// Random configurations: the closed-form bound must equal T inside barriers.
    Formula {
        #[arg(long)]
        w: i32,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let parsed = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(&hex.replace('_', ""), 16),
        None => s.replace('_', "").parse(),
    };
    parsed.map_err(|e| format!("invalid seed {s:?}: {e}"))
}

fn dispatch(cli: &Cli, inputs: &mut Inputs) -> CmdResult {
    match &cli.command {
        Command::Validate { config, ascii, canonical } => {
            let c = inputs.config(config)?;
            commands::validate(&c, *ascii, *canonical)
        }
        Command::Simulate(Simulate::Line { n, trace }) => commands::simulate_line(*n, *trace),
        Command::Simulate(Simulate::Sh1 { config, trace }) => commands::simulate_sh1(&inputs.config(config)?, *trace),
        Command::Simulate(Simulate::Plan { config, plan }) => {
            let c = inputs.config(config)?;
            let text = inputs.read(plan)?;
            commands::simulate_plan(&c, &text)
        }
        Command::Barriers { config, json } => commands::barriers(&inputs.config(config)?, *json),
        Command::Ck { k, list_argmax, allow_k7 } => commands::ck(*k, commands::budget(*allow_k7), *list_argmax),
        Command::Tvc { config, json } => commands::tvc(&inputs.config(config)?, *json),
        Command::Classify { config, certificate } => commands::classify(&inputs.config(config)?, *certificate),
        Command::Certify { config } => commands::certify(&inputs.config(config)?),
        Command::Equiv { first, second, t, v, half_plane } => {
            let a = inputs.config(first)?;
            let b = inputs.config(second)?;
            commands::equiv(&a, &b, *t, *v, *half_plane)
        }
        Command::ReproTables { k, format, allow_k7 } => commands::repro_tables(k, commands::budget(*allow_k7), *format),
        Command::Sweep(Sweep::Certify { w, equiv }) => commands::sweep_certify(*w, *equiv),
        Command::Sweep(Sweep::Appendix { w }) => commands::sweep_appendix(*w),
        Command::Sweep(Sweep::Formula { w, k, samples }) => commands::sweep_formula(*w, *k, *samples, cli.seed),
    }
}

fn print_outcome(out: &Outcome, pretty: bool) {
    match &out.text {
        Some(text) => print!("{text}"),
        None if pretty => println!("{}", serde_json::to_string_pretty(&out.value).expect("JSON values serialize")),
        None => println!("{}", out.value),
    }
}

fn write_report(path: &Path, report: &RunReport) -> Result<(), String> {
    let text = serde_json::to_string_pretty(report).expect("reports serialize");
    std::fs::write(path, text + "\n").map_err(|e| format!("cannot write report {}: {e}", path.display()))
}

/// The argument vector without `--report <file>`, so that the report
/// contents do not depend on where it is written.
fn command_echo(args: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len());
    let mut skip_next = false;
    for a in args {
        if skip_next {
            skip_next = false;
        } else if a == "--report" {
            skip_next = true;
        } else if !a.starts_with("--report=") {
            out.push(a.clone());
        }
    }
    out
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("sqhole: cannot configure {n} worker threads: {e}");
            return ExitCode::from(failure::EXIT_INTERNAL);
        }
    }
    let start = Instant::now();
    let mut inputs = Inputs::default();
    let result = dispatch(&cli, &mut inputs);
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let (code, results) = match &result {
        Ok(out) => {
            print_outcome(out, cli.pretty);
            (out.code, out.value.clone())
        }
        Err(f) => {
            eprintln!("sqhole: {}", f.message());
            (f.code(), json!({ "error": f.message() }))
        }
    };
    if let Some(path) = &cli.report {
        let command = command_echo(&args[1..]);
        let report = RunReport {
            inputs_sha256: inputs_digest(&command, &inputs.documents),
            command,
            seed: cli.seed,
            exit_code: code,
            results,
            elapsed_ms,
        };
        if let Err(e) = write_report(path, &report) {
            eprintln!("sqhole: {e}");
            return ExitCode::from(failure::EXIT_INTERNAL);
        }
    }
    ExitCode::from(code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn report_path_is_not_echoed() {
        let args: Vec<String> = ["--report", "r.json", "ck", "--k", "2", "--report=x"].map(String::from).to_vec();
        assert_eq!(command_echo(&args), ["ck", "--k", "2"]);
    }

    #[test]
    fn seeds_parse_in_both_bases() {
        assert_eq!(parse_seed("0x5eed_2024"), Ok(DEFAULT_SEED));
        assert_eq!(parse_seed("42"), Ok(42));
        assert!(parse_seed("0xzz").is_err());
    }
}
