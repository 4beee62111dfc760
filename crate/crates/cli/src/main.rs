//! Command-line verifier: runs the deterministic suites and emits JSON (or
//! markdown) reports with machine-readable exit codes.
//!
//! Exit codes: 0 all checks pass, 1 at least one verified violation,
//! 2 input or validation error. Reports are byte-identical across runs for
//! identical command lines (including seeds); wall-clock timing goes to
//! stderr only.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};

use lieverify::report::{self, SuiteReport};
use lieverify::suites;

#[derive(Parser)]
#[command(name = "lieverify", version, about = "Exact-arithmetic verifier for symplectic, graded sl2 and symmetric-pair identities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one suite (or all) and print its JSON report to stdout.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Run every suite and write the combined report to a file.
    Report {
        /// Output format.
        #[arg(long, value_parser = ["json", "md"])]
        format: String,
        /// Output path.
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum Suite {
    /// Graded sl2 defect calculus.
    Sl2 {
        #[arg(long, default_value_t = 8)]
        max_lambda: u32,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Linear symplectic properties on random subspaces.
    Symplectic {
        /// Ambient dimension 2m.
        #[arg(long, default_value_t = 8)]
        dim: usize,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Symmetric-pair checks for a catalog family or a JSON input file.
    Pair {
        /// Catalog family: diag-sl, sl-so, sl-split, sp-gl, so-so0, so-so1, so-so2.
        #[arg(long, requires = "size", conflicts_with = "input")]
        family: Option<String>,
        #[arg(long, requires = "family")]
        size: Option<usize>,
        /// JSON file with { "n", "g_basis", "theta" }.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Finite-field enumeration of the fiber variety over a Jordan block.
    Keylemma {
        #[arg(long)]
        n: usize,
        /// May be repeated; three or more primes enable the dimension estimate.
        #[arg(long = "prime", required = true)]
        primes: Vec<u64>,
    },
    /// Every suite in a fixed order.
    All {
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

fn main() {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(cli);
    let code = match outcome {
        Ok(code) => {
            eprintln!("elapsed: {} ms", start.elapsed().as_millis());
            code
        }
        Err(message) => {
            eprintln!("error: {message}");
            2
        }
    };
    std::process::exit(code);
}

fn exit_code(reports: &[SuiteReport]) -> i32 {
    if reports.iter().all(SuiteReport::overall_pass) {
        0
    } else {
        1
    }
}

fn run(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::Verify { suite } => {
            let reports = run_suite(suite)?;
            print!("{}", report::to_json(&reports));
            Ok(exit_code(&reports))
        }
        Command::Report { format, out, seed } => {
            let reports = suites::run_all(seed);
            let text = match format.as_str() {
                "json" => report::to_json(&reports),
                "md" => report::to_markdown(&reports),
                other => return Err(format!("unknown format {other}")),
            };
            fs::write(&out, text).map_err(|e| format!("cannot write {}: {e}", out.display()))?;
            eprintln!("wrote {}", out.display());
            Ok(exit_code(&reports))
        }
    }
}

fn run_suite(suite: Suite) -> Result<Vec<SuiteReport>, String> {
    match suite {
        Suite::Sl2 { max_lambda, trials, seed } => {
            Ok(vec![suites::run_sl2_suite(max_lambda, trials, seed)])
        }
        Suite::Symplectic { dim, trials, seed } => {
            if dim == 0 || dim % 2 != 0 {
                return Err(format!("--dim must be a positive even number, got {dim}"));
            }
            Ok(vec![suites::run_symplectic_suite(dim, trials, seed)])
        }
        Suite::Pair { family, size, input } => match (family, size, input) {
            (Some(family), Some(size), None) => suites::run_pair_family_suite(&family, size)
                .map(|r| vec![r])
                .map_err(|e| e.to_string()),
            (None, None, Some(path)) => {
                let text = fs::read_to_string(&path)
                    .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
                suites::run_pair_json_suite(&text).map(|r| vec![r]).map_err(|e| e.to_string())
            }
            _ => Err("pair needs either --family with --size, or --input".into()),
        },
        Suite::Keylemma { n, primes } => {
            suites::run_keylemma_suite(n, &primes).map(|r| vec![r]).map_err(|e| e.to_string())
        }
        Suite::All { seed } => Ok(suites::run_all(seed)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use lieverify::report::SuiteReport;

    #[test]
    fn exit_code_tracks_overall_status() {
        let mut pass = SuiteReport::new("a", 0);
        pass.pass("x");
        assert_eq!(exit_code(&[pass.clone()]), 0);
        let mut fail = SuiteReport::new("b", 0);
        fail.fail("y", "witness");
        assert_eq!(exit_code(&[pass, fail]), 1);
    }
}
