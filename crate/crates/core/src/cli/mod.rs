//! The `linrep` command line: argument parsing, input loading, report
//! emission and exit codes.

mod commands;
mod input;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;

/// Process exit statuses.
pub mod exit {
    pub const OK: u8 = 0;
    pub const INPUT_ERROR: u8 = 1;
    pub const CHECK_FAILED: u8 = 2;
    pub const BUDGET_EXCEEDED: u8 = 3;
}

/// Environment variable capping the worker pool size.
pub const THREADS_ENV: &str = "LINREP_THREADS";

const GRAMMARS: &str = "\
Grammars:
  group-algebra element   elem := term (('+' | '-') term)*, term := coef ['*' word] | word,
                          word := 'e' | gen ('*' gen)*, gen := 'g' digit+ ['^' ['-'] digit+]
  rational expression     expr := term (('+' | '-') term)*, term := factor ('*' factor)*,
                          factor := 'z' digit+ | const | 'inv' '(' expr ')' | '(' expr ')'
  polynomial              poly := term (('+' | '-') term)*, term := coef ['*' mono] | mono,
                          mono := 'x' ['^' digit+]
  field                   p or p^d, e.g. 2, 3, 2^8
  rational                3, 1/32, 0.25
  family                  cyclic, or a JSON descriptor such as
                          {\"family\":\"abelian_quotient\",\"moduli\":[1,2]}, or a path to one
Constants are field element codes in [0, q).

Exit status: 0 success, 1 input error, 2 check failed, 3 budget exceeded.
Set LINREP_THREADS to fix the worker pool size; output does not depend on it.";

#[derive(Parser, Debug)]
#[command(name = "linrep", version, about = "Exact finite-field tools for free-group representation sequences")]
#[command(after_help = GRAMMARS)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A representation given as a file or as a family member.
#[derive(Args, Debug, Clone)]
pub struct RepArgs {
    /// Representation JSON file (`field`, `r`, `n`, `generators`).
    #[arg(long, conflicts_with = "family")]
    pub rep: Option<PathBuf>,
    /// Built-in family; see the grammar notes.
    #[arg(long)]
    pub family: Option<String>,
    /// Family member index.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Field for family members.
    #[arg(long, default_value = "2")]
    pub field: String,
}

/// A group-algebra matrix: one element or a JSON file of rows of strings.
#[derive(Args, Debug, Clone)]
pub struct ElementArgs {
    #[arg(long, conflicts_with = "matrix")]
    pub element: Option<String>,
    #[arg(long)]
    pub matrix: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct TilingArgs {
    /// Tiling problem JSON file.
    #[arg(long, conflicts_with = "laurent")]
    pub problem: Option<PathBuf>,
    /// Built-in Laurent truncation problem of dimension M.
    #[arg(long, value_name = "M")]
    pub laurent: Option<usize>,
    /// delta; overrides the problem file, defaults to 1/4 for `--laurent`.
    #[arg(long)]
    pub delta: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Normalized rank of a group-algebra matrix under one representation.
    Rank {
        #[command(flatten)]
        rep: RepArgs,
        #[command(flatten)]
        element: ElementArgs,
    },
    /// Normalized ranks along a family.
    Profile {
        #[arg(long)]
        family: String,
        /// Member indices: `a..b` (inclusive) or a comma list.
        #[arg(long)]
        k: String,
        #[command(flatten)]
        element: ElementArgs,
        #[arg(long, default_value = "2")]
        field: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Integrality diagnostic on the tail of a profile CSV.
    Atiyah {
        /// Profile CSV as written by `profile`; `-` reads stdin.
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, default_value_t = 8)]
        window: usize,
        #[arg(long, default_value = "1/32")]
        tol: String,
    },
    /// Greedy tiling; writes a certificate.
    Tile {
        #[command(flatten)]
        problem: TilingArgs,
        /// Candidates tried beyond the echelon basis.
        #[arg(long, default_value_t = 4096)]
        pool_budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Recomputes a tiling certificate from scratch.
    TileVerify {
        #[command(flatten)]
        problem: TilingArgs,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Checks a hyperfiniteness witness against a representation.
    HyperfiniteCheck {
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long)]
        witness: PathBuf,
    },
    /// Heuristic search for a hyperfiniteness witness.
    HyperfiniteSearch {
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long)]
        epsilon: String,
        /// Largest tile dimension.
        #[arg(long = "max-dim", value_name = "K")]
        max_dim: usize,
        /// Starting vectors tried after the coordinate blocks.
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Linear Cheeger constant, exact or sampled.
    Cheeger {
        #[command(flatten)]
        rep: RepArgs,
        /// Sample this many random subspaces instead of scanning all.
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Subspaces an exact scan may visit.
        #[arg(long, default_value_t = 1 << 20)]
        cap: u128,
    },
    /// Exact check that every small subspace grows by a factor above 1 + alpha.
    Expander {
        #[command(flatten)]
        rep: RepArgs,
        #[arg(long)]
        alpha: String,
        #[arg(long, default_value_t = 1 << 20)]
        cap: u128,
    },
    /// Checks sofic data: unit, multiplicative defect and rank bounds.
    SoficCheck {
        /// Sofic data JSON file.
        #[arg(long, conflicts_with = "truncation")]
        data: Option<PathBuf>,
        /// Built-in polynomial truncation data of degree D.
        #[arg(long, value_name = "D")]
        truncation: Option<usize>,
        /// Truncation sizes for the built-in data.
        #[arg(long, value_delimiter = ',', default_value = "8,16,32,64")]
        ms: Vec<usize>,
        #[arg(long, default_value = "2")]
        field: String,
        /// Check only this (1-based) map.
        #[arg(long)]
        index: Option<usize>,
    },
    /// Følner pair for a set of polynomials.
    Folner {
        /// Polynomials, repeatable.
        #[arg(long = "element", required = true)]
        elements: Vec<String>,
        #[arg(long)]
        delta: String,
        #[arg(long, default_value = "2")]
        field: String,
        /// Largest admissible truncation size.
        #[arg(long, default_value_t = 1 << 12)]
        cap: usize,
    },
    /// Evaluates a rational expression on a matrix tuple.
    NcratEval {
        #[arg(long)]
        expr: String,
        #[arg(long, default_value = "2")]
        field: String,
        /// JSON list of square matrices (rows of integer codes).
        #[arg(long, conflicts_with = "random")]
        tuple: Option<PathBuf>,
        /// Evaluate on a seeded random tuple of this size instead.
        #[arg(long, value_name = "SIZE")]
        random: Option<usize>,
        /// Tuple entries live in the degree-`ext_deg` extension.
        #[arg(long, default_value_t = 1)]
        ext_deg: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Randomized equivalence test of two rational expressions.
    NcratEquiv {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long, default_value = "2")]
        field: String,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4")]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 200)]
        trials: u64,
        #[arg(long, default_value_t = 8)]
        ext_deg: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Minimal-rank perturbation of a square matrix to an invertible one.
    Repair {
        /// JSON matrix (rows of integer codes).
        #[arg(long, conflicts_with = "random")]
        matrix: Option<PathBuf>,
        /// Repair a seeded random matrix of this size instead.
        #[arg(long, value_name = "N")]
        random: Option<usize>,
        /// Rank of the random matrix.
        #[arg(long)]
        rank: Option<usize>,
        #[arg(long, default_value = "2")]
        field: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// A failed run: an exit status and a message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: exit::INPUT_ERROR,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } | Error::Infeasible(_) => exit::BUDGET_EXCEEDED,
            Error::TheoremViolated(_) => exit::CHECK_FAILED,
            _ => exit::INPUT_ERROR,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit status. Reports go to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { exit::INPUT_ERROR } else { exit::OK };
        }
    };
    match commands::execute(&cli.command, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Reads [`THREADS_ENV`] and installs a global pool of that size.
pub fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("{THREADS_ENV} must be a positive integer, got `{value}`"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (u8, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("linrep").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn profile_csv() {
        let (code, out, _) = run_args(&["profile", "--family", "cyclic", "--k", "2..4", "--element", "g1 - 1"]);
        assert_eq!(code, exit::OK);
        assert_eq!(out, "k,n_k,rank,num,den\n2,2,1,1,2\n3,3,2,2,3\n4,4,3,3,4\n");
    }

    #[test]
    fn tampered_certificate_fails_the_check() {
        let dir = tempfile::tempdir().unwrap();
        let (code, cert, _) = run_args(&["tile", "--laurent", "32"]);
        assert_eq!(code, exit::OK);
        let good = dir.path().join("good.json");
        std::fs::write(&good, &cert).unwrap();
        let (code, _, _) = run_args(&["tile-verify", "--laurent", "32", "--cert", good.to_str().unwrap()]);
        assert_eq!(code, exit::OK);

        let mut value: serde_json::Value = serde_json::from_str(&cert).unwrap();
        value["centers"][0][0] = serde_json::json!(1 - value["centers"][0][0].as_u64().unwrap());
        let bad = dir.path().join("bad.json");
        std::fs::write(&bad, value.to_string()).unwrap();
        let (code, out, _) = run_args(&["tile-verify", "--laurent", "32", "--cert", bad.to_str().unwrap()]);
        assert_eq!(code, exit::CHECK_FAILED, "{out}");
    }

    #[test]
    fn witness_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let fam = r#"{"family":"abelian_quotient","moduli":[1,1]}"#;
        let (code, w, _) = run_args(&[
            "hyperfinite-search", "--family", fam, "--k", "3", "--epsilon", "1/2", "--max-dim", "9",
        ]);
        assert_eq!(code, exit::OK);
        let path = dir.path().join("w.json");
        std::fs::write(&path, w).unwrap();
        let (code, _, _) = run_args(&["hyperfinite-check", "--family", fam, "--k", "3", "--witness", path.to_str().unwrap()]);
        assert_eq!(code, exit::OK);
    }

    #[test]
    fn input_errors_exit_one() {
        assert_eq!(run_args(&["frobnicate"]).0, exit::INPUT_ERROR);
        assert_eq!(run_args(&["rank", "--family", "cyclic", "--k", "3"]).0, exit::INPUT_ERROR);
        let (code, _, err) = run_args(&["ncrat-eval", "--expr", "inv(z1", "--random", "2"]);
        assert_eq!(code, exit::INPUT_ERROR);
        assert!(err.contains("position 6"), "{err}");
        assert_eq!(run_args(&["tile-verify", "--laurent", "16", "--cert", "/nonexistent"]).0, exit::INPUT_ERROR);
        assert_eq!(run_args(&["--help"]).0, exit::OK);
    }

    #[test]
    fn budget_exits_three() {
        let (code, _, _) = run_args(&["cheeger", "--family", "cyclic", "--k", "12", "--cap", "10"]);
        assert_eq!(code, exit::BUDGET_EXCEEDED);
        let (code, _, _) = run_args(&["ncrat-equiv", "--left", "inv(z1 - z1)", "--right", "z1", "--trials", "5"]);
        assert_eq!(code, exit::BUDGET_EXCEEDED);
    }

    #[test]
    fn k_list_forms() {
        assert_eq!(input::k_list("2..4").unwrap(), vec![2, 3, 4]);
        assert_eq!(input::k_list("5,7").unwrap(), vec![5, 7]);
        assert!(input::k_list("0..3").is_err());
        assert!(input::k_list("4..2").is_err());
    }
}
