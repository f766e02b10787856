//! `selfsim`: command-line workbench for self-similar actions on rooted
//! trees.

mod dynamic;
mod spec;
mod suites;

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use selfsim::engine::{act_vertex, format_cycles, format_vertex, parse_vertex, portrait, states};
use selfsim::padic::{alpha_stream, eta_digits, eta_value};
use selfsim::{DigitWord, Error, Machine};

use crate::dynamic::AnyMachine;
use crate::spec::{build_machine, load_json, parse_element_arg, parse_eta, parse_rational};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Input(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::PrecisionExhausted) => 3,
            _ => 2,
        }
    }
}

#[derive(Parser)]
#[command(name = "selfsim", version, about = "Self-similar actions from virtual endomorphisms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the digits alpha_1..alpha_n of the eta-numeration.
    Alpha {
        #[arg(long)]
        eta: String,
        #[arg(short = 'n', default_value_t = 16)]
        n: usize,
        /// Also print p_k(1/eta) for k = 0..n.
        #[arg(long)]
        verbose: bool,
    },
    /// Base-eta digits of a rational with odd denominator, least significant first.
    Digits {
        #[arg(long)]
        eta: String,
        #[arg(long, allow_hyphen_values = true, required_unless_present = "word", conflicts_with = "word")]
        value: Option<String>,
        #[arg(short = 'n', default_value_t = 16)]
        n: usize,
        /// Evaluate a digit word instead (inverse of --value).
        #[arg(long)]
        word: Option<String>,
    },
    /// Image of a vertex under an element.
    Act {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value = "")]
        vertex: String,
    },
    /// Portrait of an element: one line per vertex with its local permutation.
    Portrait {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 3)]
        depth: usize,
    },
    /// States (iterated restrictions) of an element.
    States {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 200)]
        budget: usize,
    },
    /// Run a verification suite; exits 1 if any check fails.
    Verify {
        #[arg(long)]
        machine: String,
        #[arg(long)]
        suite: String,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Word length for the corefree suite.
        #[arg(long, default_value_t = 3)]
        length: usize,
        /// State budget for the states suite.
        #[arg(long, default_value_t = 200)]
        budget: usize,
    },
}

#[derive(Args)]
struct Target {
    /// JSON machine spec, a bare type name, or @file.
    #[arg(long)]
    machine: String,
    #[arg(long, allow_hyphen_values = true)]
    element: String,
}

impl Target {
    fn load(&self) -> Result<(AnyMachine, dynamic::AnyElem), CliError> {
        let m = build_machine(&load_json(&self.machine)?)?;
        let g = parse_element_arg(&m, &self.element)?;
        Ok((m, g))
    }
}

/// Output and whether every check passed.
fn run(cmd: Command) -> Result<(String, bool), CliError> {
    let mut out = String::new();
    match cmd {
        Command::Alpha { eta, n, verbose } => {
            let s = alpha_stream(&parse_eta(&eta)?, n)?;
            let digits: Vec<String> = s.alphas().iter().map(u8::to_string).collect();
            writeln!(out, "{}", digits.join(" ")).unwrap();
            if verbose {
                for (k, p) in s.values().iter().enumerate() {
                    writeln!(out, "p_{k}(1/eta) = {p}").unwrap();
                }
            }
        }
        Command::Digits { eta, value, n, word } => {
            let eta = parse_eta(&eta)?;
            match (value, word) {
                (Some(v), _) => writeln!(out, "{}", eta_digits(&parse_rational(&v)?, &eta, n)?).unwrap(),
                (None, Some(w)) => writeln!(out, "{}", eta_value(&w.parse::<DigitWord>()?, &eta)).unwrap(),
                (None, None) => unreachable!("clap requires one of --value, --word"),
            }
        }
        Command::Act { target, vertex } => {
            let (m, g) = target.load()?;
            let v = parse_vertex(&vertex, m.degree())?;
            writeln!(out, "{}", format_vertex(&act_vertex(&m, &v, &g)?, m.degree())).unwrap();
        }
        Command::Portrait { target, depth } => {
            let (m, g) = target.load()?;
            let p = portrait(&m, &g, depth)?;
            for v in p.vertices() {
                writeln!(out, "{}\t{}", format_vertex(v, m.degree()), format_cycles(&p.labels[v])).unwrap();
            }
        }
        Command::States { target, budget } => {
            let (m, g) = target.load()?;
            let s = states(&m, &g, budget)?;
            writeln!(out, "count: {}", s.len()).unwrap();
            writeln!(out, "status: {}", s.status).unwrap();
            for e in &s.elements {
                writeln!(out, "{e}").unwrap();
            }
        }
        Command::Verify { machine, suite, depth, trials, seed, length, budget } => {
            let m = build_machine(&load_json(&machine)?)?;
            let params = suites::Params { depth, trials, seed, length, budget };
            let checks = suites::run(&m, &suite, &params)?;
            for c in &checks {
                writeln!(out, "{c}").unwrap();
            }
            return Ok((out, checks.iter().all(|c| c.passed)));
        }
    }
    Ok((out, true))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((out, passed)) => {
            print!("{out}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
