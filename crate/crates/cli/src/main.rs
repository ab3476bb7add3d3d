use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use onebound_core::lp::Sense;
use onebound_core::Rational;

mod commands;

use commands::CliError;

/// Exact bounds on the probability that exactly one of n pairwise
/// independent events occurs.
#[derive(Debug, Parser)]
#[command(name = "onebound", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form lower bound, independent value and reflected bound.
    Bound {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: Rational,
        /// Also render decimals with this many fractional digits.
        #[arg(long)]
        digits: Option<usize>,
    },
    /// Build the extremal exchangeable distribution attaining the bound.
    Construct {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: Rational,
        /// Write the distribution JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimize P(N=m) under r-wise independence with marginal p.
    Lp {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        p: Rational,
        #[arg(long, default_value = "min")]
        sense: Sense,
        /// Write the linear program JSON here.
        #[arg(long)]
        lp_out: Option<PathBuf>,
        #[arg(long)]
        digits: Option<usize>,
    },
    /// Optimize the probability of an event under arbitrary event constraints.
    General {
        /// Problem file: {n, constraints: [{event, p}], target, sense}.
        problem: PathBuf,
        #[arg(long)]
        digits: Option<usize>,
    },
    /// Emit the P(N=1) table along p = c/n as CSV.
    Figure {
        #[arg(long, default_value_t = 3)]
        n_min: u32,
        #[arg(long, default_value_t = 40)]
        n_max: u32,
        /// Values of c; defaults to 1/2, 9/10, 1, 11/10.
        #[arg(long, value_delimiter = ',')]
        c: Vec<Rational>,
        #[arg(long, default_value_t = 6)]
        digits: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact and Monte Carlo checks of a level-weight distribution file.
    Verify {
        distribution: PathBuf,
        /// Common marginal; inferred from the distribution when omitted.
        #[arg(long)]
        p: Option<Rational>,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

fn run(cli: Cli) -> Result<commands::Outcome, CliError> {
    match cli.command {
        Command::Bound { n, p, digits } => commands::bound(n, p, digits),
        Command::Construct { n, p, out } => commands::construct(n, p, out.as_deref()),
        Command::Lp { n, r, m, p, sense, lp_out, digits } => {
            commands::lp(n, r, m, p, sense, lp_out.as_deref(), digits)
        }
        Command::General { problem, digits } => commands::general(&problem, digits),
        Command::Figure { n_min, n_max, c, digits, out } => {
            commands::figure(n_min, n_max, c, digits, out.as_deref())
        }
        Command::Verify { distribution, p, trials, seed } => {
            commands::verify(&distribution, p, trials, seed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.code)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
