//! Batch front end: every subcommand prints one JSON record per check,
//! followed by a summary record.

mod commands;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use output::{Outcome, Record};
use std::process::ExitCode;
use std::sync::mpsc;
use std::thread;
use std::time::Duration;

#[derive(Debug, Parser)]
#[command(
    name = "weylvar",
    version,
    about = "Verification harnesses for Weyl group computations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Debug, Clone, Args)]
struct Global {
    /// JSON lines (default).
    #[arg(long, global = true, conflicts_with = "table")]
    json: bool,
    /// Tab-separated table, with a header whenever the columns change.
    #[arg(long, global = true)]
    table: bool,
    /// Treat "unknown" results as failures.
    #[arg(long, global = true)]
    strict: bool,
    /// Wall-clock cap for the whole subcommand.
    #[arg(long, global = true, default_value_t = 600_000, value_parser = clap::value_parser!(u64).range(1..))]
    budget_ms: u64,
    /// Omit the timestamp from the summary record.
    #[arg(long, global = true)]
    no_timestamp: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Bullet {
    Identity,
    Flip,
}

#[derive(Debug, Clone, Args)]
struct SystemArgs {
    /// Cartan type such as `D4`, or a family letter combined with `--rank`.
    #[arg(long = "type", default_value = "A2")]
    kind: String,
    #[arg(long)]
    rank: Option<usize>,
    /// Diagram automorphism used for twisted conjugacy.
    #[arg(long, value_enum, default_value = "identity")]
    bullet: Bullet,
}

#[derive(Debug, Clone, Args)]
struct ClassArgs {
    /// Class selected by a dotted word in the generator labels.
    #[arg(long, conflicts_with = "partition")]
    class: Option<String>,
    /// Class of the classical representative for a partition signature,
    /// e.g. `2,1` (types B, C, D).
    #[arg(long, value_delimiter = ',')]
    partition: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TwistArg {
    Frobenius,
    Trivial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormArg {
    Symplectic,
    EvenOrthogonal,
    OddOrthogonal,
}

#[derive(Debug, Clone, Subcommand)]
enum Command {
    /// Order, root count, longest element and degrees.
    Group {
        #[command(flatten)]
        system: SystemArgs,
    },
    /// One row per twisted conjugacy class.
    Classes {
        #[command(flatten)]
        system: SystemArgs,
    },
    /// Connectivity of the graph on minimal-length elements (elliptic
    /// classes unless one is selected).
    Gamma {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Loop image equals the stabilizer at every base point.
    #[command(name = "verify-12a")]
    Verify12a {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        class: ClassArgs,
    },
    /// Search for a power of the twisted lift divisible by the Garside element.
    GoodElt {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        class: ClassArgs,
        /// Largest exponent tried.
        #[arg(long, default_value_t = 24, value_parser = clap::value_parser!(u64).range(1..))]
        depth: u64,
    },
    /// Twisted trace polynomials, checked against fixed-point counts at q = 1.
    HeckeTrace {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        w: Option<String>,
        #[arg(long = "w2")]
        w_prime: Option<String>,
        /// Also report the value at this q.
        #[arg(long)]
        q: Option<i64>,
    },
    /// Point counts for chosen pairs of `SL_n` with their Hecke comparison.
    Count {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 1)]
        s: u32,
        #[arg(long)]
        w: Option<String>,
        #[arg(long = "w2")]
        w_prime: Option<String>,
    },
    /// Full count matrix against the Hecke traces.
    #[command(name = "verify-53")]
    Verify53 {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 1)]
        s: u32,
    },
    /// Identities among the maps between varieties of `SL_n`.
    SigmaCheck {
        #[command(flatten)]
        system: SystemArgs,
        #[arg(long)]
        q: u32,
        /// Highest field level enumerated.
        #[arg(long, default_value_t = 2)]
        s: u32,
        /// Only the identities that need a braid configuration.
        #[arg(long)]
        braid_only: bool,
    },
    /// Freeness and stabilizer orders on the varieties of a permutation.
    Isotropy {
        #[command(flatten)]
        system: SystemArgs,
        #[command(flatten)]
        class: ClassArgs,
        #[arg(long)]
        q: u32,
        /// Field level; defaults to `n`, the first level where the Coxeter
        /// variety has points.
        #[arg(long)]
        s: Option<u32>,
    },
    /// Companion-matrix round trips on random cyclic pairs.
    Param {
        #[arg(long)]
        n: usize,
        /// Field size, a prime power.
        #[arg(long)]
        q: u32,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "frobenius")]
        twist: TwistArg,
    },
    /// Gram elimination solved and verified on a range of seeds.
    Gram {
        #[arg(long, value_enum)]
        form: FormArg,
        /// Block sizes, non-increasing, e.g. `2,1`.
        #[arg(long, value_delimiter = ',', required = true)]
        blocks: Vec<usize>,
        /// Field size, a prime power.
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum, default_value = "frobenius")]
        twist: TwistArg,
        /// First seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        seeds: u64,
        /// Quadratic-form value on the complement vector (odd orthogonal).
        #[arg(long, default_value_t = 1)]
        complement: u32,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Group { .. } => "group",
            Command::Classes { .. } => "classes",
            Command::Gamma { .. } => "gamma",
            Command::Verify12a { .. } => "verify-12a",
            Command::GoodElt { .. } => "good-elt",
            Command::HeckeTrace { .. } => "hecke-trace",
            Command::Count { .. } => "count",
            Command::Verify53 { .. } => "verify-53",
            Command::SigmaCheck { .. } => "sigma-check",
            Command::Isotropy { .. } => "isotropy",
            Command::Param { .. } => "param",
            Command::Gram { .. } => "gram",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let (tx, rx) = mpsc::channel();
    let command = cli.command.clone();
    // The worker is abandoned on timeout; the process exits right after.
    thread::spawn(move || {
        let _ = tx.send(commands::run(command));
    });
    let outcome = match rx.recv_timeout(Duration::from_millis(cli.global.budget_ms)) {
        Ok(Ok(records)) => Outcome::Finished(records),
        Ok(Err(e)) => {
            eprintln!("weylvar {name}: {e}");
            return ExitCode::from(2);
        }
        Err(_) => Outcome::Unknown(Record::new().with(
            "reason",
            format!("budget of {} ms exceeded", cli.global.budget_ms),
        )),
    };
    let table = cli.global.table && !cli.global.json;
    let summary = output::emit(name, &outcome, table, !cli.global.no_timestamp);
    if summary.failed > 0 || (cli.global.strict && summary.unknown > 0) {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
