use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(name = "orbitkit", version, about = "Orbit method computations for finite p-groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Include wall-clock timings (reports are then no longer reproducible byte for byte).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Baker-Campbell-Hausdorff series with p-adic valuations.
    Bch {
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long)]
        degree: usize,
        /// Print the substituted series of a regime instead, e.g. sqrtp:5.
        #[arg(long)]
        regime: Option<String>,
    },
    /// Solve for phi, psi with CH = e^{ad phi} x + e^{ad psi} y.
    Solve {
        #[arg(long)]
        regime: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = Strategy::Fixed)]
        strategy: Strategy,
    },
    /// Character table from coadjoint orbits, brute force, or both.
    Chartable {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Harmonic-analysis identities of the orbit method.
    Verify {
        #[arg(long)]
        input: PathBuf,
        /// Run every applicable check (the default).
        #[arg(long)]
        all: bool,
        /// Comma-separated subset of idempotents, expstar, twist, orthogonality, p2.
        #[arg(long, value_delimiter = ',')]
        checks: Vec<commands::CheckName>,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Chain of uniform lattices in a nilpotent Q_p Lie algebra.
    Chain {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 4)]
        levels: usize,
    },
    /// Orbit restriction against restriction of characters.
    Restrict {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        subring: PathBuf,
        #[arg(long, default_value_t = 1)]
        alpha: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Strategy {
    Fixed,
    Plocal,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Kirillov,
    Oracle,
    Both,
}

fn seed() -> Result<u64, String> {
    match std::env::var("ORBITKIT_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| format!("ORBITKIT_SEED={s:?} is not an unsigned integer")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = match seed() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let start = Instant::now();
    let result = match cli.command {
        Command::Bch { prime, degree, regime } => commands::bch(prime, degree, regime.as_deref(), seed),
        Command::Solve { regime, degree, strategy } => commands::solve(&regime, degree, strategy, seed),
        Command::Chartable { input, method, tolerance } => commands::chartable(&input, method, tolerance, seed),
        Command::Verify { input, all, checks, tolerance } => {
            let checks = if all || checks.is_empty() { commands::CheckName::all() } else { checks };
            commands::verify(&input, &checks, tolerance, seed)
        }
        Command::Chain { input, levels } => commands::chain(&input, levels, seed),
        Command::Restrict { input, subring, alpha } => commands::restrict(&input, &subring, alpha, seed),
    };
    let mut report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if cli.timings {
        report.timings = Some([("total".to_string(), start.elapsed().as_secs_f64())].into());
    }
    let text = report.to_json();
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
