use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, ValueEnum};
use piecel::commands;
use piecel::{CurveConfig, Session};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Command {
    /// Local factors at the prime ideals above p <= primes.
    Factor,
    /// Dirichlet coefficients (the first `primes` are printed).
    Coeffs,
    /// Functional-equation residual.
    Checkfe,
    /// L(1) with the solved root number.
    Lvalue,
    /// Deligne periods of the piece and its conjugate.
    Periods,
    /// L(1)/Omega and its recognition.
    Deligne,
    /// Factorization identity against the full zeta numerator.
    Oracle,
    /// Functional-equation residual over the configured conductor ranges.
    Condsearch,
}

#[derive(Parser, Debug)]
#[command(name = "piecel", version, about = "L-functions and periods of superelliptic curve pieces")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Curve configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Prime bound for factor and oracle, row count for coeffs.
    #[arg(long)]
    primes: Option<u64>,
    /// Working precision in decimal digits.
    #[arg(long)]
    digits: Option<u32>,
    /// Local factor cache file.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Worker threads (defaults to all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Seed for field construction and twist units; results do not depend on it.
    #[arg(long)]
    seed: Option<u64>,
}

fn run(cli: &Cli) -> Result<ExitCode> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    let s = Session::new(CurveConfig::load(&cli.config)?, cli.digits, cli.seed)?;
    match cli.command {
        Command::Factor => {
            let mut cache = s.open_cache(cli.cache.as_deref())?;
            print!("{}", commands::factor(&s, cli.primes.unwrap_or(50), &mut cache)?);
        }
        Command::Coeffs => print!("{}", commands::coeffs(&s, cli.primes.unwrap_or(20) as usize)?),
        Command::Checkfe => {
            let r = commands::checkfe(&s)?;
            print!("{r}");
            if !r.passed() {
                return Ok(ExitCode::from(3));
            }
        }
        Command::Lvalue => print!("{}", commands::lvalue(&s)?),
        Command::Periods => print!("{}", commands::periods(&s)?),
        Command::Deligne => {
            let r = commands::deligne(&s)?;
            print!("{r}");
            if !r.recognition.certified {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Oracle => {
            let r = commands::oracle(&s, cli.primes.unwrap_or(50))?;
            print!("{r}");
            if !r.all_pass() {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Condsearch => print!("{}", commands::condsearch(&s)?),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
