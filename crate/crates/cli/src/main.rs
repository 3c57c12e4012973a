mod commands;
mod error;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use toric_nccr::derived::KoszulConvention;
use toric_nccr::semigroup::CovariantConvention;

use error::CliError;
use report::{Format, Report};

/// Exact GIT and toric computations for quotient singularities.
#[derive(Parser)]
#[command(name = "toric-nccr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Parallelism hint; every computation runs deterministically on one thread.
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Add,
    Subtract,
}

#[derive(Clone, Copy, ValueEnum)]
enum CovariantSign {
    Negated,
    Direct,
}

#[derive(Subcommand)]
enum Command {
    /// Unimodularity, genericity, unstable dimension and the NCCR verdict.
    Check {
        path: PathBuf,
        /// Character such as "1,-2" (torsion after ';').
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<String>,
    },
    /// K0 rank from the weight fan, a fan or a height-one polytope.
    K0 {
        path: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<String>,
    },
    /// Minimal generators of the invariant monoid.
    Hilbert {
        path: PathBuf,
        /// Degree bound; defaults to the a priori bound.
        #[arg(long)]
        bound: Option<u32>,
    },
    /// Minimal generators of a module of covariants.
    Covariants {
        path: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long, default_value_t = 8)]
        bound: u32,
        #[arg(long, value_enum, default_value_t = CovariantSign::Negated)]
        convention: CovariantSign,
    },
    /// Koszul saturation of a character set from the document.
    Saturate {
        path: PathBuf,
        /// Name of the seed character set.
        #[arg(long, default_value = "L")]
        seed: String,
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<String>,
        /// Box "lo:hi" or "lo1,lo2:hi1,hi2".
        #[arg(long, default_value = "-4:4", allow_hyphen_values = true)]
        window: String,
        #[arg(long, value_enum, default_value_t = Direction::Add)]
        convention: Direction,
        /// Write the saturation log as JSON lines.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Checks d0·d1 = d1·d0 = f·I.
    VerifyMf {
        path: PathBuf,
        /// Replacement d0 as a JSON array of rows of polynomial strings.
        #[arg(long)]
        d0: Option<String>,
        #[arg(long)]
        d1: Option<String>,
        /// Replacement f.
        #[arg(long, allow_hyphen_values = true)]
        f: Option<String>,
    },
    /// Converts between weights and stacky fans.
    Fan {
        path: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        chi: Option<String>,
    },
}

fn run(command: &Command) -> Result<Report, CliError> {
    match command {
        Command::Check { path, chi } => commands::check(path, chi.as_deref()),
        Command::K0 { path, chi } => commands::k0(path, chi.as_deref()),
        Command::Hilbert { path, bound } => commands::hilbert(path, *bound),
        Command::Covariants {
            path,
            mu,
            bound,
            convention,
        } => {
            let convention = match convention {
                CovariantSign::Negated => CovariantConvention::Negated,
                CovariantSign::Direct => CovariantConvention::Direct,
            };
            commands::covariants(path, mu, *bound, convention)
        }
        Command::Saturate {
            path,
            seed,
            chi,
            window,
            convention,
            log,
        } => {
            let convention = match convention {
                Direction::Add => KoszulConvention::Add,
                Direction::Subtract => KoszulConvention::Subtract,
            };
            let args = commands::SaturateArgs {
                seed,
                chi: chi.as_deref(),
                window,
                convention,
                log: log.as_ref(),
            };
            commands::saturate(path, &args)
        }
        Command::VerifyMf { path, d0, d1, f } => {
            let o = commands::MfOverrides {
                d0: d0.as_deref(),
                d1: d1.as_deref(),
                f: f.as_deref(),
            };
            commands::verify_mf(path, &o)
        }
        Command::Fan { path, chi } => commands::fan(path, chi.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(x) => x,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = run(&cli.command).and_then(|rep| {
        rep.emit(cli.common.format, cli.common.out.as_deref())?;
        Ok(rep.exit)
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("toric-nccr: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
