use burgers_lab::cli::{self, CliError, EXIT_ERROR, EXIT_OK};
use burgers_lab::solver::NumericalFlux;
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

/// Decay-rate experiments for multi-dimensional Burgers-type conservation laws.
#[derive(Parser)]
#[command(name = "burgers-lab", version)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the exact exponent table and proof ledger for a dimension.
    Exponents {
        #[arg(long, allow_negative_numbers = true)]
        dim: i64,
        /// Exponent as "num/den".
        #[arg(long)]
        gamma: Option<String>,
        #[arg(long)]
        iters: Option<u32>,
    },
    /// Run a configured simulation and write the series and final field.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        flux: Option<NumericalFlux>,
    },
    /// Run a configured simulation and write the series and bound reports.
    Decay {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        flux: Option<NumericalFlux>,
    },
    /// Run an acceptance suite: exponents, flux, oned, twod, semigroup or scaling.
    Verify {
        #[arg(long)]
        suite: String,
    },
}

fn run(command: Command) -> Result<String, CliError> {
    match command {
        Command::Exponents { dim, gamma, iters } => cli::cmd_exponents(dim, gamma.as_deref(), iters),
        Command::Simulate { config, out, flux } => cli::cmd_simulate(&config, &out, flux),
        Command::Decay { config, out, flux } => cli::cmd_decay(&config, &out, flux),
        Command::Verify { suite } => {
            let (report, results) = cli::cmd_verify(&suite)?;
            print!("{report}");
            let failed = results.iter().filter(|r| !r.passed).count();
            if failed > 0 {
                return Err(CliError::VerificationFailed(failed));
            }
            Ok(String::new())
        }
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) if e.use_stderr() => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("{}", CliError::Usage(first.to_string()).reason_line());
            return ExitCode::from(EXIT_ERROR as u8);
        }
        Err(e) => {
            print!("{e}");
            return ExitCode::from(EXIT_OK as u8);
        }
    };
    match run(args.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::from(EXIT_OK as u8)
        }
        Err(e) => {
            eprintln!("{}", e.reason_line());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
