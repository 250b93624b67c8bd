use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;

use commands::CliError;

/// Exact pseudo-Kähler computations on almost abelian Lie algebras.
///
/// Inputs and outputs are JSON; rationals are strings such as "-3/2".
#[derive(Parser)]
#[command(name = "pkalg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the result here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Build the algebra and pseudo-Kähler structure of a family instance.
    Construct { input: PathBuf },
    /// Check integrability, closedness, compatibility and nondegeneracy.
    Verify { input: PathBuf },
    /// Ricci tensor, flatness and Ricci soliton data of a metric algebra.
    Curvature { input: PathBuf },
    /// Identify the family instance of a structure given in an adapted basis.
    Classify { input: PathBuf },
    /// Existence of complex, symplectic and pseudo-Kähler structures.
    Decide { input: PathBuf },
    /// Einstein extensions: solve for admissible derivations or build one.
    Extend { input: PathBuf },
    /// The six- and eight-dimensional normal forms.
    Catalog {
        #[arg(long)]
        dim: usize,
        #[arg(long, value_parser = ["iso", "noniso"])]
        case: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    let result = match &cli.command {
        Command::Construct { input } => commands::construct(input),
        Command::Verify { input } => commands::verify(input),
        Command::Curvature { input } => commands::curvature(input),
        Command::Classify { input } => commands::classify(input),
        Command::Decide { input } => commands::decide(input),
        Command::Extend { input } => commands::extend(input),
        Command::Catalog { dim, case } => commands::catalog(*dim, case),
    };
    match result.and_then(|out| commands::emit(cli.output.as_deref(), &out)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(match e {
                CliError::Precondition { .. } => 2,
                _ => 1,
            })
        }
    }
}
