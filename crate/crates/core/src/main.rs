use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dualsvd::cli::{cmd_check, cmd_classify, cmd_decompose, format, CliError, Kind, Tolerances};

#[derive(Parser)]
#[command(name = "dualsvd", version, about = "Decompositions of square dual-number matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a matrix and write the factors with their residuals.
    Decompose {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        input: PathBuf,
        /// Write the result document here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 1e-8)]
        cluster_tol: f64,
    },
    /// Classify a 2×2 matrix into Yaglom's first or second form.
    Classify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Re-verify a result document against its input matrix.
    Check {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        result: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Decompose { kind, input, output, tol, cluster_tol } => {
            let doc = cmd_decompose(&input, kind, &Tolerances { tol, cluster_tol })?;
            let text = format::to_text(&doc).map_err(|e| CliError::parse(e.to_string()))?;
            match output {
                Some(path) => fs::write(&path, text)?,
                None => out.write_all(text.as_bytes())?,
            }
            Ok(())
        }
        Command::Classify { input } => cmd_classify(&input, &mut out),
        Command::Check { input, result, tol } => cmd_check(&input, &result, tol, &mut out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dualsvd: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
