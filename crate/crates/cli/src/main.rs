use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qbc_cli::{CliError, Format, Overrides};

#[derive(Parser)]
#[command(name = "qbc", version, about = "Quantum bit commitment experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        config: PathBuf,
        /// Master seed, overriding the config.
        #[arg(long)]
        seed: Option<u64>,
        /// Output file, overriding the config (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Summarize a results CSV.
    Report { results: PathBuf },
    /// Walk through the single-qubit attack.
    Demo,
}

fn execute(cli: Cli) -> Result<Option<String>, CliError> {
    match cli.command {
        Command::Run { config, seed, out, format } => qbc_cli::run_config_file(&config, &Overrides { seed, out, format }),
        Command::Report { results } => {
            let text = std::fs::read_to_string(&results)?;
            qbc_cli::report::report(&text).map(Some)
        }
        Command::Demo => qbc_cli::demo::demo().map(Some),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are config errors; --help and --version are not errors
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli) {
        Ok(text) => {
            if let Some(text) = text {
                let mut stdout = std::io::stdout().lock();
                let _ = stdout.write_all(text.as_bytes());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qbc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
