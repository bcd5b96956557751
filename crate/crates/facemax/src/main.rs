use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use facemax::run::{self, CliError, Format, GenSpec, Mode, SolveOptions};
use facemax_core::approx::DEFAULT_EPS;
use facemax_core::oracle::DEFAULT_BUDGET;

/// Choose planar embeddings that make as many given cycles facial as possible.
#[derive(Parser)]
#[command(name = "facemax", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct SolverFlags {
    #[arg(long, value_enum, default_value = "auto")]
    mode: Mode,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    epsilon: f64,
    /// Search-node budget of the exhaustive oracle.
    #[arg(long, env = "FACEMAX_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// Heavy-neighbor bound for sp-fpt (default: the instance's).
    #[arg(long)]
    r: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and optionally write the embedding.
    Solve {
        input: PathBuf,
        #[command(flatten)]
        flags: SolverFlags,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Check an embedding file against an instance.
    Verify { instance: PathBuf, embedding: PathBuf },
    /// Decide whether all cycles can be facial at once.
    Feasible {
        input: PathBuf,
        /// Where to write the witness embedding.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Write a generated instance.
    Gen {
        #[command(subcommand)]
        spec: GenSpec,
        #[arg(long, short, global = true)]
        output: Option<PathBuf>,
    },
    /// Run modes over every `*.inst` file in a directory and write CSV.
    Bench {
        dir: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "auto,approx")]
        modes: Vec<Mode>,
        #[command(flatten)]
        flags: SolverFlags,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Draw an embedding file.
    Render {
        embedding: PathBuf,
        #[arg(long, value_enum, default_value = "svg")]
        format: Format,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

impl SolverFlags {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            mode: self.mode,
            epsilon: self.epsilon,
            budget: self.budget,
            r: self.r,
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Solve { input, flags, output } => run::cmd_solve(&input, &flags.options(), output.as_deref()),
        Command::Verify { instance, embedding } => run::cmd_verify(&instance, &embedding),
        Command::Feasible { input, output } => run::cmd_feasible(&input, output.as_deref()),
        Command::Gen { spec, output } => run::cmd_gen(&spec, output.as_deref()),
        Command::Bench {
            dir,
            modes,
            flags,
            format,
            output,
        } => {
            if format != Format::Csv {
                return Err(CliError::Usage("bench writes csv only".to_string()));
            }
            run::cmd_bench(&dir, &modes, &flags.options(), output.as_deref())
        }
        Command::Render { embedding, format, output } => run::cmd_render(&embedding, format, output.as_deref()),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
