use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tht_core::cli::{run_file, Overrides};

#[derive(Parser)]
#[command(name = "tht", version, about = "Tempered Hamiltonian transitions experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a JSON config.
    Run {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        iters: Option<usize>,
        #[arg(long)]
        workers: Option<usize>,
        /// Output directory.
        #[arg(long, env = "THT_OUT_DIR", default_value = "out")]
        out: PathBuf,
        /// Dimension override for high-dimensional targets.
        #[arg(long)]
        dim: Option<usize>,
    },
}

fn main() -> ExitCode {
    let Command::Run { config, seed, iters, workers, out, dim } = Cli::parse().command;
    let ov = Overrides { seed, iters, workers, dim };
    match run_file(&config, &out, &ov) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("tht: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
