//! Command-line front end: family convergence experiments, oracle
//! self-tests, and maximum-principle verification with file reports.

mod config;
mod emit;
mod run;

use clap::{Parser, Subcommand};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "convmap",
    about = "Riemann maps on shrinking Jordan domains: experiments, oracles, bound verification",
    version
)]
struct Cli {
    /// Worker threads for row- and trial-level parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Overrides the seed from the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Suppress progress output.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a domain-family convergence experiment from a JSON config.
    Family { config: PathBuf },
    /// Self-test the map construction against closed-form oracles.
    Oracle {
        /// Node counts for the refinement sweep.
        #[arg(long, value_delimiter = ',')]
        nodes: Option<Vec<usize>>,
        #[arg(long, hide = true)]
        inject_oracle_bug: bool,
    },
    /// Verify the rotation-trick bound instances from a JSON config.
    Lindelof { config: PathBuf },
}

fn main() {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("error: cannot configure {threads} threads: {e}");
            std::process::exit(2);
        }
    }
    let result = match &cli.command {
        Command::Family { config } => run::cmd_family(config, cli.seed, cli.quiet),
        Command::Oracle {
            nodes,
            inject_oracle_bug,
        } => {
            let default_nodes = vec![128usize, 256, 512, 1024];
            run::cmd_oracle(
                nodes.as_deref().unwrap_or(&default_nodes),
                *inject_oracle_bug,
                cli.quiet,
            )
        }
        Command::Lindelof { config } => run::cmd_lindelof(config, cli.seed, cli.quiet),
    };
    if let Err(err) = result {
        eprintln!("error: {}", err.message());
        std::process::exit(err.exit_code());
    }
}
