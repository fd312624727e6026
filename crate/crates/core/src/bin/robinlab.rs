use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use robinlab::runner::{self, RESULTS_LOG};

#[derive(Parser)]
#[command(version, about = "Spectral asymptotics experiments for Robin and Neumann-Dirichlet problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every experiment of a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "results")]
        out: PathBuf,
        /// Worker threads; the flag beats the environment variable.
        #[arg(long, env = "ROBINLAB_THREADS", default_value_t = 1)]
        threads: usize,
    },
    /// Print the comparison table of a results log.
    Report {
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
    /// List the experiments of a config file, or the experiment kinds.
    List {
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

const KINDS: [&str; 6] = [
    "neumann_dirichlet",
    "robin_pair",
    "linfty_bound",
    "cut_decay",
    "positive_cut",
    "psido_product",
];

fn main() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Run {
            config,
            out,
            threads,
        } => {
            let configs = runner::load_config(&config)?;
            let records = runner::run_all(&configs, threads);
            runner::persist(&records, &configs, &out)
                .with_context(|| format!("writing results to {}", out.display()))?;
            print!("{}", runner::report(&records));
            Ok(if records.iter().all(|r| r.passed) {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Report { out } => {
            let path = out.join(RESULTS_LOG);
            let records = runner::read_jsonl(&path)?;
            print!("{}", runner::report(&records));
            Ok(ExitCode::SUCCESS)
        }
        Command::List { config: None } => {
            KINDS.iter().for_each(|k| println!("{k}"));
            Ok(ExitCode::SUCCESS)
        }
        Command::List { config: Some(path) } => {
            for c in runner::load_config(&path)? {
                let cutoffs: Vec<String> = c.cutoffs.iter().map(|n| n.to_string()).collect();
                println!(
                    "{}  {}  N={}  {}",
                    c.name,
                    serde_json::to_value(&c.kind)?["kind"].as_str().unwrap_or("?"),
                    cutoffs.join(","),
                    &c.digest()[..12]
                );
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
