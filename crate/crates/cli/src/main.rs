//! `chainlayer` command-line tool.

mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "chainlayer", version, about = "Layered supply-chain cost evaluation and dimensioning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a chain file for structural and semantic problems.
    Validate {
        chain: PathBuf,
        /// Print a summary line for valid chains.
        #[arg(long)]
        verbose: bool,
    },
    /// Print the layer matrix of a chain.
    Layers {
        chain: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the total chain cost.
    Cost {
        chain: PathBuf,
        /// List all eight cost components.
        #[arg(long)]
        breakdown: bool,
        #[arg(long)]
        json: bool,
    },
    /// Evaluate the total chain cost through the agent protocol.
    Simulate {
        chain: PathBuf,
        /// Write the envelope trace to this file.
        #[arg(long, value_name = "PATH")]
        trace: Option<PathBuf>,
        #[arg(long)]
        breakdown: bool,
        #[arg(long)]
        json: bool,
    },
    /// Compare a chain with a scenario applied to it.
    ///
    /// Exits 0 when the baseline is kept and 10 when the scenario is adopted.
    Compare {
        chain: PathBuf,
        scenario: PathBuf,
        #[arg(long)]
        json: bool,
        /// Run the comparison through the agent protocol.
        #[arg(long)]
        via_agents: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let style = render::Style::from_env();
    let result = match cli.command {
        Command::Validate { chain, verbose } => commands::validate(&chain, verbose, style),
        Command::Layers { chain, json } => commands::layers(&chain, json),
        Command::Cost { chain, breakdown, json } => commands::cost(&chain, breakdown, json),
        Command::Simulate { chain, trace, breakdown, json } => {
            commands::simulate(&chain, trace.as_deref(), breakdown, json)
        }
        Command::Compare { chain, scenario, json, via_agents } => {
            commands::compare(&chain, &scenario, json, via_agents, style)
        }
    };
    match result {
        Ok(status) => ExitCode::from(status.code()),
        Err(err) => {
            eprintln!("{}: {}", style.error("error"), err.message);
            ExitCode::from(err.code)
        }
    }
}
