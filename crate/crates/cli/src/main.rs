//! `rhodyn`: scenario-driven harness for the rhodyn experiment suite.
//!
//! Exit codes: 0 run succeeded (pass or informative verdict), 1 a gated
//! experiment failed its tolerance, 2 usage or scenario errors, 3 runtime
//! failures (integration or I/O).

mod output;
mod scenario;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use rhodyn_experiments::Verdict;
use scenario::Scenario;

const EXIT_OK: u8 = 0;
const EXIT_GATE_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser)]
#[command(
    name = "rhodyn",
    version,
    about = "Simulator for trace-normalized nonlinear density-matrix dynamics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file, print its report, and write summary + CSV files
    Run {
        /// Path to a scenario TOML file
        scenario: PathBuf,
        /// Directory for written outputs
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Override the scenario's seed
        #[arg(long)]
        seed: Option<u64>,
        /// Stdout format
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Parse and resolve a scenario without running it
    Validate {
        /// Path to a scenario TOML file
        scenario: PathBuf,
    },
    /// List the experiment names scenarios can reference
    ListExperiments,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    /// Human-readable summary
    Table,
    /// The run summary as JSON (sampled series stay in the CSV files)
    JsonSummary,
}

fn main() -> ExitCode {
    ExitCode::from(run_cli())
}

fn run_cli() -> u8 {
    match Cli::parse().command {
        Command::Run {
            scenario,
            out,
            seed,
            format,
        } => cmd_run(&scenario, &out, seed, format),
        Command::Validate { scenario } => cmd_validate(&scenario),
        Command::ListExperiments => {
            for name in rhodyn_experiments::EXPERIMENT_NAMES {
                println!("{name}");
            }
            EXIT_OK
        }
    }
}

fn load_scenario(path: &Path) -> Result<Scenario, u8> {
    let text = fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_USAGE
    })?;
    Scenario::parse(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_USAGE
    })
}

fn cmd_validate(path: &Path) -> u8 {
    let scenario = match load_scenario(path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    if let Err(e) = scenario.build(None) {
        eprintln!("error: {}: {e}", path.display());
        return EXIT_USAGE;
    }
    println!(
        "ok: {} ({}, dims {:?})",
        scenario.name, scenario.experiment, scenario.system.dims
    );
    if let Some(description) = &scenario.description {
        println!("  {description}");
    }
    EXIT_OK
}

fn cmd_run(path: &Path, out_dir: &Path, seed: Option<u64>, format: Format) -> u8 {
    let scenario = match load_scenario(path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let built = match scenario.build(seed) {
        Ok(b) => b,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return EXIT_USAGE;
        }
    };
    let mut report = match built.run() {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}: {e}", scenario.name);
            return EXIT_RUNTIME;
        }
    };
    report
        .parameters
        .insert("scenario".into(), scenario.name.clone());
    report.parameters.insert(
        "seed".into(),
        scenario.effective_seed(seed).to_string(),
    );
    if let Some(description) = &scenario.description {
        report
            .parameters
            .insert("description".into(), description.clone());
    }

    let written = match output::write_outputs(&report, out_dir, scenario.output_base()) {
        Ok(paths) => paths,
        Err(e) => {
            eprintln!("error: writing outputs to {}: {e}", out_dir.display());
            return EXIT_RUNTIME;
        }
    };

    match format {
        Format::Table => {
            print!("{}", output::render_table(&report));
            for path in &written {
                println!("wrote: {}", path.display());
            }
        }
        Format::JsonSummary => println!("{}", output::summary_json(&report)),
    }

    match report.verdict {
        Verdict::Fail => EXIT_GATE_FAILED,
        Verdict::Pass | Verdict::Informative => EXIT_OK,
    }
}
