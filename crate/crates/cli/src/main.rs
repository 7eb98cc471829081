//! `trustnet`: run trust queries and society simulations from scenario files.
//!
//! Exit codes: 0 success, 1 validation or usage error, 2 I/O error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::thread;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use log::{debug, info};
use trustnet_core::{export_figures, run_scenario, AgrStrategy, BehaviorKind, ScenarioFile};

const EXIT_VALIDATION: u8 = 1;
const EXIT_IO: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "trustnet",
    version,
    about = "Witness-weighted trust metrics for agent societies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the trust report for the scenario's query as JSON.
    Compute {
        scenario: PathBuf,
        /// Override the scenario's aggregation strategy.
        #[arg(long, value_name = "pooled|mean-weighted")]
        agr: Option<AgrStrategy>,
    },
    /// Run the scenario's simulation and write result.json, fig2.csv and fig3.csv.
    Simulate {
        scenario: PathBuf,
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        /// Run N independent seeds (seed, seed+1, ...) in parallel, each into
        /// its own `seed-<n>` subdirectory.
        #[arg(long, value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
        seeds: Option<u64>,
    },
    /// Check that the scenario parses and satisfies every invariant.
    Validate { scenario: PathBuf },
}

fn load(path: &Path) -> anyhow::Result<ScenarioFile> {
    ScenarioFile::from_path(path).with_context(|| format!("reading {}", path.display()))
}

fn compute(path: &Path, agr: Option<AgrStrategy>) -> anyhow::Result<()> {
    let file = load(path)?;
    let report = file.compute(agr)?;
    debug!(
        "own {} witness {} over {} witnesses",
        report.own_component,
        report.witness_component,
        report.per_witness.len()
    );
    let mut stdout = io::stdout().lock();
    serde_json::to_writer_pretty(&mut stdout, &report)?;
    writeln!(stdout)?;
    Ok(())
}

fn simulate_one(file: &ScenarioFile, seed: u64, out: &Path) -> anyhow::Result<String> {
    let mut cfg = file.simulation_config()?;
    cfg.seed = seed;
    info!("seed {seed}: {} rounds into {}", cfg.rounds, out.display());
    let result = run_scenario(&cfg)?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    result.write_json(out.join("result.json"))?;
    export_figures(&result, out)?;

    let s = &result.summary;
    let mut line = format!(
        "seed {seed}: {} rounds, {} events, {} deviation flags",
        s.rounds, s.events, s.deviation_flags
    );
    for kind in [
        BehaviorKind::Honest,
        BehaviorKind::Liar,
        BehaviorKind::Noisy,
    ] {
        if let Some(w) = result.mean_final_weight(kind) {
            line.push_str(&format!(
                ", {} weight {w:.4}",
                format!("{kind:?}").to_lowercase()
            ));
        }
    }
    line.push_str(&format!(" -> {}", out.display()));
    Ok(line)
}

fn simulate(path: &Path, out: &Path, seeds: Option<u64>) -> anyhow::Result<()> {
    let file = load(path)?;
    let base = file.simulation_config()?.seed;
    let lines = match seeds {
        None => vec![simulate_one(&file, base, out)?],
        Some(n) => {
            let file = &file;
            let results: Vec<anyhow::Result<String>> = thread::scope(|scope| {
                let handles: Vec<_> = (base..base + n)
                    .map(|seed| {
                        let dir = out.join(format!("seed-{seed}"));
                        scope.spawn(move || simulate_one(file, seed, &dir))
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| {
                        h.join()
                            .unwrap_or_else(|_| bail!("simulation thread panicked"))
                    })
                    .collect()
            });
            results.into_iter().collect::<anyhow::Result<_>>()?
        }
    };
    for line in lines {
        println!("{line}");
    }
    Ok(())
}

fn validate(path: &Path) -> anyhow::Result<()> {
    let file = load(path)?;
    let problems = file.problems();
    if problems.is_empty() {
        println!("{}: ok", path.display());
        return Ok(());
    }
    for p in &problems[1..] {
        eprintln!("error: {p}");
    }
    Err(problems.into_iter().next().unwrap().into())
}

/// I/O failures anywhere in the chain map to 2, everything else to 1.
fn exit_code(err: &anyhow::Error) -> u8 {
    let io = err.chain().any(|cause| {
        cause.downcast_ref::<io::Error>().is_some()
            || cause
                .downcast_ref::<trustnet_core::Error>()
                .is_some_and(trustnet_core::Error::is_io)
    });
    if io {
        EXIT_IO
    } else {
        EXIT_VALIDATION
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("TRUSTNET_LOG", "warn")).init();

    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_VALIDATION)
            } else {
                ExitCode::SUCCESS
            };
        }
    };

    let outcome = match &cli.command {
        Command::Compute { scenario, agr } => compute(scenario, *agr),
        Command::Simulate {
            scenario,
            out,
            seeds,
        } => simulate(scenario, out, *seeds),
        Command::Validate { scenario } => validate(scenario),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
