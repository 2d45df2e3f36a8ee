use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use uptail_cli::commands;
use uptail_cli::config::{Needs, RunArgs, RunConfig, UsageError};
use uptail_cli::verify;

/// Upper tails of induced edge counts in random vertex subsets.
#[derive(Parser)]
#[command(name = "uptail", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Size and degree statistics of each hypergraph.
    Family {
        #[command(flatten)]
        run: RunArgs,
        /// Also write the (single) hypergraph in text form to this file.
        #[arg(long)]
        export: Option<PathBuf>,
    },
    /// Closed-form bounds over the p and deviation grids.
    Bounds(RunArgs),
    /// Tail probability estimates over the p and deviation grids.
    Tail(RunArgs),
    /// Star-matching decomposition of sampled vertex sets.
    Decompose(RunArgs),
    /// Run named property suites; exits 1 if any check fails.
    Verify {
        /// Suites to run: phi, variance, sandwich, bk, cascade, lowerbounds or all.
        #[arg(default_value = "all")]
        suites: Vec<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Like `tail`, with a status column and resumable output.
    Sweep(RunArgs),
}

enum Outcome {
    Done,
    ChecksFailed,
}

fn run_verify(names: &[String], seed: u64) -> Result<Outcome> {
    let mut selected: Vec<&str> = Vec::new();
    for name in names {
        if name == "all" {
            selected.extend(verify::SUITES);
        } else if verify::SUITES.contains(&name.as_str()) {
            selected.push(name);
        } else {
            return Err(UsageError(format!(
                "unknown suite {name:?}; known: {}",
                verify::SUITES.join(", ")
            ))
            .into());
        }
    }
    let (mut passed, mut failed) = (0u64, 0u64);
    for name in selected {
        let rep = verify::run(name, seed).expect("known suite");
        let bad = rep.failures.len() as u64;
        println!(
            "{}: {} checks, {} failed, {} skipped",
            rep.name, rep.checks, bad, rep.skipped
        );
        for f in rep.failures.iter().take(10) {
            println!("  FAIL {f}");
        }
        passed += rep.checks - bad;
        failed += bad;
    }
    println!("verify: {passed} checks passed, {failed} failed");
    Ok(if failed == 0 {
        Outcome::Done
    } else {
        Outcome::ChecksFailed
    })
}

fn run(cli: Cli) -> Result<Outcome> {
    let grid = Needs {
        p: true,
        deviation: true,
        ..Default::default()
    };
    match cli.command {
        Command::Family { run, export } => {
            let cfg = RunConfig::resolve(run, Needs::default())?;
            if let Some(path) = export {
                let instances = cfg.instances()?;
                let [inst] = &instances[..] else {
                    return Err(UsageError("--export needs exactly one hypergraph".into()).into());
                };
                std::fs::write(path, uptail_cli::format::write_hypergraph(&inst.graph))?;
            }
            commands::family(&cfg)?;
        }
        Command::Bounds(run) => commands::bounds(&RunConfig::resolve(run, grid)?)?,
        Command::Tail(run) => commands::tail(&RunConfig::resolve(run, grid)?)?,
        Command::Sweep(run) => commands::sweep(&RunConfig::resolve(run, grid)?)?,
        Command::Decompose(run) => {
            let needs = Needs {
                p: true,
                r: true,
                always_random: true,
                ..Default::default()
            };
            commands::decompose(&RunConfig::resolve(run, needs)?)?
        }
        Command::Verify { suites, seed } => return run_verify(&suites, seed),
    }
    Ok(Outcome::Done)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::ChecksFailed) => ExitCode::from(1),
        Err(e) => {
            if e.downcast_ref::<UsageError>().is_some() {
                eprintln!("usage error: {e}");
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(2)
        }
    }
}
