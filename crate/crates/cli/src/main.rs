use std::fs;
use std::process::ExitCode;

use anyhow::Context;
use clap::{CommandFactory, Parser};

mod plan;
mod run;

use plan::RunPlan;
use run::UsageError;

/// Exit status for a run whose output failed verification or whose
/// algorithm errored.
const FAILED: u8 = 1;
const USAGE: u8 = 2;

fn resolve(cli: RunPlan) -> anyhow::Result<RunPlan> {
    let Some(path) = &cli.plan else { return Ok(cli) };
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut saved: RunPlan = serde_json::from_str(&text).with_context(|| format!("parsing plan {}", path.display()))?;
    if cli.jobs != 0 {
        saved.jobs = cli.jobs;
    }
    Ok(saved)
}

fn main_inner(cli: RunPlan) -> anyhow::Result<bool> {
    if cli.command.is_none() && cli.plan.is_none() {
        RunPlan::command().print_help()?;
        return Err(UsageError("no subcommand given".into()).into());
    }
    let save = cli.save_plan.clone();
    let plan = resolve(cli)?;
    if let Some(path) = save {
        fs::write(&path, serde_json::to_string_pretty(&plan)? + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    if plan.jobs > 0 {
        rayon::ThreadPoolBuilder::new().num_threads(plan.jobs).build_global()?;
    }
    run::execute(&plan)
}

fn main() -> ExitCode {
    match main_inner(RunPlan::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(FAILED),
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(USAGE)
            } else {
                ExitCode::from(FAILED)
            }
        }
    }
}
