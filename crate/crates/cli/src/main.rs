use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use osg_cli::commands::{cmd_check, cmd_regret, cmd_run, CheckArgs, RunArgs};
use osg_cli::ScenarioConfig;
use osg_core::baselines::PolicyKind;

#[derive(Parser)]
#[command(
    name = "osg",
    version,
    about = "Online sequential greedy coordination experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write a CSV trace plus a JSON summary.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override the master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the policy (osg, sg_clairvoyant, sg_hat, brute_force_opt, uniform_random).
        #[arg(long)]
        policy: Option<PolicyKind>,
        /// Override the CSV output path; the summary goes next to it.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        parallel: usize,
    },
    /// Check the distance objective's properties and the forecaster.
    Check {
        /// Take the seed from this scenario's master_seed.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Random objectives to check.
        #[arg(long, default_value_t = 200)]
        instances: usize,
        /// Add a supermodular term to every objective (the check must fail).
        #[arg(long)]
        inject_supermodular: bool,
    },
    /// Regret, adversarial effect and bound of a trace with optimum columns.
    Regret { trace: PathBuf },
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> anyhow::Result<bool> {
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::Run {
            config,
            seed,
            policy,
            out,
            parallel,
        } => {
            let args = RunArgs {
                config,
                seed,
                policy,
                out,
                parallel,
            };
            cmd_run(&args, &mut stdout)?;
            Ok(true)
        }
        Command::Check {
            config,
            seed,
            instances,
            inject_supermodular,
        } => {
            let config_seed = match config {
                Some(path) => Some(ScenarioConfig::load(&path)?.master_seed),
                None => None,
            };
            let args = CheckArgs {
                seed: seed.or(config_seed).unwrap_or(0),
                instances,
                inject_supermodular,
            };
            cmd_check(&args, &mut stdout)
        }
        Command::Regret { trace } => {
            cmd_regret(&trace, &mut stdout)?;
            Ok(true)
        }
    }
}
