//! The `run`, `check` and `regret` subcommands.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use osg_core::baselines::PolicyKind;

use crate::check::{check_distance_objectives, forecaster_equivalence, EQUIVALENCE_TOLERANCE};
use crate::config::ScenarioConfig;
use crate::run::{read_csv, regret_reports, run_to_files, RunSummary};

#[derive(Debug, Clone, Default)]
pub struct RunArgs {
    pub config: PathBuf,
    pub seed: Option<u64>,
    pub policy: Option<PolicyKind>,
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    pub parallel: usize,
}

pub fn apply_overrides(config: &mut ScenarioConfig, args: &RunArgs) {
    if let Some(seed) = args.seed {
        config.master_seed = seed;
    }
    if let Some(policy) = args.policy {
        config.policy = policy;
    }
    if let Some(out) = &args.out {
        config.output_path = out.clone();
    }
}

pub fn cmd_run<W: Write>(args: &RunArgs, out: &mut W) -> anyhow::Result<RunSummary> {
    let mut config = ScenarioConfig::load(&args.config)?;
    apply_overrides(&mut config, args);
    let summary = run_to_files(&config, args.parallel, &config.output_path)?;
    writeln!(
        out,
        "{} x{} at {} Hz: tail min distance {:.4} (per target {:?}), maneuvers {:.2}/instance",
        summary.policy,
        summary.instances,
        summary.frequency_hz,
        summary.mean_tail_min_distance_all,
        summary.mean_tail_min_distance,
        summary.mean_maneuvers,
    )?;
    if let (Some(r), Some(b)) = (summary.mean_tracking_regret_half, summary.mean_bound_rhs) {
        writeln!(out, "mean tracking regret {r:.6}, mean bound {b:.6}")?;
    }
    writeln!(
        out,
        "wrote {} and {}",
        config.output_path.display(),
        config.output_path.with_extension("json").display()
    )?;
    Ok(summary)
}

#[derive(Debug, Clone)]
pub struct CheckArgs {
    pub seed: u64,
    pub instances: usize,
    pub inject_supermodular: bool,
}

impl Default for CheckArgs {
    fn default() -> Self {
        Self {
            seed: 0,
            instances: 200,
            inject_supermodular: false,
        }
    }
}

/// Returns whether every suite passed.
pub fn cmd_check<W: Write>(args: &CheckArgs, out: &mut W) -> anyhow::Result<bool> {
    let objectives =
        check_distance_objectives(args.seed, args.instances, args.inject_supermodular)?;
    writeln!(
        out,
        "distance objective: {}/{} instances normalized, monotone and submodular{}",
        objectives.instances - objectives.failures,
        objectives.instances,
        if args.inject_supermodular {
            " (supermodular term injected)"
        } else {
            ""
        }
    )?;
    if let Some(report) = &objectives.first_failure {
        writeln!(out, "first failure:\n{report}")?;
    }

    let cases = forecaster_equivalence(args.seed, &[2, 4, 8, 16], &[2, 3, 4], 100);
    let mut forecaster_ok = true;
    for c in &cases {
        forecaster_ok &= c.passed();
        writeln!(
            out,
            "forecaster T={:<2} |V|={}: max gap {:.3e} over {} streams: {}",
            c.horizon,
            c.n_actions,
            c.max_gap,
            c.streams,
            if c.passed() { "pass" } else { "FAIL" }
        )?;
    }
    writeln!(out, "forecaster tolerance {EQUIVALENCE_TOLERANCE:e}")?;
    let ok = objectives.passed() && forecaster_ok;
    writeln!(
        out,
        "{}",
        if ok {
            "all checks passed"
        } else {
            "checks FAILED"
        }
    )?;
    Ok(ok)
}

pub fn cmd_regret<W: Write>(trace_path: &Path, out: &mut W) -> anyhow::Result<()> {
    let file = std::fs::File::open(trace_path)
        .with_context(|| format!("opening {}", trace_path.display()))?;
    let trace = read_csv(std::io::BufReader::new(file), true)
        .with_context(|| format!("reading {}", trace_path.display()))?;
    let reports = regret_reports(&trace)?;
    writeln!(
        out,
        "instance,steps,tracking_regret_half,adversarial_effect,bound_rhs,ratio"
    )?;
    for r in &reports {
        writeln!(
            out,
            "{},{},{:.16e},{},{:.16e},{:.16e}",
            r.instance, r.steps, r.tracking_regret_half, r.adversarial_effect, r.bound_rhs, r.ratio
        )?;
    }
    if reports.len() > 1 {
        let k = reports.len() as f64;
        let regret = reports.iter().map(|r| r.tracking_regret_half).sum::<f64>() / k;
        let bound = reports.iter().map(|r| r.bound_rhs).sum::<f64>() / k;
        writeln!(
            out,
            "mean regret {regret:.6}, mean bound {bound:.6}, ratio {:.6}",
            regret / bound
        )?;
    }
    Ok(())
}
