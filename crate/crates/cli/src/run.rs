//! Seed sweeps, CSV traces and JSON summaries.
//!
//! # Trace format
//!
//! One CSV row per executed step of every instance, in instance order:
//!
//! | column | meaning |
//! |---|---|
//! | `instance` | instance number, seeded with `master_seed + instance` |
//! | `t` | step, 1-based; positions are those at the end of the step |
//! | `time_s` | `t · H / T` |
//! | `robot{i}_x`, `robot{i}_y` | robot positions |
//! | `target{j}_x`, `target{j}_y` | target positions |
//! | `target{j}_min_distance` | raw distance to the nearest robot |
//! | `f_value` | objective value of the executed profile |
//! | `opt_value` | brute-force optimum (only with `brute_force_opt`) |
//! | `a{i}` | action executed by robot `i` |
//! | `opt_a{i}` | robot `i`'s action in the optimum (only with `brute_force_opt`) |
//! | `maneuver_count` | evasive maneuvers started so far |
//!
//! Optimal profiles break ties by the lexicographically smallest action
//! indices, robot 0 most significant. Reals are written with 17
//! significant digits.

use std::io::{Read, Write};
use std::path::Path;

use anyhow::{bail, Context};
use osg_core::metrics;
use osg_core::osg::Counters;
use osg_core::runner::{run_policy, ExecutedStep, RunOptions};
use osg_core::sim::{make_environment, TrackingEnv, ROBOT_ACTION_COUNT};
use osg_core::submodular::ActionProfile;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::ScenarioConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct StepRow {
    pub t: usize,
    pub time_s: f64,
    pub robots: Vec<[f64; 2]>,
    pub targets: Vec<[f64; 2]>,
    pub min_distances: Vec<f64>,
    pub f_value: f64,
    pub opt_value: Option<f64>,
    pub chosen: Vec<usize>,
    pub opt_chosen: Option<Vec<usize>>,
    pub maneuver_count: u64,
}

#[derive(Debug, Clone)]
pub struct InstanceResult {
    pub instance: usize,
    pub seed: u64,
    pub rows: Vec<StepRow>,
    pub counters: Option<Counters>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterTotals {
    pub marginal_evals: u64,
    pub prefix_evals: u64,
    pub level_updates: u64,
    pub steps: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceSummary {
    pub instance: usize,
    pub seed: u64,
    pub tail_min_distance: Vec<f64>,
    pub maneuvers: u64,
    pub total_value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tracking_regret_half: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adversarial_effect: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_rhs: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub policy: String,
    pub instances: usize,
    pub steps: usize,
    pub horizon_s: f64,
    pub frequency_hz: f64,
    pub reward_scale: String,
    pub tail_steps: usize,
    /// Per target, averaged over the tail and over instances.
    pub mean_tail_min_distance: Vec<f64>,
    /// Average of `mean_tail_min_distance` over targets.
    pub mean_tail_min_distance_all: f64,
    pub total_maneuvers: u64,
    pub mean_maneuvers: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_tracking_regret_half: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mean_bound_rhs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counters: Option<CounterTotals>,
    pub per_instance: Vec<InstanceSummary>,
}

fn profile_indices(profile: &ActionProfile, n: usize) -> anyhow::Result<Vec<usize>> {
    profile
        .indices(n)
        .context("profile does not bind every robot")
}

fn step_row(env: &TrackingEnv, step: &ExecutedStep) -> anyhow::Result<StepRow> {
    let n = env.robots().len();
    Ok(StepRow {
        t: env.step(),
        time_s: env.time_s(),
        robots: env.robots().iter().map(|r| [r.x, r.y]).collect(),
        targets: env.target_positions().iter().map(|p| [p.x, p.y]).collect(),
        min_distances: env.min_distances(),
        f_value: step.value,
        opt_value: step.opt.as_ref().map(|(_, v)| *v),
        chosen: profile_indices(&step.chosen, n)?,
        opt_chosen: step
            .opt
            .as_ref()
            .map(|(p, _)| profile_indices(p, n))
            .transpose()?,
        maneuver_count: env.total_maneuvers(),
    })
}

/// Runs one instance with seed `master_seed + instance`.
pub fn run_instance(config: &ScenarioConfig, instance: usize) -> anyhow::Result<InstanceResult> {
    let seed = config.master_seed.wrapping_add(instance as u64);
    let mut env = make_environment(&config.sim_config(seed))?;
    let options = RunOptions {
        policy: config.policy,
        steps: config.steps,
        seed,
        reward_scale: config.reward_scale.as_option(),
        brute_force_opt: config.brute_force_opt,
    };
    let mut rows = Vec::with_capacity(config.steps);
    let mut failure = None;
    let run = run_policy(&mut env, &options, |env, step| match step_row(env, step) {
        Ok(row) => rows.push(row),
        Err(e) => {
            failure.get_or_insert(e);
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(InstanceResult {
        instance,
        seed,
        rows,
        counters: run.counters,
    })
}

/// Runs every instance on up to `threads` worker threads (0 = all cores).
/// Results come back in instance order regardless of scheduling.
pub fn run_instances(
    config: &ScenarioConfig,
    threads: usize,
) -> anyhow::Result<Vec<InstanceResult>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .context("building the worker pool")?;
    pool.install(|| {
        (0..config.instances)
            .into_par_iter()
            .map(|i| run_instance(config, i))
            .collect()
    })
}

fn regret_parts(rows: &[StepRow], n_robots: usize) -> Option<(f64, usize, f64)> {
    let trace = trace_of(rows, n_robots).ok()?;
    let regret = metrics::tracking_regret_half(&trace);
    let delta = metrics::adversarial_effect(&trace);
    let bound = metrics::regret_bound_rhs(n_robots, rows.len(), delta, ROBOT_ACTION_COUNT).ok()?;
    Some((regret, delta, bound))
}

/// Builds a regret trace from rows that carry optimum columns.
pub fn trace_of(rows: &[StepRow], n_robots: usize) -> anyhow::Result<metrics::Trace> {
    let trace = metrics::trace_from_parts(
        metrics::TraceMeta {
            n_agents: n_robots,
            action_sizes: vec![ROBOT_ACTION_COUNT; n_robots],
            seed: 0,
        },
        rows.iter().map(|r| {
            (
                ActionProfile::from_indices(&r.chosen),
                r.f_value,
                r.opt_value
                    .zip(r.opt_chosen.as_ref())
                    .map(|(v, p)| (ActionProfile::from_indices(p), v)),
            )
        }),
    )?;
    Ok(trace)
}

pub fn summarize(config: &ScenarioConfig, results: &[InstanceResult]) -> RunSummary {
    let tail = config.tail_steps();
    let n_targets = config.targets_units.len();
    let n_robots = config.robots_units.len();

    let per_instance: Vec<InstanceSummary> = results
        .iter()
        .map(|r| {
            let tail_rows = &r.rows[r.rows.len().saturating_sub(tail)..];
            let tail_min_distance = (0..n_targets)
                .map(|j| {
                    tail_rows
                        .iter()
                        .map(|row| row.min_distances[j])
                        .sum::<f64>()
                        / tail_rows.len().max(1) as f64
                })
                .collect();
            let regret = if config.brute_force_opt {
                regret_parts(&r.rows, n_robots)
            } else {
                None
            };
            InstanceSummary {
                instance: r.instance,
                seed: r.seed,
                tail_min_distance,
                maneuvers: r.rows.last().map_or(0, |row| row.maneuver_count),
                total_value: r.rows.iter().map(|row| row.f_value).sum(),
                tracking_regret_half: regret.map(|x| x.0),
                adversarial_effect: regret.map(|x| x.1),
                bound_rhs: regret.map(|x| x.2),
            }
        })
        .collect();

    let k = per_instance.len().max(1) as f64;
    let mean_tail_min_distance: Vec<f64> = (0..n_targets)
        .map(|j| {
            per_instance
                .iter()
                .map(|s| s.tail_min_distance[j])
                .sum::<f64>()
                / k
        })
        .collect();
    let total_maneuvers = per_instance.iter().map(|s| s.maneuvers).sum();
    let mean_of = |get: fn(&InstanceSummary) -> Option<f64>| {
        per_instance
            .iter()
            .map(get)
            .collect::<Option<Vec<f64>>>()
            .map(|v| v.iter().sum::<f64>() / k)
    };
    let counters = results.iter().filter_map(|r| r.counters.as_ref()).fold(
        None,
        |acc: Option<CounterTotals>, c| {
            let mut acc = acc.unwrap_or(CounterTotals {
                marginal_evals: 0,
                prefix_evals: 0,
                level_updates: 0,
                steps: 0,
            });
            acc.marginal_evals += c.marginal_evals.iter().sum::<u64>();
            acc.prefix_evals += c.prefix_evals.iter().sum::<u64>();
            acc.level_updates += c.level_updates.iter().sum::<u64>();
            acc.steps += c.steps;
            Some(acc)
        },
    );

    RunSummary {
        policy: config.policy.name().to_string(),
        instances: results.len(),
        steps: config.steps,
        horizon_s: config.horizon_s,
        frequency_hz: config.frequency_hz(),
        reward_scale: config.reward_scale.to_string(),
        tail_steps: tail,
        mean_tail_min_distance_all: mean_tail_min_distance.iter().sum::<f64>()
            / n_targets.max(1) as f64,
        mean_tail_min_distance,
        total_maneuvers,
        mean_maneuvers: total_maneuvers as f64 / k,
        mean_tracking_regret_half: if config.brute_force_opt {
            mean_of(|s| s.tracking_regret_half)
        } else {
            None
        },
        mean_bound_rhs: if config.brute_force_opt {
            mean_of(|s| s.bound_rhs)
        } else {
            None
        },
        counters,
        per_instance,
    }
}

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn csv_header(n_robots: usize, n_targets: usize, with_opt: bool) -> Vec<String> {
    let mut h = vec!["instance".to_string(), "t".into(), "time_s".into()];
    for i in 0..n_robots {
        h.push(format!("robot{i}_x"));
        h.push(format!("robot{i}_y"));
    }
    for j in 0..n_targets {
        h.push(format!("target{j}_x"));
        h.push(format!("target{j}_y"));
    }
    for j in 0..n_targets {
        h.push(format!("target{j}_min_distance"));
    }
    h.push("f_value".into());
    if with_opt {
        h.push("opt_value".into());
    }
    for i in 0..n_robots {
        h.push(format!("a{i}"));
    }
    if with_opt {
        for i in 0..n_robots {
            h.push(format!("opt_a{i}"));
        }
    }
    h.push("maneuver_count".into());
    h
}

/// Writes every instance's rows in instance order.
pub fn write_csv<W: Write>(
    out: W,
    results: &[InstanceResult],
    with_opt: bool,
) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let first = results.iter().flat_map(|r| r.rows.first()).next();
    let (n_robots, n_targets) = first.map_or((0, 0), |r| (r.robots.len(), r.targets.len()));
    w.write_record(csv_header(n_robots, n_targets, with_opt))?;
    for r in results {
        for row in &r.rows {
            let mut rec = vec![r.instance.to_string(), row.t.to_string(), real(row.time_s)];
            rec.extend(
                row.robots
                    .iter()
                    .chain(&row.targets)
                    .flat_map(|p| [real(p[0]), real(p[1])]),
            );
            rec.extend(row.min_distances.iter().map(|&d| real(d)));
            rec.push(real(row.f_value));
            if with_opt {
                rec.push(row.opt_value.map(real).unwrap_or_default());
            }
            rec.extend(row.chosen.iter().map(usize::to_string));
            if with_opt {
                match &row.opt_chosen {
                    Some(p) => rec.extend(p.iter().map(usize::to_string)),
                    None => rec.extend(std::iter::repeat_n(String::new(), n_robots)),
                }
            }
            rec.push(row.maneuver_count.to_string());
            w.write_record(&rec)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Trace rows grouped by instance, as read back from a CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedTrace {
    pub n_robots: usize,
    pub instances: Vec<(usize, Vec<StepRow>)>,
}

fn count_prefixed(header: &csv::StringRecord, prefix: &str, suffix: &str) -> usize {
    (0..)
        .take_while(|i| header.iter().any(|h| h == format!("{prefix}{i}{suffix}")))
        .count()
}

/// Reads a trace written by [`write_csv`]. With `require_opt` the optimum
/// columns must be present.
pub fn read_csv<R: Read>(input: R, require_opt: bool) -> anyhow::Result<ParsedTrace> {
    let mut rdr = csv::Reader::from_reader(input);
    let header = rdr.headers()?.clone();
    let col = |name: &str| -> anyhow::Result<usize> {
        header
            .iter()
            .position(|h| h == name)
            .with_context(|| format!("trace has no `{name}` column"))
    };
    let n_robots = count_prefixed(&header, "robot", "_x");
    let n_targets = count_prefixed(&header, "target", "_x");
    if n_robots == 0 {
        bail!("trace has no robot columns");
    }
    let has_opt = header.iter().any(|h| h == "opt_value");
    if require_opt && !has_opt {
        bail!("trace has no `opt_value` column; rerun with brute_force_opt = true");
    }

    let c_instance = col("instance")?;
    let c_t = col("t")?;
    let c_time = col("time_s")?;
    let c_f = col("f_value")?;
    let c_man = col("maneuver_count")?;
    let c_opt = if has_opt {
        Some(col("opt_value")?)
    } else {
        None
    };
    let robot_cols = (0..n_robots)
        .map(|i| Ok((col(&format!("robot{i}_x"))?, col(&format!("robot{i}_y"))?)))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let target_cols = (0..n_targets)
        .map(|j| Ok((col(&format!("target{j}_x"))?, col(&format!("target{j}_y"))?)))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let dist_cols = (0..n_targets)
        .map(|j| col(&format!("target{j}_min_distance")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let action_cols = (0..n_robots)
        .map(|i| col(&format!("a{i}")))
        .collect::<anyhow::Result<Vec<_>>>()?;
    let opt_action_cols = if has_opt {
        Some(
            (0..n_robots)
                .map(|i| col(&format!("opt_a{i}")))
                .collect::<anyhow::Result<Vec<_>>>()?,
        )
    } else {
        None
    };

    let mut instances: Vec<(usize, Vec<StepRow>)> = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = line + 2;
        let f = |c: usize| -> anyhow::Result<f64> {
            rec[c].parse().with_context(|| {
                format!("line {line}: bad number `{}` in `{}`", &rec[c], &header[c])
            })
        };
        let u = |c: usize| -> anyhow::Result<usize> {
            rec[c].parse().with_context(|| {
                format!("line {line}: bad integer `{}` in `{}`", &rec[c], &header[c])
            })
        };
        let row = StepRow {
            t: u(c_t)?,
            time_s: f(c_time)?,
            robots: robot_cols
                .iter()
                .map(|&(x, y)| Ok([f(x)?, f(y)?]))
                .collect::<anyhow::Result<_>>()?,
            targets: target_cols
                .iter()
                .map(|&(x, y)| Ok([f(x)?, f(y)?]))
                .collect::<anyhow::Result<_>>()?,
            min_distances: dist_cols
                .iter()
                .map(|&c| f(c))
                .collect::<anyhow::Result<_>>()?,
            f_value: f(c_f)?,
            opt_value: c_opt.map(f).transpose()?,
            chosen: action_cols
                .iter()
                .map(|&c| u(c))
                .collect::<anyhow::Result<_>>()?,
            opt_chosen: opt_action_cols
                .as_ref()
                .map(|cols| cols.iter().map(|&c| u(c)).collect::<anyhow::Result<_>>())
                .transpose()?,
            maneuver_count: u(c_man)? as u64,
        };
        let instance = u(c_instance)?;
        match instances.last_mut() {
            Some((i, rows)) if *i == instance => rows.push(row),
            _ => instances.push((instance, vec![row])),
        }
    }
    Ok(ParsedTrace {
        n_robots,
        instances,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegretReport {
    pub instance: usize,
    pub steps: usize,
    pub tracking_regret_half: f64,
    pub adversarial_effect: usize,
    pub bound_rhs: f64,
    pub ratio: f64,
}

/// Regret, adversarial effect and bound of every instance in a trace.
pub fn regret_reports(trace: &ParsedTrace) -> anyhow::Result<Vec<RegretReport>> {
    trace
        .instances
        .iter()
        .map(|(instance, rows)| {
            let t = trace_of(rows, trace.n_robots)?;
            let regret = metrics::tracking_regret_half(&t);
            let delta = metrics::adversarial_effect(&t);
            let bound =
                metrics::regret_bound_rhs(trace.n_robots, rows.len(), delta, ROBOT_ACTION_COUNT)?;
            Ok(RegretReport {
                instance: *instance,
                steps: rows.len(),
                tracking_regret_half: regret,
                adversarial_effect: delta,
                bound_rhs: bound,
                ratio: regret / bound,
            })
        })
        .collect()
}

/// Runs the configured sweep and writes the CSV trace to `csv_path` and
/// the JSON summary next to it.
pub fn run_to_files(
    config: &ScenarioConfig,
    threads: usize,
    csv_path: &Path,
) -> anyhow::Result<RunSummary> {
    let results = run_instances(config, threads)?;
    if let Some(dir) = csv_path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let file = std::fs::File::create(csv_path)
        .with_context(|| format!("creating {}", csv_path.display()))?;
    write_csv(
        std::io::BufWriter::new(file),
        &results,
        config.brute_force_opt,
    )?;
    let summary = summarize(config, &results);
    let json_path = csv_path.with_extension("json");
    std::fs::write(&json_path, serde_json::to_string_pretty(&summary)? + "\n")
        .with_context(|| format!("writing {}", json_path.display()))?;
    Ok(summary)
}
