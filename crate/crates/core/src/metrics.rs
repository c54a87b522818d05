//! Half-approximate tracking regret, the environment's adversarial effect,
//! best-expert switch counts and the explicit regret bound.

use crate::error::{Error, Result};
use crate::submodular::{ActionProfile, AgentId};

#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub chosen: ActionProfile,
    pub value: f64,
    /// Per-step optimum, with ties broken lexicographically.
    pub opt_profile: ActionProfile,
    pub opt_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceMeta {
    pub n_agents: usize,
    pub action_sizes: Vec<usize>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub meta: TraceMeta,
    pub steps: Vec<StepRecord>,
}

impl Trace {
    pub fn horizon(&self) -> usize {
        self.steps.len()
    }

    pub fn max_actions(&self) -> usize {
        self.meta.action_sizes.iter().copied().max().unwrap_or(1)
    }
}

/// `½·Σ_t f_t(A*_t) − Σ_t f_t(A_t)`; negative when the chosen profiles beat
/// half the optimum.
pub fn tracking_regret_half(trace: &Trace) -> f64 {
    let opt: f64 = trace.steps.iter().map(|s| s.opt_value).sum();
    let got: f64 = trace.steps.iter().map(|s| s.value).sum();
    0.5 * opt - got
}

/// Number of (step, agent) pairs where the agent's optimal action differs
/// from the one at the next step.
pub fn adversarial_effect(trace: &Trace) -> usize {
    trace
        .steps
        .windows(2)
        .map(|pair| {
            (0..trace.meta.n_agents)
                .filter(|&i| {
                    pair[0].opt_profile.get(AgentId(i)) != pair[1].opt_profile.get(AgentId(i))
                })
                .count()
        })
        .sum()
}

fn argmax_lowest(row: &[f64]) -> usize {
    let mut best = 0;
    for (i, &r) in row.iter().enumerate().skip(1) {
        if r > row[best] {
            best = i;
        }
    }
    best
}

/// How many times the best action (lowest index on ties) changes between
/// consecutive rows of a `T × |V|` reward matrix.
pub fn best_expert_switches(rewards: &[Vec<f64>]) -> usize {
    rewards
        .windows(2)
        .filter(|w| argmax_lowest(&w[0]) != argmax_lowest(&w[1]))
        .count()
}

/// `4·√(N·T·((Δ + N)·ln(|V|max·T) + N·ln(1 + ln T)))`, the closed-form
/// bound on the expected half-approximate tracking regret.
pub fn regret_bound_rhs(
    n_agents: usize,
    horizon: usize,
    delta: usize,
    max_actions: usize,
) -> Result<f64> {
    if n_agents == 0 || horizon == 0 || max_actions == 0 {
        return Err(Error::InvalidArgument(format!(
            "bound needs positive N, T and |V| (got N = {n_agents}, T = {horizon}, |V| = {max_actions})"
        )));
    }
    let n = n_agents as f64;
    let t = horizon as f64;
    let l = (1.0 + t.ln()).ln();
    let inner = (delta as f64 + n) * (max_actions as f64 * t).ln() + n * l;
    Ok(4.0 * (n * t * inner).sqrt())
}

/// Builds a trace from per-step records, failing if any optimum is missing.
pub fn trace_from_parts(
    meta: TraceMeta,
    parts: impl IntoIterator<Item = (ActionProfile, f64, Option<(ActionProfile, f64)>)>,
) -> Result<Trace> {
    let steps = parts
        .into_iter()
        .enumerate()
        .map(|(step, (chosen, value, opt))| {
            let (opt_profile, opt_value) = opt.ok_or(Error::MissingOptimum { step })?;
            Ok(StepRecord {
                chosen,
                value,
                opt_profile,
                opt_value,
            })
        })
        .collect::<Result<_>>()?;
    Ok(Trace { meta, steps })
}
