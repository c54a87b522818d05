//! Plays any policy against an [`Environment`].

use crate::baselines::{self, PolicyKind};
use crate::error::{Error, Result};
use crate::metrics::{self, Trace, TraceMeta};
use crate::osg::{Coordinator, Counters, Environment};
use crate::seeding;
use crate::submodular::{ActionProfile, ObjectiveOracle};

#[derive(Debug, Clone, PartialEq)]
pub struct ExecutedStep {
    pub chosen: ActionProfile,
    /// `f_t` of the executed profile.
    pub value: f64,
    /// Per-step optimum when requested.
    pub opt: Option<(ActionProfile, f64)>,
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub policy: PolicyKind,
    pub steps: usize,
    pub seed: u64,
    /// Divisor applied to OSG rewards. `None` uses the environment's gain
    /// bound, or 1 when it has none.
    pub reward_scale: Option<f64>,
    /// Compute the brute-force optimum of every step.
    pub brute_force_opt: bool,
}

#[derive(Debug, Clone)]
pub struct PolicyRun {
    pub steps: Vec<ExecutedStep>,
    /// Only set for OSG.
    pub counters: Option<Counters>,
}

impl PolicyRun {
    pub fn total_value(&self) -> f64 {
        self.steps.iter().map(|s| s.value).sum()
    }

    /// Converts into a regret trace; every step needs its optimum.
    pub fn trace(&self, action_sizes: &[usize], seed: u64) -> Result<Trace> {
        metrics::trace_from_parts(
            TraceMeta {
                n_agents: action_sizes.len(),
                action_sizes: action_sizes.to_vec(),
                seed,
            },
            self.steps
                .iter()
                .map(|s| (s.chosen.clone(), s.value, s.opt.clone())),
        )
    }
}

pub fn resolve_reward_scale<E: Environment>(requested: Option<f64>, env: &E) -> Result<f64> {
    let scale = requested.or_else(|| env.gain_bound()).unwrap_or(1.0);
    if !(scale > 0.0 && scale.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "reward scale must be positive and finite, got {scale}"
        )));
    }
    Ok(scale)
}

/// Runs `options.steps` steps of `options.policy`. `observer` sees the
/// environment right after each executed step.
pub fn run_policy<E, O>(env: &mut E, options: &RunOptions, mut observer: O) -> Result<PolicyRun>
where
    E: Environment,
    O: FnMut(&E, &ExecutedStep),
{
    let sizes = env.action_sizes();
    let mut coordinator = match options.policy {
        PolicyKind::Osg => Some(Coordinator::new(
            &sizes,
            options.steps,
            resolve_reward_scale(options.reward_scale, env)?,
            options.seed,
        )?),
        _ => None,
    };
    let mut streams: Vec<_> = (0..sizes.len())
        .map(|i| seeding::agent_stream(options.seed, i))
        .collect();
    let mut previous: Option<E::Oracle> = None;
    let mut steps = Vec::with_capacity(options.steps);

    for _ in 0..options.steps {
        let chosen = match options.policy {
            PolicyKind::Osg => coordinator.as_mut().expect("osg").select_actions()?,
            PolicyKind::SgClairvoyant => baselines::sg_select(&env.preview()?, &sizes),
            PolicyKind::SgHat => baselines::sg_hat_select(previous.as_ref(), &sizes),
            PolicyKind::BruteForceOpt => baselines::brute_force_opt(&env.preview()?, &sizes)?.0,
            PolicyKind::UniformRandom => {
                let indices: Vec<usize> = sizes
                    .iter()
                    .zip(streams.iter_mut())
                    .map(|(&n, rng)| {
                        baselines::uniform_random_select(&[n], rng)
                            .iter()
                            .next()
                            .expect("one agent")
                            .index
                    })
                    .collect();
                ActionProfile::from_indices(&indices)
            }
        };
        let objective = env.execute(&chosen)?;
        if let Some(c) = coordinator.as_mut() {
            c.feedback(&objective, &chosen)?;
        }
        let opt = if options.brute_force_opt {
            Some(baselines::brute_force_opt(&objective, &sizes)?)
        } else {
            None
        };
        let step = ExecutedStep {
            value: objective.evaluate(&chosen),
            chosen,
            opt,
        };
        observer(env, &step);
        steps.push(step);
        previous = Some(objective);
    }

    Ok(PolicyRun {
        steps,
        counters: coordinator.map(|c| c.counters().clone()),
    })
}
