//! Online sequential greedy coordination.
//!
//! Every agent owns a fixed-share forecaster over its own actions. At each
//! step the agents draw actions in their fixed order, the joint profile is
//! executed, and once the step's objective is revealed agent `i` is rewarded
//! for every one of its actions with the marginal gain of that action on top
//! of the actions drawn by agents `0..i`.

use std::sync::atomic::{AtomicU64, Ordering};

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::forecaster::{self, Forecaster};
use crate::seeding;
use crate::submodular::{ActionId, ActionProfile, AgentId, ObjectiveOracle};

/// A world that executes joint profiles and reveals each step's objective
/// in hindsight.
pub trait Environment {
    type Oracle: ObjectiveOracle;

    fn action_sizes(&self) -> Vec<usize>;

    /// Executes `profile` for the current step and returns that step's
    /// objective, evaluable on any profile.
    fn execute(&mut self, profile: &ActionProfile) -> Result<Self::Oracle>;

    /// The objective the current step will reveal, computed without
    /// advancing the world. Only clairvoyant baselines may use this.
    fn preview(&self) -> Result<Self::Oracle>;

    /// A-priori upper bound on any single action's marginal gain, if known.
    fn gain_bound(&self) -> Option<f64> {
        None
    }
}

/// Oracle wrapper counting evaluations.
pub struct CountingOracle<'a, F: ?Sized> {
    inner: &'a F,
    count: AtomicU64,
}

impl<'a, F: ObjectiveOracle + ?Sized> CountingOracle<'a, F> {
    pub fn new(inner: &'a F) -> Self {
        Self {
            inner,
            count: AtomicU64::new(0),
        }
    }

    pub fn count(&self) -> u64 {
        self.count.load(Ordering::Relaxed)
    }
}

impl<F: ObjectiveOracle + ?Sized> ObjectiveOracle for CountingOracle<'_, F> {
    fn action_sizes(&self) -> &[usize] {
        self.inner.action_sizes()
    }

    fn evaluate(&self, profile: &ActionProfile) -> f64 {
        self.count.fetch_add(1, Ordering::Relaxed);
        self.inner.evaluate(profile)
    }
}

/// Per-agent work tallies accumulated over a run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Counters {
    /// Evaluations of `f_t(A_{i−1} ∪ {a})`, one per action per step.
    pub marginal_evals: Vec<u64>,
    /// Evaluations of the prefix value `f_t(A_{i−1})`, one per step.
    pub prefix_evals: Vec<u64>,
    /// Sub-forecaster updates, `J` per step.
    pub level_updates: Vec<u64>,
    pub steps: u64,
}

impl Counters {
    fn new(n_agents: usize) -> Self {
        Self {
            marginal_evals: vec![0; n_agents],
            prefix_evals: vec![0; n_agents],
            level_updates: vec![0; n_agents],
            steps: 0,
        }
    }

    pub fn total_evals(&self) -> u64 {
        self.marginal_evals.iter().sum::<u64>() + self.prefix_evals.iter().sum::<u64>()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub chosen: ActionProfile,
    /// Distribution each agent sampled from.
    pub distributions: Vec<Vec<f64>>,
    /// Scaled marginal-gain vectors handed to each forecaster.
    pub rewards_fed: Vec<Vec<f64>>,
    pub objective_value: f64,
}

#[derive(Debug)]
struct AgentSlot {
    forecaster: Forecaster,
    stream: ChaCha8Rng,
}

#[derive(Debug)]
struct Pending {
    profile: ActionProfile,
    distributions: Vec<Vec<f64>>,
}

/// Runs one forecaster per agent in a fixed agent order.
#[derive(Debug)]
pub struct Coordinator {
    agents: Vec<AgentSlot>,
    action_sizes: Vec<usize>,
    reward_scale: f64,
    horizon: usize,
    steps_done: usize,
    pending: Option<Pending>,
    counters: Counters,
}

impl Coordinator {
    /// `reward_scale` divides every marginal gain before it reaches a
    /// forecaster. Agent `i` samples from its own stream of `seed`.
    pub fn new(
        action_sizes: &[usize],
        horizon: usize,
        reward_scale: f64,
        seed: u64,
    ) -> Result<Self> {
        if !(reward_scale > 0.0 && reward_scale.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "reward scale must be positive and finite, got {reward_scale}"
            )));
        }
        if action_sizes.is_empty() {
            return Err(Error::InvalidArgument("no agents".into()));
        }
        let agents = action_sizes
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                Ok(AgentSlot {
                    forecaster: Forecaster::new(horizon.max(1), n)?,
                    stream: seeding::agent_stream(seed, i),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            agents,
            action_sizes: action_sizes.to_vec(),
            reward_scale,
            horizon,
            steps_done: 0,
            pending: None,
            counters: Counters::new(action_sizes.len()),
        })
    }

    pub fn n_agents(&self) -> usize {
        self.agents.len()
    }

    pub fn action_sizes(&self) -> &[usize] {
        &self.action_sizes
    }

    pub fn reward_scale(&self) -> f64 {
        self.reward_scale
    }

    pub fn counters(&self) -> &Counters {
        &self.counters
    }

    pub fn forecaster(&self, agent: usize) -> &Forecaster {
        &self.agents[agent].forecaster
    }

    pub fn forecaster_mut(&mut self, agent: usize) -> &mut Forecaster {
        &mut self.agents[agent].forecaster
    }

    pub fn steps_done(&self) -> usize {
        self.steps_done
    }

    /// Draws one action per agent, in agent order, from its forecaster.
    /// No objective is touched here.
    pub fn select_actions(&mut self) -> Result<ActionProfile> {
        if self.steps_done >= self.horizon {
            return Err(Error::HorizonExhausted {
                horizon: self.horizon,
            });
        }
        let mut profile = ActionProfile::empty();
        let mut distributions = Vec::with_capacity(self.agents.len());
        for (i, slot) in self.agents.iter_mut().enumerate() {
            let p = slot.forecaster.distribution();
            let index = forecaster::sample(&p, &mut slot.stream);
            profile.insert(ActionId::new(i, index))?;
            distributions.push(p);
        }
        self.pending = Some(Pending {
            profile: profile.clone(),
            distributions,
        });
        Ok(profile)
    }

    /// Feeds every agent the marginal gains of all its actions given the
    /// actions executed by the agents before it.
    pub fn feedback<F: ObjectiveOracle + ?Sized>(
        &mut self,
        objective: &F,
        executed: &ActionProfile,
    ) -> Result<StepOutcome> {
        let pending = self.pending.as_ref().ok_or(Error::NoPendingSelection)?;
        if &pending.profile != executed {
            return Err(Error::ProfileMismatch);
        }
        if objective.action_sizes() != self.action_sizes.as_slice() {
            return Err(Error::InvalidArgument(format!(
                "objective action sizes {:?} differ from the coordinator's {:?}",
                objective.action_sizes(),
                self.action_sizes
            )));
        }
        let pending = self.pending.take().expect("checked above");

        let counting = CountingOracle::new(objective);
        let mut prefix = ActionProfile::empty();
        let mut rewards_fed = Vec::with_capacity(self.agents.len());
        let mut objective_value = 0.0;

        for (i, slot) in self.agents.iter_mut().enumerate() {
            let agent = AgentId(i);
            let chosen = executed.get(agent).expect("selection binds every agent");

            let before = counting.count();
            let prefix_value = counting.evaluate(&prefix);
            self.counters.prefix_evals[i] += counting.count() - before;

            let before = counting.count();
            let extended: Vec<f64> = (0..self.action_sizes[i])
                .map(|a| {
                    let with_a = prefix.with(ActionId::new(i, a))?;
                    Ok(counting.evaluate(&with_a))
                })
                .collect::<Result<_>>()?;
            self.counters.marginal_evals[i] += counting.count() - before;

            let rewards: Vec<f64> = extended
                .iter()
                .map(|v| (v - prefix_value) / self.reward_scale)
                .collect();
            slot.forecaster.observe(&rewards)?;
            self.counters.level_updates[i] += slot.forecaster.params().levels as u64;

            objective_value = extended[chosen];
            prefix.insert(ActionId::new(i, chosen))?;
            rewards_fed.push(rewards);
        }

        self.steps_done += 1;
        self.counters.steps += 1;
        Ok(StepOutcome {
            chosen: pending.profile,
            distributions: pending.distributions,
            rewards_fed,
            objective_value,
        })
    }
}

#[derive(Debug, Clone)]
pub struct OsgRun {
    pub outcomes: Vec<StepOutcome>,
    pub counters: Counters,
}

/// Plays `steps` rounds of select, execute, feedback against `env`.
pub fn run<E: Environment>(coord: &mut Coordinator, env: &mut E, steps: usize) -> Result<OsgRun> {
    let mut outcomes = Vec::with_capacity(steps);
    for _ in 0..steps {
        let profile = coord.select_actions()?;
        let objective = env.execute(&profile)?;
        outcomes.push(coord.feedback(&objective, &profile)?);
    }
    Ok(OsgRun {
        outcomes,
        counters: coord.counters().clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::submodular::synthetic::{ModularOracle, TableOracle};
    use crate::submodular::FnOracle;

    #[test]
    fn zero_objective_feeds_zeros_and_keeps_distributions() {
        let mut coord = Coordinator::new(&[3, 4], 10, 1.0, 5).unwrap();
        let f = FnOracle::new(vec![3, 4], |_: &ActionProfile| 0.0);
        let before: Vec<_> = (0..2).map(|i| coord.forecaster(i).distribution()).collect();
        let profile = coord.select_actions().unwrap();
        let outcome = coord.feedback(&f, &profile).unwrap();
        assert!(outcome.rewards_fed.iter().flatten().all(|&r| r == 0.0));
        for (i, p) in before.iter().enumerate() {
            assert_eq!(&coord.forecaster(i).distribution(), p);
        }
    }

    #[test]
    fn single_agent_rewards_are_singleton_values() {
        let values = vec![0.1, 0.7, 0.4, 0.2];
        let f = ModularOracle::new(vec![values.clone()]);
        let mut coord = Coordinator::new(&[4], 5, 1.0, 0).unwrap();
        let profile = coord.select_actions().unwrap();
        let outcome = coord.feedback(&f, &profile).unwrap();
        assert_eq!(outcome.rewards_fed[0], values);
    }

    #[test]
    fn two_agent_table_rewards_follow_prefix() {
        // Values over every partial profile of 2 agents x 2 actions.
        // agent0 a: {0:1.0, 1:2.0}; agent1 b: {0:1.5, 1:0.5};
        // pairs (a,b): (0,0)=2.0 (0,1)=1.5 (1,0)=2.5 (1,1)=2.25
        let table =
            TableOracle::from_fn(&[2, 2], |p| match (p.get(AgentId(0)), p.get(AgentId(1))) {
                (None, None) => 0.0,
                (Some(0), None) => 1.0,
                (Some(1), None) => 2.0,
                (None, Some(0)) => 1.5,
                (None, Some(1)) => 0.5,
                (Some(0), Some(0)) => 2.0,
                (Some(0), Some(1)) => 1.5,
                (Some(1), Some(0)) => 2.5,
                (Some(1), Some(1)) => 2.25,
                _ => unreachable!(),
            })
            .unwrap();
        let mut coord = Coordinator::new(&[2, 2], 3, 1.0, 11).unwrap();
        let profile = coord.select_actions().unwrap();
        let outcome = coord.feedback(&table, &profile).unwrap();
        assert_eq!(outcome.rewards_fed[0], vec![1.0, 2.0]);
        let expected_second = match profile.get(AgentId(0)).unwrap() {
            0 => vec![1.0, 0.5],
            _ => vec![0.5, 0.25],
        };
        assert_eq!(outcome.rewards_fed[1], expected_second);
    }

    #[test]
    fn feedback_requires_matching_selection() {
        let f = ModularOracle::new(vec![vec![1.0, 2.0], vec![0.5, 0.5]]);
        let mut coord = Coordinator::new(&[2, 2], 3, 1.0, 1).unwrap();
        assert_eq!(
            coord
                .feedback(&f, &ActionProfile::from_indices(&[0, 0]))
                .unwrap_err(),
            Error::NoPendingSelection
        );
        let profile = coord.select_actions().unwrap();
        let other = ActionProfile::from_indices(&[
            1 - profile.get(AgentId(0)).unwrap(),
            profile.get(AgentId(1)).unwrap(),
        ]);
        assert_eq!(
            coord.feedback(&f, &other).unwrap_err(),
            Error::ProfileMismatch
        );
    }

    #[test]
    fn horizon_is_enforced() {
        let f = ModularOracle::new(vec![vec![1.0, 2.0]]);
        let mut coord = Coordinator::new(&[2], 2, 1.0, 1).unwrap();
        for _ in 0..2 {
            let p = coord.select_actions().unwrap();
            coord.feedback(&f, &p).unwrap();
        }
        assert_eq!(
            coord.select_actions().unwrap_err(),
            Error::HorizonExhausted { horizon: 2 }
        );
    }

    #[test]
    fn rejects_bad_scale() {
        assert!(Coordinator::new(&[2], 2, 0.0, 1).is_err());
        assert!(Coordinator::new(&[2], 2, f64::NAN, 1).is_err());
    }

    #[test]
    fn point_mass_distribution_is_followed() {
        // Agent 1 has a single action, so its distribution is a point mass.
        let mut coord = Coordinator::new(&[4, 1], 20, 1.0, 3).unwrap();
        let f = ModularOracle::new(vec![vec![0.0; 4], vec![1.0]]);
        for _ in 0..20 {
            let p = coord.select_actions().unwrap();
            assert_eq!(p.get(AgentId(1)), Some(0));
            coord.feedback(&f, &p).unwrap();
        }
    }
}
