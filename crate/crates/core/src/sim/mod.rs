//! Planar multi-robot target tracking.
//!
//! Robots pick one of eight axis-aligned motion primitives per step. Targets
//! follow straight lines, noisy rectangles or evade nearby robots. The
//! objective of each step is revealed in hindsight as a [`DistanceObjective`]
//! built from the robots' step-start positions and the targets' step-end
//! positions.

mod geometry;
mod objective;
mod targets;

pub use geometry::{Direction, RobotAction, Vec2, ROBOT_ACTION_COUNT, ROBOT_SPEEDS};
pub use objective::{DistanceObjective, DEFAULT_MIN_DISTANCE};
pub use targets::{AdversarialParams, EvasionMode, Target, TargetBehavior};

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::osg::Environment;
use crate::seeding;
use crate::submodular::{ActionProfile, AgentId};

/// Builds the step objective from step-start robot positions and step-end
/// target positions.
pub fn objective_oracle(
    robot_starts: &[Vec2],
    target_ends: &[Vec2],
    dt: f64,
    d_min: f64,
) -> DistanceObjective {
    DistanceObjective::new(robot_starts, target_ends, dt, d_min)
}

/// Raw (unclamped) distance from each target to its nearest robot.
pub fn min_distance_per_target(robots: &[Vec2], targets: &[Vec2]) -> Vec<f64> {
    targets
        .iter()
        .map(|&t| {
            robots
                .iter()
                .map(|&r| r.distance(t))
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TargetSpec {
    pub position: Vec2,
    pub behavior: TargetBehavior,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// Horizon `H` in seconds.
    pub horizon_s: f64,
    /// Number of steps `T`; the step length is `H / T`.
    pub steps: usize,
    pub robots: Vec<Vec2>,
    pub targets: Vec<TargetSpec>,
    pub d_min: f64,
    /// Seed of the environment's noise stream.
    pub seed: u64,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidArgument(msg));
        if !(self.horizon_s > 0.0 && self.horizon_s.is_finite()) {
            return invalid(format!(
                "horizon_s must be positive, got {}",
                self.horizon_s
            ));
        }
        if self.robots.is_empty() || self.targets.is_empty() {
            return invalid("need at least one robot and one target".into());
        }
        if !(self.d_min > 0.0 && self.d_min.is_finite()) {
            return invalid(format!("d_min must be positive, got {}", self.d_min));
        }
        if let Some(r) = self.robots.iter().find(|r| !r.is_finite()) {
            return invalid(format!("robot position {r} is not finite"));
        }
        for t in &self.targets {
            if !t.position.is_finite() {
                return invalid(format!("target position {} is not finite", t.position));
            }
            t.behavior.validate()?;
        }
        Ok(())
    }

    pub fn dt(&self) -> f64 {
        self.horizon_s / self.steps.max(1) as f64
    }
}

/// The simulated world, driven one executed profile at a time.
#[derive(Debug, Clone)]
pub struct TrackingEnv {
    dt: f64,
    steps: usize,
    step: usize,
    d_min: f64,
    robots: Vec<Vec2>,
    targets: Vec<Target>,
    rng: ChaCha8Rng,
}

/// Validates `config` and builds its environment.
pub fn make_environment(config: &SimConfig) -> Result<TrackingEnv> {
    config.validate()?;
    Ok(TrackingEnv {
        dt: config.dt(),
        steps: config.steps,
        step: 0,
        d_min: config.d_min,
        robots: config.robots.clone(),
        targets: config
            .targets
            .iter()
            .map(|t| Target::new(t.position, t.behavior))
            .collect(),
        rng: seeding::environment_stream(config.seed),
    })
}

impl TrackingEnv {
    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Steps executed so far.
    pub fn step(&self) -> usize {
        self.step
    }

    pub fn remaining_steps(&self) -> usize {
        self.steps - self.step
    }

    pub fn time_s(&self) -> f64 {
        self.step as f64 * self.dt
    }

    pub fn robots(&self) -> &[Vec2] {
        &self.robots
    }

    pub fn targets(&self) -> &[Target] {
        &self.targets
    }

    pub fn target_positions(&self) -> Vec<Vec2> {
        self.targets.iter().map(|t| t.position).collect()
    }

    pub fn min_distances(&self) -> Vec<f64> {
        min_distance_per_target(&self.robots, &self.target_positions())
    }

    pub fn total_maneuvers(&self) -> u64 {
        self.targets.iter().map(Target::maneuvers).sum()
    }

    fn advance_targets(targets: &mut [Target], robots: &[Vec2], dt: f64, rng: &mut ChaCha8Rng) {
        for t in targets {
            t.advance(dt, robots, rng);
        }
    }

    fn robot_actions(&self, profile: &ActionProfile) -> Result<Vec<RobotAction>> {
        profile.validate(&vec![ROBOT_ACTION_COUNT; self.robots.len()])?;
        (0..self.robots.len())
            .map(|i| {
                profile
                    .get(AgentId(i))
                    .map(RobotAction::from_index)
                    .ok_or_else(|| Error::Environment(format!("robot {i} has no action")))
            })
            .collect()
    }
}

impl Environment for TrackingEnv {
    type Oracle = DistanceObjective;

    fn action_sizes(&self) -> Vec<usize> {
        vec![ROBOT_ACTION_COUNT; self.robots.len()]
    }

    /// Targets move first (reacting to the step-start robot positions), then
    /// the robots execute their displacements.
    fn execute(&mut self, profile: &ActionProfile) -> Result<DistanceObjective> {
        if self.step >= self.steps {
            return Err(Error::Environment(format!(
                "all {} steps have been executed",
                self.steps
            )));
        }
        let actions = self.robot_actions(profile)?;
        let starts = self.robots.clone();
        Self::advance_targets(&mut self.targets, &starts, self.dt, &mut self.rng);
        for (robot, action) in self.robots.iter_mut().zip(&actions) {
            *robot += action.displacement(self.dt);
        }
        self.step += 1;
        Ok(objective_oracle(
            &starts,
            &self.target_positions(),
            self.dt,
            self.d_min,
        ))
    }

    fn preview(&self) -> Result<DistanceObjective> {
        if self.step >= self.steps {
            return Err(Error::Environment("no step left to preview".into()));
        }
        let mut targets = self.targets.clone();
        let mut rng = self.rng.clone();
        Self::advance_targets(&mut targets, &self.robots, self.dt, &mut rng);
        let ends: Vec<Vec2> = targets.iter().map(|t| t.position).collect();
        Ok(objective_oracle(&self.robots, &ends, self.dt, self.d_min))
    }

    fn gain_bound(&self) -> Option<f64> {
        Some(DistanceObjective::gain_bound(
            self.targets.len(),
            self.d_min,
        ))
    }
}
