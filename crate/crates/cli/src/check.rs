//! Property-check suites behind `osg check`.

use osg_core::forecaster::linear::max_divergence;
use osg_core::sim::{DistanceObjective, Vec2, DEFAULT_MIN_DISTANCE, ROBOT_ACTION_COUNT};
use osg_core::submodular::{
    check_normalized_monotone_submodular, ActionProfile, CheckReport, ObjectiveOracle,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Per-entry tolerance between the log-domain and linear forecasters.
pub const EQUIVALENCE_TOLERANCE: f64 = 1e-9;

/// A distance objective for random robot and target positions in a 20 × 20
/// box with a step of 0.02 to 0.5 s.
pub fn random_distance_objective<R: Rng + ?Sized>(
    rng: &mut R,
    robots: usize,
    targets: usize,
) -> DistanceObjective {
    let point =
        |rng: &mut R| Vec2::new(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0));
    let r: Vec<Vec2> = (0..robots).map(|_| point(rng)).collect();
    let t: Vec<Vec2> = (0..targets).map(|_| point(rng)).collect();
    let dt = rng.random_range(0.02..0.5);
    DistanceObjective::new(&r, &t, dt, DEFAULT_MIN_DISTANCE)
}

/// Adds `weight · |A|²` to an objective, which breaks diminishing returns.
pub struct Supermodular<F> {
    pub inner: F,
    pub weight: f64,
}

impl<F: ObjectiveOracle> ObjectiveOracle for Supermodular<F> {
    fn action_sizes(&self) -> &[usize] {
        self.inner.action_sizes()
    }

    fn evaluate(&self, profile: &ActionProfile) -> f64 {
        let n = profile.len() as f64;
        self.inner.evaluate(profile) + self.weight * n * n
    }
}

#[derive(Debug, Clone)]
pub struct ObjectiveCheck {
    pub instances: usize,
    pub failures: usize,
    /// The first failing report, if any.
    pub first_failure: Option<CheckReport>,
}

impl ObjectiveCheck {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Runs the exhaustive checker on `instances` random 2-robot, 2-target
/// objectives. With `inject_supermodular` every objective is perturbed so
/// the check must fail.
pub fn check_distance_objectives(
    seed: u64,
    instances: usize,
    inject_supermodular: bool,
) -> anyhow::Result<ObjectiveCheck> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sizes = [ROBOT_ACTION_COUNT; 2];
    let mut out = ObjectiveCheck {
        instances,
        failures: 0,
        first_failure: None,
    };
    for _ in 0..instances {
        let f = random_distance_objective(&mut rng, 2, 2);
        let report = if inject_supermodular {
            check_normalized_monotone_submodular(
                &Supermodular {
                    inner: f,
                    weight: 100.0,
                },
                &sizes,
            )?
        } else {
            check_normalized_monotone_submodular(&f, &sizes)?
        };
        if !report.passed() {
            out.failures += 1;
            out.first_failure.get_or_insert(report);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceCase {
    pub horizon: usize,
    pub n_actions: usize,
    pub streams: usize,
    pub max_gap: f64,
}

impl EquivalenceCase {
    pub fn passed(&self) -> bool {
        self.max_gap <= EQUIVALENCE_TOLERANCE
    }
}

/// Compares the log-domain forecaster with the linear reference on
/// `streams` uniform reward streams for every horizon and action count.
pub fn forecaster_equivalence(
    seed: u64,
    horizons: &[usize],
    action_counts: &[usize],
    streams: usize,
) -> Vec<EquivalenceCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cases = Vec::new();
    for &horizon in horizons {
        for &n_actions in action_counts {
            let mut max_gap = 0.0f64;
            for _ in 0..streams {
                let rewards: Vec<Vec<f64>> = (0..horizon)
                    .map(|_| (0..n_actions).map(|_| rng.random::<f64>()).collect())
                    .collect();
                max_gap = max_gap.max(max_divergence(horizon, n_actions, &rewards));
            }
            cases.push(EquivalenceCase {
                horizon,
                n_actions,
                streams,
                max_gap,
            });
        }
    }
    cases
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_objectives_pass() {
        let c = check_distance_objectives(1, 10, false).unwrap();
        assert!(c.passed());
        assert_eq!(c.instances, 10);
    }

    #[test]
    fn injected_supermodularity_fails_with_witness() {
        let c = check_distance_objectives(1, 3, true).unwrap();
        assert_eq!(c.failures, 3);
        let report = c.first_failure.unwrap();
        assert!(!report.submodular);
        assert!(report.submodular_witness.is_some());
    }

    #[test]
    fn small_battery_is_equivalent() {
        let cases = forecaster_equivalence(0, &[4], &[2, 3], 5);
        assert_eq!(cases.len(), 2);
        assert!(cases.iter().all(EquivalenceCase::passed));
    }
}
