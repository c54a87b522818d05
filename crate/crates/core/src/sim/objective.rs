use super::geometry::{RobotAction, Vec2, ROBOT_ACTION_COUNT};
use crate::submodular::{ActionProfile, ObjectiveOracle};

/// Distances below this are clamped inside the objective.
pub const DEFAULT_MIN_DISTANCE: f64 = 0.1;

/// Sum over targets of the best inverse distance any robot in the profile
/// would have reached: `f(A) = Σ_j max_{i ∈ A} 1 / max(d(i, j), d_min)`.
///
/// Robot `i`'s hypothetical end point is its step-start position moved by
/// the action's displacement; targets sit at their end-of-step positions.
/// Robots absent from the profile contribute nothing, so `f(∅) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceObjective {
    sizes: Vec<usize>,
    n_targets: usize,
    /// `inverse[(robot · 8 + action) · n_targets + target]`.
    inverse: Vec<f64>,
}

impl DistanceObjective {
    pub fn new(robot_starts: &[Vec2], target_ends: &[Vec2], dt: f64, d_min: f64) -> Self {
        let n_targets = target_ends.len();
        let mut inverse = Vec::with_capacity(robot_starts.len() * ROBOT_ACTION_COUNT * n_targets);
        for &start in robot_starts {
            for a in 0..ROBOT_ACTION_COUNT {
                let end = start + RobotAction::from_index(a).displacement(dt);
                inverse.extend(
                    target_ends
                        .iter()
                        .map(|&target| 1.0 / end.distance(target).max(d_min)),
                );
            }
        }
        Self {
            sizes: vec![ROBOT_ACTION_COUNT; robot_starts.len()],
            n_targets,
            inverse,
        }
    }

    /// Largest possible single-robot gain: every target at the clamp distance.
    pub fn gain_bound(n_targets: usize, d_min: f64) -> f64 {
        n_targets as f64 / d_min
    }

    fn row(&self, robot: usize, action: usize) -> &[f64] {
        let start = (robot * ROBOT_ACTION_COUNT + action) * self.n_targets;
        &self.inverse[start..start + self.n_targets]
    }
}

impl ObjectiveOracle for DistanceObjective {
    fn action_sizes(&self) -> &[usize] {
        &self.sizes
    }

    fn evaluate(&self, profile: &ActionProfile) -> f64 {
        let mut best = vec![0.0f64; self.n_targets];
        for a in profile {
            for (b, &v) in best.iter_mut().zip(self.row(a.agent.0, a.index)) {
                *b = b.max(v);
            }
        }
        best.iter().sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::geometry::Direction;
    use crate::submodular::{marginal_gain, ActionId};

    #[test]
    fn empty_profile_is_zero() {
        let f = DistanceObjective::new(&[Vec2::new(1.0, 2.0)], &[Vec2::new(3.0, 3.0)], 0.1, 0.1);
        assert_eq!(f.evaluate(&ActionProfile::empty()), 0.0);
    }

    #[test]
    fn single_robot_hand_geometry() {
        let f = DistanceObjective::new(&[Vec2::ZERO], &[Vec2::new(4.0, 0.0)], 1.0, 0.1);
        let right1 = RobotAction {
            direction: Direction::Right,
            speed: 1.0,
        }
        .index();
        let value = f.evaluate(&ActionProfile::from_indices(&[right1]));
        assert!((value - 1.0 / 3.0).abs() < 1e-12);
        let gain = marginal_gain(&f, ActionId::new(0, right1), &ActionProfile::empty()).unwrap();
        assert!((gain - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn farther_robot_adds_nothing() {
        let f = DistanceObjective::new(
            &[Vec2::new(1.0, 0.0), Vec2::new(10.0, 0.0)],
            &[Vec2::ZERO],
            0.1,
            0.1,
        );
        let near = ActionProfile::from_indices(&[0]);
        for a in 0..ROBOT_ACTION_COUNT {
            assert_eq!(marginal_gain(&f, ActionId::new(1, a), &near).unwrap(), 0.0);
        }
    }

    #[test]
    fn clamp_caps_value() {
        let f = DistanceObjective::new(&[Vec2::ZERO], &[Vec2::new(0.0, 0.1)], 0.1, 0.1);
        let up1 = 0; // up at speed 1 lands on the target
        assert!((f.evaluate(&ActionProfile::from_indices(&[up1])) - 10.0).abs() < 1e-9);
        assert_eq!(DistanceObjective::gain_bound(2, 0.1), 20.0);
    }
}
