//! Action profiles, the set-function interface and the exhaustive
//! normalized / non-decreasing / submodular property checker.

mod check;
mod profile;
pub mod synthetic;

pub use check::{
    check_normalized_monotone_submodular, CheckReport, MonotoneWitness, ProfileSpace,
    SubmodularWitness, CHECK_PROFILE_LIMIT,
};
pub use profile::{ActionId, ActionProfile, AgentId};

use crate::error::{Error, Result};

/// A set function over action profiles, evaluable on any profile.
///
/// Implementations must be deterministic and safe to evaluate from several
/// threads at once.
pub trait ObjectiveOracle: Sync {
    /// Number of actions available to each agent, in agent order.
    fn action_sizes(&self) -> &[usize];

    fn evaluate(&self, profile: &ActionProfile) -> f64;

    fn n_agents(&self) -> usize {
        self.action_sizes().len()
    }
}

impl<T: ObjectiveOracle + ?Sized> ObjectiveOracle for &T {
    fn action_sizes(&self) -> &[usize] {
        (**self).action_sizes()
    }

    fn evaluate(&self, profile: &ActionProfile) -> f64 {
        (**self).evaluate(profile)
    }
}

impl<T: ObjectiveOracle + ?Sized> ObjectiveOracle for Box<T> {
    fn action_sizes(&self) -> &[usize] {
        (**self).action_sizes()
    }

    fn evaluate(&self, profile: &ActionProfile) -> f64 {
        (**self).evaluate(profile)
    }
}

/// `f(base ∪ {action}) − f(base)`.
pub fn marginal_gain<F: ObjectiveOracle + ?Sized>(
    f: &F,
    action: ActionId,
    base: &ActionProfile,
) -> Result<f64> {
    if base.binds(action.agent) {
        return Err(Error::ProfileConflict {
            agent: action.agent.0,
        });
    }
    let extended = base.with(action)?;
    Ok(f.evaluate(&extended) - f.evaluate(base))
}

/// Closure-backed oracle.
pub struct FnOracle<F> {
    sizes: Vec<usize>,
    func: F,
}

impl<F> FnOracle<F>
where
    F: Fn(&ActionProfile) -> f64 + Sync,
{
    pub fn new(sizes: Vec<usize>, func: F) -> Self {
        Self { sizes, func }
    }
}

impl<F> ObjectiveOracle for FnOracle<F>
where
    F: Fn(&ActionProfile) -> f64 + Sync,
{
    fn action_sizes(&self) -> &[usize] {
        &self.sizes
    }

    fn evaluate(&self, profile: &ActionProfile) -> f64 {
        (self.func)(profile)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cardinality_squared() -> FnOracle<impl Fn(&ActionProfile) -> f64 + Sync> {
        FnOracle::new(vec![2, 2], |p: &ActionProfile| (p.len() * p.len()) as f64)
    }

    #[test]
    fn gain_from_empty_is_singleton_value() {
        let f = FnOracle::new(vec![3], |p: &ActionProfile| {
            p.get(AgentId(0)).map_or(0.0, |i| [0.5, 2.0, 1.0][i])
        });
        for i in 0..3 {
            let a = ActionId::new(0, i);
            let gain = marginal_gain(&f, a, &ActionProfile::empty()).unwrap();
            assert_eq!(gain, f.evaluate(&ActionProfile::from_indices(&[i])));
        }
    }

    #[test]
    fn gain_rejects_bound_agent() {
        let f = cardinality_squared();
        let base = ActionProfile::from_indices(&[0]);
        let err = marginal_gain(&f, ActionId::new(0, 1), &base).unwrap_err();
        assert_eq!(err, Error::ProfileConflict { agent: 0 });
    }

    #[test]
    fn saturated_gain_is_zero() {
        // f = 1 once any action of agent 0 is present; agent 1 adds nothing.
        let f = FnOracle::new(
            vec![2, 2],
            |p: &ActionProfile| {
                if p.binds(AgentId(0)) {
                    1.0
                } else {
                    0.0
                }
            },
        );
        let base = ActionProfile::from_indices(&[1]);
        assert_eq!(marginal_gain(&f, ActionId::new(1, 0), &base).unwrap(), 0.0);
    }
}
