//! Comparison policies: clairvoyant and lagged sequential greedy, the
//! per-step brute-force optimum and uniform random play.
//!
//! Every argmax here breaks ties toward the lowest index (lexicographically
//! for whole profiles), so optimal profiles and the counts derived from them
//! are deterministic.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::submodular::{ActionId, ActionProfile, ObjectiveOracle};

/// Largest joint action space [`brute_force_opt`] will enumerate.
pub const BRUTE_FORCE_LIMIT: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PolicyKind {
    Osg,
    SgClairvoyant,
    SgHat,
    BruteForceOpt,
    UniformRandom,
}

impl PolicyKind {
    pub const ALL: [PolicyKind; 5] = [
        PolicyKind::Osg,
        PolicyKind::SgClairvoyant,
        PolicyKind::SgHat,
        PolicyKind::BruteForceOpt,
        PolicyKind::UniformRandom,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Osg => "osg",
            PolicyKind::SgClairvoyant => "sg_clairvoyant",
            PolicyKind::SgHat => "sg_hat",
            PolicyKind::BruteForceOpt => "brute_force_opt",
            PolicyKind::UniformRandom => "uniform_random",
        }
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PolicyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase().replace('-', "_");
        PolicyKind::ALL
            .into_iter()
            .find(|k| k.name() == key)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown policy `{s}` (expected one of osg, sg_clairvoyant, sg_hat, brute_force_opt, uniform_random)"
                ))
            })
    }
}

/// Sequential greedy: agent `i` picks the action with the largest marginal
/// gain on top of the picks of agents `0..i`.
pub fn sg_select<F: ObjectiveOracle + ?Sized>(f: &F, action_sizes: &[usize]) -> ActionProfile {
    let mut profile = ActionProfile::empty();
    let mut base_value = f.evaluate(&profile);
    for (agent, &n) in action_sizes.iter().enumerate() {
        let mut best: Option<(usize, f64)> = None;
        for index in 0..n {
            let value = f.evaluate(
                &profile
                    .with(ActionId::new(agent, index))
                    .expect("agent unbound in greedy prefix"),
            );
            if best.is_none_or(|(_, v)| value - base_value > v - base_value) {
                best = Some((index, value));
            }
        }
        if let Some((index, value)) = best {
            profile
                .insert(ActionId::new(agent, index))
                .expect("agent unbound in greedy prefix");
            base_value = value;
        }
    }
    profile
}

/// Greedy on the previous step's objective; index 0 for every agent when
/// there is no previous step.
pub fn sg_hat_select<F: ObjectiveOracle + ?Sized>(
    previous: Option<&F>,
    action_sizes: &[usize],
) -> ActionProfile {
    match previous {
        Some(f) => sg_select(f, action_sizes),
        None => ActionProfile::from_indices(&vec![0; action_sizes.len()]),
    }
}

/// Exhaustive maximum over every full profile. The first maximizer in
/// lexicographic order (agent 0 most significant) wins ties.
pub fn brute_force_opt<F: ObjectiveOracle + ?Sized>(
    f: &F,
    action_sizes: &[usize],
) -> Result<(ActionProfile, f64)> {
    let count = action_sizes
        .iter()
        .try_fold(1u128, |acc, &s| acc.checked_mul(s as u128))
        .unwrap_or(u128::MAX);
    if count > BRUTE_FORCE_LIMIT {
        return Err(Error::EnumerationTooLarge {
            count,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    if count == 0 {
        return Err(Error::InvalidArgument("an agent has no actions".into()));
    }

    let n = action_sizes.len();
    let mut digits = vec![0usize; n];
    let mut best = (ActionProfile::from_indices(&digits), f64::NEG_INFINITY);
    loop {
        let profile = ActionProfile::from_indices(&digits);
        let value = f.evaluate(&profile);
        if value > best.1 {
            best = (profile, value);
        }
        // Odometer increment, last agent fastest.
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(best);
            }
            k -= 1;
            digits[k] += 1;
            if digits[k] < action_sizes[k] {
                break;
            }
            digits[k] = 0;
        }
    }
}

/// One independent uniform draw per agent.
pub fn uniform_random_select<R: Rng + ?Sized>(
    action_sizes: &[usize],
    rng: &mut R,
) -> ActionProfile {
    let indices: Vec<usize> = action_sizes
        .iter()
        .map(|&n| rng.random_range(0..n))
        .collect();
    ActionProfile::from_indices(&indices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::submodular::synthetic::{ModularOracle, TableOracle, WeightedCoverage};
    use crate::submodular::AgentId;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn modular_greedy_picks_each_agents_best() {
        let f = ModularOracle::new(vec![
            vec![0.1, 0.9, 0.3],
            vec![0.5, 0.2],
            vec![0.0, 0.0, 0.4, 0.4],
        ]);
        let sizes = f.action_sizes().to_vec();
        let sg = sg_select(&f, &sizes);
        assert_eq!(sg, ActionProfile::from_indices(&[1, 0, 2]));
        let (opt, value) = brute_force_opt(&f, &sizes).unwrap();
        assert_eq!(opt, sg);
        assert!((value - 1.8).abs() < 1e-12);
    }

    #[test]
    fn table_greedy_walkthrough() {
        // Agent 0: singletons {0: 1.0, 1: 2.0} -> picks 1.
        // Agent 1 given {a0=1}: gains {0: 0.5, 1: 0.25} -> picks 0.
        // Optimum over pairs is (1, 0) = 2.5.
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
        assert_eq!(
            sg_select(&table, &[2, 2]),
            ActionProfile::from_indices(&[1, 0])
        );
        let (opt, v) = brute_force_opt(&table, &[2, 2]).unwrap();
        assert_eq!(opt, ActionProfile::from_indices(&[1, 0]));
        assert_eq!(v, 2.5);
    }

    #[test]
    fn greedy_ties_go_to_lowest_index() {
        let f = ModularOracle::new(vec![vec![0.5, 0.5], vec![0.0, 0.0, 0.0]]);
        assert_eq!(sg_select(&f, &[2, 3]), ActionProfile::from_indices(&[0, 0]));
        let (opt, _) = brute_force_opt(&f, &[2, 3]).unwrap();
        assert_eq!(opt, ActionProfile::from_indices(&[0, 0]));
    }

    #[test]
    fn single_agent_optimum_is_argmax() {
        let f = ModularOracle::new(vec![vec![0.3, 0.1, 0.8, 0.8]]);
        let (opt, v) = brute_force_opt(&f, &[4]).unwrap();
        assert_eq!(opt, ActionProfile::from_indices(&[2]));
        assert_eq!(v, 0.8);
    }

    #[test]
    fn sg_hat_defaults_and_stationary_case() {
        let f = ModularOracle::new(vec![vec![0.1, 0.9], vec![0.5, 0.7]]);
        assert_eq!(
            sg_hat_select::<ModularOracle>(None, &[2, 2]),
            ActionProfile::from_indices(&[0, 0])
        );
        assert_eq!(sg_hat_select(Some(&f), &[2, 2]), sg_select(&f, &[2, 2]));
    }

    #[test]
    fn brute_force_matches_reverse_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..25 {
            let f = WeightedCoverage::random(&mut rng, &[8, 8], 10, 0.3);
            let (_, v) = brute_force_opt(&f, &[8, 8]).unwrap();
            let mut reverse = f64::NEG_INFINITY;
            for b in (0..8).rev() {
                for a in (0..8).rev() {
                    reverse = reverse.max(f.evaluate(&ActionProfile::from_indices(&[a, b])));
                }
            }
            assert_eq!(v, reverse);
        }
    }

    #[test]
    fn brute_force_guard() {
        let f = ModularOracle::new(vec![vec![0.0; 10]; 7]);
        assert!(matches!(
            brute_force_opt(&f, &[10; 7]),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }

    #[test]
    fn policy_names_round_trip() {
        for k in PolicyKind::ALL {
            assert_eq!(k.name().parse::<PolicyKind>().unwrap(), k);
        }
        assert_eq!("SG-hat".parse::<PolicyKind>().unwrap(), PolicyKind::SgHat);
        assert!("greedy".parse::<PolicyKind>().is_err());
    }

    #[test]
    fn uniform_random_is_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..100 {
            let p = uniform_random_select(&[3, 1, 8], &mut rng);
            assert!(p.validate(&[3, 1, 8]).is_ok());
            assert_eq!(p.len(), 3);
        }
    }
}
