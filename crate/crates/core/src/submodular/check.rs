use std::fmt;

use super::{marginal_gain, ActionId, ActionProfile, ObjectiveOracle};
use crate::error::{Error, Result};

/// Largest number of (partial) profiles the exhaustive checker will enumerate.
pub const CHECK_PROFILE_LIMIT: u128 = 100_000;

/// Absolute slack allowed before a comparison counts as a violation.
const CHECK_TOLERANCE: f64 = 1e-9;

/// Mixed-radix indexing of every partial profile over fixed action-set sizes.
///
/// Digit `i` is 0 when agent `i` is unbound and `k + 1` when it plays action `k`.
#[derive(Debug, Clone)]
pub struct ProfileSpace {
    sizes: Vec<usize>,
    strides: Vec<usize>,
    total: usize,
}

impl ProfileSpace {
    pub fn new(sizes: &[usize], limit: u128) -> Result<Self> {
        let count = sizes
            .iter()
            .try_fold(1u128, |acc, &s| acc.checked_mul(s as u128 + 1))
            .unwrap_or(u128::MAX);
        if count > limit {
            return Err(Error::EnumerationTooLarge { count, limit });
        }
        let mut strides = Vec::with_capacity(sizes.len());
        let mut stride = 1usize;
        for &s in sizes {
            strides.push(stride);
            stride *= s + 1;
        }
        Ok(Self {
            sizes: sizes.to_vec(),
            strides,
            total: count as usize,
        })
    }

    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    fn digit(&self, code: usize, agent: usize) -> usize {
        (code / self.strides[agent]) % (self.sizes[agent] + 1)
    }

    pub fn decode(&self, code: usize) -> ActionProfile {
        let actions = (0..self.sizes.len()).filter_map(|agent| match self.digit(code, agent) {
            0 => None,
            d => Some(ActionId::new(agent, d - 1)),
        });
        ActionProfile::from_actions(actions).expect("one action per agent by construction")
    }

    fn bound_agents(&self, code: usize) -> Vec<usize> {
        (0..self.sizes.len())
            .filter(|&agent| self.digit(code, agent) != 0)
            .collect()
    }

    fn with_action(&self, code: usize, agent: usize, index: usize) -> usize {
        code + (index + 1) * self.strides[agent]
    }

    /// Codes of every sub-profile of `code`, including the empty one and `code` itself.
    fn subsets(&self, code: usize) -> Vec<usize> {
        let bound = self.bound_agents(code);
        (0u64..1 << bound.len())
            .map(|mask| {
                bound
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| mask >> bit & 1 == 1)
                    .map(|(_, &agent)| self.digit(code, agent) * self.strides[agent])
                    .sum()
            })
            .collect()
    }
}

/// `f(smaller) > f(larger)` for nested profiles.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneWitness {
    pub smaller: ActionProfile,
    pub larger: ActionProfile,
    pub f_smaller: f64,
    pub f_larger: f64,
}

/// `f(s | smaller) < f(s | larger)` for nested profiles.
#[derive(Debug, Clone, PartialEq)]
pub struct SubmodularWitness {
    pub smaller: ActionProfile,
    pub larger: ActionProfile,
    pub element: ActionId,
    pub gain_smaller: f64,
    pub gain_larger: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub f_empty: f64,
    pub normalized: bool,
    pub monotone: bool,
    pub submodular: bool,
    pub monotone_witness: Option<MonotoneWitness>,
    pub submodular_witness: Option<SubmodularWitness>,
    pub monotone_violations: usize,
    pub submodular_violations: usize,
    pub profiles: usize,
    pub nested_pairs: usize,
    pub triples: usize,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.normalized && self.monotone && self.submodular
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = |ok: bool| if ok { "pass" } else { "FAIL" };
        writeln!(
            f,
            "normalized: {} (f(empty) = {:e})",
            verdict(self.normalized),
            self.f_empty
        )?;
        writeln!(
            f,
            "monotone: {} ({} nested pairs, {} violations)",
            verdict(self.monotone),
            self.nested_pairs,
            self.monotone_violations
        )?;
        if let Some(w) = &self.monotone_witness {
            writeln!(
                f,
                "  witness: f({}) = {} > f({}) = {}",
                w.smaller, w.f_smaller, w.larger, w.f_larger
            )?;
        }
        write!(
            f,
            "submodular: {} ({} triples, {} violations)",
            verdict(self.submodular),
            self.triples,
            self.submodular_violations
        )?;
        if let Some(w) = &self.submodular_witness {
            write!(
                f,
                "\n  witness: f({} | {}) = {} < f({} | {}) = {}",
                w.element, w.smaller, w.gain_smaller, w.element, w.larger, w.gain_larger
            )?;
        }
        Ok(())
    }
}

/// Exhaustively checks `f(∅) = 0`, monotonicity over every nested pair of
/// profiles and diminishing returns over every `(A ⊆ B, s)` with `s`'s agent
/// unbound in `B`.
pub fn check_normalized_monotone_submodular<F: ObjectiveOracle + ?Sized>(
    f: &F,
    agent_action_sizes: &[usize],
) -> Result<CheckReport> {
    let space = ProfileSpace::new(agent_action_sizes, CHECK_PROFILE_LIMIT)?;
    let values: Vec<f64> = (0..space.len())
        .map(|code| f.evaluate(&space.decode(code)))
        .collect();

    let f_empty = values[0];
    let mut report = CheckReport {
        f_empty,
        normalized: f_empty.abs() <= CHECK_TOLERANCE,
        monotone: true,
        submodular: true,
        monotone_witness: None,
        submodular_witness: None,
        monotone_violations: 0,
        submodular_violations: 0,
        profiles: space.len(),
        nested_pairs: 0,
        triples: 0,
    };

    let n_agents = agent_action_sizes.len();
    for big in 0..space.len() {
        let subsets = space.subsets(big);
        for &small in &subsets {
            report.nested_pairs += 1;
            if values[small] > values[big] + CHECK_TOLERANCE {
                report.monotone_violations += 1;
                if report.monotone_witness.is_none() {
                    report.monotone_witness = Some(MonotoneWitness {
                        smaller: space.decode(small),
                        larger: space.decode(big),
                        f_smaller: values[small],
                        f_larger: values[big],
                    });
                }
            }
        }

        let free: Vec<usize> = (0..n_agents)
            .filter(|&agent| space.digit(big, agent) == 0)
            .collect();
        for &agent in &free {
            for index in 0..agent_action_sizes[agent] {
                let gain_big = values[space.with_action(big, agent, index)] - values[big];
                for &small in &subsets {
                    report.triples += 1;
                    let gain_small = values[space.with_action(small, agent, index)] - values[small];
                    if gain_small < gain_big - CHECK_TOLERANCE {
                        report.submodular_violations += 1;
                        if report.submodular_witness.is_none() {
                            let element = ActionId::new(agent, index);
                            let smaller = space.decode(small);
                            let larger = space.decode(big);
                            report.submodular_witness = Some(SubmodularWitness {
                                gain_smaller: marginal_gain(f, element, &smaller)?,
                                gain_larger: marginal_gain(f, element, &larger)?,
                                smaller,
                                larger,
                                element,
                            });
                        }
                    }
                }
            }
        }
    }

    report.monotone = report.monotone_violations == 0;
    report.submodular = report.submodular_violations == 0;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::submodular::FnOracle;

    #[test]
    fn space_round_trips_every_code() {
        let space = ProfileSpace::new(&[2, 3], CHECK_PROFILE_LIMIT).unwrap();
        assert_eq!(space.len(), 12);
        let profiles: std::collections::HashSet<_> =
            (0..space.len()).map(|c| space.decode(c)).collect();
        assert_eq!(profiles.len(), 12);
        assert!(space.decode(0).is_empty());
    }

    #[test]
    fn subsets_of_full_profile() {
        let space = ProfileSpace::new(&[2, 2], CHECK_PROFILE_LIMIT).unwrap();
        let full = 2 + 3; // agent 0 plays 1, agent 1 plays 0
        let subs: Vec<_> = space
            .subsets(full)
            .iter()
            .map(|&c| space.decode(c))
            .collect();
        assert_eq!(subs.len(), 4);
        let full_profile = space.decode(full);
        assert!(subs.iter().all(|s| s.is_subset_of(&full_profile)));
    }

    #[test]
    fn zero_function_passes() {
        let f = FnOracle::new(vec![3, 2, 2], |_: &ActionProfile| 0.0);
        let report = check_normalized_monotone_submodular(&f, &[3, 2, 2]).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn supermodular_function_fails_with_witness() {
        let f = FnOracle::new(vec![2, 2], |p: &ActionProfile| (p.len() * p.len()) as f64);
        let report = check_normalized_monotone_submodular(&f, &[2, 2]).unwrap();
        assert!(report.normalized);
        assert!(report.monotone);
        assert!(!report.submodular);
        let w = report.submodular_witness.expect("witness");
        assert!(w.smaller.is_subset_of(&w.larger));
        assert!(!w.larger.binds(w.element.agent));
        assert!(w.gain_smaller < w.gain_larger);
    }

    #[test]
    fn unnormalized_and_decreasing_are_flagged() {
        let f = FnOracle::new(vec![2], |p: &ActionProfile| 1.0 - p.len() as f64);
        let report = check_normalized_monotone_submodular(&f, &[2]).unwrap();
        assert!(!report.normalized);
        assert!(!report.monotone);
        let w = report.monotone_witness.unwrap();
        assert!(w.f_smaller > w.f_larger);
    }

    #[test]
    fn enumeration_guard() {
        let f = FnOracle::new(vec![9; 6], |_: &ActionProfile| 0.0);
        let err = check_normalized_monotone_submodular(&f, &[9; 6]).unwrap_err();
        assert!(matches!(
            err,
            Error::EnumerationTooLarge {
                count: 1_000_000,
                ..
            }
        ));
    }
}
