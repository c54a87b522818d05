//! Small synthetic objectives for tests, property checks and scripted runs.

use rand::Rng;

use super::{ActionProfile, AgentId, ObjectiveOracle, ProfileSpace};
use crate::error::Result;

/// Weighted coverage: each action covers a set of items, and a profile is
/// worth the total weight of the union of the items its actions cover.
///
/// Normalized, non-decreasing and submodular for non-negative weights.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedCoverage {
    sizes: Vec<usize>,
    /// `covers[agent][action]` lists covered item indices.
    covers: Vec<Vec<Vec<usize>>>,
    weights: Vec<f64>,
}

impl WeightedCoverage {
    pub fn new(covers: Vec<Vec<Vec<usize>>>, weights: Vec<f64>) -> Self {
        let sizes = covers.iter().map(Vec::len).collect();
        debug_assert!(covers
            .iter()
            .flatten()
            .flatten()
            .all(|&item| item < weights.len()));
        Self {
            sizes,
            covers,
            weights,
        }
    }

    /// Random instance: every action covers each item independently with
    /// probability `p_cover`; weights are uniform in `[0, 1)`.
    pub fn random<R: Rng + ?Sized>(
        rng: &mut R,
        sizes: &[usize],
        n_items: usize,
        p_cover: f64,
    ) -> Self {
        let weights = (0..n_items).map(|_| rng.random::<f64>()).collect();
        let covers = sizes
            .iter()
            .map(|&n| {
                (0..n)
                    .map(|_| {
                        (0..n_items)
                            .filter(|_| rng.random::<f64>() < p_cover)
                            .collect()
                    })
                    .collect()
            })
            .collect();
        Self::new(covers, weights)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

impl ObjectiveOracle for WeightedCoverage {
    fn action_sizes(&self) -> &[usize] {
        &self.sizes
    }

    fn evaluate(&self, profile: &ActionProfile) -> f64 {
        let mut covered = vec![false; self.weights.len()];
        for a in profile {
            for &item in &self.covers[a.agent.0][a.index] {
                covered[item] = true;
            }
        }
        covered
            .iter()
            .zip(&self.weights)
            .filter(|(c, _)| **c)
            .map(|(_, w)| w)
            .sum()
    }
}

/// Sum of independent per-action values.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularOracle {
    sizes: Vec<usize>,
    values: Vec<Vec<f64>>,
}

impl ModularOracle {
    pub fn new(values: Vec<Vec<f64>>) -> Self {
        Self {
            sizes: values.iter().map(Vec::len).collect(),
            values,
        }
    }
}

impl ObjectiveOracle for ModularOracle {
    fn action_sizes(&self) -> &[usize] {
        &self.sizes
    }

    fn evaluate(&self, profile: &ActionProfile) -> f64 {
        profile
            .iter()
            .map(|a| self.values[a.agent.0][a.index])
            .sum()
    }
}

/// Oracle backed by an explicit value for every partial profile.
#[derive(Debug, Clone)]
pub struct TableOracle {
    sizes: Vec<usize>,
    space: ProfileSpace,
    values: Vec<f64>,
}

impl TableOracle {
    /// Tabulates `func` over every partial profile.
    pub fn from_fn<F: Fn(&ActionProfile) -> f64>(sizes: &[usize], func: F) -> Result<Self> {
        let space = ProfileSpace::new(sizes, super::CHECK_PROFILE_LIMIT)?;
        let values = (0..space.len()).map(|c| func(&space.decode(c))).collect();
        Ok(Self {
            sizes: sizes.to_vec(),
            space,
            values,
        })
    }

    fn code(&self, profile: &ActionProfile) -> usize {
        let mut code = 0;
        let mut stride = 1;
        for (agent, &size) in self.sizes.iter().enumerate() {
            if let Some(index) = profile.get(AgentId(agent)) {
                code += (index + 1) * stride;
            }
            stride *= size + 1;
        }
        code
    }
}

impl ObjectiveOracle for TableOracle {
    fn action_sizes(&self) -> &[usize] {
        &self.sizes
    }

    fn evaluate(&self, profile: &ActionProfile) -> f64 {
        debug_assert!(self.code(profile) < self.space.len());
        self.values[self.code(profile)]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::submodular::check_normalized_monotone_submodular;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_coverage_is_monotone_submodular() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let f = WeightedCoverage::random(&mut rng, &[3, 2, 4], 6, 0.4);
            let report = check_normalized_monotone_submodular(&f, &[3, 2, 4]).unwrap();
            assert!(report.passed(), "{report}");
        }
    }

    #[test]
    fn coverage_counts_overlap_once() {
        let f = WeightedCoverage::new(
            vec![vec![vec![0, 1]], vec![vec![1, 2]]],
            vec![1.0, 2.0, 4.0],
        );
        assert_eq!(f.evaluate(&ActionProfile::from_indices(&[0, 0])), 7.0);
        assert_eq!(f.evaluate(&ActionProfile::from_indices(&[0])), 3.0);
    }

    #[test]
    fn table_matches_source_function() {
        let f = WeightedCoverage::new(
            vec![vec![vec![0], vec![1]], vec![vec![0, 1], vec![]]],
            vec![0.25, 0.5],
        );
        let table = TableOracle::from_fn(&[2, 2], |p| f.evaluate(p)).unwrap();
        let space = ProfileSpace::new(&[2, 2], 100).unwrap();
        for c in 0..space.len() {
            let p = space.decode(c);
            assert_eq!(table.evaluate(&p), f.evaluate(&p));
        }
    }
}
