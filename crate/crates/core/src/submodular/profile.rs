use std::fmt;

use crate::error::{Error, Result};

/// Position of an agent in the fixed agent ordering of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(pub usize);

/// One action of one agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionId {
    pub agent: AgentId,
    pub index: usize,
}

impl ActionId {
    pub fn new(agent: usize, index: usize) -> Self {
        Self {
            agent: AgentId(agent),
            index,
        }
    }
}

impl fmt::Display for ActionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}:{}", self.agent.0, self.index)
    }
}

/// A set of actions holding at most one action per agent.
///
/// Entries are kept sorted by agent index, so two profiles holding the same
/// actions compare equal regardless of insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ActionProfile {
    entries: Vec<ActionId>,
}

impl ActionProfile {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Full profile where agent `i` plays `indices[i]`.
    pub fn from_indices(indices: &[usize]) -> Self {
        Self {
            entries: indices
                .iter()
                .enumerate()
                .map(|(agent, &index)| ActionId::new(agent, index))
                .collect(),
        }
    }

    /// Builds a profile from arbitrary actions, rejecting duplicate agents.
    pub fn from_actions<I: IntoIterator<Item = ActionId>>(actions: I) -> Result<Self> {
        let mut profile = Self::empty();
        for a in actions {
            profile.insert(a)?;
        }
        Ok(profile)
    }

    pub fn insert(&mut self, action: ActionId) -> Result<()> {
        match self
            .entries
            .binary_search_by_key(&action.agent, |e| e.agent)
        {
            Ok(_) => Err(Error::ProfileConflict {
                agent: action.agent.0,
            }),
            Err(pos) => {
                self.entries.insert(pos, action);
                Ok(())
            }
        }
    }

    /// Copy of `self` with `action` added.
    pub fn with(&self, action: ActionId) -> Result<Self> {
        let mut next = self.clone();
        next.insert(action)?;
        Ok(next)
    }

    pub fn get(&self, agent: AgentId) -> Option<usize> {
        self.entries
            .binary_search_by_key(&agent, |e| e.agent)
            .ok()
            .map(|pos| self.entries[pos].index)
    }

    pub fn binds(&self, agent: AgentId) -> bool {
        self.get(agent).is_some()
    }

    pub fn contains(&self, action: ActionId) -> bool {
        self.get(action.agent) == Some(action.index)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &ActionId> {
        self.entries.iter()
    }

    pub fn is_subset_of(&self, other: &ActionProfile) -> bool {
        self.entries.iter().all(|&a| other.contains(a))
    }

    /// Action indices for agents `0..n_agents`, if every one of them is bound.
    pub fn indices(&self, n_agents: usize) -> Option<Vec<usize>> {
        (0..n_agents).map(|i| self.get(AgentId(i))).collect()
    }

    /// Checks every entry against per-agent action-set sizes.
    pub fn validate(&self, action_sizes: &[usize]) -> Result<()> {
        for a in &self.entries {
            let size = action_sizes.get(a.agent.0).copied().unwrap_or(0);
            if a.index >= size {
                return Err(Error::ActionOutOfRange {
                    agent: a.agent.0,
                    index: a.index,
                    size,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for ActionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, a) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

impl<'a> IntoIterator for &'a ActionProfile {
    type Item = &'a ActionId;
    type IntoIter = std::slice::Iter<'a, ActionId>;

    fn into_iter(self) -> Self::IntoIter {
        self.entries.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insertion_order_does_not_matter() {
        let a = ActionProfile::from_actions([ActionId::new(2, 1), ActionId::new(0, 3)]).unwrap();
        let b = ActionProfile::from_actions([ActionId::new(0, 3), ActionId::new(2, 1)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.get(AgentId(0)), Some(3));
        assert_eq!(a.get(AgentId(1)), None);
    }

    #[test]
    fn duplicate_agent_is_rejected() {
        let mut p = ActionProfile::from_indices(&[0, 1]);
        let err = p.insert(ActionId::new(1, 0)).unwrap_err();
        assert_eq!(err, Error::ProfileConflict { agent: 1 });
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn subset_and_indices() {
        let small = ActionProfile::from_actions([ActionId::new(1, 2)]).unwrap();
        let big = ActionProfile::from_indices(&[0, 2]);
        assert!(small.is_subset_of(&big));
        assert!(!big.is_subset_of(&small));
        assert_eq!(big.indices(2), Some(vec![0, 2]));
        assert_eq!(small.indices(2), None);
    }

    #[test]
    fn validate_checks_ranges() {
        let p = ActionProfile::from_indices(&[1, 4]);
        assert!(p.validate(&[2, 5]).is_ok());
        assert!(matches!(
            p.validate(&[2, 4]),
            Err(Error::ActionOutOfRange { agent: 1, .. })
        ));
    }
}
