use thiserror::Error;

/// Errors produced by the core library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("agent {agent} is already bound in the profile")]
    ProfileConflict { agent: usize },

    #[error("action {index} is out of range for agent {agent} ({size} actions)")]
    ActionOutOfRange {
        agent: usize,
        index: usize,
        size: usize,
    },

    #[error("enumeration of {count} profiles exceeds the limit of {limit}")]
    EnumerationTooLarge { count: u128, limit: u128 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("reward vector has length {got}, expected {expected}")]
    RewardLength { expected: usize, got: usize },

    #[error("reward vector has a non-finite entry at index {index}")]
    NonFiniteReward { index: usize },

    #[error("run horizon of {horizon} steps is exhausted")]
    HorizonExhausted { horizon: usize },

    #[error("executed profile does not match the selection made for this step")]
    ProfileMismatch,

    #[error("no selection is pending for this step")]
    NoPendingSelection,

    #[error("step {step} carries no optimum")]
    MissingOptimum { step: usize },

    #[error("environment: {0}")]
    Environment(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
