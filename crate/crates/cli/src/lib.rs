//! Experiment driver for online submodular coordination: scenario files,
//! seed sweeps, CSV traces, JSON summaries and property checks.

pub mod check;
pub mod commands;
pub mod config;
pub mod run;

pub use config::{RewardScale, ScenarioConfig, ScenarioKind};
