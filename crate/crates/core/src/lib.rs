//! Online submodular coordination with bounded tracking regret.
//!
//! Agents choose one action each per step without knowing the step's
//! objective in advance; the objective (normalized, non-decreasing,
//! submodular) is revealed only after the actions execute. The crate
//! provides:
//!
//! - [`submodular`]: action profiles, the objective interface, marginal gains
//!   and an exhaustive property checker.
//! - [`forecaster`]: a multi-rate fixed-share forecaster for tracking the best
//!   expert under full-information feedback.
//! - [`osg`]: the online sequential greedy coordinator built on one
//!   forecaster per agent.
//! - [`baselines`]: clairvoyant and lagged sequential greedy, brute-force
//!   optimum, uniform random.
//! - [`metrics`]: tracking regret, adversarial effect and the regret bound.
//! - [`sim`]: a planar multi-robot target-tracking environment.
//! - [`runner`]: plays any policy against an environment.

pub mod baselines;
pub mod error;
pub mod forecaster;
pub mod metrics;
pub mod osg;
pub mod runner;
pub mod seeding;
pub mod sim;
pub mod submodular;

pub use error::{Error, Result};
