//! Multi-rate fixed-share forecaster for tracking the best expert.
//!
//! The forecaster runs `J = ⌈log₂ T⌉` fixed-share sub-forecasters, each with
//! its own learning rate `γ_j = √(ln(|V|·T) / 2^(j−1))`, and aggregates them
//! with an exponential-weights meta layer of rate `γ = √(ln J / T)`. Every
//! sub-forecaster mixes a fraction `β = 1/T` of its total weight uniformly
//! over the actions after each update, which is what lets it follow a best
//! action that changes over time.
//!
//! Weights are stored as logarithms. After each update every row, and the
//! meta weights, are shifted so that their maximum is zero. The update is
//! positively homogeneous in each row and the output distribution depends on
//! ratios only, so the shift leaves every distribution unchanged while
//! keeping the state finite for arbitrarily long horizons.

pub mod linear;

use rand::Rng;

use crate::error::{Error, Result};

/// `ln(e^a + e^b)` without overflow; either argument may be `-∞`.
fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

fn shift_to_zero_max(xs: &mut [f64]) {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for x in xs.iter_mut() {
        *x -= max;
    }
}

/// Normalizes log-weights into a probability vector.
fn softmax_into(logs: &[f64], out: &mut Vec<f64>) {
    let lse = log_sum_exp(logs);
    out.clear();
    out.extend(logs.iter().map(|x| (x - lse).exp()));
}

/// Number of sub-forecasters for a horizon: `⌈log₂ T⌉`, at least 1.
pub fn level_count(horizon: usize) -> usize {
    let mut levels = 0;
    while (1u128 << levels) < horizon as u128 {
        levels += 1;
    }
    levels.max(1)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ForecasterParams {
    pub horizon: usize,
    pub n_actions: usize,
    /// `J`, the number of sub-forecasters.
    pub levels: usize,
    /// Meta learning rate `γ`.
    pub meta_rate: f64,
    /// Fixed-share mixing fraction `β`.
    pub share: f64,
    /// Per-level learning rates `γ_j`, `j = 1..J`.
    pub level_rates: Vec<f64>,
}

impl ForecasterParams {
    pub fn new(horizon: usize, n_actions: usize) -> Result<Self> {
        if horizon < 1 {
            return Err(Error::InvalidArgument(format!(
                "horizon must be at least 1, got {horizon}"
            )));
        }
        if n_actions < 1 {
            return Err(Error::InvalidArgument(format!(
                "action set must be non-empty, got {n_actions}"
            )));
        }
        let t = horizon as f64;
        let levels = level_count(horizon);
        let log_vt = (n_actions as f64 * t).ln();
        let level_rates = (0..levels)
            .map(|j| (log_vt / 2f64.powi(j as i32)).sqrt())
            .collect();
        Ok(Self {
            horizon,
            n_actions,
            levels,
            meta_rate: ((levels as f64).ln() / t).sqrt(),
            share: 1.0 / t,
            level_rates,
        })
    }
}

/// Forecaster state: log meta weights and log action weights per level.
#[derive(Debug, Clone, PartialEq)]
pub struct Forecaster {
    params: ForecasterParams,
    log_meta: Vec<f64>,
    /// Row-major `levels × n_actions`.
    log_weights: Vec<f64>,
    /// 1-based index of the next step to be played.
    step: usize,
}

impl Forecaster {
    pub fn new(horizon: usize, n_actions: usize) -> Result<Self> {
        let params = ForecasterParams::new(horizon, n_actions)?;
        Ok(Self {
            log_meta: vec![0.0; params.levels],
            log_weights: vec![0.0; params.levels * n_actions],
            step: 1,
            params,
        })
    }

    pub fn params(&self) -> &ForecasterParams {
        &self.params
    }

    pub fn n_actions(&self) -> usize {
        self.params.n_actions
    }

    /// 1-based step whose distribution [`Forecaster::distribution`] returns.
    pub fn step(&self) -> usize {
        self.step
    }

    pub fn log_meta(&self) -> &[f64] {
        &self.log_meta
    }

    pub fn log_weights(&self, level: usize) -> &[f64] {
        let n = self.params.n_actions;
        &self.log_weights[level * n..(level + 1) * n]
    }

    /// Adds `meta_shift` to every meta log-weight and `row_shifts[j]` to
    /// every entry of row `j`. The distribution is invariant under this.
    pub fn shift_log_weights(&mut self, meta_shift: f64, row_shifts: &[f64]) {
        let n = self.params.n_actions;
        for z in &mut self.log_meta {
            *z += meta_shift;
        }
        for (row, shift) in self.log_weights.chunks_mut(n).zip(row_shifts) {
            for w in row {
                *w += shift;
            }
        }
    }

    /// Mixture `Σ_j q_j · p^(j)` of the per-level distributions.
    pub fn distribution(&self) -> Vec<f64> {
        let n = self.params.n_actions;
        let mut meta = Vec::with_capacity(self.params.levels);
        softmax_into(&self.log_meta, &mut meta);
        let mut level = Vec::with_capacity(n);
        let mut p = vec![0.0; n];
        for (row, q) in self.log_weights.chunks(n).zip(&meta) {
            softmax_into(row, &mut level);
            for (pi, li) in p.iter_mut().zip(&level) {
                *pi += q * li;
            }
        }
        p
    }

    /// Full-information update with one reward per action.
    pub fn observe(&mut self, rewards: &[f64]) -> Result<()> {
        let n = self.params.n_actions;
        if rewards.len() != n {
            return Err(Error::RewardLength {
                expected: n,
                got: rewards.len(),
            });
        }
        if let Some(index) = rewards.iter().position(|r| !r.is_finite()) {
            return Err(Error::NonFiniteReward { index });
        }
        if self.step > self.params.horizon {
            return Err(Error::HorizonExhausted {
                horizon: self.params.horizon,
            });
        }

        let ln_n = (n as f64).ln();
        let ln_share = self.params.share.ln();
        let ln_keep = (1.0 - self.params.share).ln();
        let mut level_p = Vec::with_capacity(n);

        for ((row, &rate), log_z) in self
            .log_weights
            .chunks_mut(n)
            .zip(&self.params.level_rates)
            .zip(self.log_meta.iter_mut())
        {
            softmax_into(row, &mut level_p);
            let expected: f64 = level_p.iter().zip(rewards).map(|(p, r)| p * r).sum();

            for (w, r) in row.iter_mut().zip(rewards) {
                *w += rate * r;
            }
            let uniform_part = ln_share + log_sum_exp(row) - ln_n;
            for w in row.iter_mut() {
                *w = log_add_exp(uniform_part, ln_keep + *w);
            }
            shift_to_zero_max(row);

            *log_z += self.params.meta_rate * expected;
        }
        shift_to_zero_max(&mut self.log_meta);
        self.step += 1;
        Ok(())
    }
}

/// Inverse-CDF draw: the first index whose cumulative mass exceeds `u`.
///
/// `u` is expected in `[0, 1)`. A draw landing exactly on a cumulative edge
/// goes to the next index, so zero-mass actions are never returned.
pub fn sample_with_uniform(p: &[f64], u: f64) -> usize {
    let mut cumulative = 0.0;
    for (i, &pi) in p.iter().enumerate() {
        cumulative += pi;
        if u < cumulative {
            return i;
        }
    }
    // Rounding left `u` beyond the accumulated total; fall back to the last
    // action carrying mass.
    p.iter().rposition(|&pi| pi > 0.0).unwrap_or(p.len() - 1)
}

/// Draws one action index from `p` using a single uniform variate.
pub fn sample<R: Rng + ?Sized>(p: &[f64], rng: &mut R) -> usize {
    sample_with_uniform(p, rng.random::<f64>())
}
