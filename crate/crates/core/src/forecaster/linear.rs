//! Straight linear-domain transcription of the fixed-share forecaster.
//!
//! Shares no code with the log-domain implementation and is only usable for
//! short horizons, where the raw exponential weights still fit in an `f64`.
//! It serves as the reference the log-domain forecaster is checked against.

/// Reference forecaster storing raw (unnormalized) weights.
#[derive(Debug, Clone)]
pub struct LinearForecaster {
    n_actions: usize,
    gamma: f64,
    beta: f64,
    gamma_levels: Vec<f64>,
    z: Vec<f64>,
    w: Vec<Vec<f64>>,
}

impl LinearForecaster {
    pub fn new(horizon: usize, n_actions: usize) -> Self {
        assert!(horizon >= 1 && n_actions >= 1);
        let t = horizon as f64;
        let j_count = ((t.log2().ceil()) as usize).max(1);
        let gamma = ((j_count as f64).ln() / t).sqrt();
        let beta = 1.0 / t;
        let mut gamma_levels = Vec::new();
        for j in 1..=j_count {
            gamma_levels.push(((n_actions as f64 * t).ln() / 2f64.powi(j as i32 - 1)).sqrt());
        }
        Self {
            n_actions,
            gamma,
            beta,
            gamma_levels,
            z: vec![1.0; j_count],
            w: vec![vec![1.0; n_actions]; j_count],
        }
    }

    fn level_distributions(&self) -> (Vec<f64>, Vec<Vec<f64>>) {
        let z_sum: f64 = self.z.iter().sum();
        let q = self.z.iter().map(|z| z / z_sum).collect();
        let p_levels = self
            .w
            .iter()
            .map(|row| {
                let s: f64 = row.iter().sum();
                row.iter().map(|w| w / s).collect()
            })
            .collect();
        (q, p_levels)
    }

    pub fn distribution(&self) -> Vec<f64> {
        let (q, p_levels) = self.level_distributions();
        let mut p = vec![0.0; self.n_actions];
        for j in 0..q.len() {
            for i in 0..self.n_actions {
                p[i] += q[j] * p_levels[j][i];
            }
        }
        p
    }

    #[allow(clippy::needless_range_loop)]
    pub fn observe(&mut self, r: &[f64]) {
        assert_eq!(r.len(), self.n_actions);
        let (_, p_levels) = self.level_distributions();
        for j in 0..self.z.len() {
            let mut v = vec![0.0; self.n_actions];
            for i in 0..self.n_actions {
                v[i] = self.w[j][i] * (self.gamma_levels[j] * r[i]).exp();
            }
            let total: f64 = v.iter().sum();
            for i in 0..self.n_actions {
                self.w[j][i] = self.beta * total / self.n_actions as f64 + (1.0 - self.beta) * v[i];
            }
            let mut r_dot_p = 0.0;
            for i in 0..self.n_actions {
                r_dot_p += r[i] * p_levels[j][i];
            }
            self.z[j] *= (self.gamma * r_dot_p).exp();
        }
    }
}

/// Largest per-entry gap between the log-domain forecaster and the linear
/// reference over one reward stream, checked before every update and once
/// after the last.
pub fn max_divergence(horizon: usize, n_actions: usize, rewards: &[Vec<f64>]) -> f64 {
    let mut fast = super::Forecaster::new(horizon, n_actions).expect("valid arguments");
    let mut reference = LinearForecaster::new(horizon, n_actions);
    let gap = |a: &[f64], b: &[f64]| {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    };
    let mut worst = gap(&fast.distribution(), &reference.distribution());
    for r in rewards {
        fast.observe(r).expect("stream fits the horizon");
        reference.observe(r);
        worst = worst.max(gap(&fast.distribution(), &reference.distribution()));
    }
    worst
}
