use osg_core::forecaster::linear::{max_divergence, LinearForecaster};
use osg_core::forecaster::{sample, Forecaster};
use osg_core::seeding;
use proptest::prelude::*;

fn reward_stream(max_len: usize, n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(0.0..1.0f64, n), 0..=max_len)
}

fn assert_simplex(p: &[f64]) {
    let total: f64 = p.iter().sum();
    assert!((total - 1.0).abs() < 1e-12, "sum {total}");
    assert!(p.iter().all(|&x| x >= 0.0 && x.is_finite()), "{p:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distribution_stays_on_simplex(
        (horizon, n, rewards) in (1usize..40, 1usize..6).prop_flat_map(|(t, n)| {
            (Just(t), Just(n), reward_stream(t, n))
        })
    ) {
        let mut f = Forecaster::new(horizon, n).unwrap();
        assert_simplex(&f.distribution());
        for r in &rewards {
            f.observe(r).unwrap();
            assert_simplex(&f.distribution());
        }
    }

    #[test]
    fn log_and_linear_agree(
        (horizon, n, rewards) in (1usize..=32, 2usize..=5).prop_flat_map(|(t, n)| {
            (Just(t), Just(n), reward_stream(t, n))
        })
    ) {
        prop_assert!(max_divergence(horizon, n, &rewards) <= 1e-9);
    }

    #[test]
    fn shifting_log_weights_keeps_distribution(
        rewards in reward_stream(10, 3),
        meta_shift in -50.0..50.0f64,
        row_shifts in prop::collection::vec(-50.0..50.0f64, 4),
    ) {
        let mut f = Forecaster::new(10, 3).unwrap();
        for r in &rewards {
            f.observe(r).unwrap();
        }
        let before = f.distribution();
        let mut shifted = f.clone();
        shifted.shift_log_weights(meta_shift, &row_shifts);
        for (a, b) in before.iter().zip(shifted.distribution()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        // Updates from the shifted state land on the same distribution.
        if shifted.step() <= 10 {
            f.observe(&[0.1, 0.9, 0.5]).unwrap();
            shifted.observe(&[0.1, 0.9, 0.5]).unwrap();
            for (a, b) in f.distribution().iter().zip(shifted.distribution()) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn long_horizon_large_rewards_stay_finite() {
    let horizon = 100_000;
    let mut f = Forecaster::new(horizon, 4).unwrap();
    for t in 0..horizon {
        let best = (t / 25_000) % 4;
        let r: Vec<f64> = (0..4).map(|a| if a == best { 1e3 } else { 0.0 }).collect();
        f.observe(&r).unwrap();
    }
    let p = f.distribution();
    assert_simplex(&p);
    assert!(f.log_meta().iter().all(|z| z.is_finite() && *z <= 0.0));
    for level in 0..f.params().levels {
        assert!(f
            .log_weights(level)
            .iter()
            .all(|w| w.is_finite() && *w <= 0.0));
    }
    assert!(p[3] > 0.9, "{p:?}");
}

#[test]
fn linear_reference_overflows_where_log_domain_does_not() {
    let mut reference = LinearForecaster::new(2000, 2);
    let mut f = Forecaster::new(2000, 2).unwrap();
    for _ in 0..2000 {
        reference.observe(&[500.0, 0.0]);
        f.observe(&[500.0, 0.0]).unwrap();
    }
    assert!(reference.distribution().iter().any(|x| !x.is_finite()));
    assert_simplex(&f.distribution());
}

#[test]
fn same_seed_same_samples() {
    let draw = |seed| {
        let mut f = Forecaster::new(200, 5).unwrap();
        let mut rng = seeding::agent_stream(seed, 2);
        (0..200)
            .map(|t| {
                let a = sample(&f.distribution(), &mut rng);
                let r: Vec<f64> = (0..5).map(|i| ((i * 7 + t) % 5) as f64 / 4.0).collect();
                f.observe(&r).unwrap();
                a
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(draw(9), draw(9));
    assert_ne!(draw(9), draw(10));
}

#[test]
fn regret_against_static_best_shrinks_with_horizon() {
    let rewards = [0.2, 0.6, 0.5];
    let per_step_regret = |horizon: usize| {
        let mut f = Forecaster::new(horizon, 3).unwrap();
        let mut total = 0.0;
        for _ in 0..horizon {
            let p = f.distribution();
            total += 0.6 - p.iter().zip(&rewards).map(|(a, b)| a * b).sum::<f64>();
            f.observe(&rewards).unwrap();
        }
        total / horizon as f64
    };
    let short = per_step_regret(100);
    let long = per_step_regret(1600);
    assert!(long < 0.5 * short, "{long} vs {short}");
}

#[test]
fn tracks_a_switching_best_action() {
    let horizon = 4000;
    let mut f = Forecaster::new(horizon, 3).unwrap();
    let mut late_mass = Vec::new();
    for t in 0..horizon {
        let best = if t < horizon / 2 { 0 } else { 2 };
        let r: Vec<f64> = (0..3).map(|a| if a == best { 1.0 } else { 0.0 }).collect();
        f.observe(&r).unwrap();
        if t == horizon / 2 - 1 || t == horizon - 1 {
            late_mass.push(f.distribution()[best]);
        }
    }
    assert!(late_mass.iter().all(|&m| m > 0.9), "{late_mass:?}");
}
