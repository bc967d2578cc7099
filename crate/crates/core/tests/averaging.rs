use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tailavg::{compute_weights, estimate, Method, Sample, ThresholdGrid};

fn pareto_draws(n: usize, alpha: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| (1.0 - rng.random::<f64>()).powf(-1.0 / alpha)).collect()
}

/// Softmax evaluated literally, with no stabilization.
fn naive_softmax(criteria: &[f64]) -> Vec<f64> {
    let e: Vec<f64> = criteria.iter().map(|c| (c / 2.0).exp()).collect();
    let t: f64 = e.iter().sum();
    e.iter().map(|x| x / t).collect()
}

#[test]
fn weights_match_literal_formula() {
    let crit = [-1.3, 0.2, 0.25, -4.0, 2.0 * 3f64.ln()];
    let pairs: Vec<(usize, f64)> = crit.iter().enumerate().map(|(i, &c)| (i + 2, c)).collect();
    let w = compute_weights(&pairs).unwrap();
    for (e, want) in w.entries.iter().zip(naive_softmax(&crit)) {
        assert!((e.weight - want).abs() < 1e-15);
    }
}

#[test]
fn pareto_sample_recovers_index() {
    let s = Sample::new(&pareto_draws(2500, 1.0, 42), false).unwrap();
    let run = estimate(&s, &ThresholdGrid::default(), Method::Pareto).unwrap();
    assert!((run.estimate.alpha_bar - 1.0).abs() < 0.2, "{}", run.estimate.alpha_bar);
    assert_eq!(run.fits.len(), 451);
    assert!(run.weights.skipped.is_empty());
}

#[test]
fn gpd_method_end_to_end() {
    let s = Sample::new(&pareto_draws(3000, 2.0, 7), false).unwrap();
    let grid = ThresholdGrid::new(s.len(), 100, 500, 20).unwrap();
    let run = estimate(&s, &grid, Method::Gpd).unwrap();
    assert_eq!(run.fits.len() + run.weights.skipped.len(), grid.len());
    assert!((run.estimate.alpha_bar - 2.0).abs() < 0.5, "{}", run.estimate.alpha_bar);
}

#[test]
fn scaling_sample_preserves_weights() {
    let s = Sample::new(&pareto_draws(2500, 1.5, 3), false).unwrap();
    let t = s.scaled(7.0).unwrap();
    let grid = ThresholdGrid::default();
    for method in [Method::Pareto, Method::Regression] {
        let a = estimate(&s, &grid, method).unwrap();
        let b = estimate(&t, &grid, method).unwrap();
        for (x, y) in a.weights.entries.iter().zip(&b.weights.entries) {
            assert_eq!(x.m, y.m);
            assert!((x.weight - y.weight).abs() < 1e-10, "{method}");
        }
        assert!((a.estimate.alpha_bar - b.estimate.alpha_bar).abs() < 1e-10);
        assert!((b.estimate.threshold_bar / a.estimate.threshold_bar - 7.0).abs() < 1e-12);
        assert_eq!(a.estimate.m_eff, b.estimate.m_eff);
    }
}

#[test]
fn deterministic_bits() {
    let s = Sample::new(&pareto_draws(2000, 1.2, 9), false).unwrap();
    let grid = ThresholdGrid::default();
    for method in [Method::Pareto, Method::Regression, Method::Gpd] {
        let a = estimate(&s, &grid, method).unwrap();
        let b = estimate(&s, &grid, method).unwrap();
        assert_eq!(a.estimate.alpha_bar.to_bits(), b.estimate.alpha_bar.to_bits());
        assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn weights_normalized_and_shift_invariant(
        crit in prop::collection::vec(-700.0f64..700.0, 1..60),
        shift in -50.0f64..50.0,
    ) {
        let pairs: Vec<(usize, f64)> = crit.iter().enumerate().map(|(i, &c)| (i + 2, c)).collect();
        let shifted: Vec<(usize, f64)> = pairs.iter().map(|&(m, c)| (m, c + shift)).collect();
        let a = compute_weights(&pairs).unwrap();
        let b = compute_weights(&shifted).unwrap();
        prop_assert!((a.weight_sum() - 1.0).abs() < 1e-12);
        for (x, y) in a.entries.iter().zip(&b.entries) {
            prop_assert!(x.weight >= 0.0 && x.weight <= 1.0);
            prop_assert!((x.weight - y.weight).abs() < 1e-12);
        }
    }

    #[test]
    fn alpha_bar_is_convex_combination(seed in any::<u64>(), alpha in 0.6f64..3.0, stride in 1usize..20) {
        let s = Sample::new(&pareto_draws(800, alpha, seed), false).unwrap();
        let grid = ThresholdGrid::new(s.len(), 20, 400, stride).unwrap();
        for method in [Method::Pareto, Method::Regression] {
            let run = estimate(&s, &grid, method).unwrap();
            let lo = run.fits.iter().map(|f| f.alpha_hat).fold(f64::INFINITY, f64::min);
            let hi = run.fits.iter().map(|f| f.alpha_hat).fold(f64::NEG_INFINITY, f64::max);
            let e = run.estimate;
            prop_assert!(e.alpha_bar >= lo * (1.0 - 1e-12) && e.alpha_bar <= hi * (1.0 + 1e-12));
            prop_assert_eq!(e.xi_bar, 1.0 / e.alpha_bar);
            prop_assert!(e.m_eff <= s.len());
            prop_assert_eq!(run.fits.len() + run.weights.skipped.len(), grid.len());
            prop_assert!(run.weights.entries.windows(2).all(|w| w[0].m < w[1].m));
        }
    }
}
