use itertools::Itertools;
use knockout::stats::{
    ccdf_points, ecdf_points, fit_lognormal, fit_power_law, ks_statistic, ks_two_sample, ks_two_sample_with, likelihood_ratio_test, EmpiricalSample,
    FitParams, KsMethod, XminMode,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal};

fn sample(v: Vec<f64>) -> EmpiricalSample {
    EmpiricalSample::new(v, "s").unwrap()
}

/// p-value by listing every way to split the pooled values into groups of
/// the original sizes.
fn enumerated_p(a: &[f64], b: &[f64]) -> f64 {
    let d_obs = ks_statistic(&sample(a.to_vec()), &sample(b.to_vec())).unwrap();
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let mut hit = 0usize;
    let mut total = 0usize;
    for idx in (0..pooled.len()).combinations(a.len()) {
        let x: Vec<f64> = idx.iter().map(|&i| pooled[i]).collect();
        let y: Vec<f64> = (0..pooled.len()).filter(|i| !idx.contains(i)).map(|i| pooled[i]).collect();
        let d = ks_statistic(&sample(x), &sample(y)).unwrap();
        total += 1;
        if d >= d_obs - 1e-12 {
            hit += 1;
        }
    }
    hit as f64 / total as f64
}

#[test]
fn permutation_p_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (na, nb) in [(3usize, 3usize), (3, 5), (4, 4), (2, 6), (6, 5)] {
        for _ in 0..20 {
            // Coarse values so ties show up.
            let a: Vec<f64> = (0..na).map(|_| rng.gen_range(1..6) as f64).collect();
            let b: Vec<f64> = (0..nb).map(|_| rng.gen_range(1..6) as f64).collect();
            let r = ks_two_sample_with(&sample(a.clone()), &sample(b.clone()), KsMethod::ExactPermutation).unwrap();
            let e = enumerated_p(&a, &b);
            assert!((r.p_value - e).abs() < 1e-12, "{a:?} {b:?}: {} vs {e}", r.p_value);
        }
    }
}

#[test]
fn separated_cr_like_samples_are_rejected() {
    let a = sample((1..=16).map(|i| 0.001 * i as f64).collect());
    let b = sample((1..=16).map(|i| 0.5 + 0.001 * i as f64).collect());
    let r = ks_two_sample(&a, &b).unwrap();
    assert_eq!(r.d, 1.0);
    assert!(r.p_value < 1e-6);
}

#[test]
fn power_law_recovery() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let (alpha, xmin) = (2.5, 1.0);
    let values: Vec<f64> = (0..10_000).map(|_| xmin * (1.0 - rng.gen::<f64>()).powf(-1.0 / (alpha - 1.0))).collect();
    let fit = fit_power_law(&sample(values), XminMode::Fixed(1.0)).unwrap();
    let FitParams::PowerLaw { alpha: a, .. } = fit.params else { panic!() };
    assert!((a - 2.5).abs() < 0.05, "alpha {a}");
}

#[test]
fn power_law_scan_finds_tail_start() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    // Uniform body on [0.1, 1) below a power-law tail from 1.
    let mut values: Vec<f64> = (0..2_000).map(|_| rng.gen_range(0.1..1.0)).collect();
    values.extend((0..2_000).map(|_| (1.0 - rng.gen::<f64>()).powf(-1.0 / 1.5)));
    let fit = fit_power_law(&sample(values), XminMode::Scan).unwrap();
    let FitParams::PowerLaw { alpha, xmin } = fit.params else { panic!() };
    assert!((0.8..2.0).contains(&xmin), "xmin {xmin} alpha {alpha}");
    assert!((alpha - 2.5).abs() < 0.15, "alpha {alpha}");
}

fn tail_log_likelihood(values: &[f64], xmin: f64, alpha: f64) -> f64 {
    values
        .iter()
        .filter(|&&x| x >= xmin)
        .map(|&x| ((alpha - 1.0) / xmin).ln() - alpha * (x / xmin).ln())
        .sum()
}

#[test]
fn power_law_mle_is_likelihood_maximum() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    for _ in 0..100 {
        let m = rng.gen_range(5..200);
        let true_alpha = rng.gen_range(1.5..4.0);
        let values: Vec<f64> = (0..m).map(|_| 0.01 * (1.0 - rng.gen::<f64>()).powf(-1.0 / (true_alpha - 1.0))).collect();
        let xmin = values.iter().copied().fold(f64::INFINITY, f64::min);
        let fit = fit_power_law(&sample(values.clone()), XminMode::SampleMin).unwrap();
        let FitParams::PowerLaw { alpha, .. } = fit.params else { panic!() };

        // Grid, then golden-section refinement on the concave log-likelihood.
        let grid_best = (1..=4000)
            .map(|k| 1.0 + k as f64 * 0.005)
            .max_by(|&a, &b| tail_log_likelihood(&values, xmin, a).total_cmp(&tail_log_likelihood(&values, xmin, b)))
            .unwrap();
        let (mut lo, mut hi) = (grid_best - 0.005, grid_best + 0.005);
        let phi = (5f64.sqrt() - 1.0) / 2.0;
        while hi - lo > 1e-10 {
            let c = hi - phi * (hi - lo);
            let d = lo + phi * (hi - lo);
            if tail_log_likelihood(&values, xmin, c) > tail_log_likelihood(&values, xmin, d) {
                hi = d;
            } else {
                lo = c;
            }
        }
        let oracle = (lo + hi) / 2.0;
        assert!((alpha - oracle).abs() < 1e-6, "{alpha} vs {oracle}");
        assert!((fit.log_likelihood - tail_log_likelihood(&values, xmin, alpha)).abs() < 1e-8 * fit.log_likelihood.abs().max(1.0));
    }
}

#[test]
fn lognormal_recovery_and_residuals() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let dist = LogNormal::new(-4.0717, 1.2611).unwrap();
    let values: Vec<f64> = (0..10_000).map(|_| dist.sample(&mut rng)).collect();
    let fit = fit_lognormal(&sample(values.clone())).unwrap();
    let FitParams::LogNormal { mu, sigma } = fit.params else { panic!() };
    assert!((mu + 4.0717).abs() < 0.05);
    assert!((sigma - 1.2611).abs() < 0.05);
    let resid: f64 = values.iter().map(|x| x.ln() - mu).sum::<f64>() / values.len() as f64;
    assert!(resid.abs() < 1e-12);
}

#[test]
fn lognormal_data_prefers_lognormal() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let dist = LogNormal::new(-4.0717, 1.2611).unwrap();
    let s = sample((0..2_000).map(|_| dist.sample(&mut rng)).collect());
    let ln = fit_lognormal(&s).unwrap();
    let pl = fit_power_law(&s, XminMode::SampleMin).unwrap();
    let r = likelihood_ratio_test(&s, &ln, &pl).unwrap();
    assert!(r.r > 0.0);
    assert_eq!(r.favored(), "log-normal");
    let flipped = likelihood_ratio_test(&s, &pl, &ln).unwrap();
    assert!((flipped.r + r.r).abs() < 1e-9);
    assert!((flipped.p_value - r.p_value).abs() < 1e-12);
}

proptest! {
    #[test]
    fn ks_symmetric_and_rank_invariant(
        a in prop::collection::vec(0.001f64..1.0, 1..20),
        b in prop::collection::vec(0.001f64..1.0, 1..20),
    ) {
        let (sa, sb) = (sample(a.clone()), sample(b.clone()));
        let ab = ks_two_sample(&sa, &sb).unwrap();
        let ba = ks_two_sample(&sb, &sa).unwrap();
        prop_assert_eq!(ab.d, ba.d);
        prop_assert!((ab.p_value - ba.p_value).abs() < 1e-12);
        let ta = sample(a.iter().map(|x| x.ln() * 3.0 + 7.0).map(f64::exp).collect());
        let tb = sample(b.iter().map(|x| x.ln() * 3.0 + 7.0).map(f64::exp).collect());
        prop_assert_eq!(ks_statistic(&ta, &tb).unwrap(), ab.d);
        prop_assert!((0.0..=1.0).contains(&ab.p_value));
    }

    #[test]
    fn ecdf_shapes(v in prop::collection::vec(0.0f64..10.0, 1..40)) {
        let s = sample(v);
        let f = ecdf_points(&s).unwrap();
        let c = ccdf_points(&s).unwrap();
        prop_assert!(f.points.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1));
        prop_assert!(c.points.windows(2).all(|w| w[0].1 > w[1].1));
        prop_assert_eq!(f.points.last().unwrap().1, 1.0);
        for (x, y) in f.points.iter().zip(&c.points) {
            prop_assert_eq!(x.0, y.0);
            prop_assert!((x.1 + y.1 - 1.0).abs() < 1e-12);
        }
    }
}
