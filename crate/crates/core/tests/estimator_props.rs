mod common;

use proptest::prelude::*;
use umedian::{
    estimate_hampel, estimate_optimal, g, k0, m0, sample_poisson, HampelConfig, PoissonFamily,
};

/// Slack for comparing two solver outputs that should agree exactly.
const SOLVER_SLACK: f64 = 1e-9;

#[test]
fn g_is_strictly_increasing() {
    let fam = PoissonFamily::new();
    let grid: Vec<f64> = (0..1000).map(|i| 0.1 + 49.9 * i as f64 / 999.0).collect();
    let values: Vec<f64> = grid.iter().map(|&t| g(&fam, t).unwrap()).collect();
    for (i, w) in values.windows(2).enumerate() {
        assert!(w[0] < w[1], "g({}) = {} >= g({}) = {}", grid[i], w[0], grid[i + 1], w[1]);
    }
}

#[test]
fn consistent_at_large_n() {
    let fam = PoissonFamily::new();
    for (b, lambda) in [5.0, 10.0, 20.0].into_iter().enumerate() {
        let close = (0..100)
            .filter(|&r| {
                let x = sample_poisson(lambda, 100_000, common::seed(100 + b as u64, r)).unwrap();
                let t = estimate_optimal(&common::empirical(&x), &fam).unwrap().theta_hat;
                (t - lambda).abs() < 0.05
            })
            .count();
        assert!(close >= 95, "lambda {lambda}: {close}/100 within 0.05");
    }
}

fn sample_case() -> impl Strategy<Value = (f64, Vec<u64>)> {
    (
        prop::sample::select(vec![1.0, 5.0, 10.0, 20.0]),
        prop::sample::select(vec![20usize, 50, 200]),
        any::<u64>(),
    )
        .prop_map(|(lambda, n, seed)| (lambda, sample_poisson(lambda, n, seed).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hampel_below_m0_matches_optimal((_lambda, x) in sample_case()) {
        let fam = PoissonFamily::new();
        let data = common::empirical(&x);
        let opt = match estimate_optimal(&data, &fam) {
            Ok(r) => r,
            // An all-zero sample has no estimate; neither estimator applies.
            Err(_) => return Ok(()),
        };
        let m = 0.5 * m0(&fam, opt.theta_hat).unwrap();
        let hampel = estimate_hampel(&data, &fam, &HampelConfig::new(m).unwrap()).unwrap();
        prop_assert!(
            (hampel.theta_hat - opt.theta_hat).abs() < 1e-8,
            "hampel {} vs optimal {}", hampel.theta_hat, opt.theta_hat
        );
    }

    #[test]
    fn larger_data_never_lowers_the_estimate(
        (_lambda, x) in sample_case(),
        pick in any::<prop::sample::Index>(),
        bump in 1u64..50,
    ) {
        let fam = PoissonFamily::new();
        let Ok(base) = estimate_optimal(&common::empirical(&x), &fam) else { return Ok(()) };

        let mut appended = x.clone();
        appended.push(x.iter().max().unwrap() + bump);
        let t = estimate_optimal(&common::empirical(&appended), &fam).unwrap().theta_hat;
        prop_assert!(t >= base.theta_hat - SOLVER_SLACK, "append: {} < {}", t, base.theta_hat);

        let mut raised = x.clone();
        raised[pick.index(x.len())] += bump;
        let t = estimate_optimal(&common::empirical(&raised), &fam).unwrap().theta_hat;
        prop_assert!(t >= base.theta_hat - SOLVER_SLACK, "raise: {} < {}", t, base.theta_hat);
    }

    #[test]
    fn far_outlier_has_bounded_influence(
        lambda in prop::sample::select(vec![5.0, 10.0, 20.0]),
        n in prop::sample::select(vec![20usize, 50, 200]),
        seed in any::<u64>(),
    ) {
        let fam = PoissonFamily::new();
        let mut x = sample_poisson(lambda, n - 1, seed).unwrap();
        let near = (3.0 * lambda) as u64;
        x.push(near);
        let data = common::empirical(&x);
        prop_assume!(k0(&data).unwrap() < near);
        let before = estimate_optimal(&data, &fam).unwrap().theta_hat;
        *x.last_mut().unwrap() = (1e6 * lambda) as u64;
        let after = estimate_optimal(&common::empirical(&x), &fam).unwrap().theta_hat;
        prop_assert!((after - before).abs() < 1e-12, "{} vs {}", before, after);
    }
}
