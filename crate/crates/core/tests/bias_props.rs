use umedian::bias::{asymptotic_bias_with, ges_numeric_at, ges_numeric_with, GES_STEP};
use umedian::{
    asymptotic_bias, estimate_hampel, ges_numeric, m0, max_bias, ContaminationPoint, HampelConfig, PoissonFamily,
};

#[test]
fn ges_is_stable_in_the_step() {
    let fam = PoissonFamily::new();
    for lambda in [5.0, 10.0, 20.0] {
        let coarse = ges_numeric_at(&fam, lambda, GES_STEP).unwrap();
        let fine = ges_numeric_at(&fam, lambda, 1e-5).unwrap();
        assert!((coarse / fine - 1.0).abs() < 1e-3, "lambda {lambda}: {coarse} vs {fine}");
    }
}

#[test]
fn ges_bounds_small_contamination_bias() {
    let fam = PoissonFamily::new();
    for lambda in [5.0, 10.0, 20.0] {
        let ges = ges_numeric(&fam, lambda).unwrap();
        let slope = max_bias(&fam, lambda, 0.01).unwrap().bias / 0.01;
        assert!(ges >= 0.9 * slope, "lambda {lambda}: GES {ges}, bias slope {slope}");
    }
}

#[test]
fn optimal_ges_beats_loosely_truncated_hampel() {
    let fam = PoissonFamily::new();
    for lambda in [5.0, 10.0] {
        let optimal = ges_numeric(&fam, lambda).unwrap();
        let m = 10.0 * m0(&fam, lambda).unwrap();
        let cfg = HampelConfig::new(m).unwrap();
        let hampel = ges_numeric_with(&fam, lambda, GES_STEP, |d| Ok(estimate_hampel(d, &fam, &cfg)?.theta_hat)).unwrap();
        assert!(optimal <= hampel, "lambda {lambda}: optimal {optimal} vs hampel {hampel}");
    }
}

#[test]
fn bias_grows_with_contamination() {
    let fam = PoissonFamily::new();
    for lambda in [5.0, 10.0, 20.0] {
        let b: Vec<f64> = [0.05, 0.1, 0.2]
            .iter()
            .map(|&e| asymptotic_bias(&fam, lambda, e, ContaminationPoint::AtInfinity).unwrap().bias)
            .collect();
        assert!(b[0] < b[1] && b[1] < b[2], "lambda {lambda}: {b:?}");
    }
}

#[test]
fn bias_stays_finite_below_one_half() {
    let fam = PoissonFamily::new();
    for eps in [0.3, 0.45, 0.49] {
        let mb = max_bias(&fam, 5.0, eps).unwrap();
        assert!(mb.bias.is_finite() && mb.bias > 0.0, "eps {eps}: {}", mb.bias);
    }
}

#[test]
fn worst_contamination_is_at_an_extreme() {
    let fam = PoissonFamily::new();
    for eps in [0.1, 0.2] {
        for lambda in [5.0, 10.0, 20.0] {
            let mb = max_bias(&fam, lambda, eps).unwrap();
            let at_zero = mb.records.iter().find(|r| r.x0 == ContaminationPoint::At(0)).unwrap().bias;
            let extreme = at_zero.max(mb.bias_at_infinity);
            assert!(
                (mb.bias - extreme).abs() < 1e-9,
                "eps {eps} lambda {lambda}: max {} at {}, extremes {at_zero} / {}",
                mb.bias,
                mb.argmax,
                mb.bias_at_infinity
            );
            assert!(matches!(mb.argmax, ContaminationPoint::AtInfinity | ContaminationPoint::At(0)));
        }
    }
}

#[test]
fn zero_contamination_gives_zero_bias() {
    let fam = PoissonFamily::new();
    for lambda in [5.0, 10.0, 20.0] {
        assert!(max_bias(&fam, lambda, 0.0).unwrap().bias < 1e-8);
    }
}

#[test]
fn generic_functional_hook() {
    // The mean moves by eps * (x0 - theta).
    let fam = PoissonFamily::new();
    let r = asymptotic_bias_with(&fam, 5.0, 0.1, ContaminationPoint::At(100), |d| {
        Ok(umedian::IntegerDistribution::mean(d))
    })
    .unwrap();
    assert!((r.bias - 9.5).abs() < 1e-9, "{}", r.bias);
}
