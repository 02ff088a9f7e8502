//! Acceptance run: one PASS/FAIL line per criterion with the measured values.
//! Exits with status 1 if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use umedian::families::unit_uniform;
use umedian::montecarlo::{finite_sample_efficiency, max_mse_table, run, run_with_threads, SimulationResult};
use umedian::report::{simulation_csv, simulation_json};
use umedian::{
    asymptotic_efficiency, contaminate, estimate_hampel, estimate_optimal, m0, max_bias, sample_poisson,
    sigma2_umed, umed, umed_limit_law, umed_oracle, ContaminationPoint, FinitePmf, HampelConfig,
    IntegerDistribution, PoissonDistribution, PoissonFamily, SimulationConfig,
};

struct Outcome {
    pass: bool,
    detail: String,
}

type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn max_bias_table() -> Outcome {
    const TOL: f64 = 0.01;
    let expected = [
        (0.1, 5.0, 0.329),
        (0.1, 10.0, 0.511),
        (0.1, 20.0, 0.823),
        (0.2, 5.0, 0.805),
        (0.2, 10.0, 1.052),
        (0.2, 20.0, 1.569),
    ];
    let fam = PoissonFamily::new();
    let mut pass = true;
    let mut parts = Vec::new();
    for (eps, lambda, want) in expected {
        let got = max_bias(&fam, lambda, eps).unwrap().bias;
        let ok = (got - want).abs() <= TOL;
        pass &= ok;
        parts.push(format!("eps={eps} lambda={lambda}: {got:.4} vs {want}{}", if ok { "" } else { " (off)" }));
    }
    outcome(pass, format!("tol ±{TOL}; {}", parts.join("; ")))
}

fn asymptotic_efficiencies() -> Outcome {
    const TOL: f64 = 0.02;
    let fam = PoissonFamily::new();
    let mut pass = true;
    let mut parts = Vec::new();
    for (lambda, want) in [(5.0, 0.72), (10.0, 0.69), (20.0, 0.67)] {
        let got = asymptotic_efficiency(&fam, lambda).unwrap();
        pass &= (got - want).abs() <= TOL;
        parts.push(format!("lambda={lambda}: {got:.4} vs {want}"));
    }
    outcome(pass, format!("tol ±{TOL}; {}", parts.join("; ")))
}

fn finite_efficiencies(result: &SimulationResult) -> Outcome {
    const TOL: f64 = 0.06;
    let expected = [
        (20, 5.0, 0.80),
        (20, 10.0, 0.64),
        (20, 20.0, 0.56),
        (50, 5.0, 0.72),
        (50, 10.0, 0.71),
        (50, 20.0, 0.66),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (n, lambda, want) in expected {
        let got = finite_sample_efficiency(result, n, lambda).unwrap();
        let ok = (got - want).abs() <= TOL;
        pass &= ok;
        parts.push(format!("n={n} lambda={lambda}: {got:.3} vs {want}{}", if ok { "" } else { " (off)" }));
    }
    outcome(pass, format!("tol ±{TOL}, 500 reps; {}", parts.join("; ")))
}

fn max_mse(result: &SimulationResult) -> Outcome {
    const REL_TOL: f64 = 0.20;
    let expected = [
        (20, 0.1, [0.67, 1.14, 2.53]),
        (20, 0.2, [1.22, 2.26, 4.63]),
        (50, 0.1, [0.30, 0.68, 1.40]),
        (50, 0.2, [0.84, 1.61, 3.36]),
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for (n, eps, wants) in expected {
        let rows = max_mse_table(result, n, eps).unwrap();
        for (row, want) in rows.iter().zip(wants) {
            let ok = (row.max_mse / want - 1.0).abs() <= REL_TOL;
            pass &= ok;
            parts.push(format!(
                "n={n} eps={eps} lambda={}: {:.3} vs {want}{}",
                row.lambda,
                row.max_mse,
                if ok { "" } else { " (off)" }
            ));
        }
    }
    outcome(pass, format!("tol ±20%, 500 reps; {}", parts.join("; ")))
}

fn hampel_equivalence() -> Outcome {
    let fam = PoissonFamily::new();
    let lambdas = [1.0, 5.0, 10.0, 20.0];
    let sizes = [20usize, 50, 200];
    let mut worst: f64 = 0.0;
    let mut failures = 0;
    for case in 0..400 {
        let lambda = lambdas[case % 4];
        let n = sizes[(case / 4) % 3];
        let x = sample_poisson(lambda, n, common::seed(500, case)).unwrap();
        let data = common::empirical(&x);
        let diff = estimate_optimal(&data, &fam).and_then(|opt| {
            let m = 0.5 * m0(&fam, opt.theta_hat)?;
            let h = estimate_hampel(&data, &fam, &HampelConfig::new(m)?)?;
            Ok((h.theta_hat - opt.theta_hat).abs())
        });
        match diff {
            Ok(d) => worst = worst.max(d),
            Err(_) => failures += 1,
        }
    }
    outcome(
        worst < 1e-8 && failures == 0,
        format!("400 samples; max |hampel - optimal| = {worst:.2e} (tol 1e-8), errors {failures}"),
    )
}

fn umed_variance() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (b, lambda) in [5.0, 10.0].into_iter().enumerate() {
        let errs = common::scaled_umed_errors(lambda, 10_000, 2000, 600 + b as u64);
        let got = common::variance(&errs);
        let want = sigma2_umed(&PoissonDistribution::new(lambda).unwrap()).unwrap();
        let rel = got / want - 1.0;
        pass &= rel.abs() <= 0.10;
        parts.push(format!("lambda={lambda}: n*Var {got:.4} vs {want:.4} ({:+.1}%)", 100.0 * rel));
    }
    outcome(pass, format!("tol ±10%, n=1e4, 2000 reps; {}", parts.join("; ")))
}

fn boundary_law() -> Outcome {
    let lambda = common::boundary_rate();
    let law = umed_limit_law(&PoissonDistribution::new(lambda).unwrap()).unwrap();
    let errs = common::scaled_umed_errors(lambda, 10_000, 2000, 700);
    let d = common::kolmogorov_distance(&errs, |t| law.cdf(t));
    outcome(
        law.is_boundary() && d < 0.05,
        format!("lambda*={lambda:.12}; Kolmogorov distance {d:.4} (tol 0.05), n=1e4, 2000 reps"),
    )
}

fn consistency() -> Outcome {
    let fam = PoissonFamily::new();
    let mut pass = true;
    let mut parts = Vec::new();
    for (b, lambda) in [5.0, 10.0, 20.0].into_iter().enumerate() {
        let close = (0..100)
            .filter(|&r| {
                let x = sample_poisson(lambda, 100_000, common::seed(800 + b as u64, r)).unwrap();
                estimate_optimal(&common::empirical(&x), &fam)
                    .map(|e| (e.theta_hat - lambda).abs() < 0.05)
                    .unwrap_or(false)
            })
            .count();
        pass &= close >= 95;
        parts.push(format!("lambda={lambda}: {close}/100"));
    }
    outcome(pass, format!("|theta_hat - lambda| < 0.05 at n=1e5 (need >= 95/100); {}", parts.join("; ")))
}

fn random_distribution(i: usize, rng: &mut ChaCha8Rng) -> Box<dyn IntegerDistribution> {
    let mut u = || unit_uniform(rng);
    match i % 3 {
        0 => {
            let len = 1 + (u() * 25.0) as usize;
            let mut w: Vec<f64> = (0..len).map(|_| if u() < 0.2 { 0.0 } else { u() }).collect();
            w[(u() * len as f64) as usize] += 0.1;
            Box::new(FinitePmf::from_weights(&w).unwrap())
        }
        1 => Box::new(PoissonDistribution::new(0.01 + 100.0 * u() * u()).unwrap()),
        _ => {
            let base = PoissonDistribution::new(0.1 + 40.0 * u()).unwrap();
            let eps = 0.49 * u();
            let point = if u() < 0.25 {
                ContaminationPoint::AtInfinity
            } else {
                ContaminationPoint::At((u() * 120.0) as u64)
            };
            Box::new(contaminate(base, eps, point).unwrap())
        }
    }
}

fn formula_vs_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(900);
    let mut worst: f64 = 0.0;
    for i in 0..200 {
        let d = random_distribution(i, &mut rng);
        worst = worst.max((umed(&*d).unwrap().value - umed_oracle(&*d)).abs());
    }
    outcome(worst < 1e-9, format!("200 distributions; max |formula - oracle| = {worst:.2e} (tol 1e-9)"))
}

fn determinism() -> Outcome {
    let cfg = SimulationConfig {
        replications: 50,
        seed: 77,
        ..SimulationConfig::reference_study()
    };
    let render = |r: &SimulationResult| (simulation_json(r), simulation_csv(r));
    let first = render(&run_with_threads(&cfg, 1).unwrap());
    let second = render(&run_with_threads(&cfg, 8).unwrap());
    let third = render(&run(&cfg).unwrap());
    let same = first == second && first == third;
    outcome(
        same,
        format!(
            "reference grid at 50 reps, 1 vs 8 threads vs default pool: {} bytes JSON, identical = {same}",
            first.0.len()
        ),
    )
}

fn main() -> ExitCode {
    let start = Instant::now();
    eprintln!("running the reference finite-sample study (500 reps, seed 0) ...");
    let study = run(&SimulationConfig::reference_study()).expect("simulation runs");
    eprintln!("finite-sample design done in {:.1}s", start.elapsed().as_secs_f64());

    let criteria: Vec<(&str, Check)> = vec![
        ("max asymptotic bias table", Box::new(max_bias_table)),
        ("asymptotic efficiency table", Box::new(asymptotic_efficiencies)),
        ("finite-sample efficiency table", Box::new(|| finite_efficiencies(&study))),
        ("maximum MSE table", Box::new(|| max_mse(&study))),
        ("Hampel equivalence below m0", Box::new(hampel_equivalence)),
        ("umed variance oracle", Box::new(umed_variance)),
        ("boundary limit law", Box::new(boundary_law)),
        ("consistency", Box::new(consistency)),
        ("umed formula vs oracle", Box::new(formula_vs_oracle)),
        ("determinism", Box::new(determinism)),
    ];

    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "C{:<2} {} {name}: {} [{:.1}s]",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed [{:.1}s]",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
