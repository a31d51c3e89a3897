//! Acceptance suite: one test per acceptance criterion, each printing a
//! PASS line (run with `--nocapture` to see them).
//!
//! Criteria, tolerances, and trial counts are pinned in code here; nothing
//! is deferred to later calibration.

use riskc_core::axioms::Verdict;
use riskc_core::duality::{
    DualSearchSpace, EntropicSpace, EsBoxSpace, LdEsSpace, SemidevSpace,
};
use riskc_core::sampler::{trial_rng, Sampler};
use riskc_core::{
    beta_bound, brute_force_sup, certify_inadmissible, check_axiom, check_class,
    check_limitedness, entropic_dual_witness, es_dual_witness, implication_suite,
    kusuoka_consistency, ld_dual_witness, loss_deviation, semidev_dual_witness, Axiom,
    DeviationMeasure, EmpiricalDistribution, Functional, HarnessParams, MeasureClass,
    RiskFunctional, RiskMeasure, SpectralMeasure,
};
use std::process::Command;

const TOL: f64 = 1e-9;

fn es(alpha: f64) -> RiskFunctional {
    RiskFunctional::Measure(RiskMeasure::ExpectedShortfall { alpha })
}

fn neg_exp() -> RiskFunctional {
    RiskFunctional::Measure(RiskMeasure::NegExpectation)
}

fn msd_minus(beta: f64, p: f64) -> RiskFunctional {
    RiskFunctional::Compose {
        rho: Box::new(neg_exp()),
        dev: DeviationMeasure::LowerSemideviation { p },
        beta,
    }
}

fn msd_full(beta: f64, p: f64) -> RiskFunctional {
    RiskFunctional::Compose {
        rho: Box::new(neg_exp()),
        dev: DeviationMeasure::FullDeviation { p },
        beta,
    }
}

fn ld_es(alpha: f64, beta: f64, p: f64) -> RiskFunctional {
    RiskFunctional::LossDeviation {
        rho: Box::new(es(alpha)),
        beta,
        p,
    }
}

fn risk(f: RiskFunctional) -> Functional {
    Functional::Risk(f)
}

fn validation_distribution(seed: u64, index: u64, dim: usize) -> EmpiricalDistribution {
    let mut rng = trial_rng(seed, 400, index);
    Sampler::new(dim).distribution(&mut rng)
}

#[test]
fn criterion_1_coherence_suite() {
    let start = std::time::Instant::now();
    let mut specs: Vec<(String, RiskFunctional)> = Vec::new();
    for alpha in [0.01, 0.05, 0.5, 1.0] {
        specs.push((format!("es({alpha})"), es(alpha)));
    }
    let mix_a = SpectralMeasure::new(vec![0.25, 1.0], vec![0.5, 0.5]).unwrap();
    let mix_b = SpectralMeasure::new(vec![0.05, 0.5, 1.0], vec![0.3, 0.3, 0.4]).unwrap();
    specs.push(("spectral_a".into(), RiskFunctional::Measure(RiskMeasure::Spectral(mix_a))));
    specs.push(("spectral_b".into(), RiskFunctional::Measure(RiskMeasure::Spectral(mix_b))));
    for beta in [0.0, 0.5, 1.0] {
        for p in [1.0, 2.0, f64::INFINITY] {
            specs.push((format!("msd_minus(beta={beta}, p={p})"), msd_minus(beta, p)));
        }
    }
    for (alpha, beta) in [(0.25, 0.5), (0.25, 1.0), (0.75, 0.5), (0.75, 1.0)] {
        specs.push((format!("ld(es({alpha}), beta={beta}, p=2)"), ld_es(alpha, beta, 2.0)));
    }

    for (i, (name, spec)) in specs.iter().enumerate() {
        let params = HarnessParams::new(100_000, 1_000 + i as u64, 64, TOL);
        let report = check_class(&risk(spec.clone()), MeasureClass::Coherent, &params).unwrap();
        assert!(!report.falsified, "{name} was falsified as coherent");
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs_f64() <= 60.0,
        "coherence suite exceeded its runtime budget: {elapsed:?}"
    );
    println!(
        "criterion 1 (coherence suite, {} specs at 1e5 trials in {elapsed:?}): PASS",
        specs.len()
    );
}

#[test]
fn criterion_2_falsification_suite() {
    let trials = 10_000;

    // (a) value-at-risk sub-additivity
    let var = risk(RiskFunctional::Measure(RiskMeasure::ValueAtRisk { alpha: 0.1 }));
    let r = check_axiom(&var, Axiom::Subadditivity, &HarnessParams::new(trials, 21, 16, TOL)).unwrap();
    assert_eq!(r.verdict, Verdict::Fail, "var sub-additivity was not falsified");
    let ce = r.counterexample.unwrap();
    assert!(riskc_core::axioms::replay(&var, &ce).unwrap() > TOL);

    // (b) full-deviation composition: monotonicity and limitedness, with
    // the analytic witness
    let full = risk(msd_full(1.0, 2.0));
    let r = check_axiom(&full, Axiom::Monotonicity, &HarnessParams::new(trials, 22, 16, TOL)).unwrap();
    assert_eq!(r.verdict, Verdict::Fail);
    let ce = r.counterexample.unwrap();
    assert!(riskc_core::axioms::replay(&full, &ce).unwrap() > TOL);

    let r = check_axiom(&full, Axiom::Limitedness, &HarnessParams::new(trials, 23, 16, TOL)).unwrap();
    assert_eq!(r.verdict, Verdict::Fail);
    let ce = r.counterexample.unwrap();
    assert!(riskc_core::axioms::replay(&full, &ce).unwrap() > TOL);

    // the analytic witness itself: value 2 against a maximum loss of 0
    let witness = EmpiricalDistribution::new(vec![10.0, 0.0], vec![0.1, 0.9]).unwrap();
    let check = check_limitedness(&witness, &full, TOL).unwrap();
    assert!(!check.limited);
    assert!((check.value - 2.0).abs() < 1e-12);
    assert!((check.slack + 2.0).abs() < 1e-12);

    // (c) entropic positive homogeneity
    let entropic = risk(RiskFunctional::Measure(RiskMeasure::Entropic { theta: 1.0 }));
    let r = check_axiom(&entropic, Axiom::PositiveHomogeneity, &HarnessParams::new(trials, 24, 16, TOL))
        .unwrap();
    assert_eq!(r.verdict, Verdict::Fail);
    let ce = r.counterexample.unwrap();
    assert!(riskc_core::axioms::replay(&entropic, &ce).unwrap() > TOL);

    println!("criterion 2 (falsification suite, negative controls within 1e4 trials): PASS");
}

#[test]
fn criterion_3_implication_suite() {
    let report = implication_suite(100_000, 33, 16, TOL).unwrap();
    assert_eq!(
        report.total_violations, 0,
        "implication violations found: {:?}",
        report
            .records
            .iter()
            .filter(|r| r.violations > 0)
            .map(|r| (&r.functional, r.implication))
            .collect::<Vec<_>>()
    );
    // the suite must not pass vacuously
    assert!(report.records.iter().any(|r| r.antecedent_held > 0));
    println!(
        "criterion 3 (implication suite, {} records at 1e5 trials, zero violations): PASS",
        report.records.len()
    );
}

#[test]
fn criterion_4_duality_gaps() {
    let alphas = [0.05, 0.3, 0.7, 1.0];
    let ps = [1.0, 2.0, 3.0, f64::INFINITY];
    let betas = [0.5, 1.0];
    let thetas = [0.5, 2.0];

    for i in 0..50u64 {
        let d = validation_distribution(44, i, 12);
        let alpha = alphas[i as usize % alphas.len()];
        let p = ps[i as usize % ps.len()];
        let beta = betas[i as usize % betas.len()];
        let theta = thetas[i as usize % thetas.len()];

        let r = es_dual_witness(&d, alpha).unwrap();
        assert!(r.gap.abs() <= TOL, "es gap {} at {i}", r.gap);

        let r = semidev_dual_witness(&d, p, beta).unwrap();
        assert!(r.gap.abs() <= TOL, "semidev gap {} at {i}", r.gap);

        let r = entropic_dual_witness(&d, theta).unwrap();
        assert!(r.gap.abs() <= TOL, "entropic gap {} at {i}", r.gap);

        let r = ld_dual_witness(&d, &es(alpha), beta, p).unwrap();
        assert!(r.gap.abs() <= TOL, "loss-deviation gap {} at {i}", r.gap);
    }

    // brute force against the analytic witnesses on a smaller sweep
    for i in 0..10u64 {
        let d = validation_distribution(45, i, 6);
        let alpha = alphas[i as usize % alphas.len()];
        let p = [1.0, 2.0][i as usize % 2];
        let beta = betas[i as usize % betas.len()];
        let theta = thetas[i as usize % thetas.len()];

        let cases: Vec<(Box<dyn DualSearchSpace>, f64)> = vec![
            (
                Box::new(EsBoxSpace { alpha }),
                es_dual_witness(&d, alpha).unwrap().dual_value,
            ),
            (
                Box::new(SemidevSpace { p, beta }),
                semidev_dual_witness(&d, p, beta).unwrap().dual_value,
            ),
            (
                Box::new(EntropicSpace { theta }),
                entropic_dual_witness(&d, theta).unwrap().dual_value,
            ),
            (
                Box::new(LdEsSpace { alpha, beta, p }),
                ld_dual_witness(&d, &es(alpha), beta, p).unwrap().dual_value,
            ),
        ];
        for (space, analytic) in cases {
            let r = brute_force_sup(&d, space.as_ref(), 4, 46 + i, analytic).unwrap();
            assert!(
                (r.dual_value - analytic).abs() <= 1e-7,
                "{}: brute {} vs analytic {analytic}",
                space.label(),
                r.dual_value
            );
            assert!(r.gap <= TOL, "{}: exceeded primal by {}", space.label(), r.gap);
        }
    }
    println!("criterion 4 (duality gaps <= 1e-9 on 50 distributions; brute force within 1e-7): PASS");
}

#[test]
fn criterion_5_kusuoka_round_trip() {
    for &n in &[4usize, 16, 64] {
        // point masses on lattice levels recover exactly
        for alpha in [0.25, 0.5, 1.0] {
            let analysis = kusuoka_consistency(&es(alpha), n, 20, 55, TOL).unwrap();
            for (k, &mass) in analysis.masses.iter().enumerate() {
                let level = (k + 1) as f64 / n as f64;
                let expected = if (level - alpha).abs() < 1e-12 { 1.0 } else { 0.0 };
                assert!(
                    (mass - expected).abs() <= TOL,
                    "es({alpha}) on {n} atoms: mass {mass} at level {level}"
                );
            }
            assert!(analysis.comonotone_coherent);
        }

        // a lattice spectrum round-trips
        let m = SpectralMeasure::new(vec![0.25, 0.5, 1.0], vec![0.3, 0.45, 0.25]).unwrap();
        let f = RiskFunctional::Measure(RiskMeasure::Spectral(m));
        let analysis = kusuoka_consistency(&f, n, 20, 56, TOL).unwrap();
        for (k, &mass) in analysis.masses.iter().enumerate() {
            let level = (k + 1) as f64 / n as f64;
            let expected = if (level - 0.25).abs() < 1e-12 {
                0.3
            } else if (level - 0.5).abs() < 1e-12 {
                0.45
            } else if (level - 1.0).abs() < 1e-12 {
                0.25
            } else {
                0.0
            };
            assert!((mass - expected).abs() <= TOL, "spectral on {n}: {mass} at {level}");
        }
        assert!(analysis.comonotone_coherent);
        assert!(analysis.max_discrepancy <= TOL);

        // the uncalibrated induced composition reveals signed mass -0.5 at
        // level 1 and is flagged
        let f = RiskFunctional::Compose {
            rho: Box::new(es(1.0 / 3.0)),
            dev: DeviationMeasure::Induced { rho: Box::new(es(1.0 / 3.0)) },
            beta: 0.5,
        };
        let analysis = kusuoka_consistency(&f, n, 20, 57, TOL).unwrap();
        assert!((analysis.masses[n - 1] + 0.5).abs() <= TOL);
        assert!(analysis.negative_mass);
        assert!(!analysis.comonotone_coherent);
    }
    println!("criterion 5 (kusuoka round trips on n in {{4,16,64}}; signed mass -0.5 detected): PASS");
}

#[test]
fn criterion_6_beta_calibration() {
    // induced expected-shortfall deviations admit no positive beta
    for alpha in [1.0_f64 / 3.0, 0.05] {
        let dim = (1.0 / alpha).ceil() as usize;
        let dev = DeviationMeasure::Induced { rho: Box::new(es(alpha)) };
        let bound = beta_bound(&es(alpha), &dev, 2_000, 66, dim).unwrap();
        assert!(
            bound.upper_bound.abs() <= 1e-12,
            "es({alpha}): bound {}",
            bound.upper_bound
        );
        let w = bound.witness.to_distribution().unwrap();
        assert!(dev.evaluate(&w).unwrap() > 0.0, "witness must have positive deviation");
        let ratio = (-es(alpha).evaluate(&w).unwrap() - w.essential_inf())
            / dev.evaluate(&w).unwrap();
        assert!((ratio - bound.upper_bound).abs() <= TOL);

        // any positive beta is certified inadmissible with an honest margin
        let c = certify_inadmissible(&es(alpha), &dev, 0.1, &bound).unwrap().unwrap();
        assert!(c.violation > TOL);
    }

    // the sup-norm semideviation ratio is identically 1
    let bound = beta_bound(
        &neg_exp(),
        &DeviationMeasure::LowerSemideviation { p: f64::INFINITY },
        100_000,
        67,
        16,
    )
    .unwrap();
    assert!(bound.upper_bound >= 1.0 - TOL, "bound {}", bound.upper_bound);

    // certified violations replay above threshold just past the bound
    let dev = DeviationMeasure::FullDeviation { p: 2.0 };
    let bound = beta_bound(&neg_exp(), &dev, 5_000, 68, 16).unwrap();
    for beta in [bound.upper_bound + 1e-6, 1.0] {
        let c = certify_inadmissible(&neg_exp(), &dev, beta, &bound).unwrap().unwrap();
        assert!(c.violation > TOL, "beta {beta}: violation {}", c.violation);
        // the violation is the limitedness inequality itself, re-evaluated
        let w = c.witness.to_distribution().unwrap();
        let direct = neg_exp().evaluate(&w).unwrap() + beta * dev.evaluate(&w).unwrap()
            + w.essential_inf();
        assert!((direct - c.violation).abs() <= 1e-12);
    }
    println!("criterion 6 (beta bounds: zero for induced es, one for sup-norm semideviation): PASS");
}

#[test]
fn criterion_7_special_case_identities() {
    // loss-deviation with the negated expectation is the mean plus
    // semideviation, to 1e-12
    let ps = [1.0, 2.0, f64::INFINITY];
    let betas = [0.0, 0.5, 1.0];
    for i in 0..1_000u64 {
        let d = validation_distribution(77, i, 16);
        let p = ps[i as usize % ps.len()];
        let beta = betas[i as usize % betas.len()];
        let ld = loss_deviation(&d, &neg_exp(), beta, p).unwrap();
        let msd = msd_minus(beta, p).evaluate(&d).unwrap();
        assert!((ld - msd).abs() <= 1e-12, "at {i}: {ld} vs {msd}");
    }

    // rho + beta D^rho = (1 + beta) rho + beta E[X] for translation-
    // invariant rho, to 1e-9
    let rhos: Vec<RiskFunctional> = vec![
        es(0.3),
        es(1.0),
        neg_exp(),
        RiskFunctional::Measure(RiskMeasure::Entropic { theta: 1.0 }),
        RiskFunctional::Measure(RiskMeasure::WorstCase),
    ];
    for i in 0..1_000u64 {
        let d = validation_distribution(78, i, 16);
        let rho = &rhos[i as usize % rhos.len()];
        let beta = [0.1, 0.5, 2.0][i as usize % 3];
        let composed = RiskFunctional::Compose {
            rho: Box::new(rho.clone()),
            dev: DeviationMeasure::Induced { rho: Box::new(rho.clone()) },
            beta,
        }
        .evaluate(&d)
        .unwrap();
        let direct = (1.0 + beta) * rho.evaluate(&d).unwrap() + beta * d.expectation();
        let scale = composed.abs().max(direct.abs()).max(1.0);
        assert!((composed - direct).abs() <= TOL * scale, "at {i}: {composed} vs {direct}");
    }
    println!("criterion 7 (special-case identities on 1e3 inputs): PASS");
}

#[test]
fn criterion_8_ssd_consistency() {
    // every law-invariant convex limited functional in the catalog
    let catalog: Vec<(String, RiskFunctional)> = vec![
        ("es_0.05".into(), es(0.05)),
        ("es_0.50".into(), es(0.5)),
        ("es_1".into(), es(1.0)),
        ("neg_expectation".into(), neg_exp()),
        ("worst_case".into(), RiskFunctional::Measure(RiskMeasure::WorstCase)),
        ("entropic_1".into(), RiskFunctional::Measure(RiskMeasure::Entropic { theta: 1.0 })),
        (
            "spectral".into(),
            RiskFunctional::Measure(RiskMeasure::Spectral(
                SpectralMeasure::new(vec![0.25, 1.0], vec![0.5, 0.5]).unwrap(),
            )),
        ),
        ("msd_minus_1_2".into(), msd_minus(1.0, 2.0)),
        ("msd_minus_0.5_1".into(), msd_minus(0.5, 1.0)),
        ("msd_minus_1_inf".into(), msd_minus(1.0, f64::INFINITY)),
        ("ld_es_0.5".into(), ld_es(0.5, 1.0, 2.0)),
    ];

    let sampler = Sampler::new(16);
    for i in 0..10_000u64 {
        let mut rng = trial_rng(88, 500, i);
        let (dominant, dominated) = sampler.ssd_pair(&mut rng);
        assert!(riskc_core::ssd_dominates(&dominant, &dominated));
        for (name, f) in &catalog {
            let hi = f.evaluate(&dominated).unwrap();
            let lo = f.evaluate(&dominant).unwrap();
            let scale = hi.abs().max(lo.abs()).max(1.0);
            assert!(
                lo <= hi + TOL * scale,
                "{name} violated ssd consistency at pair {i}: {lo} > {hi}"
            );
        }
    }
    println!("criterion 8 (ssd consistency over 1e4 ordered pairs, zero violations): PASS");
}

#[test]
fn criterion_9_deterministic_reports() {
    let bin = env!("CARGO_BIN_EXE_riskc");
    let cases: Vec<Vec<&str>> = vec![
        vec![
            "axioms",
            "--measure",
            "{\"type\":\"es\",\"alpha\":0.05}",
            "--trials",
            "2000",
            "--seed",
            "7",
            "--dim",
            "16",
        ],
        vec![
            "calibrate-beta",
            "--rho",
            "{\"type\":\"es\",\"alpha\":0.5}",
            "--dev",
            "{\"type\":\"semidev\",\"p\":2}",
            "--candidates",
            "2000",
            "--seed",
            "9",
            "--dim",
            "8",
        ],
        vec![
            "implication-suite",
            "--trials",
            "500",
            "--seed",
            "11",
            "--dim",
            "8",
        ],
    ];
    for args in cases {
        let run = |tag: &str| {
            let out = Command::new(bin)
                .args(&args)
                .output()
                .unwrap_or_else(|e| panic!("spawn {tag}: {e}"));
            assert!(out.status.success(), "{tag} failed: {:?}", out);
            out.stdout
        };
        let first = run("first");
        let second = run("second");
        assert_eq!(first, second, "reports differ for {:?}", args[0]);
        assert!(!first.is_empty());
    }
    println!("criterion 9 (byte-identical reports across consecutive runs): PASS");
}
