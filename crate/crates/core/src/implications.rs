//! Trial-wise verification of the implications tying limitedness to
//! monotonicity and lower range dominance.
//!
//! Each implication is checked at the instance level: whenever the
//! antecedent inequalities hold on a generated instance set (within
//! tolerance), the consequent must hold on that same set with the
//! accumulated tolerance. This is a tautology of the arithmetic, so any
//! recorded violation means the harness itself is broken, which is exactly
//! why the suite runs over a catalog that includes deliberately broken
//! functionals (value-at-risk, the full-deviation composition, an
//! uncalibrated induced composition). For those, antecedents simply fail on
//! the revealing instances and the trial is vacuous.

use crate::compose::{Functional, RiskFunctional};
use crate::deviation::DeviationMeasure;
use crate::error::Result;
use crate::parallel::fold_trials;
use crate::risk::{RiskMeasure, SpectralMeasure};
use crate::sampler::{trial_rng, Sampler};
use crate::scenario::{EmpiricalDistribution, ScenarioData};
use rand::Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Implication {
    SubadditivityAndLimitednessImplyMonotonicity,
    ConvexityAndLimitednessImplyMonotonicity,
    TranslationInvarianceAndMonotonicityImplyLimitedness,
    CoherentCompositionImpliesLowerRangeDominance,
}

impl Implication {
    pub const ALL: [Implication; 4] = [
        Implication::SubadditivityAndLimitednessImplyMonotonicity,
        Implication::ConvexityAndLimitednessImplyMonotonicity,
        Implication::TranslationInvarianceAndMonotonicityImplyLimitedness,
        Implication::CoherentCompositionImpliesLowerRangeDominance,
    ];

    fn stream(&self) -> u64 {
        100 + Implication::ALL.iter().position(|i| i == self).unwrap() as u64
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ImplicationWitness {
    pub x: ScenarioData,
    pub z: Option<ScenarioData>,
    pub lambda: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ImplicationRecord {
    pub functional: String,
    pub implication: Implication,
    pub trials: u64,
    /// Trials where every antecedent inequality held.
    pub antecedent_held: u64,
    pub violations: u64,
    pub witness: Option<ImplicationWitness>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ImplicationSuiteReport {
    pub trials: u64,
    pub seed: u64,
    pub dim: usize,
    pub tolerance: f64,
    pub total_violations: u64,
    pub records: Vec<ImplicationRecord>,
}

/// The functional catalog the suite and the wider test batteries run over.
/// Includes negative controls whose failures the harness must find.
pub fn reference_catalog() -> Vec<(String, Functional)> {
    let neg_exp = || RiskFunctional::Measure(RiskMeasure::NegExpectation);
    let es = |alpha: f64| RiskFunctional::Measure(RiskMeasure::ExpectedShortfall { alpha });
    let compose = |rho: RiskFunctional, dev: DeviationMeasure, beta: f64| {
        Functional::Risk(RiskFunctional::Compose {
            rho: Box::new(rho),
            dev,
            beta,
        })
    };
    let spectral = SpectralMeasure::new(vec![0.25, 1.0], vec![0.5, 0.5]).expect("static spectrum");
    vec![
        ("neg_expectation".into(), Functional::Risk(neg_exp())),
        (
            "var_0.10".into(),
            Functional::Risk(RiskFunctional::Measure(RiskMeasure::ValueAtRisk {
                alpha: 0.1,
            })),
        ),
        ("es_0.05".into(), Functional::Risk(es(0.05))),
        ("es_0.50".into(), Functional::Risk(es(0.5))),
        (
            "worst_case".into(),
            Functional::Risk(RiskFunctional::Measure(RiskMeasure::WorstCase)),
        ),
        (
            "entropic_1.0".into(),
            Functional::Risk(RiskFunctional::Measure(RiskMeasure::Entropic { theta: 1.0 })),
        ),
        (
            "spectral_mix".into(),
            Functional::Risk(RiskFunctional::Measure(RiskMeasure::Spectral(spectral))),
        ),
        (
            "msd_minus_beta1_p2".into(),
            compose(neg_exp(), DeviationMeasure::LowerSemideviation { p: 2.0 }, 1.0),
        ),
        (
            "msd_minus_beta0.5_p1".into(),
            compose(neg_exp(), DeviationMeasure::LowerSemideviation { p: 1.0 }, 0.5),
        ),
        (
            "msd_full_beta1_p2".into(),
            compose(neg_exp(), DeviationMeasure::FullDeviation { p: 2.0 }, 1.0),
        ),
        (
            "ld_es0.50_beta1_p2".into(),
            Functional::Risk(RiskFunctional::LossDeviation {
                rho: Box::new(es(0.5)),
                beta: 1.0,
                p: 2.0,
            }),
        ),
        (
            "es0.33_plus_0.5_induced".into(),
            compose(
                es(1.0 / 3.0),
                DeviationMeasure::Induced {
                    rho: Box::new(es(1.0 / 3.0)),
                },
                0.5,
            ),
        ),
    ]
}

struct TrialOutcome {
    applicable: bool,
    violation: Option<ImplicationWitness>,
}

fn zero_like(d: &EmpiricalDistribution) -> EmpiricalDistribution {
    EmpiricalDistribution::new(vec![0.0; d.len()], d.weights().to_vec()).expect("zero position")
}

fn const_like(d: &EmpiricalDistribution, c: f64) -> EmpiricalDistribution {
    EmpiricalDistribution::new(vec![c; d.len()], d.weights().to_vec()).expect("constant position")
}

fn scale_of(a: f64, b: f64) -> f64 {
    a.abs().max(b.abs()).max(1.0)
}

fn run_implication_trial(
    f: &Functional,
    imp: Implication,
    seed: u64,
    dim: usize,
    tol: f64,
    idx: u64,
) -> Result<TrialOutcome> {
    let mut rng = trial_rng(seed, imp.stream(), idx);
    let sampler = Sampler::new(dim);
    let vacuous = TrialOutcome {
        applicable: false,
        violation: None,
    };

    let outcome = match imp {
        Implication::SubadditivityAndLimitednessImplyMonotonicity => {
            let (x, _) = sampler.joint_pair(&mut rng);
            let z = EmpiricalDistribution::new(
                sampler.nonnegative_column(&mut rng, x.len()),
                x.weights().to_vec(),
            )?;
            let y = x.add(&z)?;
            let rx = f.evaluate(&x)?;
            let rz = f.evaluate(&z)?;
            let ry = f.evaluate(&y)?;
            let e1 = tol * scale_of(ry, rx + rz);
            let e2 = tol * scale_of(rz, -z.essential_inf());
            let subadd = ry <= rx + rz + e1;
            let limited = rz <= -z.essential_inf() + e2;
            if !(subadd && limited) {
                vacuous
            } else {
                let budget = e1 + e2 + tol * scale_of(ry, rx);
                let violated = ry > rx + budget;
                TrialOutcome {
                    applicable: true,
                    violation: violated.then(|| ImplicationWitness {
                        x: x.data(),
                        z: Some(z.data()),
                        lambda: None,
                        lhs: ry,
                        rhs: rx,
                    }),
                }
            }
        }
        Implication::ConvexityAndLimitednessImplyMonotonicity => {
            let (x, _) = sampler.joint_pair(&mut rng);
            let z = EmpiricalDistribution::new(
                sampler.nonnegative_column(&mut rng, x.len()),
                x.weights().to_vec(),
            )?;
            let lambda = rng.random_range(0.0..1.0);
            let mix = x.combine(&z, |a, b| lambda * a + (1.0 - lambda) * b)?;
            let rx = f.evaluate(&x)?;
            let rz = f.evaluate(&z)?;
            let rmix = f.evaluate(&mix)?;
            let hull = lambda * rx + (1.0 - lambda) * rz;
            let e1 = tol * scale_of(rmix, hull);
            let e2 = tol * scale_of(rz, -z.essential_inf());
            let convex = rmix <= hull + e1;
            let limited = rz <= -z.essential_inf() + e2;
            if !(convex && limited) {
                vacuous
            } else {
                let budget = e1 + e2 + tol * scale_of(rmix, lambda * rx);
                let violated = rmix > lambda * rx + budget;
                TrialOutcome {
                    applicable: true,
                    violation: violated.then(|| ImplicationWitness {
                        x: x.data(),
                        z: Some(z.data()),
                        lambda: Some(lambda),
                        lhs: rmix,
                        rhs: lambda * rx,
                    }),
                }
            }
        }
        Implication::TranslationInvarianceAndMonotonicityImplyLimitedness => {
            let x = sampler.distribution(&mut rng);
            let m = x.essential_inf();
            let zero = zero_like(&x);
            let floor = const_like(&x, m);
            let r0 = f.evaluate(&zero)?;
            let rm = f.evaluate(&floor)?;
            let rx = f.evaluate(&x)?;
            let e0 = tol;
            let e1 = tol * scale_of(rm, r0 - m);
            let e2 = tol * scale_of(rm, rx);
            let normalized = r0.abs() <= e0;
            let translates = (rm - (r0 - m)).abs() <= e1;
            let monotone = rm >= rx - e2;
            if !(normalized && translates && monotone) {
                vacuous
            } else {
                let budget = e0 + e1 + e2 + tol * scale_of(rx, -m);
                let violated = rx > -m + budget;
                TrialOutcome {
                    applicable: true,
                    violation: violated.then(|| ImplicationWitness {
                        x: x.data(),
                        z: None,
                        lambda: None,
                        lhs: rx,
                        rhs: -m,
                    }),
                }
            }
        }
        Implication::CoherentCompositionImpliesLowerRangeDominance => {
            let Functional::Risk(RiskFunctional::Compose { rho, dev, beta }) = f else {
                return Ok(vacuous);
            };
            let x = sampler.distribution(&mut rng);
            let rho_val = rho.evaluate(&x)?;
            let dev_term = beta * dev.evaluate(&x)?;
            let total = rho_val + dev_term;
            let bound = -x.essential_inf();
            let e1 = tol * scale_of(total, bound);
            let e2 = tol * scale_of(rho_val, -x.expectation());
            let limited = total <= bound + e1;
            let dominates_mean = rho_val >= -x.expectation() - e2;
            if !(limited && dominates_mean) {
                vacuous
            } else {
                let range = x.expectation() - x.essential_inf();
                let budget = e1 + e2 + tol * scale_of(dev_term, range);
                let violated = dev_term > range + budget;
                TrialOutcome {
                    applicable: true,
                    violation: violated.then(|| ImplicationWitness {
                        x: x.data(),
                        z: None,
                        lambda: None,
                        lhs: dev_term,
                        rhs: range,
                    }),
                }
            }
        }
    };
    Ok(outcome)
}

#[derive(Clone)]
struct Acc {
    applicable: u64,
    violations: u64,
    witness: Option<ImplicationWitness>,
    error: Option<String>,
}

impl Acc {
    fn empty() -> Self {
        Acc {
            applicable: 0,
            violations: 0,
            witness: None,
            error: None,
        }
    }

    fn merge(a: Acc, b: Acc) -> Acc {
        Acc {
            applicable: a.applicable + b.applicable,
            violations: a.violations + b.violations,
            witness: a.witness.or(b.witness),
            error: a.error.or(b.error),
        }
    }
}

/// Run every implication over the full reference catalog.
pub fn implication_suite(
    trials: u64,
    seed: u64,
    dim: usize,
    tolerance: f64,
) -> Result<ImplicationSuiteReport> {
    let mut records = Vec::new();
    let mut total_violations = 0;
    for (name, f) in reference_catalog() {
        f.validate()?;
        for imp in Implication::ALL {
            if imp == Implication::CoherentCompositionImpliesLowerRangeDominance
                && !matches!(f, Functional::Risk(RiskFunctional::Compose { .. }))
            {
                continue;
            }
            let acc = fold_trials(
                trials,
                Acc::empty(),
                |idx| match run_implication_trial(&f, imp, seed, dim, tolerance, idx) {
                    Ok(t) => Acc {
                        applicable: t.applicable as u64,
                        violations: t.violation.is_some() as u64,
                        witness: t.violation,
                        error: None,
                    },
                    Err(e) => Acc {
                        applicable: 0,
                        violations: 0,
                        witness: None,
                        error: Some(e.to_string()),
                    },
                },
                Acc::merge,
                Acc::merge,
            );
            if let Some(e) = acc.error {
                return Err(crate::error::Error::Config(format!(
                    "implication trial failed for {name}: {e}"
                )));
            }
            total_violations += acc.violations;
            records.push(ImplicationRecord {
                functional: name.clone(),
                implication: imp,
                trials,
                antecedent_held: acc.applicable,
                violations: acc.violations,
                witness: acc.witness,
            });
        }
    }
    Ok(ImplicationSuiteReport {
        trials,
        seed,
        dim,
        tolerance,
        total_violations,
        records,
    })
}
