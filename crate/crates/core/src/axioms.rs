//! Property-based axiom falsification harness.
//!
//! For any functional (risk measure, deviation measure, or composition)
//! each axiom is tested over randomized instance families. A PASS means "no
//! counterexample in N trials", never a proof: the axioms quantify over all
//! of L^p and a finite search cannot close that gap. A FAIL always carries
//! a replayable counterexample whose violation is re-verified before the
//! report is returned.
//!
//! Trials are pure functions of `(master seed, axiom, trial index)`, so
//! identical parameters produce bit-identical reports and trials may run in
//! parallel without affecting results. Equality axioms (translation
//! invariance, positive homogeneity, law invariance, co-monotonic
//! additivity) and inequality axioms share one tolerance rule: a violation
//! counts when it exceeds `tolerance * max(1, |lhs|, |rhs|)`.

use crate::compose::Functional;
use crate::error::{Error, Result};
use crate::parallel::fold_trials;
use crate::sampler::{
    adversarial_distribution, adversarial_dominated_pair, adversarial_pair, trial_rng, Sampler,
};
use crate::scenario::{ssd_dominates, EmpiricalDistribution, ScenarioData};
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    Monotonicity,
    TranslationInvariance,
    TranslationInsensitivity,
    Subadditivity,
    PositiveHomogeneity,
    Convexity,
    LawInvariance,
    ComonotonicAdditivity,
    Limitedness,
    LowerRangeDominance,
    NonNegativity,
    SsdConsistency,
    /// Never tested: on finite scenario spaces every functional here is
    /// continuous, so the axiom is vacuous. Reported as SKIPPED.
    FatouContinuity,
}

impl Axiom {
    pub const ALL: [Axiom; 13] = [
        Axiom::Monotonicity,
        Axiom::TranslationInvariance,
        Axiom::TranslationInsensitivity,
        Axiom::Subadditivity,
        Axiom::PositiveHomogeneity,
        Axiom::Convexity,
        Axiom::LawInvariance,
        Axiom::ComonotonicAdditivity,
        Axiom::Limitedness,
        Axiom::LowerRangeDominance,
        Axiom::NonNegativity,
        Axiom::SsdConsistency,
        Axiom::FatouContinuity,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Axiom::Monotonicity => "monotonicity",
            Axiom::TranslationInvariance => "translation_invariance",
            Axiom::TranslationInsensitivity => "translation_insensitivity",
            Axiom::Subadditivity => "subadditivity",
            Axiom::PositiveHomogeneity => "positive_homogeneity",
            Axiom::Convexity => "convexity",
            Axiom::LawInvariance => "law_invariance",
            Axiom::ComonotonicAdditivity => "comonotonic_additivity",
            Axiom::Limitedness => "limitedness",
            Axiom::LowerRangeDominance => "lower_range_dominance",
            Axiom::NonNegativity => "non_negativity",
            Axiom::SsdConsistency => "ssd_consistency",
            Axiom::FatouContinuity => "fatou_continuity",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Axiom> {
        Axiom::ALL.iter().copied().find(|a| a.tag() == tag)
    }

    /// Which functional kinds the axiom's quantifier ranges over.
    pub fn applies_to_risk(&self) -> bool {
        !matches!(
            self,
            Axiom::TranslationInsensitivity | Axiom::LowerRangeDominance | Axiom::NonNegativity
        )
    }

    pub fn applies_to_deviation(&self) -> bool {
        !matches!(
            self,
            Axiom::Monotonicity
                | Axiom::TranslationInvariance
                | Axiom::Limitedness
                | Axiom::SsdConsistency
        )
    }

    fn stream(&self) -> u64 {
        Axiom::ALL.iter().position(|a| a == self).unwrap() as u64 + 1
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct HarnessParams {
    pub trials: u64,
    pub seed: u64,
    pub dim: usize,
    pub tolerance: f64,
    /// A PASS verdict requires at least this many trials.
    pub min_pass_trials: u64,
}

impl Default for HarnessParams {
    fn default() -> Self {
        HarnessParams {
            trials: 10_000,
            seed: 0,
            dim: 16,
            tolerance: 1e-9,
            min_pass_trials: 1,
        }
    }
}

impl HarnessParams {
    pub fn new(trials: u64, seed: u64, dim: usize, tolerance: f64) -> Self {
        HarnessParams {
            trials,
            seed,
            dim,
            tolerance,
            min_pass_trials: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped,
}

/// Replayable witness of an axiom violation: the generated inputs plus the
/// two sides of the violated relation. `violation` is normalized by
/// `max(1, |lhs|, |rhs|)` and exceeded the tolerance when found.
#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub axiom: Axiom,
    pub trial_index: u64,
    pub x: ScenarioData,
    pub y: Option<ScenarioData>,
    pub shift: Option<f64>,
    pub lambda: Option<f64>,
    pub permutation: Option<Vec<usize>>,
    pub lhs: f64,
    pub rhs: f64,
    pub violation: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub verdict: Verdict,
    pub trials: u64,
    pub max_violation: f64,
    pub counterexample: Option<Counterexample>,
    /// Extra diagnostics outside the class bundle under test.
    pub informational: bool,
    pub note: Option<String>,
}

fn scale_of(lhs: f64, rhs: f64) -> f64 {
    lhs.abs().max(rhs.abs()).max(1.0)
}

/// Normalized violation of `lhs <= rhs`.
fn gap(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs) / scale_of(lhs, rhs)
}

/// Normalized violation of `lhs == rhs`.
fn eq_gap(lhs: f64, rhs: f64) -> f64 {
    (lhs - rhs).abs() / scale_of(lhs, rhs)
}

fn non_constant(d: EmpiricalDistribution) -> EmpiricalDistribution {
    if d.essential_sup() > d.essential_inf() {
        return d;
    }
    let c = d.outcomes()[0];
    let bump = c.abs().max(1.0);
    if d.len() == 1 {
        return EmpiricalDistribution::equiprobable(vec![c, c + bump]).expect("two atoms");
    }
    let mut outcomes = d.outcomes().to_vec();
    outcomes[0] += bump;
    EmpiricalDistribution::new(outcomes, d.weights().to_vec()).expect("bumped distribution")
}

struct Trial {
    violation: f64,
    witness: Option<Counterexample>,
}

#[allow(clippy::too_many_arguments)]
fn make_ce(
    axiom: Axiom,
    idx: u64,
    x: &EmpiricalDistribution,
    y: Option<&EmpiricalDistribution>,
    shift: Option<f64>,
    lambda: Option<f64>,
    permutation: Option<Vec<usize>>,
    lhs: f64,
    rhs: f64,
    violation: f64,
) -> Counterexample {
    Counterexample {
        axiom,
        trial_index: idx,
        x: x.data(),
        y: y.map(|d| d.data()),
        shift,
        lambda,
        permutation,
        lhs,
        rhs,
        violation,
    }
}

fn run_trial(
    f: &Functional,
    axiom: Axiom,
    params: &HarnessParams,
    idx: u64,
) -> Result<Trial> {
    let mut rng = trial_rng(params.seed, axiom.stream(), idx);
    let sampler = Sampler::new(params.dim);
    let tol = params.tolerance;
    let k = idx as usize;

    let (violation, witness) = match axiom {
        Axiom::Monotonicity => {
            let (x, y) = adversarial_dominated_pair(k)
                .unwrap_or_else(|| sampler.dominated_pair(&mut rng));
            let fx = f.evaluate(&x)?;
            let fy = f.evaluate(&y)?;
            // x <= y must give f(x) >= f(y)
            let v = gap(fy, fx);
            let w = (v > tol).then(|| {
                make_ce(axiom, idx, &x, Some(&y), None, None, None, fy, fx, v)
            });
            (v, w)
        }
        Axiom::TranslationInvariance | Axiom::TranslationInsensitivity => {
            let x = adversarial_distribution(k).unwrap_or_else(|| sampler.distribution(&mut rng));
            let c = if adversarial_distribution(k).is_some() {
                1.5
            } else {
                10.0_f64.powf(rng.random_range(-1.0..1.5)) * rng.random_range(-1.0..1.0f64).signum()
                    * rng.random_range(0.0..1.0)
            };
            let shifted = f.evaluate(&x.shift(c)?)?;
            let base = f.evaluate(&x)?;
            let expected = if axiom == Axiom::TranslationInvariance {
                base - c
            } else {
                base
            };
            let v = eq_gap(shifted, expected);
            let w = (v > tol).then(|| {
                make_ce(axiom, idx, &x, None, Some(c), None, None, shifted, expected, v)
            });
            (v, w)
        }
        Axiom::Subadditivity => {
            let (x, y) =
                adversarial_pair(k).unwrap_or_else(|| sampler.joint_pair(&mut rng));
            let sum = f.evaluate(&x.add(&y)?)?;
            let parts = f.evaluate(&x)? + f.evaluate(&y)?;
            let v = gap(sum, parts);
            let w = (v > tol).then(|| {
                make_ce(axiom, idx, &x, Some(&y), None, None, None, sum, parts, v)
            });
            (v, w)
        }
        Axiom::PositiveHomogeneity => {
            let x = adversarial_distribution(k).unwrap_or_else(|| sampler.distribution(&mut rng));
            // stratified grid plus a random scale every fifth trial
            let lambda = match idx % 5 {
                0 => 0.0,
                1 => 0.5,
                2 => 2.0,
                3 => 10.0,
                _ => 10.0_f64.powf(rng.random_range(-1.0..1.0)),
            };
            let scaled = f.evaluate(&x.scale(lambda)?)?;
            let expected = lambda * f.evaluate(&x)?;
            let v = eq_gap(scaled, expected);
            let w = (v > tol).then(|| {
                make_ce(axiom, idx, &x, None, None, Some(lambda), None, scaled, expected, v)
            });
            (v, w)
        }
        Axiom::Convexity => {
            let (x, y) = adversarial_pair(k).unwrap_or_else(|| sampler.joint_pair(&mut rng));
            let lambda = match idx % 6 {
                0 => 0.0,
                1 => 0.25,
                2 => 0.5,
                3 => 0.75,
                4 => 1.0,
                _ => rng.random_range(0.0..1.0),
            };
            let mix = x.combine(&y, |a, b| lambda * a + (1.0 - lambda) * b)?;
            let lhs = f.evaluate(&mix)?;
            let rhs = lambda * f.evaluate(&x)? + (1.0 - lambda) * f.evaluate(&y)?;
            let v = gap(lhs, rhs);
            let w = (v > tol).then(|| {
                make_ce(axiom, idx, &x, Some(&y), None, Some(lambda), None, lhs, rhs, v)
            });
            (v, w)
        }
        Axiom::LawInvariance => {
            let x = sampler.equiprobable(&mut rng);
            let mut perm: Vec<usize> = (0..x.len()).collect();
            for i in (1..perm.len()).rev() {
                let j = rng.random_range(0..=i);
                perm.swap(i, j);
            }
            let lhs = f.evaluate(&x.permute(&perm)?)?;
            let rhs = f.evaluate(&x)?;
            let v = eq_gap(lhs, rhs);
            let w = (v > tol).then(|| {
                make_ce(axiom, idx, &x, None, None, None, Some(perm.clone()), lhs, rhs, v)
            });
            (v, w)
        }
        Axiom::ComonotonicAdditivity => {
            let (x, y) = sampler.comonotone(&mut rng)?;
            let lhs = f.evaluate(&x.add(&y)?)?;
            let rhs = f.evaluate(&x)? + f.evaluate(&y)?;
            let v = eq_gap(lhs, rhs);
            let w = (v > tol).then(|| {
                make_ce(axiom, idx, &x, Some(&y), None, None, None, lhs, rhs, v)
            });
            (v, w)
        }
        Axiom::Limitedness => {
            let x = adversarial_distribution(k).unwrap_or_else(|| sampler.distribution(&mut rng));
            let lhs = f.evaluate(&x)?;
            let rhs = -x.essential_inf();
            let v = gap(lhs, rhs);
            let w = (v > tol).then(|| {
                make_ce(axiom, idx, &x, None, None, None, None, lhs, rhs, v)
            });
            (v, w)
        }
        Axiom::LowerRangeDominance => {
            let x = adversarial_distribution(k).unwrap_or_else(|| sampler.distribution(&mut rng));
            let lhs = f.evaluate(&x)?;
            let rhs = x.expectation() - x.essential_inf();
            let v = gap(lhs, rhs);
            let w = (v > tol).then(|| {
                make_ce(axiom, idx, &x, None, None, None, None, lhs, rhs, v)
            });
            (v, w)
        }
        Axiom::NonNegativity => {
            let c = sampler.constant(&mut rng);
            let on_constant = f.evaluate(&c)?;
            let v_const = eq_gap(on_constant, 0.0);
            let x = non_constant(
                adversarial_distribution(k).unwrap_or_else(|| sampler.distribution(&mut rng)),
            );
            let on_spread = f.evaluate(&x)?;
            // strictly positive demanded on non-constant inputs
            let v_spread = if on_spread <= 0.0 {
                (2.0 * tol).max(-on_spread)
            } else {
                f64::NEG_INFINITY
            };
            if v_const >= v_spread {
                let w = (v_const > tol).then(|| {
                    make_ce(axiom, idx, &c, None, None, None, None, on_constant, 0.0, v_const)
                });
                (v_const, w)
            } else {
                let w = (v_spread > tol).then(|| {
                    make_ce(axiom, idx, &x, None, None, None, None, on_spread, 0.0, v_spread)
                });
                (v_spread, w)
            }
        }
        Axiom::SsdConsistency => {
            let (dominant, dominated) = sampler.ssd_pair(&mut rng);
            debug_assert!(ssd_dominates(&dominant, &dominated));
            let lhs = f.evaluate(&dominant)?;
            let rhs = f.evaluate(&dominated)?;
            let v = gap(lhs, rhs);
            let w = (v > tol).then(|| {
                make_ce(axiom, idx, &dominant, Some(&dominated), None, None, None, lhs, rhs, v)
            });
            (v, w)
        }
        Axiom::FatouContinuity => unreachable!("fatou continuity is never trialed"),
    };

    Ok(Trial { violation, witness })
}

/// Re-evaluate a stored counterexample from scratch and return its
/// normalized violation.
pub fn replay(f: &Functional, ce: &Counterexample) -> Result<f64> {
    replay_parts(f, ce).map(|(v, _, _)| v)
}

/// Replay returning `(violation, lhs, rhs)` of the violated relation.
fn replay_parts(f: &Functional, ce: &Counterexample) -> Result<(f64, f64, f64)> {
    let x = ce.x.to_distribution()?;
    let y = ce.y.as_ref().map(|d| d.to_distribution()).transpose()?;
    let parts = match ce.axiom {
        Axiom::Monotonicity => {
            let y = y.ok_or_else(|| Error::Config("monotonicity witness needs a pair".into()))?;
            let (lhs, rhs) = (f.evaluate(&y)?, f.evaluate(&x)?);
            (gap(lhs, rhs), lhs, rhs)
        }
        Axiom::TranslationInvariance | Axiom::TranslationInsensitivity => {
            let c = ce
                .shift
                .ok_or_else(|| Error::Config("translation witness needs a shift".into()))?;
            let base = f.evaluate(&x)?;
            let rhs = if ce.axiom == Axiom::TranslationInvariance {
                base - c
            } else {
                base
            };
            let lhs = f.evaluate(&x.shift(c)?)?;
            (eq_gap(lhs, rhs), lhs, rhs)
        }
        Axiom::Subadditivity => {
            let y = y.ok_or_else(|| Error::Config("subadditivity witness needs a pair".into()))?;
            let lhs = f.evaluate(&x.add(&y)?)?;
            let rhs = f.evaluate(&x)? + f.evaluate(&y)?;
            (gap(lhs, rhs), lhs, rhs)
        }
        Axiom::PositiveHomogeneity => {
            let l = ce
                .lambda
                .ok_or_else(|| Error::Config("homogeneity witness needs lambda".into()))?;
            let lhs = f.evaluate(&x.scale(l)?)?;
            let rhs = l * f.evaluate(&x)?;
            (eq_gap(lhs, rhs), lhs, rhs)
        }
        Axiom::Convexity => {
            let y = y.ok_or_else(|| Error::Config("convexity witness needs a pair".into()))?;
            let l = ce
                .lambda
                .ok_or_else(|| Error::Config("convexity witness needs lambda".into()))?;
            let mix = x.combine(&y, |a, b| l * a + (1.0 - l) * b)?;
            let lhs = f.evaluate(&mix)?;
            let rhs = l * f.evaluate(&x)? + (1.0 - l) * f.evaluate(&y)?;
            (gap(lhs, rhs), lhs, rhs)
        }
        Axiom::LawInvariance => {
            let perm = ce
                .permutation
                .as_ref()
                .ok_or_else(|| Error::Config("law invariance witness needs a permutation".into()))?;
            let lhs = f.evaluate(&x.permute(perm)?)?;
            let rhs = f.evaluate(&x)?;
            (eq_gap(lhs, rhs), lhs, rhs)
        }
        Axiom::ComonotonicAdditivity => {
            let y = y.ok_or_else(|| Error::Config("additivity witness needs a pair".into()))?;
            let lhs = f.evaluate(&x.add(&y)?)?;
            let rhs = f.evaluate(&x)? + f.evaluate(&y)?;
            (eq_gap(lhs, rhs), lhs, rhs)
        }
        Axiom::Limitedness => {
            let (lhs, rhs) = (f.evaluate(&x)?, -x.essential_inf());
            (gap(lhs, rhs), lhs, rhs)
        }
        Axiom::LowerRangeDominance => {
            let (lhs, rhs) = (f.evaluate(&x)?, x.expectation() - x.essential_inf());
            (gap(lhs, rhs), lhs, rhs)
        }
        Axiom::NonNegativity => {
            let v = f.evaluate(&x)?;
            if x.essential_sup() == x.essential_inf() {
                (eq_gap(v, 0.0), v, 0.0)
            } else if v <= 0.0 {
                // the defect is strict nonpositivity itself; report it at
                // least as large as the stored violation
                (ce.violation.abs().max(-v), v, 0.0)
            } else {
                (f64::NEG_INFINITY, v, 0.0)
            }
        }
        Axiom::SsdConsistency => {
            let y = y.ok_or_else(|| Error::Config("ssd witness needs a pair".into()))?;
            let (lhs, rhs) = (f.evaluate(&x)?, f.evaluate(&y)?);
            (gap(lhs, rhs), lhs, rhs)
        }
        Axiom::FatouContinuity => {
            return Err(Error::Config("fatou continuity has no counterexamples".into()))
        }
    };
    Ok(parts)
}

/// One greedy atom-removal pass over a counterexample: drop each atom in
/// turn (renormalizing weights, and removing the same atom from both
/// columns of a pair) and keep the removal when the violation still exceeds
/// the tolerance. Witnesses with permutations are left alone, and relations
/// the generator guaranteed (pointwise dominance survives removal; second-
/// order dominance does not) are re-verified before accepting.
fn shrink_counterexample(
    f: &Functional,
    ce: Counterexample,
    tolerance: f64,
) -> Result<Counterexample> {
    if ce.permutation.is_some() {
        return Ok(ce);
    }
    let mut best = ce;
    let mut atom = 0;
    while atom < best.x.outcomes.len() && best.x.outcomes.len() > 1 {
        let drop = |data: &ScenarioData| -> Option<ScenarioData> {
            let keep: Vec<usize> = (0..data.outcomes.len()).filter(|&i| i != atom).collect();
            let outcomes: Vec<f64> = keep.iter().map(|&i| data.outcomes[i]).collect();
            let total: f64 = keep.iter().map(|&i| data.weights[i]).sum();
            if total <= 0.0 {
                return None;
            }
            let weights: Vec<f64> = keep.iter().map(|&i| data.weights[i] / total).collect();
            Some(ScenarioData { outcomes, weights })
        };
        let candidate = match (drop(&best.x), best.y.as_ref().map(drop)) {
            (Some(x), None) if best.y.is_none() => Counterexample {
                x,
                y: None,
                ..best.clone()
            },
            (Some(x), Some(Some(y))) => Counterexample {
                x,
                y: Some(y),
                ..best.clone()
            },
            _ => {
                atom += 1;
                continue;
            }
        };
        if best.axiom == Axiom::SsdConsistency {
            let x = candidate.x.to_distribution()?;
            let y = candidate.y.as_ref().expect("ssd pair").to_distribution()?;
            if !ssd_dominates(&x, &y) {
                atom += 1;
                continue;
            }
        }
        match replay_parts(f, &candidate) {
            Ok((v, lhs, rhs)) if v > tolerance => {
                best = Counterexample {
                    violation: v,
                    lhs,
                    rhs,
                    ..candidate
                };
                // indices shifted left; retry the same position
            }
            _ => atom += 1,
        }
    }
    Ok(best)
}

#[derive(Clone)]
struct Acc {
    max_violation: f64,
    witness: Option<Counterexample>,
    error: Option<String>,
}

impl Acc {
    fn empty() -> Self {
        Acc {
            max_violation: f64::NEG_INFINITY,
            witness: None,
            error: None,
        }
    }

    fn merge(a: Acc, b: Acc) -> Acc {
        Acc {
            max_violation: a.max_violation.max(b.max_violation),
            witness: a.witness.or(b.witness),
            error: a.error.or(b.error),
        }
    }
}

/// Check one axiom over `params.trials` randomized instances.
pub fn check_axiom(f: &Functional, axiom: Axiom, params: &HarnessParams) -> Result<AxiomReport> {
    check_axiom_inner(f, axiom, params, false)
}

fn check_axiom_inner(
    f: &Functional,
    axiom: Axiom,
    params: &HarnessParams,
    informational: bool,
) -> Result<AxiomReport> {
    f.validate()?;
    let applicable = if f.is_risk() {
        axiom.applies_to_risk()
    } else {
        axiom.applies_to_deviation()
    };
    if !applicable {
        return Err(Error::Config(format!(
            "axiom '{}' does not apply to this functional kind",
            axiom.tag()
        )));
    }
    if axiom == Axiom::FatouContinuity {
        return Ok(AxiomReport {
            axiom,
            verdict: Verdict::Skipped,
            trials: 0,
            max_violation: 0.0,
            counterexample: None,
            informational,
            note: Some(
                "fatou continuity is vacuous on finite scenario spaces; not tested".into(),
            ),
        });
    }
    if params.trials < params.min_pass_trials {
        return Err(Error::Config(format!(
            "{} trials are below the configured minimum of {} for a PASS verdict",
            params.trials, params.min_pass_trials
        )));
    }

    let acc = fold_trials(
        params.trials,
        Acc::empty(),
        |idx| match run_trial(f, axiom, params, idx) {
            Ok(t) => Acc {
                max_violation: t.violation,
                witness: t.witness,
                error: None,
            },
            Err(e) => Acc {
                max_violation: f64::NEG_INFINITY,
                witness: None,
                error: Some(e.to_string()),
            },
        },
        Acc::merge,
        Acc::merge,
    );

    if let Some(e) = acc.error {
        return Err(Error::Config(format!("trial evaluation failed: {e}")));
    }

    let max_violation = if acc.max_violation.is_finite() {
        acc.max_violation
    } else {
        // only reachable when every trial had nothing to report (strict
        // positivity side of non-negativity always satisfied)
        0.0
    };

    match acc.witness {
        Some(ce) => {
            let ce = shrink_counterexample(f, ce, params.tolerance)?;
            let replayed = replay(f, &ce)?;
            if replayed <= params.tolerance {
                return Err(Error::Config(format!(
                    "counterexample for '{}' did not replay: stored violation {:e}, replayed {:e}",
                    axiom.tag(),
                    ce.violation,
                    replayed
                )));
            }
            Ok(AxiomReport {
                axiom,
                verdict: Verdict::Fail,
                trials: params.trials,
                max_violation: max_violation.max(ce.violation),
                counterexample: Some(ce),
                informational,
                note: None,
            })
        }
        None => Ok(AxiomReport {
            axiom,
            verdict: Verdict::Pass,
            trials: params.trials,
            max_violation,
            counterexample: None,
            informational,
            note: Some(format!("no counterexample in {} trials", params.trials)),
        }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasureClass {
    Coherent,
    Convex,
    ComonotoneCoherent,
    GeneralizedDeviation,
    ConvexDeviation,
}

impl MeasureClass {
    pub fn tag(&self) -> &'static str {
        match self {
            MeasureClass::Coherent => "coherent",
            MeasureClass::Convex => "convex",
            MeasureClass::ComonotoneCoherent => "comonotone_coherent",
            MeasureClass::GeneralizedDeviation => "generalized_deviation",
            MeasureClass::ConvexDeviation => "convex_deviation",
        }
    }

    pub fn from_tag(tag: &str) -> Option<MeasureClass> {
        let norm = tag.replace('-', "_");
        [
            MeasureClass::Coherent,
            MeasureClass::Convex,
            MeasureClass::ComonotoneCoherent,
            MeasureClass::GeneralizedDeviation,
            MeasureClass::ConvexDeviation,
        ]
        .into_iter()
        .find(|c| c.tag() == norm)
    }

    pub fn is_risk_class(&self) -> bool {
        matches!(
            self,
            MeasureClass::Coherent | MeasureClass::Convex | MeasureClass::ComonotoneCoherent
        )
    }

    /// The defining axiom bundle of the class.
    pub fn bundle(&self) -> &'static [Axiom] {
        match self {
            MeasureClass::Coherent => &[
                Axiom::Monotonicity,
                Axiom::TranslationInvariance,
                Axiom::Subadditivity,
                Axiom::PositiveHomogeneity,
            ],
            MeasureClass::Convex => &[
                Axiom::Monotonicity,
                Axiom::TranslationInvariance,
                Axiom::Convexity,
            ],
            MeasureClass::ComonotoneCoherent => &[
                Axiom::Monotonicity,
                Axiom::TranslationInvariance,
                Axiom::Subadditivity,
                Axiom::PositiveHomogeneity,
                Axiom::ComonotonicAdditivity,
            ],
            MeasureClass::GeneralizedDeviation => &[
                Axiom::NonNegativity,
                Axiom::TranslationInsensitivity,
                Axiom::Subadditivity,
                Axiom::PositiveHomogeneity,
            ],
            MeasureClass::ConvexDeviation => &[
                Axiom::NonNegativity,
                Axiom::TranslationInsensitivity,
                Axiom::Convexity,
            ],
        }
    }

    /// Informational extras run alongside the bundle but excluded from the
    /// class verdict.
    pub fn extras(&self) -> &'static [Axiom] {
        if self.is_risk_class() {
            &[Axiom::Limitedness]
        } else {
            &[Axiom::LowerRangeDominance]
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassReport {
    pub class: MeasureClass,
    pub falsified: bool,
    pub reports: Vec<AxiomReport>,
}

/// Run the defining axiom bundle of a claimed class, plus limitedness or
/// lower range dominance as informational extras and a SKIPPED entry for
/// Fatou continuity.
pub fn check_class(
    f: &Functional,
    class: MeasureClass,
    params: &HarnessParams,
) -> Result<ClassReport> {
    if class.is_risk_class() != f.is_risk() {
        return Err(Error::Config(format!(
            "class '{}' does not apply to this functional kind",
            class.tag()
        )));
    }
    let mut reports = Vec::new();
    let mut falsified = false;
    for &axiom in class.bundle() {
        let report = check_axiom_inner(f, axiom, params, false)?;
        falsified |= report.verdict == Verdict::Fail;
        reports.push(report);
    }
    for &axiom in class.extras() {
        reports.push(check_axiom_inner(f, axiom, params, true)?);
    }
    reports.push(check_axiom_inner(f, Axiom::FatouContinuity, params, true)?);
    Ok(ClassReport {
        class,
        falsified,
        reports,
    })
}
