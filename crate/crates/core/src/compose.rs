//! Composition of risk and deviation measures.
//!
//! The central object is `rho + beta * D` for a risk measure `rho` and a
//! deviation measure `D`, together with the loss-deviation
//! `rho(X) + beta * ||(X - rho*(X))^-||_p` where `rho* = -rho`. Whether a
//! composition stays a coherent risk measure hinges on limitedness
//! (`value <= -inf X`), which [`check_limitedness`] reports with its slack.
//! Compositions nest arbitrarily: any risk-valued node can serve as the
//! `rho` of another composition or of an induced deviation.

use crate::axioms::Axiom;
use crate::deviation::DeviationMeasure;
use crate::error::{Error, Result};
use crate::risk::RiskMeasure;
use crate::scenario::EmpiricalDistribution;
use std::collections::BTreeSet;

/// A risk-valued functional: a base measure or a composition.
#[derive(Debug, Clone, PartialEq)]
pub enum RiskFunctional {
    Measure(RiskMeasure),
    /// `rho + beta * D`. `beta` is any nonnegative penalty coefficient at
    /// evaluation time; admissible ranges are the calibration module's job,
    /// and deliberately non-limited compositions are first-class citizens
    /// of the falsification harness.
    Compose {
        rho: Box<RiskFunctional>,
        dev: DeviationMeasure,
        beta: f64,
    },
    /// `rho(X) + beta * ||(X - rho*(X))^-||_p` with `0 <= beta <= 1`.
    LossDeviation {
        rho: Box<RiskFunctional>,
        beta: f64,
        p: f64,
    },
}

/// Anything the harness can evaluate: a risk functional or a deviation.
#[derive(Debug, Clone, PartialEq)]
pub enum Functional {
    Risk(RiskFunctional),
    Deviation(DeviationMeasure),
}

impl RiskFunctional {
    pub fn validate(&self) -> Result<()> {
        match self {
            RiskFunctional::Measure(m) => m.validate(),
            RiskFunctional::Compose { rho, dev, beta } => {
                if !(beta.is_finite() && *beta >= 0.0) {
                    return Err(Error::validation("beta must be nonnegative"));
                }
                rho.validate()?;
                dev.validate()
            }
            RiskFunctional::LossDeviation { rho, beta, p } => {
                if !(beta.is_finite() && *beta >= 0.0 && *beta <= 1.0) {
                    return Err(Error::validation("loss-deviation beta must lie in [0,1]"));
                }
                if p.is_nan() || *p < 1.0 {
                    return Err(Error::validation("p must be >= 1 (or inf)"));
                }
                rho.validate()
            }
        }
    }

    pub fn evaluate(&self, d: &EmpiricalDistribution) -> Result<f64> {
        match self {
            RiskFunctional::Measure(m) => m.evaluate(d),
            RiskFunctional::Compose { rho, dev, beta } => {
                Ok(rho.evaluate(d)? + beta * dev.evaluate(d)?)
            }
            RiskFunctional::LossDeviation { rho, beta, p } => loss_deviation(d, rho, *beta, *p),
        }
    }

    pub fn claimed_axioms(&self) -> BTreeSet<Axiom> {
        use Axiom::*;
        match self {
            RiskFunctional::Measure(m) => m.claimed_axioms(),
            RiskFunctional::Compose { rho, dev, beta } => {
                let rc = rho.claimed_axioms();
                if *beta == 0.0 {
                    return rc;
                }
                let dc = dev.claimed_axioms();
                let mut out = BTreeSet::new();
                if rc.contains(&TranslationInvariance) && dc.contains(&TranslationInsensitivity) {
                    out.insert(TranslationInvariance);
                }
                for ax in [Subadditivity, PositiveHomogeneity, Convexity, LawInvariance, ComonotonicAdditivity] {
                    if rc.contains(&ax) && dc.contains(&ax) {
                        out.insert(ax);
                    }
                }
                // Monotonicity and limitedness of a composition are not
                // knowable from the components alone; they are what the
                // harness and the beta calibration establish empirically.
                out
            }
            RiskFunctional::LossDeviation { rho, beta, .. } => {
                let rc = rho.claimed_axioms();
                if *beta == 0.0 {
                    return rc;
                }
                let mut out = BTreeSet::new();
                for ax in [TranslationInvariance, PositiveHomogeneity, Subadditivity, Convexity, LawInvariance] {
                    if rc.contains(&ax) {
                        out.insert(ax);
                    }
                }
                if rc.contains(&Limitedness) {
                    out.insert(Limitedness);
                    if out.contains(&Subadditivity) || out.contains(&Convexity) {
                        out.insert(Monotonicity);
                    }
                    if out.contains(&LawInvariance) && out.contains(&Convexity) {
                        out.insert(SsdConsistency);
                    }
                }
                out
            }
        }
    }

    pub fn strictly_exceeds_neg_expectation(&self) -> bool {
        match self {
            RiskFunctional::Measure(m) => m.strictly_exceeds_neg_expectation(),
            RiskFunctional::Compose { rho, dev, beta } => {
                rho.strictly_exceeds_neg_expectation()
                    || (*beta > 0.0 && dev.claimed_axioms().contains(&Axiom::NonNegativity))
            }
            RiskFunctional::LossDeviation { rho, beta, .. } => {
                rho.strictly_exceeds_neg_expectation()
                    || (*beta > 0.0 && matches!(**rho, RiskFunctional::Measure(RiskMeasure::NegExpectation)))
            }
        }
    }

    /// Whether any deviation in the tree collapses to the zero functional.
    pub fn contains_degenerate_deviation(&self) -> bool {
        match self {
            RiskFunctional::Measure(_) => false,
            RiskFunctional::Compose { rho, dev, beta } => {
                (*beta > 0.0 && dev.contains_degenerate())
                    || rho.contains_degenerate_deviation()
            }
            RiskFunctional::LossDeviation { rho, .. } => rho.contains_degenerate_deviation(),
        }
    }
}

impl Functional {
    pub fn validate(&self) -> Result<()> {
        match self {
            Functional::Risk(r) => r.validate(),
            Functional::Deviation(d) => d.validate(),
        }
    }

    pub fn evaluate(&self, d: &EmpiricalDistribution) -> Result<f64> {
        match self {
            Functional::Risk(r) => r.evaluate(d),
            Functional::Deviation(dev) => dev.evaluate(d),
        }
    }

    pub fn is_risk(&self) -> bool {
        matches!(self, Functional::Risk(_))
    }

    pub fn claimed_axioms(&self) -> BTreeSet<Axiom> {
        match self {
            Functional::Risk(r) => r.claimed_axioms(),
            Functional::Deviation(d) => d.claimed_axioms(),
        }
    }

    pub fn contains_degenerate_deviation(&self) -> bool {
        match self {
            Functional::Risk(r) => r.contains_degenerate_deviation(),
            Functional::Deviation(d) => d.contains_degenerate(),
        }
    }
}

/// Evaluate `rho(d) + beta * D(d)`.
pub fn evaluate_composition(
    d: &EmpiricalDistribution,
    rho: &RiskFunctional,
    dev: &DeviationMeasure,
    beta: f64,
) -> Result<f64> {
    Ok(rho.evaluate(d)? + beta * dev.evaluate(d)?)
}

/// Loss-deviation: `rho(X) + beta * ||(X - rho*(X))^-||_p`, penalizing
/// dispersion of outcomes below the level `rho*(X) = -rho(X)`.
///
/// `rho*` is recomputed per distribution, making this a nonlinear
/// functional of the input rather than a fixed-threshold shortfall norm.
pub fn loss_deviation(
    d: &EmpiricalDistribution,
    rho: &RiskFunctional,
    beta: f64,
    p: f64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::Domain(format!(
            "loss-deviation beta must lie in [0,1], got {beta}"
        )));
    }
    let risk = rho.evaluate(d)?;
    let target = -risk; // rho*
    let penalty = d.p_norm(|x| (x - target).min(0.0), p)?;
    Ok(risk + beta * penalty)
}

/// Outcome of a limitedness check: whether `value <= -inf X`, with the
/// slack `-inf X - value` (negative slack quantifies the violation).
#[derive(Debug, Clone, serde::Serialize)]
pub struct LimitednessCheck {
    pub value: f64,
    pub bound: f64,
    pub slack: f64,
    pub limited: bool,
}

pub fn check_limitedness(
    d: &EmpiricalDistribution,
    f: &Functional,
    tolerance: f64,
) -> Result<LimitednessCheck> {
    let value = f.evaluate(d)?;
    let bound = -d.essential_inf();
    let slack = bound - value;
    Ok(LimitednessCheck {
        value,
        bound,
        slack,
        limited: slack >= -tolerance,
    })
}

/// Acceptance-set membership: `f(d) <= 0`. For compositions the equivalent
/// split `rho(d) <= -beta * D(d)` is reported alongside.
#[derive(Debug, Clone, serde::Serialize)]
pub struct AcceptanceCheck {
    pub member: bool,
    pub value: f64,
    pub rho_value: Option<f64>,
    pub deviation_term: Option<f64>,
}

pub fn acceptance_member(d: &EmpiricalDistribution, f: &Functional) -> Result<AcceptanceCheck> {
    let value = f.evaluate(d)?;
    let (rho_value, deviation_term) = match f {
        Functional::Risk(RiskFunctional::Compose { rho, dev, beta }) => {
            let r = rho.evaluate(d)?;
            (Some(r), Some(beta * dev.evaluate(d)?))
        }
        _ => (None, None),
    };
    Ok(AcceptanceCheck {
        member: value <= 0.0,
        value,
        rho_value,
        deviation_term,
    })
}
