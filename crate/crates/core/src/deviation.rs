//! Deviation measures: nonnegative functionals quantifying dispersion
//! around the mean, zero exactly on constants.

use crate::axioms::Axiom;
use crate::compose::RiskFunctional;
use crate::error::{Error, Result};
use crate::scenario::EmpiricalDistribution;
use std::collections::BTreeSet;

/// Full p-deviation `||X - E[X]||_p` (the p-norm generalization of the
/// standard deviation). Not lower range dominated: a sufficiently skewed
/// position pushes it above `E[X] - inf X`.
pub fn full_p_deviation(d: &EmpiricalDistribution, p: f64) -> Result<f64> {
    let mean = d.expectation();
    d.p_norm(|x| x - mean, p)
}

/// Lower p-semideviation `||(X - E[X])^-||_p`: dispersion of outcomes
/// below the mean only.
pub fn lower_p_semideviation(d: &EmpiricalDistribution, p: f64) -> Result<f64> {
    let mean = d.expectation();
    d.p_norm(|x| (x - mean).min(0.0), p)
}

/// Deviation induced by a risk measure: `rho` applied to the mean-centered
/// position. For translation-invariant `rho` this equals `rho(X) + E[X]`.
pub fn induced_deviation(d: &EmpiricalDistribution, rho: &RiskFunctional) -> Result<f64> {
    let centered = d.shift(-d.expectation())?;
    rho.evaluate(&centered)
}

/// The dominating bound of the Lower Range Dominance axiom,
/// `E[X] - inf X`, itself a co-monotone generalized deviation measure.
pub fn range_deviation(d: &EmpiricalDistribution) -> f64 {
    d.expectation() - d.essential_inf()
}

/// Catalog entry for a deviation measure.
#[derive(Debug, Clone, PartialEq)]
pub enum DeviationMeasure {
    FullDeviation { p: f64 },
    LowerSemideviation { p: f64 },
    Induced { rho: Box<RiskFunctional> },
    Range,
}

impl DeviationMeasure {
    pub fn validate(&self) -> Result<()> {
        match self {
            DeviationMeasure::FullDeviation { p } | DeviationMeasure::LowerSemideviation { p } => {
                if p.is_nan() || *p < 1.0 {
                    Err(Error::validation("p must be >= 1 (or inf)"))
                } else {
                    Ok(())
                }
            }
            DeviationMeasure::Induced { rho } => rho.validate(),
            DeviationMeasure::Range => Ok(()),
        }
    }

    pub fn evaluate(&self, d: &EmpiricalDistribution) -> Result<f64> {
        match self {
            DeviationMeasure::FullDeviation { p } => full_p_deviation(d, *p),
            DeviationMeasure::LowerSemideviation { p } => lower_p_semideviation(d, *p),
            DeviationMeasure::Induced { rho } => induced_deviation(d, rho),
            DeviationMeasure::Range => Ok(range_deviation(d)),
        }
    }

    /// An induced deviation collapses to the zero functional when its
    /// generator does not strictly exceed the negative expectation; callers
    /// should surface this rather than silently compose a zero deviation.
    pub fn is_degenerate(&self) -> bool {
        match self {
            DeviationMeasure::Induced { rho } => !rho.strictly_exceeds_neg_expectation(),
            _ => false,
        }
    }

    /// This deviation, or any deviation nested in its generator, is
    /// degenerate.
    pub fn contains_degenerate(&self) -> bool {
        self.is_degenerate()
            || match self {
                DeviationMeasure::Induced { rho } => rho.contains_degenerate_deviation(),
                _ => false,
            }
    }

    pub fn claimed_axioms(&self) -> BTreeSet<Axiom> {
        use Axiom::*;
        match self {
            DeviationMeasure::FullDeviation { .. } => [
                NonNegativity,
                TranslationInsensitivity,
                Subadditivity,
                PositiveHomogeneity,
                Convexity,
                LawInvariance,
            ]
            .into_iter()
            .collect(),
            DeviationMeasure::LowerSemideviation { .. } => [
                NonNegativity,
                TranslationInsensitivity,
                Subadditivity,
                PositiveHomogeneity,
                Convexity,
                LawInvariance,
                LowerRangeDominance,
            ]
            .into_iter()
            .collect(),
            DeviationMeasure::Range => [
                NonNegativity,
                TranslationInsensitivity,
                Subadditivity,
                PositiveHomogeneity,
                Convexity,
                LawInvariance,
                LowerRangeDominance,
                ComonotonicAdditivity,
            ]
            .into_iter()
            .collect(),
            DeviationMeasure::Induced { rho } => {
                let rc = rho.claimed_axioms();
                let mut out = BTreeSet::new();
                out.insert(TranslationInsensitivity);
                if rc.contains(&Subadditivity) {
                    out.insert(Subadditivity);
                }
                if rc.contains(&PositiveHomogeneity) {
                    out.insert(PositiveHomogeneity);
                }
                if rc.contains(&Convexity) {
                    out.insert(Convexity);
                }
                if rc.contains(&LawInvariance) {
                    out.insert(LawInvariance);
                }
                if rc.contains(&ComonotonicAdditivity) {
                    out.insert(ComonotonicAdditivity);
                }
                // rho(X - E[X]) <= -inf(X - E[X]) = E[X] - inf X whenever
                // rho is limited, which is exactly Lower Range Dominance.
                if rc.contains(&Limitedness) {
                    out.insert(LowerRangeDominance);
                }
                if rho.strictly_exceeds_neg_expectation() {
                    out.insert(NonNegativity);
                }
                out
            }
        }
    }
}
