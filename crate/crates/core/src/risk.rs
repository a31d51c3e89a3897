//! Base risk measures: functionals mapping a payoff distribution to a
//! capital requirement, where positive values signal loss potential.
//!
//! Every measure here is normalized (`rho(0) = 0`) and law invariant. The
//! catalog deliberately includes value-at-risk, which is not sub-additive,
//! as a negative control for the axiom harness.

use crate::axioms::Axiom;
use crate::error::{Error, Result};
use crate::scenario::EmpiricalDistribution;
use std::collections::BTreeSet;

/// A discrete probability measure on quantile levels in `(0, 1]`, the
/// mixing measure of a spectral risk measure.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMeasure {
    alphas: Vec<f64>,
    masses: Vec<f64>,
}

impl SpectralMeasure {
    pub fn new(alphas: Vec<f64>, masses: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() || alphas.len() != masses.len() {
            return Err(Error::validation(
                "spectral alphas and masses must be non-empty and of equal length",
            ));
        }
        let mut prev = 0.0;
        for &a in &alphas {
            if !(a > 0.0 && a <= 1.0) {
                return Err(Error::validation("spectral alphas must lie in (0,1]"));
            }
            if a <= prev {
                return Err(Error::validation("spectral alphas must be strictly increasing"));
            }
            prev = a;
        }
        let mut sum = 0.0;
        for &m in &masses {
            if m.is_nan() || m < 0.0 {
                return Err(Error::validation("spectral masses must be nonnegative"));
            }
            sum += m;
        }
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::validation("spectral masses must sum to 1"));
        }
        Ok(SpectralMeasure { alphas, masses })
    }

    pub fn point_mass(alpha: f64) -> Result<Self> {
        SpectralMeasure::new(vec![alpha], vec![1.0])
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// True when some mass sits strictly below level 1, i.e. the mixture
    /// genuinely looks into the tail.
    pub fn has_tail_mass(&self) -> bool {
        self.alphas
            .iter()
            .zip(&self.masses)
            .any(|(&a, &m)| a < 1.0 && m > 0.0)
    }
}

/// `-E[X]`: risk as the negated expected payoff.
pub fn neg_expectation(d: &EmpiricalDistribution) -> f64 {
    -d.expectation()
}

/// Value at risk at level `alpha`: the negated left quantile.
pub fn value_at_risk(d: &EmpiricalDistribution, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(format!(
            "var level must lie in (0, 1], got {alpha}"
        )));
    }
    Ok(-d.quantile(alpha)?)
}

/// Expected shortfall at level `alpha`: the negated average of the quantile
/// function over `(0, alpha]`, evaluated exactly on the step function. The
/// atom straddling `alpha` contributes fractionally, which is what makes
/// this the tail-average (integral) definition rather than the tail
/// conditional expectation; the two differ at non-lattice levels on
/// discrete spaces and only the integral form mixes consistently into
/// spectral representations.
pub fn expected_shortfall(d: &EmpiricalDistribution, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(format!(
            "expected shortfall level must lie in (0, 1], got {alpha}"
        )));
    }
    let mut remaining = alpha;
    let mut acc = 0.0;
    for k in 0..d.len() {
        let w = d.sorted_weight(k);
        let take = w.min(remaining);
        acc += d.sorted_outcome(k) * take;
        remaining -= take;
        if remaining <= 0.0 {
            break;
        }
    }
    Ok(-acc / alpha)
}

/// Entropic risk `(1/theta) log E[exp(-theta X)]`.
///
/// The exponent is shifted by `max(-X)` before exponentiation so the
/// largest term is exactly 1 and overflow cannot occur; reported values are
/// therefore reproducible bit-for-bit for a given platform libm.
pub fn entropic_risk(d: &EmpiricalDistribution, theta: f64) -> Result<f64> {
    if theta.is_nan() || theta <= 0.0 {
        return Err(Error::Domain(format!(
            "entropic aversion must be positive, got {theta}"
        )));
    }
    let m = -d.essential_inf(); // max(-X)
    let s: f64 = d
        .outcomes()
        .iter()
        .zip(d.weights())
        .map(|(&x, &w)| w * (-theta * x - theta * m).exp())
        .sum();
    Ok(m + s.ln() / theta)
}

/// Worst-case risk `-inf X = sup -X`.
pub fn worst_case_risk(d: &EmpiricalDistribution) -> f64 {
    -d.essential_inf()
}

/// Spectral risk: mixture of expected shortfalls under the given spectrum.
pub fn spectral_risk(d: &EmpiricalDistribution, m: &SpectralMeasure) -> f64 {
    m.alphas()
        .iter()
        .zip(m.masses())
        .map(|(&a, &w)| {
            // alphas are validated to lie in (0,1]
            w * expected_shortfall(d, a).expect("validated spectral level")
        })
        .sum()
}

/// Catalog entry for a base risk measure.
#[derive(Debug, Clone, PartialEq)]
pub enum RiskMeasure {
    NegExpectation,
    ValueAtRisk { alpha: f64 },
    ExpectedShortfall { alpha: f64 },
    Entropic { theta: f64 },
    WorstCase,
    Spectral(SpectralMeasure),
}

impl RiskMeasure {
    pub fn validate(&self) -> Result<()> {
        match self {
            RiskMeasure::NegExpectation | RiskMeasure::WorstCase => Ok(()),
            RiskMeasure::ValueAtRisk { alpha } | RiskMeasure::ExpectedShortfall { alpha } => {
                if alpha.is_finite() && *alpha > 0.0 && *alpha <= 1.0 {
                    Ok(())
                } else {
                    Err(Error::validation("alpha must lie in (0,1]"))
                }
            }
            RiskMeasure::Entropic { theta } => {
                if theta.is_finite() && *theta > 0.0 {
                    Ok(())
                } else {
                    Err(Error::validation("theta must be positive"))
                }
            }
            // SpectralMeasure enforces its invariants at construction, but a
            // hand-built value could still carry raw fields; re-check.
            RiskMeasure::Spectral(m) => {
                SpectralMeasure::new(m.alphas().to_vec(), m.masses().to_vec()).map(|_| ())
            }
        }
    }

    pub fn evaluate(&self, d: &EmpiricalDistribution) -> Result<f64> {
        match self {
            RiskMeasure::NegExpectation => Ok(neg_expectation(d)),
            RiskMeasure::ValueAtRisk { alpha } => value_at_risk(d, *alpha),
            RiskMeasure::ExpectedShortfall { alpha } => expected_shortfall(d, *alpha),
            RiskMeasure::Entropic { theta } => entropic_risk(d, *theta),
            RiskMeasure::WorstCase => Ok(worst_case_risk(d)),
            RiskMeasure::Spectral(m) => Ok(spectral_risk(d, m)),
        }
    }

    /// Axioms this measure is known to satisfy, derived from its kind so
    /// the claim set can never drift out of sync with the catalog.
    pub fn claimed_axioms(&self) -> BTreeSet<Axiom> {
        use Axiom::*;
        let coherent = [
            Monotonicity,
            TranslationInvariance,
            Subadditivity,
            PositiveHomogeneity,
            Convexity,
            LawInvariance,
            Limitedness,
        ];
        match self {
            RiskMeasure::NegExpectation
            | RiskMeasure::WorstCase
            | RiskMeasure::ExpectedShortfall { .. }
            | RiskMeasure::Spectral(_) => coherent
                .into_iter()
                .chain([ComonotonicAdditivity, SsdConsistency])
                .collect(),
            RiskMeasure::ValueAtRisk { .. } => [
                Monotonicity,
                TranslationInvariance,
                PositiveHomogeneity,
                LawInvariance,
                ComonotonicAdditivity,
                Limitedness,
            ]
            .into_iter()
            .collect(),
            RiskMeasure::Entropic { .. } => [
                Monotonicity,
                TranslationInvariance,
                Convexity,
                LawInvariance,
                Limitedness,
                SsdConsistency,
            ]
            .into_iter()
            .collect(),
        }
    }

    /// Whether the measure strictly exceeds the negative expectation on
    /// every non-constant position. Deviations induced from measures
    /// without this property degenerate to zero.
    pub fn strictly_exceeds_neg_expectation(&self) -> bool {
        match self {
            RiskMeasure::NegExpectation | RiskMeasure::ValueAtRisk { .. } => false,
            RiskMeasure::ExpectedShortfall { alpha } => *alpha < 1.0,
            RiskMeasure::Entropic { .. } | RiskMeasure::WorstCase => true,
            RiskMeasure::Spectral(m) => m.has_tail_mass(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three() -> EmpiricalDistribution {
        EmpiricalDistribution::equiprobable(vec![-1.0, 0.0, 1.0]).unwrap()
    }

    fn skew() -> EmpiricalDistribution {
        EmpiricalDistribution::new(vec![10.0, 0.0], vec![0.1, 0.9]).unwrap()
    }

    #[test]
    fn neg_expectation_examples() {
        let sym = EmpiricalDistribution::equiprobable(vec![-1.0, 1.0]).unwrap();
        assert_eq!(neg_expectation(&sym), 0.0);
        assert!((neg_expectation(&skew()) + 1.0).abs() < 1e-15);
        assert_eq!(neg_expectation(&EmpiricalDistribution::constant(2.5).unwrap()), -2.5);
    }

    #[test]
    fn var_examples() {
        assert_eq!(value_at_risk(&three(), 1.0 / 3.0).unwrap(), 1.0);
        let c = EmpiricalDistribution::constant(0.7).unwrap();
        assert_eq!(value_at_risk(&c, 0.05).unwrap(), -0.7);
        assert_eq!(value_at_risk(&three(), 1.0).unwrap(), -1.0);
        assert!(value_at_risk(&three(), 0.0).is_err());
        assert!(value_at_risk(&three(), 1.2).is_err());
    }

    #[test]
    fn expected_shortfall_examples() {
        // -3 * integral of (-1) over (0, 1/3]
        assert!((expected_shortfall(&three(), 1.0 / 3.0).unwrap() - 1.0).abs() < 1e-15);
        // -(3/2) * ((-1)(1/3) + 0*(1/3))
        assert!((expected_shortfall(&three(), 2.0 / 3.0).unwrap() - 0.5).abs() < 1e-15);
        let c = EmpiricalDistribution::constant(-2.0).unwrap();
        for a in [0.01, 0.5, 1.0] {
            assert_eq!(expected_shortfall(&c, a).unwrap(), 2.0);
        }
        assert!(expected_shortfall(&three(), 0.0).is_err());
    }

    #[test]
    fn es_fractional_atom() {
        // alpha = 1/2 takes the whole first atom and half the second
        let es = expected_shortfall(&three(), 0.5).unwrap();
        assert!((es - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn entropic_examples() {
        let c = EmpiricalDistribution::constant(1.25).unwrap();
        assert!((entropic_risk(&c, 3.0).unwrap() + 1.25).abs() < 1e-12);

        let sym = EmpiricalDistribution::equiprobable(vec![-1.0, 1.0]).unwrap();
        let expected = 1.0_f64.cosh().ln();
        assert!((entropic_risk(&sym, 1.0).unwrap() - expected).abs() < 1e-12);

        // theta -> 0 limit recovers the negated mean
        let d = skew();
        assert!((entropic_risk(&d, 1e-8).unwrap() - neg_expectation(&d)).abs() < 1e-6);
        assert!(entropic_risk(&d, 0.0).is_err());
    }

    #[test]
    fn entropic_no_overflow_on_large_losses() {
        let d = EmpiricalDistribution::equiprobable(vec![-500.0, 500.0]).unwrap();
        let v = entropic_risk(&d, 10.0).unwrap();
        assert!(v.is_finite());
        assert!(v <= 500.0 + 1e-9);
    }

    #[test]
    fn worst_case_examples() {
        assert_eq!(worst_case_risk(&three()), 1.0);
        assert_eq!(worst_case_risk(&EmpiricalDistribution::constant(3.0).unwrap()), -3.0);
        assert_eq!(worst_case_risk(&skew()), 0.0);
    }

    #[test]
    fn spectral_examples() {
        let d = three();
        // point mass at alpha = 1 is the negated mean for every input
        let m1 = SpectralMeasure::point_mass(1.0).unwrap();
        assert!((spectral_risk(&d, &m1) - neg_expectation(&d)).abs() < 1e-15);
        assert!((spectral_risk(&skew(), &m1) - neg_expectation(&skew())).abs() < 1e-15);

        let ma = SpectralMeasure::point_mass(1.0 / 3.0).unwrap();
        assert!((spectral_risk(&d, &ma) - expected_shortfall(&d, 1.0 / 3.0).unwrap()).abs() < 1e-15);

        let mix = SpectralMeasure::new(vec![1.0 / 3.0, 1.0], vec![0.5, 0.5]).unwrap();
        assert!((spectral_risk(&d, &mix) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn spectral_validation() {
        assert!(SpectralMeasure::new(vec![0.5, 0.2], vec![0.5, 0.5]).is_err());
        assert!(SpectralMeasure::new(vec![0.0], vec![1.0]).is_err());
        assert!(SpectralMeasure::new(vec![0.5], vec![0.9]).is_err());
        assert!(SpectralMeasure::new(vec![0.2, 0.5], vec![0.7, -0.3]).is_err());
    }

    #[test]
    fn es_bracketed_by_mean_and_worst_case() {
        let ds = [three(), skew()];
        for d in &ds {
            for a in [0.05, 0.3, 0.7, 1.0] {
                let es = expected_shortfall(d, a).unwrap();
                assert!(neg_expectation(d) <= es + 1e-9);
                assert!(es <= worst_case_risk(d) + 1e-9);
                assert!(es + 1e-12 >= value_at_risk(d, a).unwrap());
            }
        }
    }

    #[test]
    fn es_nonincreasing_in_alpha() {
        let d = skew();
        let mut prev = f64::INFINITY;
        for k in 1..=50 {
            let es = expected_shortfall(&d, k as f64 / 50.0).unwrap();
            assert!(es <= prev + 1e-12);
            prev = es;
        }
    }

    #[test]
    fn entropic_nondecreasing_in_theta() {
        let d = EmpiricalDistribution::equiprobable(vec![-2.0, 0.5, 3.0]).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for theta in [0.01, 0.1, 0.5, 1.0, 5.0, 20.0] {
            let v = entropic_risk(&d, theta).unwrap();
            assert!(v >= prev - 1e-12);
            prev = v;
        }
    }

    #[test]
    fn spectral_uniform_grid_matches_double_integral_oracle() {
        // Independent route: brute-force the double integral by evaluating
        // the step quantile function directly at breakpoints.
        fn es_oracle(d: &EmpiricalDistribution, alpha: f64) -> f64 {
            let mut total = 0.0;
            let mut lo = 0.0;
            let cum = d.sorted_view().cumulative_weights();
            for (k, &c) in cum.iter().enumerate() {
                let hi = c.min(alpha);
                if hi > lo {
                    total += d.sorted_outcome(k) * (hi - lo);
                    lo = hi;
                }
                if lo >= alpha {
                    break;
                }
            }
            -total / alpha
        }

        let d = EmpiricalDistribution::new(
            vec![4.0, -3.0, 0.25, 1.5],
            vec![0.4, 0.1, 0.3, 0.2],
        )
        .unwrap();
        let grid: Vec<f64> = (1..=10).map(|k| k as f64 / 10.0).collect();
        let masses = vec![0.1; 10];
        let m = SpectralMeasure::new(grid.clone(), masses).unwrap();
        let direct: f64 = grid.iter().map(|&a| 0.1 * es_oracle(&d, a)).sum();
        assert!((spectral_risk(&d, &m) - direct).abs() < 1e-9);
    }
}
