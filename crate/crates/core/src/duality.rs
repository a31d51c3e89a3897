//! Dual representations on finite scenario spaces.
//!
//! A coherent risk measure is a supremum of `E_Q[-X]` over a closed convex
//! set of densities `dQ/dP`; convex measures subtract a penalty `gamma(Q)`.
//! Deviations use the mirrored form `E_P[X] - inf_Q E_Q[X]`. On a finite
//! space a density is a nonnegative vector with unit weighted mass, so both
//! sides of every representation can be checked concretely: analytic
//! maximizers constructed here must attain the primal value, and an
//! independent projected local search bounded by weak duality must never
//! exceed it.
//!
//! Density constructions:
//! - expected shortfall: greedy fill of `1/alpha` over the worst outcomes,
//!   fractional on the atom straddling `alpha`;
//! - mean-plus-semideviation: `1 + beta (E[W] - W)` with `W <= 0`,
//!   `||W||_q <= 1` the dual-norm witness of the shortfall norm (this is
//!   the only orientation of the `W` term that keeps the density
//!   nonnegative for `W <= 0`, and the attainment checks confirm it);
//! - entropic: `dQ/dP` proportional to `exp(-theta X)` with relative
//!   entropy penalty;
//! - loss-deviation: `q_rho (1 + beta E[W]) - beta W`;
//! - composition: `q_rho + q_D - 1`, nonnegativity of which is enforced at
//!   runtime because it is exactly what the composed representation's
//!   hypotheses guarantee.

use crate::compose::{loss_deviation, Functional, RiskFunctional};
use crate::deviation::DeviationMeasure;
use crate::error::{Error, Result};
use crate::risk::{expected_shortfall, RiskMeasure};
use crate::sampler::mix_seed;
use crate::scenario::EmpiricalDistribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

const DENSITY_NEG_TOL: f64 = 1e-12;
const MASS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Analytic,
    Search,
}

/// A candidate density `dQ/dP` on the scenario atoms, in original atom
/// order.
#[derive(Debug, Clone, Serialize)]
pub struct DualDensity {
    pub values: Vec<f64>,
    /// Penalty `gamma(Q)` for convex representations; `None` for coherent
    /// ones.
    pub penalty: Option<f64>,
    pub provenance: Provenance,
}

impl DualDensity {
    pub fn analytic(values: Vec<f64>) -> Self {
        DualDensity {
            values,
            penalty: None,
            provenance: Provenance::Analytic,
        }
    }

    pub fn validate(&self, d: &EmpiricalDistribution) -> Result<()> {
        if self.values.len() != d.len() {
            return Err(Error::Duality(format!(
                "density has {} entries for {} atoms",
                self.values.len(),
                d.len()
            )));
        }
        if let Some(&v) = self.values.iter().find(|&&v| v < -DENSITY_NEG_TOL) {
            return Err(Error::Duality(format!("density is negative at {v}")));
        }
        let mass = self.mass(d);
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(Error::Duality(format!(
                "density mass is {mass}, expected 1 within {MASS_TOL:e}"
            )));
        }
        if let Some(p) = self.penalty {
            if p.is_nan() || p < -MASS_TOL {
                return Err(Error::Duality(format!("penalty {p} is negative")));
            }
        }
        Ok(())
    }

    pub fn mass(&self, d: &EmpiricalDistribution) -> f64 {
        self.values
            .iter()
            .zip(d.weights())
            .map(|(q, w)| q * w)
            .sum()
    }

    /// `E_Q[-X]` minus the penalty when present.
    pub fn dual_value(&self, d: &EmpiricalDistribution) -> f64 {
        let e: f64 = self
            .values
            .iter()
            .zip(d.weights())
            .zip(d.outcomes())
            .map(|((q, w), x)| -q * w * x)
            .sum();
        e - self.penalty.unwrap_or(0.0)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstraintResidual {
    pub constraint: String,
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DualWitnessReport {
    pub primal_value: f64,
    pub dual_value: f64,
    /// Signed `dual - primal`; attainment means `|gap|` within tolerance,
    /// weak duality means the gap never exceeds `+1e-9`.
    pub gap: f64,
    pub density: DualDensity,
    pub constraint_residuals: Vec<ConstraintResidual>,
    /// Weighted conjugate-norm of the density when a conjugate exponent is
    /// meaningful for the representation.
    pub q_norm: Option<f64>,
    /// Degenerate inputs (constant distributions) where any admissible
    /// density attains the value.
    pub degenerate: bool,
}

fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

fn weighted_q_norm(d: &EmpiricalDistribution, values: &[f64], q: f64) -> f64 {
    if q.is_infinite() {
        values.iter().fold(0.0, |m, v| m.max(v.abs()))
    } else if q == 1.0 {
        values
            .iter()
            .zip(d.weights())
            .map(|(v, w)| v.abs() * w)
            .sum()
    } else {
        let s: f64 = values
            .iter()
            .zip(d.weights())
            .map(|(v, w)| v.abs().powf(q) * w)
            .sum();
        s.powf(1.0 / q)
    }
}

fn base_residuals(d: &EmpiricalDistribution, density: &DualDensity) -> Vec<ConstraintResidual> {
    vec![
        ConstraintResidual {
            constraint: "unit_mass".into(),
            residual: (density.mass(d) - 1.0).abs(),
        },
        ConstraintResidual {
            constraint: "nonnegativity".into(),
            residual: density
                .values
                .iter()
                .fold(0.0, |m, &v| m.max((-v).max(0.0))),
        },
    ]
}

fn finish_report(
    d: &EmpiricalDistribution,
    primal: f64,
    density: DualDensity,
    mut residuals: Vec<ConstraintResidual>,
    q_norm: Option<f64>,
    degenerate: bool,
) -> Result<DualWitnessReport> {
    density.validate(d)?;
    let dual = density.dual_value(d);
    let mut all = base_residuals(d, &density);
    all.append(&mut residuals);
    Ok(DualWitnessReport {
        primal_value: primal,
        dual_value: dual,
        gap: dual - primal,
        density,
        constraint_residuals: all,
        q_norm,
        degenerate,
    })
}

/// Greedy expected-shortfall maximizer: density `1/alpha` on the worst
/// outcomes, fractional on the straddling atom. Exact solution of the
/// linear program over the box `0 <= q <= 1/alpha` with unit mass.
pub fn es_density(d: &EmpiricalDistribution, alpha: f64) -> Result<Vec<f64>> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(format!(
            "expected shortfall level must lie in (0, 1], got {alpha}"
        )));
    }
    let mut density = vec![0.0; d.len()];
    let perm = d.sorted_view().permutation().to_vec();
    let mut remaining = alpha;
    for (k, &atom) in perm.iter().enumerate() {
        let w = d.sorted_weight(k);
        let take = w.min(remaining);
        if take > 0.0 {
            density[atom] = take / (alpha * w);
        }
        remaining -= take;
        if remaining <= 0.0 {
            break;
        }
    }
    Ok(density)
}

pub fn es_dual_witness(d: &EmpiricalDistribution, alpha: f64) -> Result<DualWitnessReport> {
    let primal = expected_shortfall(d, alpha)?;
    let values = es_density(d, alpha)?;
    let cap = 1.0 / alpha;
    let cap_excess = values.iter().fold(0.0_f64, |m, &q| m.max(q - cap));
    let q_norm = Some(weighted_q_norm(d, &values, f64::INFINITY));
    finish_report(
        d,
        primal,
        DualDensity::analytic(values),
        vec![ConstraintResidual {
            constraint: "density_cap".into(),
            residual: cap_excess.max(0.0),
        }],
        q_norm,
        false,
    )
}

/// Dual-norm witness of a nonnegative shortfall profile `s`: `W <= 0` with
/// `||W||_q <= 1` attaining `E[s . (-W)] = ||s||_p`.
fn shortfall_dual_witness(
    d: &EmpiricalDistribution,
    shortfall: &[f64],
    p: f64,
    norm: f64,
) -> Vec<f64> {
    let n = d.len();
    if norm <= 0.0 {
        return vec![0.0; n];
    }
    if p == 1.0 {
        return shortfall
            .iter()
            .map(|&s| if s > 0.0 { -1.0 } else { 0.0 })
            .collect();
    }
    if p.is_infinite() {
        let smax = shortfall.iter().fold(0.0_f64, |m, &s| m.max(s));
        let pmax: f64 = shortfall
            .iter()
            .zip(d.weights())
            .filter(|(&s, _)| s == smax)
            .map(|(_, &w)| w)
            .sum();
        return shortfall
            .iter()
            .map(|&s| if s == smax { -1.0 / pmax } else { 0.0 })
            .collect();
    }
    shortfall
        .iter()
        .map(|&s| -(s / norm).powf(p - 1.0))
        .collect()
}

fn expectation_of(d: &EmpiricalDistribution, values: &[f64]) -> f64 {
    values
        .iter()
        .zip(d.weights())
        .map(|(v, w)| v * w)
        .sum()
}

/// Analytic witness for the mean-plus-semideviation composition
/// `-E[X] + beta ||(X - E[X])^-||_p`: density `1 + beta (E[W] - W)`.
pub fn semidev_dual_witness(
    d: &EmpiricalDistribution,
    p: f64,
    beta: f64,
) -> Result<DualWitnessReport> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::Domain(format!("beta must lie in [0,1], got {beta}")));
    }
    let mean = d.expectation();
    let shortfall: Vec<f64> = d.outcomes().iter().map(|&x| (mean - x).max(0.0)).collect();
    let norm = d.p_norm(|x| (x - mean).min(0.0), p)?;
    let primal = -mean + beta * norm;
    let degenerate = norm == 0.0;
    let w_vec = shortfall_dual_witness(d, &shortfall, p, norm);
    let ew = expectation_of(d, &w_vec);
    let values: Vec<f64> = w_vec.iter().map(|&w| 1.0 + beta * (ew - w)).collect();
    let q = conjugate(p);
    let w_norm = weighted_q_norm(d, &w_vec, q);
    finish_report(
        d,
        primal,
        DualDensity::analytic(values.clone()),
        vec![ConstraintResidual {
            constraint: "w_dual_norm_excess".into(),
            residual: (w_norm - 1.0).max(0.0),
        }],
        Some(weighted_q_norm(d, &values, q)),
        degenerate,
    )
}

/// Analytic witness for the entropic risk: density proportional to
/// `exp(-theta X)` with penalty `(1/theta) * KL(Q || P)`.
pub fn entropic_dual_witness(d: &EmpiricalDistribution, theta: f64) -> Result<DualWitnessReport> {
    let primal = crate::risk::entropic_risk(d, theta)?;
    let (values, penalty) = entropic_density(d, theta)?;
    finish_report(
        d,
        primal,
        DualDensity {
            values,
            penalty: Some(penalty),
            provenance: Provenance::Analytic,
        },
        Vec::new(),
        None,
        false,
    )
}

fn entropic_density(d: &EmpiricalDistribution, theta: f64) -> Result<(Vec<f64>, f64)> {
    if theta.is_nan() || theta <= 0.0 {
        return Err(Error::Domain(format!(
            "entropic aversion must be positive, got {theta}"
        )));
    }
    let m = -d.essential_inf();
    let raw: Vec<f64> = d.outcomes().iter().map(|&x| (-theta * x - theta * m).exp()).collect();
    let z = expectation_of(d, &raw);
    let values: Vec<f64> = raw.iter().map(|r| r / z).collect();
    let penalty = relative_entropy(d, &values) / theta;
    Ok((values, penalty))
}

/// `KL(Q || P) = E_P[q ln q]` with `0 ln 0 = 0`.
pub fn relative_entropy(d: &EmpiricalDistribution, density: &[f64]) -> f64 {
    density
        .iter()
        .zip(d.weights())
        .map(|(&q, &w)| if q > 0.0 { w * q * q.ln() } else { 0.0 })
        .sum()
}

/// Pointwise composition of two valid witness densities: `q_rho + q_D - 1`.
/// Nonnegativity of the result is what the composed representation's
/// hypotheses guarantee, so a negative entry beyond tolerance rejects the
/// pair.
pub fn composed_dual_density(
    d: &EmpiricalDistribution,
    q_rho: &DualDensity,
    q_dev: &DualDensity,
) -> Result<DualDensity> {
    q_rho.validate(d)?;
    q_dev.validate(d)?;
    let values: Vec<f64> = q_rho
        .values
        .iter()
        .zip(&q_dev.values)
        .map(|(a, b)| a + b - 1.0)
        .collect();
    if let Some(&v) = values.iter().find(|&&v| v < -DENSITY_NEG_TOL) {
        return Err(Error::Duality(format!(
            "composed density is negative at {v}: the input densities do not come from sets \
             satisfying the composition hypotheses"
        )));
    }
    let values = values.iter().map(|&v| v.max(0.0)).collect();
    let penalty = match (q_rho.penalty, q_dev.penalty) {
        (None, None) => None,
        (a, b) => Some(a.unwrap_or(0.0) + b.unwrap_or(0.0)),
    };
    let composed = DualDensity {
        values,
        penalty,
        provenance: Provenance::Analytic,
    };
    composed.validate(d)?;
    Ok(composed)
}

/// Analytic witness density for a risk functional, with its penalty.
/// Value-at-risk has no dual representation (it is not convex).
pub fn risk_witness_density(
    d: &EmpiricalDistribution,
    rho: &RiskFunctional,
) -> Result<(Vec<f64>, f64)> {
    match rho {
        RiskFunctional::Measure(RiskMeasure::NegExpectation) => Ok((vec![1.0; d.len()], 0.0)),
        RiskFunctional::Measure(RiskMeasure::WorstCase) => {
            let min = d.essential_inf();
            let pmin: f64 = d
                .outcomes()
                .iter()
                .zip(d.weights())
                .filter(|(&x, _)| x == min)
                .map(|(_, &w)| w)
                .sum();
            Ok((
                d.outcomes()
                    .iter()
                    .map(|&x| if x == min { 1.0 / pmin } else { 0.0 })
                    .collect(),
                0.0,
            ))
        }
        RiskFunctional::Measure(RiskMeasure::ExpectedShortfall { alpha }) => {
            Ok((es_density(d, *alpha)?, 0.0))
        }
        RiskFunctional::Measure(RiskMeasure::Spectral(m)) => {
            // each per-level greedy maximizer is anti-co-monotone with the
            // outcomes, so the mixture attains the mixture value
            let mut values = vec![0.0; d.len()];
            for (&a, &mass) in m.alphas().iter().zip(m.masses()) {
                let q = es_density(d, a)?;
                for (v, qi) in values.iter_mut().zip(q) {
                    *v += mass * qi;
                }
            }
            Ok((values, 0.0))
        }
        RiskFunctional::Measure(RiskMeasure::Entropic { theta }) => {
            let (values, penalty) = entropic_density(d, *theta)?;
            Ok((values, penalty))
        }
        RiskFunctional::Measure(RiskMeasure::ValueAtRisk { .. }) => Err(Error::Duality(
            "value-at-risk is not convex and has no dual representation".into(),
        )),
        RiskFunctional::Compose { rho, dev, beta } => {
            let (q_rho, pen_rho) = risk_witness_density(d, rho)?;
            let (q_dev, pen_dev) = deviation_witness_density(d, dev)?;
            let scaled: Vec<f64> = q_dev.iter().map(|&q| 1.0 + beta * (q - 1.0)).collect();
            let composed = composed_dual_density(
                d,
                &DualDensity::analytic(q_rho),
                &DualDensity::analytic(scaled),
            )?;
            Ok((composed.values, pen_rho + beta * pen_dev))
        }
        RiskFunctional::LossDeviation { rho, beta, p } => {
            let (values, _, pen) = ld_witness_parts(d, rho, *beta, *p)?;
            if pen != 0.0 {
                return Err(Error::Duality(
                    "loss-deviation dual witness requires a coherent generator".into(),
                ));
            }
            Ok((values, 0.0))
        }
    }
}

/// Analytic witness density for a deviation in the
/// `E_P[X] - inf_Q E_Q[X]` representation. For the full deviation the
/// construction has no sign constraint on `W` and the resulting vector can
/// go negative; it is returned as-is and rejected downstream, which is
/// precisely how a non-lower-range-dominated deviation manifests here.
pub fn deviation_witness_density(
    d: &EmpiricalDistribution,
    dev: &DeviationMeasure,
) -> Result<(Vec<f64>, f64)> {
    match dev {
        DeviationMeasure::LowerSemideviation { p } => {
            let mean = d.expectation();
            let shortfall: Vec<f64> =
                d.outcomes().iter().map(|&x| (mean - x).max(0.0)).collect();
            let norm = d.p_norm(|x| (x - mean).min(0.0), *p)?;
            let w_vec = shortfall_dual_witness(d, &shortfall, *p, norm);
            let ew = expectation_of(d, &w_vec);
            Ok((w_vec.iter().map(|&w| 1.0 + (ew - w)).collect(), 0.0))
        }
        DeviationMeasure::FullDeviation { p } => {
            let mean = d.expectation();
            let centered: Vec<f64> = d.outcomes().iter().map(|&x| x - mean).collect();
            let norm = d.p_norm(|x| x - mean, *p)?;
            let w_vec: Vec<f64> = if norm <= 0.0 {
                vec![0.0; d.len()]
            } else if *p == 1.0 {
                centered.iter().map(|&c| c.signum()).collect()
            } else if p.is_infinite() {
                let cmax = centered.iter().fold(0.0_f64, |m, &c| m.max(c.abs()));
                let pmax: f64 = centered
                    .iter()
                    .zip(d.weights())
                    .filter(|(&c, _)| c.abs() == cmax)
                    .map(|(_, &w)| w)
                    .sum();
                centered
                    .iter()
                    .map(|&c| if c.abs() == cmax { c.signum() / pmax } else { 0.0 })
                    .collect()
            } else {
                centered
                    .iter()
                    .map(|&c| c.signum() * (c.abs() / norm).powf(p - 1.0))
                    .collect()
            };
            let ew = expectation_of(d, &w_vec);
            Ok((w_vec.iter().map(|&w| 1.0 + (ew - w)).collect(), 0.0))
        }
        DeviationMeasure::Induced { rho } => {
            // the induced deviation shares its generator's dual set; the
            // witness is the generator's maximizer at the centered input
            let centered = d.shift(-d.expectation())?;
            risk_witness_density(&centered, rho)
        }
        DeviationMeasure::Range => {
            let min = d.essential_inf();
            let pmin: f64 = d
                .outcomes()
                .iter()
                .zip(d.weights())
                .filter(|(&x, _)| x == min)
                .map(|(_, &w)| w)
                .sum();
            Ok((
                d.outcomes()
                    .iter()
                    .map(|&x| if x == min { 1.0 / pmin } else { 0.0 })
                    .collect(),
                0.0,
            ))
        }
    }
}

fn ld_witness_parts(
    d: &EmpiricalDistribution,
    rho: &RiskFunctional,
    beta: f64,
    p: f64,
) -> Result<(Vec<f64>, f64, f64)> {
    let (q_rho, pen) = risk_witness_density(d, rho)?;
    let risk = rho.evaluate(d)?;
    let target = -risk;
    let shortfall: Vec<f64> = d.outcomes().iter().map(|&x| (target - x).max(0.0)).collect();
    let norm = d.p_norm(|x| (x - target).min(0.0), p)?;
    let w_vec = shortfall_dual_witness(d, &shortfall, p, norm);
    let ew = expectation_of(d, &w_vec);
    let values: Vec<f64> = q_rho
        .iter()
        .zip(&w_vec)
        .map(|(&q, &w)| q * (1.0 + beta * ew) - beta * w)
        .collect();
    let w_norm = weighted_q_norm(d, &w_vec, conjugate(p));
    Ok((values, w_norm, pen))
}

/// Analytic witness for the loss-deviation `rho + beta ||(X - rho*)^-||_p`
/// with a coherent generator: density `q_rho (1 + beta E[W]) - beta W`.
pub fn ld_dual_witness(
    d: &EmpiricalDistribution,
    rho: &RiskFunctional,
    beta: f64,
    p: f64,
) -> Result<DualWitnessReport> {
    let primal = loss_deviation(d, rho, beta, p)?;
    let (values, w_norm, pen) = ld_witness_parts(d, rho, beta, p)?;
    if pen != 0.0 {
        return Err(Error::Duality(
            "loss-deviation dual witness requires a coherent generator".into(),
        ));
    }
    let q = conjugate(p);
    finish_report(
        d,
        primal,
        DualDensity::analytic(values.clone()),
        vec![ConstraintResidual {
            constraint: "w_dual_norm_excess".into(),
            residual: (w_norm - 1.0).max(0.0),
        }],
        Some(weighted_q_norm(d, &values, q)),
        false,
    )
}

/// Analytic dual witness for any functional in the catalog that has one.
pub fn dual_witness(d: &EmpiricalDistribution, f: &Functional) -> Result<DualWitnessReport> {
    f.validate()?;
    match f {
        Functional::Risk(rf) => {
            let primal = rf.evaluate(d)?;
            match rf {
                RiskFunctional::Measure(RiskMeasure::ExpectedShortfall { alpha }) => {
                    es_dual_witness(d, *alpha)
                }
                RiskFunctional::Measure(RiskMeasure::Entropic { theta }) => {
                    entropic_dual_witness(d, *theta)
                }
                RiskFunctional::LossDeviation { rho, beta, p } => ld_dual_witness(d, rho, *beta, *p),
                _ => {
                    let (values, penalty) = risk_witness_density(d, rf)?;
                    let penalty = (penalty != 0.0).then_some(penalty);
                    finish_report(
                        d,
                        primal,
                        DualDensity {
                            values,
                            penalty,
                            provenance: Provenance::Analytic,
                        },
                        Vec::new(),
                        None,
                        false,
                    )
                }
            }
        }
        Functional::Deviation(dev) => {
            let primal = dev.evaluate(d)?;
            let (values, penalty) = deviation_witness_density(d, dev)?;
            let density = DualDensity {
                values,
                penalty: (penalty != 0.0).then_some(penalty),
                provenance: Provenance::Analytic,
            };
            // deviation dual value: E_P[X] - E_Q[X] = E_P[X] + E_Q[-X]
            density.validate(d)?;
            let dual = d.expectation() + density.dual_value(d);
            let residuals = base_residuals(d, &density);
            Ok(DualWitnessReport {
                primal_value: primal,
                dual_value: dual,
                gap: dual - primal,
                density,
                constraint_residuals: residuals,
                q_norm: None,
                degenerate: primal == 0.0,
            })
        }
    }
}

/// A searchable dual set: a parametrization with a feasibility projection,
/// a density map, an optional penalty, and a membership predicate.
pub trait DualSearchSpace: Sync {
    fn label(&self) -> &'static str;
    fn param_dim(&self, d: &EmpiricalDistribution) -> usize;
    fn random_params(&self, d: &EmpiricalDistribution, rng: &mut ChaCha8Rng) -> Vec<f64>;
    fn project(&self, d: &EmpiricalDistribution, params: &mut [f64]);
    fn density(&self, d: &EmpiricalDistribution, params: &[f64]) -> Vec<f64>;
    fn penalty(&self, d: &EmpiricalDistribution, density: &[f64]) -> f64 {
        let _ = (d, density);
        0.0
    }
    fn is_member(&self, d: &EmpiricalDistribution, density: &[f64]) -> bool;
    /// Analytic maximizer parameters, used as a warm start.
    fn warm_start(&self, d: &EmpiricalDistribution) -> Option<Vec<f64>>;
}

/// Project a raw density vector onto `{q : lo <= q <= hi, sum q w = 1}` by
/// clipping plus a bisected uniform shift (the shifted-clip mass is
/// monotone in the shift).
fn project_box_mass(d: &EmpiricalDistribution, params: &mut [f64], lo: f64, hi: f64) {
    let clip = |v: f64| v.clamp(lo, hi);
    let mass = |shift: f64, params: &[f64]| -> f64 {
        params
            .iter()
            .zip(d.weights())
            .map(|(&q, &w)| clip(q + shift) * w)
            .sum()
    };
    let max_abs = params.iter().fold(1.0_f64, |m, &v| m.max(v.abs()));
    let mut a = -(max_abs + hi.min(1e12) + 1.0);
    let mut b = max_abs + hi.min(1e12) + 1.0;
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mass(mid, params) < 1.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    let shift = 0.5 * (a + b);
    for v in params.iter_mut() {
        *v = clip(*v + shift);
    }
}

fn density_is_valid(d: &EmpiricalDistribution, density: &[f64]) -> bool {
    density.iter().all(|&q| q >= -MASS_TOL)
        && (density
            .iter()
            .zip(d.weights())
            .map(|(q, w)| q * w)
            .sum::<f64>()
            - 1.0)
            .abs()
            <= MASS_TOL
}

/// The singleton set containing only the reference measure itself.
pub struct SingletonSpace;

impl DualSearchSpace for SingletonSpace {
    fn label(&self) -> &'static str {
        "singleton"
    }
    fn param_dim(&self, _d: &EmpiricalDistribution) -> usize {
        0
    }
    fn random_params(&self, _d: &EmpiricalDistribution, _rng: &mut ChaCha8Rng) -> Vec<f64> {
        Vec::new()
    }
    fn project(&self, _d: &EmpiricalDistribution, _params: &mut [f64]) {}
    fn density(&self, d: &EmpiricalDistribution, _params: &[f64]) -> Vec<f64> {
        vec![1.0; d.len()]
    }
    fn is_member(&self, _d: &EmpiricalDistribution, density: &[f64]) -> bool {
        density.iter().all(|&q| (q - 1.0).abs() <= MASS_TOL)
    }
    fn warm_start(&self, _d: &EmpiricalDistribution) -> Option<Vec<f64>> {
        Some(Vec::new())
    }
}

/// Expected-shortfall dual set: densities in `[0, 1/alpha]` with unit mass.
pub struct EsBoxSpace {
    pub alpha: f64,
}

impl DualSearchSpace for EsBoxSpace {
    fn label(&self) -> &'static str {
        "es_box"
    }
    fn param_dim(&self, d: &EmpiricalDistribution) -> usize {
        d.len()
    }
    fn random_params(&self, d: &EmpiricalDistribution, rng: &mut ChaCha8Rng) -> Vec<f64> {
        (0..d.len())
            .map(|_| rng.random_range(0.0..1.0 / self.alpha))
            .collect()
    }
    fn project(&self, d: &EmpiricalDistribution, params: &mut [f64]) {
        project_box_mass(d, params, 0.0, 1.0 / self.alpha);
    }
    fn density(&self, _d: &EmpiricalDistribution, params: &[f64]) -> Vec<f64> {
        params.to_vec()
    }
    fn is_member(&self, d: &EmpiricalDistribution, density: &[f64]) -> bool {
        density_is_valid(d, density)
            && density.iter().all(|&q| q <= 1.0 / self.alpha + MASS_TOL)
    }
    fn warm_start(&self, d: &EmpiricalDistribution) -> Option<Vec<f64>> {
        es_density(d, self.alpha).ok()
    }
}

/// The whole simplex of densities with the entropic penalty
/// `(1/theta) KL(Q || P)`.
pub struct EntropicSpace {
    pub theta: f64,
}

impl DualSearchSpace for EntropicSpace {
    fn label(&self) -> &'static str {
        "entropic_simplex"
    }
    fn param_dim(&self, d: &EmpiricalDistribution) -> usize {
        d.len()
    }
    fn random_params(&self, d: &EmpiricalDistribution, rng: &mut ChaCha8Rng) -> Vec<f64> {
        (0..d.len()).map(|_| rng.random_range(0.0..2.0)).collect()
    }
    fn project(&self, d: &EmpiricalDistribution, params: &mut [f64]) {
        project_box_mass(d, params, 0.0, f64::INFINITY);
    }
    fn density(&self, _d: &EmpiricalDistribution, params: &[f64]) -> Vec<f64> {
        params.to_vec()
    }
    fn penalty(&self, d: &EmpiricalDistribution, density: &[f64]) -> f64 {
        relative_entropy(d, density) / self.theta
    }
    fn is_member(&self, d: &EmpiricalDistribution, density: &[f64]) -> bool {
        density_is_valid(d, density)
    }
    fn warm_start(&self, d: &EmpiricalDistribution) -> Option<Vec<f64>> {
        entropic_density(d, self.theta).ok().map(|(q, _)| q)
    }
}

/// Mean-plus-semideviation dual family, parametrized directly by `W`:
/// densities `1 + beta (E[W] - W)` over `W <= 0`, `||W||_q <= 1`.
pub struct SemidevSpace {
    pub p: f64,
    pub beta: f64,
}

impl SemidevSpace {
    fn project_w(&self, d: &EmpiricalDistribution, w: &mut [f64]) {
        for v in w.iter_mut() {
            *v = v.min(0.0);
        }
        let q = conjugate(self.p);
        let norm = weighted_q_norm(d, w, q);
        if norm > 1.0 {
            for v in w.iter_mut() {
                *v /= norm;
            }
        }
    }

    fn density_from_w(&self, d: &EmpiricalDistribution, w: &[f64]) -> Vec<f64> {
        let ew = expectation_of(d, w);
        w.iter().map(|&wi| 1.0 + self.beta * (ew - wi)).collect()
    }
}

impl DualSearchSpace for SemidevSpace {
    fn label(&self) -> &'static str {
        "semideviation_family"
    }
    fn param_dim(&self, d: &EmpiricalDistribution) -> usize {
        d.len()
    }
    fn random_params(&self, d: &EmpiricalDistribution, rng: &mut ChaCha8Rng) -> Vec<f64> {
        (0..d.len()).map(|_| -rng.random_range(0.0..1.0)).collect()
    }
    fn project(&self, d: &EmpiricalDistribution, params: &mut [f64]) {
        self.project_w(d, params);
    }
    fn density(&self, d: &EmpiricalDistribution, params: &[f64]) -> Vec<f64> {
        self.density_from_w(d, params)
    }
    fn is_member(&self, d: &EmpiricalDistribution, density: &[f64]) -> bool {
        density_is_valid(d, density)
    }
    fn warm_start(&self, d: &EmpiricalDistribution) -> Option<Vec<f64>> {
        let mean = d.expectation();
        let shortfall: Vec<f64> = d.outcomes().iter().map(|&x| (mean - x).max(0.0)).collect();
        let norm = d.p_norm(|x| (x - mean).min(0.0), self.p).ok()?;
        Some(shortfall_dual_witness(d, &shortfall, self.p, norm))
    }
}

/// Loss-deviation dual family for an expected-shortfall generator:
/// parameters are a density in the ES box concatenated with `W`.
pub struct LdEsSpace {
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
}

impl DualSearchSpace for LdEsSpace {
    fn label(&self) -> &'static str {
        "loss_deviation_es_family"
    }
    fn param_dim(&self, d: &EmpiricalDistribution) -> usize {
        2 * d.len()
    }
    fn random_params(&self, d: &EmpiricalDistribution, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let mut v: Vec<f64> = (0..d.len())
            .map(|_| rng.random_range(0.0..1.0 / self.alpha))
            .collect();
        v.extend((0..d.len()).map(|_| -rng.random_range(0.0..1.0f64)));
        v
    }
    fn project(&self, d: &EmpiricalDistribution, params: &mut [f64]) {
        let n = d.len();
        project_box_mass(d, &mut params[..n], 0.0, 1.0 / self.alpha);
        let w = &mut params[n..];
        for v in w.iter_mut() {
            *v = v.min(0.0);
        }
        let q = conjugate(self.p);
        let norm = weighted_q_norm(d, w, q);
        if norm > 1.0 {
            for v in w.iter_mut() {
                *v /= norm;
            }
        }
    }
    fn density(&self, d: &EmpiricalDistribution, params: &[f64]) -> Vec<f64> {
        let n = d.len();
        let (q_rho, w) = params.split_at(n);
        let ew = expectation_of(d, w);
        q_rho
            .iter()
            .zip(w)
            .map(|(&q, &wi)| q * (1.0 + self.beta * ew) - self.beta * wi)
            .collect()
    }
    fn is_member(&self, d: &EmpiricalDistribution, density: &[f64]) -> bool {
        density_is_valid(d, density)
    }
    fn warm_start(&self, d: &EmpiricalDistribution) -> Option<Vec<f64>> {
        let mut params = es_density(d, self.alpha).ok()?;
        let risk = expected_shortfall(d, self.alpha).ok()?;
        let target = -risk;
        let shortfall: Vec<f64> = d.outcomes().iter().map(|&x| (target - x).max(0.0)).collect();
        let norm = d.p_norm(|x| (x - target).min(0.0), self.p).ok()?;
        params.extend(shortfall_dual_witness(d, &shortfall, self.p, norm));
        Some(params)
    }
}

/// Projected local search over a dual set, maximizing
/// `E_Q[-X] - penalty(Q)` from random feasible starts plus the analytic
/// warm start. A lower-bound certifier: the result can never exceed the
/// true supremum, and with the warm start it must match the analytic value.
pub fn brute_force_sup(
    d: &EmpiricalDistribution,
    space: &dyn DualSearchSpace,
    restarts: u32,
    seed: u64,
    primal_value: f64,
) -> Result<DualWitnessReport> {
    let objective = |params: &[f64]| -> Option<(f64, Vec<f64>)> {
        let density = space.density(d, params);
        if !space.is_member(d, &density) {
            return None;
        }
        let penalty = space.penalty(d, &density);
        let value: f64 = density
            .iter()
            .zip(d.weights())
            .zip(d.outcomes())
            .map(|((q, w), x)| -q * w * x)
            .sum::<f64>()
            - penalty;
        Some((value, density))
    };

    let mut best: Option<(f64, Vec<f64>, Vec<f64>)> = None;
    let mut consider = |params: &[f64]| {
        if let Some((value, density)) = objective(params) {
            let better = best.as_ref().is_none_or(|(b, _, _)| value > *b);
            if better {
                best = Some((value, params.to_vec(), density));
            }
        }
    };

    let mut starts: Vec<Vec<f64>> = Vec::new();
    if let Some(w) = space.warm_start(d) {
        starts.push(w);
    }
    for r in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(mix_seed(seed, 7_000 + r as u64));
        let mut params = space.random_params(d, &mut rng);
        space.project(d, &mut params);
        starts.push(params);
    }

    for start in starts {
        let mut params = start;
        space.project(d, &mut params);
        consider(&params);
        let Some((mut current, _)) = objective(&params) else {
            continue;
        };
        let mut step = 0.5;
        while step > 1e-10 {
            let mut improved = false;
            for i in 0..params.len() {
                for sign in [1.0, -1.0] {
                    let mut trial = params.clone();
                    trial[i] += sign * step;
                    space.project(d, &mut trial);
                    if let Some((value, _)) = objective(&trial) {
                        if value > current + 1e-15 {
                            current = value;
                            params = trial;
                            improved = true;
                        }
                    }
                }
            }
            consider(&params);
            if !improved {
                step *= 0.5;
            }
        }
    }

    let (value, _, density) = best.ok_or_else(|| {
        Error::Config(format!(
            "no feasible start found for dual set '{}'",
            space.label()
        ))
    })?;
    let penalty = space.penalty(d, &density);
    let density = DualDensity {
        values: density,
        penalty: (penalty != 0.0).then_some(penalty),
        provenance: Provenance::Search,
    };
    let residuals = base_residuals(d, &density);
    Ok(DualWitnessReport {
        primal_value,
        dual_value: value,
        gap: value - primal_value,
        density,
        constraint_residuals: residuals,
        q_norm: None,
        degenerate: false,
    })
}
