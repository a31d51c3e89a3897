//! Discrete spectrum recovery for law-invariant functionals.
//!
//! On `n` equiprobable atoms every law-invariant co-monotone coherent
//! functional is a mixture of expected shortfalls at the lattice levels
//! `k/n`: a linear functional of the sorted outcomes with nonincreasing,
//! nonnegative coefficients summing to one. The mixing measure relates to
//! the dual density through the level-truncated transform
//! `H(u) = integral of (1/alpha) dm(alpha) over (u, 1]`. Note the
//! truncation at `u`, which is what makes the inversion below triangular.
//!
//! Recovery evaluates the functional on the tail-indicator basis
//! `B_j = -1 on j atoms, 0 elsewhere` and takes second differences:
//! with `v_j = f(B_j)` one has `v_j - v_{j-1} = sum_{k>=j} m_k / k`, so
//! `m_j = j ((v_j - v_{j-1}) - (v_{j+1} - v_j))` and `m_n = n (v_n -
//! v_{n-1})`. Negative recovered masses are reported, never clipped: they
//! are the diagnostic that the functional is not co-monotone coherent.

use crate::compose::RiskFunctional;
use crate::error::{Error, Result};
use crate::risk::expected_shortfall;
use crate::sampler::trial_rng;
use crate::scenario::EmpiricalDistribution;
use rand::Rng;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct KusuokaAnalysis {
    pub atoms: usize,
    /// Lattice levels `k/n`, k = 1..=n.
    pub levels: Vec<f64>,
    /// Recovered (possibly signed) masses per level.
    pub masses: Vec<f64>,
    pub total_mass: f64,
    pub min_mass: f64,
    pub negative_mass: bool,
    /// Max |functional - recovered mixture| over the validation set.
    pub max_discrepancy: f64,
    /// Whether the functional stayed below the maximum loss on every
    /// validation draw.
    pub limited_on_family: bool,
    pub comonotone_coherent: bool,
    pub validation_count: usize,
    pub seed: u64,
    pub tolerance: f64,
}

/// Recover the implied spectrum of `f` on `atoms` equiprobable scenarios
/// and re-evaluate the mixture on a seeded validation family.
pub fn kusuoka_consistency(
    f: &RiskFunctional,
    atoms: usize,
    validation_count: usize,
    seed: u64,
    tolerance: f64,
) -> Result<KusuokaAnalysis> {
    f.validate()?;
    if atoms < 1 {
        return Err(Error::Config("spectrum recovery needs at least one atom".into()));
    }
    if !f.claimed_axioms().contains(&crate::axioms::Axiom::LawInvariance) {
        return Err(Error::Config(
            "spectrum recovery applies to law-invariant functionals only".into(),
        ));
    }
    let n = atoms;

    // v[j] = f(B_j), B_j = j atoms at -1, the rest at 0
    let mut v = Vec::with_capacity(n + 1);
    v.push(0.0);
    for j in 1..=n {
        let mut outcomes = vec![-1.0; j];
        outcomes.resize(n, 0.0);
        let basis = EmpiricalDistribution::equiprobable(outcomes)?;
        v.push(f.evaluate(&basis)?);
    }

    let increments: Vec<f64> = (1..=n).map(|j| v[j] - v[j - 1]).collect();
    let mut masses = Vec::with_capacity(n);
    for j in 1..=n {
        let g_next = if j < n { increments[j] } else { 0.0 };
        masses.push(j as f64 * (increments[j - 1] - g_next));
    }
    let levels: Vec<f64> = (1..=n).map(|j| j as f64 / n as f64).collect();
    let total_mass: f64 = masses.iter().sum();
    let min_mass = masses.iter().fold(f64::INFINITY, |m, &x| m.min(x));
    let negative_mass = min_mass < -tolerance;

    let mut max_discrepancy = 0.0_f64;
    let mut limited_on_family = true;
    for i in 0..validation_count {
        let mut rng = trial_rng(seed, 200, i as u64);
        let scale = 10.0_f64.powf(rng.random_range(-1.0..1.0));
        let outcomes: Vec<f64> = (0..n).map(|_| scale * rng.random_range(-1.0..1.0)).collect();
        let d = EmpiricalDistribution::equiprobable(outcomes)?;
        let direct = f.evaluate(&d)?;
        let mixture: f64 = levels
            .iter()
            .zip(&masses)
            .map(|(&a, &m)| m * expected_shortfall(&d, a).expect("lattice level"))
            .sum();
        max_discrepancy = max_discrepancy.max((direct - mixture).abs());
        if direct > -d.essential_inf() + tolerance * direct.abs().max(1.0) {
            limited_on_family = false;
        }
    }

    Ok(KusuokaAnalysis {
        atoms: n,
        levels,
        masses,
        total_mass,
        min_mass,
        negative_mass,
        max_discrepancy,
        limited_on_family,
        comonotone_coherent: !negative_mass && max_discrepancy <= tolerance,
        validation_count,
        seed,
        tolerance,
    })
}
