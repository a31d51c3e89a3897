//! Finite weighted scenario distributions.
//!
//! An [`EmpiricalDistribution`] is a vector of payoff outcomes with strictly
//! positive probability weights summing to one. Gains are positive, losses
//! negative. All quantile-based quantities use the left-continuous
//! generalized inverse `F^{-1}(u) = inf{x : F(x) >= u}` evaluated on the
//! step CDF, and every integral over quantile levels is an exact finite sum
//! over the step function's breakpoints.

use crate::error::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Tolerance for construction-time invariants (weight sums).
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Cached ascending ordering of the support with cumulative weights.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedView {
    /// Indices into the outcome vector, ordered so outcomes are nondecreasing.
    /// Ties keep original order (stable sort).
    permutation: Vec<usize>,
    /// Partial sums of the reordered weights; the last entry is 1 within
    /// [`WEIGHT_SUM_TOL`].
    cumulative: Vec<f64>,
}

impl SortedView {
    fn build(outcomes: &[f64], weights: &[f64]) -> Self {
        let mut permutation: Vec<usize> = (0..outcomes.len()).collect();
        permutation.sort_by(|&a, &b| outcomes[a].total_cmp(&outcomes[b]));
        let mut cumulative = Vec::with_capacity(weights.len());
        let mut acc = 0.0;
        for &i in &permutation {
            acc += weights[i];
            cumulative.push(acc);
        }
        SortedView {
            permutation,
            cumulative,
        }
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn cumulative_weights(&self) -> &[f64] {
        &self.cumulative
    }
}

/// A finite weighted scenario distribution. Immutable after construction;
/// every operation is pure, so values can be shared across threads freely.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    outcomes: Vec<f64>,
    weights: Vec<f64>,
    sorted: SortedView,
}

/// Plain serializable payload for a distribution, used in reports and
/// counterexample witnesses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioData {
    pub outcomes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl ScenarioData {
    pub fn to_distribution(&self) -> Result<EmpiricalDistribution> {
        EmpiricalDistribution::new(self.outcomes.clone(), self.weights.clone())
    }
}

impl EmpiricalDistribution {
    pub fn new(outcomes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if outcomes.is_empty() {
            return Err(Error::Scenario("outcome vector is empty".into()));
        }
        if outcomes.len() != weights.len() {
            return Err(Error::Scenario(format!(
                "{} outcomes but {} weights",
                outcomes.len(),
                weights.len()
            )));
        }
        if let Some(v) = outcomes.iter().find(|v| !v.is_finite()) {
            return Err(Error::Scenario(format!("non-finite outcome {v}")));
        }
        let mut sum = 0.0;
        for &w in &weights {
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::Scenario(format!(
                    "weights must be strictly positive, got {w}"
                )));
            }
            sum += w;
        }
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::Scenario(format!(
                "weights sum to {sum}, expected 1 within {WEIGHT_SUM_TOL:e}"
            )));
        }
        let sorted = SortedView::build(&outcomes, &weights);
        Ok(EmpiricalDistribution {
            outcomes,
            weights,
            sorted,
        })
    }

    /// Equal weights `1/n` on the given outcomes.
    pub fn equiprobable(outcomes: Vec<f64>) -> Result<Self> {
        let n = outcomes.len();
        if n == 0 {
            return Err(Error::Scenario("outcome vector is empty".into()));
        }
        let w = 1.0 / n as f64;
        EmpiricalDistribution::new(outcomes, vec![w; n])
    }

    /// Single atom at `c`.
    pub fn constant(c: f64) -> Result<Self> {
        EmpiricalDistribution::new(vec![c], vec![1.0])
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty supports
    }

    pub fn outcomes(&self) -> &[f64] {
        &self.outcomes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn sorted_view(&self) -> &SortedView {
        &self.sorted
    }

    /// Outcome at sorted position `k` (ascending).
    pub fn sorted_outcome(&self, k: usize) -> f64 {
        self.outcomes[self.sorted.permutation[k]]
    }

    /// Weight at sorted position `k`.
    pub fn sorted_weight(&self, k: usize) -> f64 {
        self.weights[self.sorted.permutation[k]]
    }

    pub fn data(&self) -> ScenarioData {
        ScenarioData {
            outcomes: self.outcomes.clone(),
            weights: self.weights.clone(),
        }
    }

    /// Left-continuous generalized inverse of the step CDF at level `u`:
    /// the smallest outcome whose cumulative weight reaches `u`. At a jump
    /// the lower value is returned, matching the infimum definition.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u <= 1.0) {
            return Err(Error::Domain(format!(
                "quantile level must lie in (0, 1], got {u}"
            )));
        }
        let k = self.sorted.cumulative.partition_point(|&c| c < u);
        // The final cumulative weight is 1 only within tolerance; any level
        // not reached by it belongs to the top atom.
        let k = k.min(self.len() - 1);
        Ok(self.sorted_outcome(k))
    }

    /// `E[X]` under the scenario weights.
    pub fn expectation(&self) -> f64 {
        self.outcomes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| x * w)
            .sum()
    }

    /// Weighted p-norm of a pointwise transform of the outcomes:
    /// `(E[|f(X)|^p])^{1/p}`, with the essential sup for `p = infinity`.
    pub fn p_norm(&self, transform: impl Fn(f64) -> f64, p: f64) -> Result<f64> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::Domain(format!("norm exponent must be >= 1, got {p}")));
        }
        if p.is_infinite() {
            return Ok(self
                .outcomes
                .iter()
                .map(|&x| transform(x).abs())
                .fold(0.0, f64::max));
        }
        if p == 1.0 {
            return Ok(self
                .outcomes
                .iter()
                .zip(&self.weights)
                .map(|(&x, w)| transform(x).abs() * w)
                .sum());
        }
        if p == 2.0 {
            let s: f64 = self
                .outcomes
                .iter()
                .zip(&self.weights)
                .map(|(&x, w)| {
                    let v = transform(x);
                    v * v * w
                })
                .sum();
            return Ok(s.sqrt());
        }
        let s: f64 = self
            .outcomes
            .iter()
            .zip(&self.weights)
            .map(|(&x, w)| transform(x).abs().powf(p) * w)
            .sum();
        Ok(s.powf(1.0 / p))
    }

    /// Minimum over the support (`inf X`).
    pub fn essential_inf(&self) -> f64 {
        self.sorted_outcome(0)
    }

    /// Maximum over the support (`sup X`).
    pub fn essential_sup(&self) -> f64 {
        self.sorted_outcome(self.len() - 1)
    }

    /// New distribution with every outcome mapped through `f`; weights are
    /// unchanged. `f` must produce finite values.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let outcomes: Vec<f64> = self.outcomes.iter().map(|&x| f(x)).collect();
        if let Some(v) = outcomes.iter().find(|v| !v.is_finite()) {
            return Err(Error::Scenario(format!(
                "transform produced non-finite outcome {v}"
            )));
        }
        let sorted = SortedView::build(&outcomes, &self.weights);
        Ok(EmpiricalDistribution {
            outcomes,
            weights: self.weights.clone(),
            sorted,
        })
    }

    pub fn shift(&self, c: f64) -> Result<Self> {
        self.map(|x| x + c)
    }

    pub fn scale(&self, lambda: f64) -> Result<Self> {
        self.map(|x| lambda * x)
    }

    pub fn negate(&self) -> Result<Self> {
        self.map(|x| -x)
    }

    /// Pointwise combination with another position on the same atoms.
    /// Requires identical weight vectors: scenario pairs only make sense as
    /// two payoff columns over one shared atom space.
    pub fn combine(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.weights != other.weights {
            return Err(Error::Scenario(
                "pairwise operations need payoffs on shared atoms with identical weights".into(),
            ));
        }
        let outcomes: Vec<f64> = self
            .outcomes
            .iter()
            .zip(&other.outcomes)
            .map(|(&a, &b)| f(a, b))
            .collect();
        if let Some(v) = outcomes.iter().find(|v| !v.is_finite()) {
            return Err(Error::Scenario(format!(
                "combination produced non-finite outcome {v}"
            )));
        }
        let sorted = SortedView::build(&outcomes, &self.weights);
        Ok(EmpiricalDistribution {
            outcomes,
            weights: self.weights.clone(),
            sorted,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, |a, b| a + b)
    }

    /// Reorder outcomes by a permutation of atom indices. Only meaningful on
    /// equiprobable spaces, where it preserves the distribution law.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.len() {
            return Err(Error::Scenario("permutation length mismatch".into()));
        }
        let mut seen = vec![false; self.len()];
        for &i in perm {
            if i >= self.len() || seen[i] {
                return Err(Error::Scenario("not a permutation".into()));
            }
            seen[i] = true;
        }
        let outcomes: Vec<f64> = perm.iter().map(|&i| self.outcomes[i]).collect();
        EmpiricalDistribution::new(outcomes, self.weights.clone())
    }

    /// Exact integral of the quantile function over `(0, t]`, the running
    /// lower partial moment of the sorted support. Piecewise linear in `t`
    /// with breakpoints at the cumulative weights.
    pub fn integrated_quantile(&self, t: f64) -> f64 {
        debug_assert!((0.0..=1.0 + WEIGHT_SUM_TOL).contains(&t));
        let mut acc = 0.0;
        let mut prev = 0.0;
        for (k, &c) in self.sorted.cumulative.iter().enumerate() {
            let x = self.sorted_outcome(k);
            if t <= c {
                return acc + x * (t - prev);
            }
            acc += x * (c - prev);
            prev = c;
        }
        // t beyond the last cumulative weight (FP shortfall at t = 1).
        acc
    }
}

/// Second-order stochastic dominance of `x` over `y`: the integrated
/// quantile function of `x` dominates that of `y` at every breakpoint of
/// either step function. Both integrands are piecewise constant, so the
/// difference of integrals is piecewise linear and checking breakpoints is
/// exact; comparisons allow a 1e-12 relative band for floating-point noise
/// at mathematical equality.
pub fn ssd_dominates(x: &EmpiricalDistribution, y: &EmpiricalDistribution) -> bool {
    let mut points: Vec<f64> = x
        .sorted_view()
        .cumulative_weights()
        .iter()
        .chain(y.sorted_view().cumulative_weights())
        .copied()
        .collect();
    points.push(1.0);
    points.sort_by(f64::total_cmp);
    points.dedup();
    for &t in &points {
        let t = t.min(1.0);
        if t <= 0.0 {
            continue;
        }
        let lx = x.integrated_quantile(t);
        let ly = y.integrated_quantile(t);
        let tol = 1e-12 * lx.abs().max(ly.abs()).max(1.0);
        if lx < ly - tol {
            return false;
        }
    }
    true
}

/// Whether two positions on shared atoms are co-monotone: every pair of
/// atoms satisfies `(X_i - X_j)(Y_i - Y_j) >= 0`. Exact sign check, no
/// tolerance.
pub fn is_comonotone(x: &EmpiricalDistribution, y: &EmpiricalDistribution) -> bool {
    if x.weights() != y.weights() {
        return false;
    }
    let xs = x.outcomes();
    let ys = y.outcomes();
    for i in 0..xs.len() {
        for j in (i + 1)..xs.len() {
            if (xs[i] - xs[j]) * (ys[i] - ys[j]) < 0.0 {
                return false;
            }
        }
    }
    true
}

/// Generate a co-monotone pair on `n` shared equiprobable atoms. Both
/// payoffs are nondecreasing functions of a common latent rank, so the
/// defining product inequality holds for every atom pair by construction.
pub fn comonotone_pair<R: Rng>(rng: &mut R, n: usize) -> Result<(EmpiricalDistribution, EmpiricalDistribution)> {
    if n == 0 {
        return Err(Error::Domain("scenario count must be at least 1".into()));
    }
    let scale_x = 10.0_f64.powf(rng.random_range(-1.0..1.0));
    let scale_y = 10.0_f64.powf(rng.random_range(-1.0..1.0));
    let mut xs: Vec<f64> = (0..n)
        .map(|_| scale_x * rng.random_range(-1.0..1.0))
        .collect();
    let mut ys: Vec<f64> = (0..n)
        .map(|_| scale_y * rng.random_range(-1.0..1.0))
        .collect();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    // A common latent rank per atom ties the two sorted ladders together.
    let mut ranks: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        ranks.swap(i, j);
    }
    let x_out: Vec<f64> = ranks.iter().map(|&r| xs[r]).collect();
    let y_out: Vec<f64> = ranks.iter().map(|&r| ys[r]).collect();
    Ok((
        EmpiricalDistribution::equiprobable(x_out)?,
        EmpiricalDistribution::equiprobable(y_out)?,
    ))
}
