//! Randomized scenario generation for the axiom harness and calibration.
//!
//! Uniform random payoffs almost never expose the interesting failures;
//! the families here deliberately include the shapes that break things:
//! heavy one-sided skew (one large atom against many zeros), mass
//! concentrated at the minimum over a sweep of tail sizes, and symmetric
//! two-point positions. Everything is driven by ChaCha streams seeded from
//! `(master seed, trial index)`, so trials are independent and replayable
//! in any order.

use crate::error::Result;
use crate::scenario::{comonotone_pair, EmpiricalDistribution};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// SplitMix64 step, used to derive independent per-trial seeds.
pub fn mix_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9e3779b97f4a7c15);
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

pub fn trial_rng(seed: u64, stream: u64, trial: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(mix_seed(seed, stream), trial))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    SymmetricTwoPoint,
    RightSkew,
    LeftSkew,
    UniformGrid,
    TailMass,
    WeightedRandom,
    EquiprobableRandom,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::SymmetricTwoPoint,
        Family::RightSkew,
        Family::LeftSkew,
        Family::UniformGrid,
        Family::TailMass,
        Family::WeightedRandom,
        Family::EquiprobableRandom,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            Family::SymmetricTwoPoint => "symmetric_two_point",
            Family::RightSkew => "right_skew",
            Family::LeftSkew => "left_skew",
            Family::UniformGrid => "uniform_grid",
            Family::TailMass => "tail_mass_at_min",
            Family::WeightedRandom => "weighted_random",
            Family::EquiprobableRandom => "equiprobable_random",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Sampler {
    pub max_dim: usize,
}

impl Sampler {
    pub fn new(max_dim: usize) -> Self {
        Sampler {
            max_dim: max_dim.max(1),
        }
    }

    /// Atom count, biased toward small supports where counterexamples live.
    fn dim<R: Rng>(&self, rng: &mut R) -> usize {
        if self.max_dim <= 2 {
            return self.max_dim;
        }
        let u: f64 = rng.random();
        2 + ((self.max_dim - 2) as f64 * u * u) as usize
    }

    fn scale<R: Rng>(&self, rng: &mut R) -> f64 {
        10.0_f64.powf(rng.random_range(-1.0..1.5))
    }

    /// A single distribution from a randomly chosen family, possibly with
    /// non-equal weights.
    pub fn distribution<R: Rng>(&self, rng: &mut R) -> EmpiricalDistribution {
        let family = Family::ALL[rng.random_range(0..Family::ALL.len())];
        self.from_family(rng, family)
    }

    pub fn from_family<R: Rng>(&self, rng: &mut R, family: Family) -> EmpiricalDistribution {
        let s = self.scale(rng);
        match family {
            Family::SymmetricTwoPoint => {
                EmpiricalDistribution::equiprobable(vec![-s, s]).expect("two atoms")
            }
            Family::RightSkew => {
                let w = rng.random_range(0.001..0.3);
                EmpiricalDistribution::new(vec![s, 0.0], vec![w, 1.0 - w]).expect("two atoms")
            }
            Family::LeftSkew => {
                let w = rng.random_range(0.001..0.3);
                EmpiricalDistribution::new(vec![-s, 0.0], vec![w, 1.0 - w]).expect("two atoms")
            }
            Family::UniformGrid => {
                let n = self.dim(rng);
                let lo = -s * rng.random_range(0.0..1.0);
                let hi = s;
                let step = if n > 1 { (hi - lo) / (n - 1) as f64 } else { 0.0 };
                let outcomes = (0..n).map(|i| lo + step * i as f64).collect();
                EmpiricalDistribution::equiprobable(outcomes).expect("grid atoms")
            }
            Family::TailMass => {
                // t atoms pinned at the minimum, the rest ramping upward:
                // the shape that drives beta-bound infima toward zero.
                let n = self.dim(rng).max(2);
                let t = rng.random_range(1..n);
                let min = -s;
                let mut outcomes = vec![min; t];
                for i in 0..(n - t) {
                    outcomes.push(min + s * (i + 1) as f64 / (n - t) as f64 * 2.0);
                }
                EmpiricalDistribution::equiprobable(outcomes).expect("tail atoms")
            }
            Family::WeightedRandom => {
                let n = self.dim(rng);
                let outcomes = (0..n).map(|_| s * rng.random_range(-1.0..1.0)).collect();
                let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
                let total: f64 = raw.iter().sum();
                let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
                EmpiricalDistribution::new(outcomes, weights).expect("weighted atoms")
            }
            Family::EquiprobableRandom => {
                let n = self.dim(rng);
                let outcomes = (0..n).map(|_| s * rng.random_range(-1.0..1.0)).collect();
                EmpiricalDistribution::equiprobable(outcomes).expect("equiprobable atoms")
            }
        }
    }

    /// Equiprobable single distribution (law-invariance trials need
    /// permutation-equals-law, which only holds on equal weights).
    pub fn equiprobable<R: Rng>(&self, rng: &mut R) -> EmpiricalDistribution {
        let n = self.dim(rng);
        let s = self.scale(rng);
        let outcomes = (0..n).map(|_| s * rng.random_range(-1.0..1.0)).collect();
        EmpiricalDistribution::equiprobable(outcomes).expect("equiprobable atoms")
    }

    fn column<R: Rng>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        let s = self.scale(rng);
        match rng.random_range(0..4u8) {
            // a single spike against zeros: the joint shape behind
            // sub-additivity failures of quantile-based measures
            0 => {
                let mut v = vec![0.0; n];
                v[rng.random_range(0..n)] = -s;
                v
            }
            1 => {
                let mut v = vec![0.0; n];
                v[rng.random_range(0..n)] = s;
                v
            }
            2 => {
                let base = s * rng.random_range(-1.0..0.0);
                (0..n).map(|i| base + s * 2.0 * i as f64 / n as f64).collect()
            }
            _ => (0..n).map(|_| s * rng.random_range(-1.0..1.0)).collect(),
        }
    }

    /// Joint pair: two payoff columns on shared atoms. Sub-additivity and
    /// convexity quantify over joint distributions, so marginals alone are
    /// not enough.
    pub fn joint_pair<R: Rng>(
        &self,
        rng: &mut R,
    ) -> (EmpiricalDistribution, EmpiricalDistribution) {
        let n = self.dim(rng);
        let weights = if rng.random_bool(0.3) {
            let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
            let total: f64 = raw.iter().sum();
            raw.iter().map(|w| w / total).collect()
        } else {
            vec![1.0 / n as f64; n]
        };
        let x = EmpiricalDistribution::new(self.column(rng, n), weights.clone()).expect("x column");
        let y = EmpiricalDistribution::new(self.column(rng, n), weights).expect("y column");
        (x, y)
    }

    /// A nonnegative position on shared-size atoms (used as the gap `Z` in
    /// dominated pairs `Y = X + Z`).
    pub fn nonnegative_column<R: Rng>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        let s = self.scale(rng);
        match rng.random_range(0..3u8) {
            0 => {
                let mut v = vec![0.0; n];
                v[rng.random_range(0..n)] = s;
                v
            }
            1 => vec![s * rng.random_range(0.0..1.0); n],
            _ => (0..n).map(|_| s * rng.random_range(0.0..1.0)).collect(),
        }
    }

    /// Dominated pair `(x, y)` with `x <= y` pointwise on shared atoms.
    pub fn dominated_pair<R: Rng>(
        &self,
        rng: &mut R,
    ) -> (EmpiricalDistribution, EmpiricalDistribution) {
        let (x, _) = self.joint_pair(rng);
        let x = if rng.random_bool(0.25) {
            // constants matter here: monotonicity failures of deviation
            // penalties show up against flat baselines
            x.map(|_| 0.0).expect("flat baseline")
        } else {
            x
        };
        let z = self.nonnegative_column(rng, x.len());
        let y = EmpiricalDistribution::new(
            x.outcomes().iter().zip(&z).map(|(a, b)| a + b).collect(),
            x.weights().to_vec(),
        )
        .expect("dominating column");
        (x, y)
    }

    /// Co-monotone pair on shared equiprobable atoms.
    pub fn comonotone<R: Rng>(
        &self,
        rng: &mut R,
    ) -> Result<(EmpiricalDistribution, EmpiricalDistribution)> {
        let n = self.dim(rng);
        comonotone_pair(rng, n)
    }

    /// Pair `(x, y)` with `x` dominating `y` in second-order stochastic
    /// dominance. Three mechanisms: pointwise dominance, a mean-preserving
    /// spread of `y` against the atom-refined `x`, or a spread followed by
    /// a downward shift.
    pub fn ssd_pair<R: Rng>(
        &self,
        rng: &mut R,
    ) -> (EmpiricalDistribution, EmpiricalDistribution) {
        match rng.random_range(0..3u8) {
            0 => {
                let (lo, hi) = self.dominated_pair(rng);
                (hi, lo)
            }
            _ => {
                let base = self.equiprobable(rng);
                let shift = if rng.random_bool(0.5) {
                    0.0
                } else {
                    self.scale(rng) * rng.random_range(0.0..1.0)
                };
                let mut spread_outcomes = Vec::with_capacity(base.len() * 2);
                let mut refined_outcomes = Vec::with_capacity(base.len() * 2);
                for &x in base.outcomes() {
                    let delta = self.scale(rng) * rng.random_range(0.0..1.0);
                    spread_outcomes.push(x + delta - shift);
                    spread_outcomes.push(x - delta - shift);
                    refined_outcomes.push(x);
                    refined_outcomes.push(x);
                }
                let dominant = EmpiricalDistribution::equiprobable(refined_outcomes)
                    .expect("refined atoms");
                let dominated = EmpiricalDistribution::equiprobable(spread_outcomes)
                    .expect("spread atoms");
                (dominant, dominated)
            }
        }
    }

    pub fn constant<R: Rng>(&self, rng: &mut R) -> EmpiricalDistribution {
        let c = self.scale(rng) * rng.random_range(-1.0..1.0);
        let n = self.dim(rng);
        EmpiricalDistribution::equiprobable(vec![c; n]).expect("constant atoms")
    }
}

/// Canonical adversarial single instances, fed to the harness before any
/// random trial. Index 0 is the skewed two-point shape whose full-deviation
/// composition evaluates to 2 against a maximum loss of 0.
pub fn adversarial_distribution(k: usize) -> Option<EmpiricalDistribution> {
    let d = match k {
        0 => EmpiricalDistribution::new(vec![10.0, 0.0], vec![0.1, 0.9]),
        1 => EmpiricalDistribution::new(vec![-10.0, 0.0], vec![0.1, 0.9]),
        2 => EmpiricalDistribution::equiprobable(vec![-1.0, 1.0]),
        3 => EmpiricalDistribution::equiprobable(vec![-1.0, -1.0, 1.0]),
        4 => EmpiricalDistribution::new(vec![100.0, 0.0], vec![0.01, 0.99]),
        5 => EmpiricalDistribution::equiprobable(vec![-1.0, 0.0, 1.0]),
        6 => EmpiricalDistribution::constant(1.0),
        7 => EmpiricalDistribution::constant(-1.0),
        _ => return None,
    };
    Some(d.expect("static instance"))
}

/// Canonical adversarial pairs on shared atoms (for pairwise axioms).
/// Index 0 is the classic quantile sub-additivity breaker: two spikes on
/// disjoint atoms.
pub fn adversarial_pair(k: usize) -> Option<(EmpiricalDistribution, EmpiricalDistribution)> {
    let n = 12;
    let w = vec![1.0 / n as f64; n];
    let spike = |at: usize, v: f64| {
        let mut o = vec![0.0; n];
        o[at] = v;
        EmpiricalDistribution::new(o, w.clone()).expect("spike column")
    };
    let pair = match k {
        0 => (spike(0, -1.0), spike(1, -1.0)),
        1 => (spike(0, -10.0), spike(11, -10.0)),
        2 => {
            let x = EmpiricalDistribution::new(vec![0.0; 2], vec![0.1, 0.9]).expect("flat");
            let y = EmpiricalDistribution::new(vec![10.0, 0.0], vec![0.1, 0.9]).expect("skew");
            (x, y)
        }
        _ => return None,
    };
    Some(pair)
}

/// Canonical dominated pairs `(x, y)`, `x <= y`. Index 0 makes the full
/// deviation's monotonicity failure concrete: 0 <= skewed gain, yet the
/// composed value rises from 0 to 2.
pub fn adversarial_dominated_pair(
    k: usize,
) -> Option<(EmpiricalDistribution, EmpiricalDistribution)> {
    let pair = match k {
        0 => (
            EmpiricalDistribution::new(vec![0.0, 0.0], vec![0.1, 0.9]).expect("flat"),
            EmpiricalDistribution::new(vec![10.0, 0.0], vec![0.1, 0.9]).expect("skew"),
        ),
        1 => (
            EmpiricalDistribution::new(vec![0.0, 0.0], vec![0.01, 0.99]).expect("flat"),
            EmpiricalDistribution::new(vec![100.0, 0.0], vec![0.01, 0.99]).expect("skew"),
        ),
        _ => return None,
    };
    Some(pair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{is_comonotone, ssd_dominates};

    #[test]
    fn seeds_are_reproducible() {
        let mut a = trial_rng(42, 3, 17);
        let mut b = trial_rng(42, 3, 17);
        for _ in 0..16 {
            assert_eq!(a.random::<u64>(), b.random::<u64>());
        }
        let mut c = trial_rng(42, 3, 18);
        assert_ne!(a.random::<u64>(), c.random::<u64>());
    }

    #[test]
    fn families_produce_valid_distributions() {
        let sampler = Sampler::new(16);
        let mut rng = trial_rng(1, 0, 0);
        for family in Family::ALL {
            for _ in 0..50 {
                let d = sampler.from_family(&mut rng, family);
                assert!(d.len() <= 16);
                let sum: f64 = d.weights().iter().sum();
                assert!((sum - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn dominated_pairs_dominate_pointwise() {
        let sampler = Sampler::new(8);
        let mut rng = trial_rng(2, 0, 0);
        for _ in 0..200 {
            let (x, y) = sampler.dominated_pair(&mut rng);
            for (a, b) in x.outcomes().iter().zip(y.outcomes()) {
                assert!(a <= b);
            }
        }
    }

    #[test]
    fn ssd_pairs_pass_the_comparator() {
        let sampler = Sampler::new(8);
        let mut rng = trial_rng(3, 0, 0);
        for _ in 0..200 {
            let (dominant, dominated) = sampler.ssd_pair(&mut rng);
            assert!(ssd_dominates(&dominant, &dominated));
        }
    }

    #[test]
    fn comonotone_pairs_check_out() {
        let sampler = Sampler::new(8);
        let mut rng = trial_rng(4, 0, 0);
        for _ in 0..100 {
            let (x, y) = sampler.comonotone(&mut rng).unwrap();
            assert!(is_comonotone(&x, &y));
        }
    }
}
