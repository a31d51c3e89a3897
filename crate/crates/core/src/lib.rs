//! Risk and deviation measures on finite empirical scenario distributions.
//!
//! The library evaluates, composes, and stress-tests risk functionals at
//! desk scale. A composition `rho + beta * D` of a risk measure and a
//! deviation measure inherits coherence (or convexity, or co-monotone
//! coherence) exactly when it stays below the maximum loss, the
//! limitedness property. Everything here exists to make that concrete
//! and checkable on finite scenario spaces:
//!
//! - [`scenario`]: weighted scenario distributions with exact step-function
//!   quantiles, norms, co-monotone pair generation, and second-order
//!   stochastic dominance;
//! - [`risk`] and [`deviation`]: the measure catalogs;
//! - [`compose`]: compositions, the loss-deviation, limitedness and
//!   acceptance-set checks;
//! - [`axioms`] and [`implications`]: the falsification harness; PASS
//!   means "no counterexample in N trials", FAIL carries a replayable
//!   witness;
//! - [`duality`]: analytic dual witnesses and an independent brute-force
//!   maximizer over discretized dual sets;
//! - [`kusuoka`]: discrete spectrum recovery on equiprobable spaces;
//! - [`calibrate`]: empirical bounds on the admissible penalty `beta`;
//! - [`parse`] and [`report`]: the measure-spec JSON grammar and stable
//!   report emission.
//!
//! Everything is deterministic given a seed: trials derive per-index
//! ChaCha streams and reductions are exactly order-independent, so reports
//! are bit-identical across runs and thread counts.

pub mod axioms;
pub mod calibrate;
pub mod compose;
pub mod deviation;
pub mod duality;
pub mod error;
pub mod implications;
pub mod ingest;
pub mod kusuoka;
pub mod parallel;
pub mod parse;
pub mod report;
pub mod risk;
pub mod sampler;
pub mod scenario;

pub use axioms::{
    check_axiom, check_class, Axiom, AxiomReport, ClassReport, Counterexample, HarnessParams,
    MeasureClass, Verdict,
};
pub use calibrate::{beta_bound, certify_inadmissible, BetaBound, InadmissibilityWitness};
pub use compose::{
    acceptance_member, check_limitedness, evaluate_composition, loss_deviation, AcceptanceCheck,
    Functional, LimitednessCheck, RiskFunctional,
};
pub use deviation::{
    full_p_deviation, induced_deviation, lower_p_semideviation, range_deviation, DeviationMeasure,
};
pub use duality::{
    brute_force_sup, composed_dual_density, dual_witness, entropic_dual_witness, es_dual_witness,
    ld_dual_witness, semidev_dual_witness, DualDensity, DualSearchSpace, DualWitnessReport,
};
pub use error::{Error, Result};
pub use implications::{implication_suite, reference_catalog, ImplicationSuiteReport};
pub use kusuoka::{kusuoka_consistency, KusuokaAnalysis};
pub use parse::{parse_deviation, parse_functional, parse_risk_functional};
pub use risk::{
    entropic_risk, expected_shortfall, neg_expectation, spectral_risk, value_at_risk,
    worst_case_risk, RiskMeasure, SpectralMeasure,
};
pub use scenario::{
    comonotone_pair, is_comonotone, ssd_dominates, EmpiricalDistribution, ScenarioData, SortedView,
};
