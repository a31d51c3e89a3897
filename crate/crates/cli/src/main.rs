//! Scenario-based risk measure toolkit.
//!
//! Every command writes one JSON report document (stdout, or `--output`)
//! and a short human summary on stderr. Exit codes: 0 on success or when
//! all claimed properties hold, 2 when mathematics was falsified (a
//! claimed axiom or class check produced a counterexample, or the
//! implication suite recorded a violation), 1 on usage, validation, or I/O
//! errors. `RISKC_THREADS` caps trial parallelism (0 or unset = auto);
//! results are byte-identical regardless of thread count.

use clap::{Args, Parser, Subcommand};
use riskc_core::axioms::Verdict;
use riskc_core::compose::{AcceptanceCheck, LimitednessCheck};
use riskc_core::duality::{
    DualSearchSpace, DualWitnessReport, EntropicSpace, EsBoxSpace, LdEsSpace, SemidevSpace,
    SingletonSpace,
};
use riskc_core::risk::RiskMeasure;
use riskc_core::{
    acceptance_member, beta_bound, brute_force_sup, certify_inadmissible, check_axiom,
    check_class, check_limitedness, dual_witness, implication_suite, kusuoka_consistency,
    parse_deviation, parse_functional, parse_risk_functional, Axiom, AxiomReport, BetaBound,
    EmpiricalDistribution, Error, Functional, HarnessParams, ImplicationSuiteReport,
    InadmissibilityWitness, KusuokaAnalysis, MeasureClass, RiskFunctional,
};
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "riskc",
    version,
    about = "Evaluate, compose, and falsify risk and deviation measures on finite scenario sets"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write the JSON report here instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a measure on a scenario set, with limitedness slack and
    /// acceptance-set membership
    Eval(EvalArgs),
    /// Test axioms of a measure over randomized scenario families
    Axioms(AxiomsArgs),
    /// Test the defining axiom bundle of a claimed class
    ClassCheck(ClassCheckArgs),
    /// Construct a dual witness density and verify it attains the value
    Dual(DualArgs),
    /// Recover the implied spectrum on an equiprobable space
    Kusuoka(KusuokaArgs),
    /// Mine an empirical upper bound on the admissible penalty beta
    CalibrateBeta(CalibrateArgs),
    /// Verify the limitedness implications across the functional catalog
    ImplicationSuite(SuiteArgs),
}

#[derive(Args)]
struct MeasureArg {
    /// Measure spec as inline JSON, or @path to a JSON file
    #[arg(long)]
    measure: String,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario file: .csv (header row, optional 'weight' column) or .json
    #[arg(long, conflicts_with = "scenario_json")]
    scenario: Option<PathBuf>,

    /// Inline JSON scenario: payoff array or {"outcomes":[..],"weights":[..]}
    #[arg(long)]
    scenario_json: Option<String>,

    /// Payoff column to read from a csv (default: first non-weight column)
    #[arg(long)]
    column: Option<String>,
}

impl ScenarioArgs {
    fn load(&self) -> Result<EmpiricalDistribution, Error> {
        match (&self.scenario, &self.scenario_json) {
            (Some(path), None) => {
                riskc_core::ingest::distribution_from_path(path, self.column.as_deref())
            }
            (None, Some(text)) => riskc_core::ingest::distribution_from_json_str(text),
            _ => Err(Error::Config(
                "provide exactly one of --scenario or --scenario-json".into(),
            )),
        }
    }
}

#[derive(Args)]
struct HarnessArgs {
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Maximum scenario count per generated instance
    #[arg(long, default_value_t = 16)]
    dim: usize,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
}

impl HarnessArgs {
    fn params(&self) -> HarnessParams {
        HarnessParams::new(self.trials, self.seed, self.dim, self.tolerance)
    }
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    measure: MeasureArg,
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
}

#[derive(Args)]
struct AxiomsArgs {
    #[command(flatten)]
    measure: MeasureArg,
    /// Single axiom tag; all applicable axioms when omitted
    #[arg(long)]
    axiom: Option<String>,
    #[command(flatten)]
    harness: HarnessArgs,
}

#[derive(Args)]
struct ClassCheckArgs {
    #[command(flatten)]
    measure: MeasureArg,
    /// coherent | convex | comonotone_coherent | generalized_deviation |
    /// convex_deviation
    #[arg(long)]
    class: String,
    #[command(flatten)]
    harness: HarnessArgs,
}

#[derive(Args)]
struct DualArgs {
    #[command(flatten)]
    measure: MeasureArg,
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Also run the projected-local-search maximizer over the dual set
    #[arg(long)]
    brute_force: bool,
    #[arg(long, default_value_t = 8)]
    restarts: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct KusuokaArgs {
    #[command(flatten)]
    measure: MeasureArg,
    /// Equiprobable atom count of the recovery space
    #[arg(long, default_value_t = 16)]
    atoms: usize,
    /// Validation distributions for the re-evaluation sweep
    #[arg(long, default_value_t = 50)]
    validation: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
}

#[derive(Args)]
struct CalibrateArgs {
    /// Risk measure spec (inline JSON or @path)
    #[arg(long)]
    rho: String,
    /// Deviation measure spec (inline JSON or @path)
    #[arg(long)]
    dev: String,
    /// Randomized candidates appended to the deterministic sweep
    #[arg(long, default_value_t = 100_000)]
    candidates: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 16)]
    dim: usize,
    /// Certify this beta against the mined bound
    #[arg(long)]
    certify_beta: Option<f64>,
}

#[derive(Args)]
struct SuiteArgs {
    #[command(flatten)]
    harness: HarnessArgs,
}

fn spec_text(arg: &str) -> Result<String, Error> {
    if let Some(path) = arg.strip_prefix('@') {
        Ok(std::fs::read_to_string(path)?)
    } else {
        Ok(arg.to_string())
    }
}

#[derive(Serialize)]
struct RangeDominanceCheck {
    value: f64,
    bound: f64,
    slack: f64,
    dominated: bool,
}

#[derive(Serialize)]
struct EvalReport<'a> {
    command: &'static str,
    measure: &'a Functional,
    scenario_atoms: usize,
    value: f64,
    limitedness: Option<LimitednessCheck>,
    acceptance: Option<AcceptanceCheck>,
    lower_range_dominance: Option<RangeDominanceCheck>,
    degenerate_deviation: bool,
}

#[derive(Serialize)]
struct AxiomsReport<'a> {
    command: &'static str,
    measure: &'a Functional,
    trials: u64,
    seed: u64,
    dim: usize,
    tolerance: f64,
    reports: Vec<AxiomReport>,
    claimed_failures: u64,
}

#[derive(Serialize)]
struct ClassCheckReport<'a> {
    command: &'static str,
    measure: &'a Functional,
    class: MeasureClass,
    trials: u64,
    seed: u64,
    dim: usize,
    tolerance: f64,
    verdict: &'static str,
    reports: Vec<AxiomReport>,
}

#[derive(Serialize)]
struct BruteForceSection {
    space: &'static str,
    restarts: u32,
    report: DualWitnessReport,
}

#[derive(Serialize)]
struct DualReport<'a> {
    command: &'static str,
    measure: &'a Functional,
    scenario_atoms: usize,
    witness: DualWitnessReport,
    brute_force: Option<BruteForceSection>,
}

#[derive(Serialize)]
struct KusuokaReport<'a> {
    command: &'static str,
    measure: &'a RiskFunctional,
    analysis: KusuokaAnalysis,
}

#[derive(Serialize)]
struct CalibrateReport<'a> {
    command: &'static str,
    rho: &'a RiskFunctional,
    dev: &'a riskc_core::DeviationMeasure,
    candidates: u64,
    seed: u64,
    dim: usize,
    bound: BetaBound,
    certification: Option<CertificationSection>,
}

#[derive(Serialize)]
struct CertificationSection {
    beta: f64,
    inadmissible: bool,
    witness: Option<InadmissibilityWitness>,
}

#[derive(Serialize)]
struct SuiteReport {
    command: &'static str,
    report: ImplicationSuiteReport,
}

struct Outcome {
    document: String,
    summary: Vec<String>,
    exit: u8,
}

fn run(cli: &Cli) -> Result<Outcome, Error> {
    match &cli.command {
        Command::Eval(args) => {
            let f = parse_functional(&spec_text(&args.measure.measure)?)?;
            let d = args.scenario.load()?;
            let value = f.evaluate(&d)?;
            let (limitedness, acceptance, lower_range) = match &f {
                Functional::Risk(_) => (
                    Some(check_limitedness(&d, &f, args.tolerance)?),
                    Some(acceptance_member(&d, &f)?),
                    None,
                ),
                Functional::Deviation(_) => {
                    let bound = riskc_core::range_deviation(&d);
                    let slack = bound - value;
                    (
                        None,
                        None,
                        Some(RangeDominanceCheck {
                            value,
                            bound,
                            slack,
                            dominated: slack >= -args.tolerance,
                        }),
                    )
                }
            };
            let mut summary = vec![format!("value: {value:.17e}")];
            if let Some(l) = &limitedness {
                summary.push(format!(
                    "limitedness: {} (slack {:.6e})",
                    if l.limited { "ok" } else { "VIOLATED" },
                    l.slack
                ));
            }
            if let Some(a) = &acceptance {
                summary.push(format!("acceptance member: {}", a.member));
            }
            let degenerate = f.contains_degenerate_deviation();
            if degenerate {
                summary.push("warning: a deviation term is degenerate (identically zero)".into());
            }
            let report = EvalReport {
                command: "eval",
                measure: &f,
                scenario_atoms: d.len(),
                value,
                limitedness,
                acceptance,
                lower_range_dominance: lower_range,
                degenerate_deviation: degenerate,
            };
            Ok(Outcome {
                document: riskc_core::report::to_json_document(&report)?,
                summary,
                exit: 0,
            })
        }
        Command::Axioms(args) => {
            let f = parse_functional(&spec_text(&args.measure.measure)?)?;
            let params = args.harness.params();
            let axioms: Vec<Axiom> = match &args.axiom {
                Some(tag) => vec![Axiom::from_tag(tag).ok_or_else(|| {
                    Error::Config(format!("unknown axiom tag '{tag}'"))
                })?],
                None => Axiom::ALL
                    .into_iter()
                    .filter(|a| {
                        if f.is_risk() {
                            a.applies_to_risk()
                        } else {
                            a.applies_to_deviation()
                        }
                    })
                    .collect(),
            };
            let claimed = f.claimed_axioms();
            let mut reports = Vec::new();
            let mut claimed_failures = 0;
            let mut summary = Vec::new();
            for axiom in axioms {
                let r = check_axiom(&f, axiom, &params)?;
                let verdict = match r.verdict {
                    Verdict::Pass => format!("PASS (no counterexample in {} trials)", r.trials),
                    Verdict::Fail => "FAIL (counterexample found)".to_string(),
                    Verdict::Skipped => "SKIPPED".to_string(),
                };
                summary.push(format!("{}: {}", axiom.tag(), verdict));
                if r.verdict == Verdict::Fail && claimed.contains(&axiom) {
                    claimed_failures += 1;
                }
                reports.push(r);
            }
            let report = AxiomsReport {
                command: "axioms",
                measure: &f,
                trials: params.trials,
                seed: params.seed,
                dim: params.dim,
                tolerance: params.tolerance,
                reports,
                claimed_failures,
            };
            Ok(Outcome {
                document: riskc_core::report::to_json_document(&report)?,
                summary,
                exit: if claimed_failures > 0 { 2 } else { 0 },
            })
        }
        Command::ClassCheck(args) => {
            let f = parse_functional(&spec_text(&args.measure.measure)?)?;
            let class = MeasureClass::from_tag(&args.class)
                .ok_or_else(|| Error::Config(format!("unknown class '{}'", args.class)))?;
            let params = args.harness.params();
            let result = check_class(&f, class, &params)?;
            let verdict = if result.falsified { "falsified" } else { "pass" };
            let mut summary = Vec::new();
            for r in &result.reports {
                let v = match r.verdict {
                    Verdict::Pass => "pass",
                    Verdict::Fail => "FAIL",
                    Verdict::Skipped => "skipped",
                };
                let extra = if r.informational { " (informational)" } else { "" };
                summary.push(format!("{}: {}{}", r.axiom.tag(), v, extra));
            }
            summary.push(format!("class {}: {}", class.tag(), verdict));
            let report = ClassCheckReport {
                command: "class_check",
                measure: &f,
                class,
                trials: params.trials,
                seed: params.seed,
                dim: params.dim,
                tolerance: params.tolerance,
                verdict,
                reports: result.reports,
            };
            Ok(Outcome {
                document: riskc_core::report::to_json_document(&report)?,
                summary,
                exit: if result.falsified { 2 } else { 0 },
            })
        }
        Command::Dual(args) => {
            let f = parse_functional(&spec_text(&args.measure.measure)?)?;
            let d = args.scenario.load()?;
            let witness = dual_witness(&d, &f)?;
            let brute = if args.brute_force {
                let (space, label): (Box<dyn DualSearchSpace>, _) = brute_force_space(&f)?;
                let report = brute_force_sup(&d, space.as_ref(), args.restarts, args.seed, witness.primal_value)?;
                Some(BruteForceSection {
                    space: label,
                    restarts: args.restarts,
                    report,
                })
            } else {
                None
            };
            let mut summary = vec![format!(
                "primal {:.10e}, dual {:.10e}, gap {:.3e}",
                witness.primal_value, witness.dual_value, witness.gap
            )];
            if let Some(b) = &brute {
                summary.push(format!(
                    "brute force ({}): {:.10e}, gap {:.3e}",
                    b.space, b.report.dual_value, b.report.gap
                ));
            }
            let report = DualReport {
                command: "dual",
                measure: &f,
                scenario_atoms: d.len(),
                witness,
                brute_force: brute,
            };
            Ok(Outcome {
                document: riskc_core::report::to_json_document(&report)?,
                summary,
                exit: 0,
            })
        }
        Command::Kusuoka(args) => {
            let f = parse_risk_functional(&spec_text(&args.measure.measure)?)?;
            let analysis =
                kusuoka_consistency(&f, args.atoms, args.validation, args.seed, args.tolerance)?;
            let summary = vec![
                format!(
                    "recovered {} levels, min mass {:.3e}, max discrepancy {:.3e}",
                    analysis.levels.len(),
                    analysis.min_mass,
                    analysis.max_discrepancy
                ),
                format!(
                    "verdict: {}",
                    if analysis.comonotone_coherent {
                        "co-monotone coherent"
                    } else {
                        "NOT co-monotone coherent"
                    }
                ),
            ];
            let report = KusuokaReport {
                command: "kusuoka",
                measure: &f,
                analysis,
            };
            Ok(Outcome {
                document: riskc_core::report::to_json_document(&report)?,
                summary,
                exit: 0,
            })
        }
        Command::CalibrateBeta(args) => {
            let rho = parse_risk_functional(&spec_text(&args.rho)?)?;
            let dev = parse_deviation(&spec_text(&args.dev)?)?;
            let bound = beta_bound(&rho, &dev, args.candidates, args.seed, args.dim)?;
            let mut summary = vec![format!(
                "upper bound on admissible beta: {:.10e} ({} candidates)",
                bound.upper_bound, bound.candidates_evaluated
            )];
            let certification = match args.certify_beta {
                Some(beta) => {
                    let witness = certify_inadmissible(&rho, &dev, beta, &bound)?;
                    summary.push(match &witness {
                        Some(w) => format!(
                            "beta {beta} certified inadmissible: violation {:.6e}",
                            w.violation
                        ),
                        None => format!("beta {beta} not falsified by the mined bound"),
                    });
                    Some(CertificationSection {
                        beta,
                        inadmissible: witness.is_some(),
                        witness,
                    })
                }
                None => None,
            };
            let report = CalibrateReport {
                command: "calibrate_beta",
                rho: &rho,
                dev: &dev,
                candidates: args.candidates,
                seed: args.seed,
                dim: args.dim,
                bound,
                certification,
            };
            Ok(Outcome {
                document: riskc_core::report::to_json_document(&report)?,
                summary,
                exit: 0,
            })
        }
        Command::ImplicationSuite(args) => {
            let h = &args.harness;
            let report = implication_suite(h.trials, h.seed, h.dim, h.tolerance)?;
            let summary = vec![format!(
                "{} records, {} violations",
                report.records.len(),
                report.total_violations
            )];
            let exit = if report.total_violations > 0 { 2 } else { 0 };
            let doc = SuiteReport {
                command: "implication_suite",
                report,
            };
            Ok(Outcome {
                document: riskc_core::report::to_json_document(&doc)?,
                summary,
                exit,
            })
        }
    }
}

/// Pick the searchable dual set matching a measure spec.
fn brute_force_space(f: &Functional) -> Result<(Box<dyn DualSearchSpace>, &'static str), Error> {
    match f {
        Functional::Risk(RiskFunctional::Measure(RiskMeasure::NegExpectation)) => {
            Ok((Box::new(SingletonSpace), "singleton"))
        }
        Functional::Risk(RiskFunctional::Measure(RiskMeasure::ExpectedShortfall { alpha })) => {
            Ok((Box::new(EsBoxSpace { alpha: *alpha }), "es_box"))
        }
        Functional::Risk(RiskFunctional::Measure(RiskMeasure::Entropic { theta })) => {
            Ok((Box::new(EntropicSpace { theta: *theta }), "entropic_simplex"))
        }
        Functional::Risk(RiskFunctional::Compose { rho, dev, beta }) => match (&**rho, dev) {
            (
                RiskFunctional::Measure(RiskMeasure::NegExpectation),
                riskc_core::DeviationMeasure::LowerSemideviation { p },
            ) => Ok((
                Box::new(SemidevSpace { p: *p, beta: *beta }),
                "semideviation_family",
            )),
            _ => Err(Error::Config(
                "no searchable dual set for this composition; supported: mean plus semideviation"
                    .into(),
            )),
        },
        Functional::Risk(RiskFunctional::LossDeviation { rho, beta, p }) => match &**rho {
            RiskFunctional::Measure(RiskMeasure::ExpectedShortfall { alpha }) => Ok((
                Box::new(LdEsSpace {
                    alpha: *alpha,
                    beta: *beta,
                    p: *p,
                }),
                "loss_deviation_es_family",
            )),
            _ => Err(Error::Config(
                "loss-deviation brute force supports an expected-shortfall generator".into(),
            )),
        },
        _ => Err(Error::Config(
            "no searchable dual set is defined for this measure".into(),
        )),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help / --version are not usage errors
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    match run(&cli) {
        Ok(outcome) => {
            for line in &outcome.summary {
                eprintln!("{line}");
            }
            match &cli.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, outcome.document.as_bytes()) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => {
                    print!("{}", outcome.document);
                    if std::io::stdout().flush().is_err() {
                        return ExitCode::from(1);
                    }
                }
            }
            ExitCode::from(outcome.exit)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
