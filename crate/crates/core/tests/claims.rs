//! Claims audit: for every functional in the reference catalog, every
//! axiom it claims must survive the harness. A failure here means either a
//! measure implementation, the claims derivation, or an instance generator
//! is wrong; the three are deliberately independent code paths.

use riskc_core::{check_axiom, reference_catalog, Axiom, HarnessParams, Verdict};

#[test]
fn claimed_axioms_survive_the_harness() {
    for (i, (name, f)) in reference_catalog().into_iter().enumerate() {
        let params = HarnessParams::new(3_000, 9_000 + i as u64, 12, 1e-9);
        for axiom in f.claimed_axioms() {
            if axiom == Axiom::FatouContinuity {
                continue;
            }
            let report = check_axiom(&f, axiom, &params).unwrap();
            assert_eq!(
                report.verdict,
                Verdict::Pass,
                "{name} claims {} but the harness falsified it: {:?}",
                axiom.tag(),
                report.counterexample
            );
        }
    }
}

#[test]
fn known_gaps_are_found_not_claimed() {
    // the catalog's deliberate negative controls: axiom failures the
    // harness must find, none of which may be claimed
    let gaps: &[(&str, Axiom)] = &[
        ("var_0.10", Axiom::Subadditivity),
        ("var_0.10", Axiom::Convexity),
        ("entropic_1.0", Axiom::PositiveHomogeneity),
        ("entropic_1.0", Axiom::ComonotonicAdditivity),
        ("msd_full_beta1_p2", Axiom::Monotonicity),
        ("msd_full_beta1_p2", Axiom::Limitedness),
        ("msd_minus_beta1_p2", Axiom::ComonotonicAdditivity),
        ("es0.33_plus_0.5_induced", Axiom::Limitedness),
        ("es0.33_plus_0.5_induced", Axiom::Monotonicity),
    ];
    let catalog = reference_catalog();
    for (i, (name, axiom)) in gaps.iter().enumerate() {
        let (_, f) = catalog
            .iter()
            .find(|(n, _)| n == name)
            .unwrap_or_else(|| panic!("{name} missing from catalog"));
        assert!(!f.claimed_axioms().contains(axiom), "{name} must not claim {}", axiom.tag());
        let params = HarnessParams::new(10_000, 9_500 + i as u64, 16, 1e-9);
        let report = check_axiom(f, *axiom, &params).unwrap();
        assert_eq!(
            report.verdict,
            Verdict::Fail,
            "{name}: expected the harness to falsify {}",
            axiom.tag()
        );
    }
}
