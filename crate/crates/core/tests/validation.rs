mod common;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use srs_core::validation::{
    coverage_report, has_errors, json_report, validate, Profile, Severity, RULES, V_DEF_UNUSED, V_FN_GAP, V_FN_ORPHAN,
    V_NA_MAND, V_REQ_EMPTY, V_SIGN_DATE, V_TRACE_DANGLE, V_UNSET,
};
use srs_core::{new_project, FunctionNumber, Project, ReqId, SectionBody, SignoffRole, TemplateRegistry, IEEE_830};

fn codes(p: &Project, profile: &Profile) -> BTreeSet<&'static str> {
    validate(p, profile).into_iter().map(|d| d.code).collect()
}

fn fr1_with(p: &Project, f: impl FnOnce(srs_core::Requirement) -> srs_core::Requirement) -> Project {
    let id = ReqId::parse("FR-1").unwrap();
    let req = f(p.requirements()[&id].clone());
    p.update_requirement(req).unwrap()
}

/// One single-field mutation of the fixture per rule code.
fn mutations() -> Vec<(&'static str, Project)> {
    let atm = common::atm();
    let purpose = common::path("introduction.purpose");
    vec![
        (V_UNSET, atm.clear_section(&purpose).unwrap()),
        (V_NA_MAND, atm.set_section(&purpose, SectionBody::Na).unwrap()),
        (
            V_TRACE_DANGLE,
            fr1_with(&atm, |r| r.with_trace(vec![ReqId::parse("UI-2").unwrap()]).unwrap()),
        ),
        (
            V_FN_ORPHAN,
            atm.set_function(FunctionNumber::parse("2.1").unwrap(), "Print receipt")
                .unwrap(),
        ),
        (
            V_FN_GAP,
            atm.set_function(FunctionNumber::parse("3").unwrap(), "Deposit")
                .unwrap(),
        ),
        (V_REQ_EMPTY, fr1_with(&atm, |r| r.with_text(""))),
        (
            V_SIGN_DATE,
            atm.set_signoff(SignoffRole::ApprovedBy, "A. Manager", None).unwrap(),
        ),
        (
            V_DEF_UNUSED,
            atm.add_definition("Kiosk", "A booth housing the machine.").unwrap(),
        ),
    ]
}

#[test]
fn clean_fixture_has_no_diagnostics() {
    let atm = common::atm();
    assert!(validate(&atm, &Profile::lenient()).is_empty());
    assert!(validate(&atm, &Profile::strict()).is_empty());
}

#[test]
fn fresh_strict_project_reports_five_unset() {
    let p = new_project("SRS ATM", 1, IEEE_830, &TemplateRegistry::new()).unwrap();
    let diags = validate(&p, &Profile::strict());
    assert_eq!(diags.len(), 5);
    assert!(diags.iter().all(|d| d.code == V_UNSET && d.severity == Severity::Error));
    let loci: Vec<String> = diags.iter().map(|d| d.locus.to_string()).collect();
    assert_eq!(
        loci,
        [
            "introduction.purpose",
            "introduction.scope",
            "overall-description.product-perspective",
            "overall-description.product-functions",
            "external-interfaces.functional-requirements",
        ]
    );
    let lenient = validate(&p, &Profile::lenient());
    assert_eq!(lenient.len(), 5);
    assert!(lenient.iter().all(|d| d.severity == Severity::Warning));
}

#[test]
fn mutation_matrix_triggers_exactly_one_code() {
    let strict = Profile::strict();
    let muts = mutations();
    let covered: BTreeSet<&str> = muts.iter().map(|(c, _)| *c).collect();
    let all: BTreeSet<&str> = RULES.iter().map(|(c, _)| *c).collect();
    assert_eq!(covered, all);
    for (code, p) in muts {
        assert_eq!(codes(&p, &strict), BTreeSet::from([code]), "mutation for {code}");
        let diags = validate(&p, &strict);
        assert_eq!(diags.len(), 1, "{code}: {diags:?}");
        assert_eq!(diags[0].severity, strict.severity(code).unwrap());
    }
}

#[test]
fn lenient_relaxes_only_section_rules() {
    let lenient = Profile::lenient();
    for (code, p) in mutations() {
        let got = codes(&p, &lenient);
        if code == V_NA_MAND {
            assert!(got.is_empty());
        } else {
            assert_eq!(got, BTreeSet::from([code]));
        }
    }
    assert_eq!(lenient.severity(V_UNSET), Some(Severity::Warning));
}

#[test]
fn repairing_a_mutation_removes_its_diagnostic() {
    let atm = common::atm();
    for (code, p) in mutations() {
        let repaired = match code {
            V_UNSET | V_NA_MAND => {
                let path = common::path("introduction.purpose");
                p.set_section(&path, atm.section(&path).unwrap().clone()).unwrap()
            }
            V_TRACE_DANGLE | V_REQ_EMPTY => {
                let id = ReqId::parse("FR-1").unwrap();
                p.update_requirement(atm.requirements()[&id].clone()).unwrap()
            }
            V_FN_ORPHAN => p.remove_function(&FunctionNumber::parse("2.1").unwrap()).unwrap(),
            V_FN_GAP => p.set_function(FunctionNumber::parse("2").unwrap(), "Withdraw").unwrap(),
            V_SIGN_DATE => p
                .set_signoff(
                    SignoffRole::ApprovedBy,
                    "A. Manager",
                    chrono::NaiveDate::from_ymd_opt(2024, 5, 1),
                )
                .unwrap(),
            V_DEF_UNUSED => p.remove_definition("Kiosk").unwrap(),
            _ => unreachable!(),
        };
        assert!(
            validate(&repaired, &Profile::strict()).is_empty(),
            "{code} not repaired"
        );
    }
}

#[test]
fn removing_a_trace_target_leaves_a_dangling_trace() {
    let p = common::atm()
        .remove_requirement(&ReqId::parse("UI-1").unwrap())
        .unwrap();
    let diags = validate(&p, &Profile::strict());
    assert_eq!(diags.len(), 1);
    assert_eq!(diags[0].code, V_TRACE_DANGLE);
    assert_eq!(diags[0].locus.to_string(), "FR-1");
    assert!(has_errors(&diags));
}

#[test]
fn overrides_change_or_silence_a_rule() {
    let (_, p) = mutations().into_iter().find(|(c, _)| *c == V_REQ_EMPTY).unwrap();
    let escalated = Profile::lenient().with_override(V_REQ_EMPTY, Some(Severity::Error));
    assert!(has_errors(&validate(&p, &escalated)));
    let off = Profile::strict().with_override(V_REQ_EMPTY, None);
    assert!(validate(&p, &off).is_empty());
}

#[test]
fn json_report_shape() {
    let (_, p) = mutations().into_iter().find(|(c, _)| *c == V_SIGN_DATE).unwrap();
    let v: serde_json::Value = serde_json::from_str(&json_report(&validate(&p, &Profile::strict()))).unwrap();
    assert_eq!(
        v,
        serde_json::json!([{
            "code": "V-SIGN-DATE",
            "severity": "warning",
            "locus": "approved-by",
            "message": "Functional Manager is signed by A. Manager but undated",
        }])
    );
}

/// Orphans: numbers whose parent is absent. Gaps: per sibling group of
/// non-orphans, the largest last component minus the group size.
fn function_oracle(nums: &BTreeSet<Vec<u32>>) -> (usize, usize) {
    let orphans: BTreeSet<&Vec<u32>> = nums
        .iter()
        .filter(|n| n.len() > 1 && !nums.contains(&n[..n.len() - 1].to_vec()))
        .collect();
    let mut groups: BTreeMap<Vec<u32>, Vec<u32>> = BTreeMap::new();
    for n in nums.iter().filter(|n| !orphans.contains(n)) {
        groups
            .entry(n[..n.len() - 1].to_vec())
            .or_default()
            .push(n[n.len() - 1]);
    }
    let gaps = groups
        .values()
        .map(|g| *g.iter().max().unwrap() as usize - g.len())
        .sum();
    (orphans.len(), gaps)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn validation_is_deterministic_and_ordered(p in common::arb_project()) {
        for profile in [Profile::strict(), Profile::lenient()] {
            let a = validate(&p, &profile);
            let b = validate(&p.clone(), &profile);
            prop_assert_eq!(&a, &b);
            prop_assert_eq!(json_report(&a), json_report(&b));
        }
        let strict = validate(&p, &Profile::strict());
        let unset = strict.iter().filter(|d| d.code == V_UNSET).count();
        let mandatory_unset = p
            .template()
            .leaves()
            .filter(|n| n.mandatory && p.leaf_state(&n.path).unwrap() == srs_core::LeafState::Unset)
            .count();
        prop_assert_eq!(unset, mandatory_unset);
        prop_assert!(coverage_report(&p).unset >= unset);
    }

    #[test]
    fn function_rules_match_oracle(
        nums in prop::collection::btree_set(prop::collection::vec(1u32..5, 1..4), 0..12)
    ) {
        let mut p = new_project("P", 1, IEEE_830, &TemplateRegistry::new()).unwrap();
        for n in &nums {
            p = p.set_function(FunctionNumber::from_components(n.clone()).unwrap(), "f").unwrap();
        }
        let diags = validate(&p, &Profile::strict());
        let orphans = diags.iter().filter(|d| d.code == V_FN_ORPHAN).count();
        let gaps = diags.iter().filter(|d| d.code == V_FN_GAP).count();
        prop_assert_eq!((orphans, gaps), function_oracle(&nums));
    }
}
