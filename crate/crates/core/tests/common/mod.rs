//! Shared test helpers: the ATM fixture and a random project generator.
#![allow(dead_code)]

pub mod dot;

use std::path::PathBuf;

use proptest::prelude::*;
use srs_core::format::parse;
use srs_core::{
    builtin_template, FunctionNumber, LeafKind, Project, ReqId, ReqKind, Requirement, SectionBody, SectionKind,
    SectionPath, SignoffRole, TemplateEdit, IEEE_830,
};

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

pub fn atm() -> Project {
    let bytes = std::fs::read(fixture_dir().join("atm.srs")).expect("fixture");
    parse(&bytes).into_result().expect("fixture parses")
}

pub fn path(s: &str) -> SectionPath {
    SectionPath::parse(s).unwrap()
}

const WORDS: &[&str] = &[
    "word",
    "the",
    "machine",
    "Account",
    "bank",
    "NA",
    "N.A.....",
    "[section introduction.purpose]",
    "[x]",
    "\\back",
    "# hash",
    "@id: 9",
    "kind: functional",
    "title: t",
    "name: n",
    "é",
    "  indented",
    "-",
    "===",
    "<b>&",
    "\"q\"",
];

fn arb_line() -> impl Strategy<Value = String> {
    prop_oneof![
        3 => prop::collection::vec(prop::sample::select(WORDS), 1..5).prop_map(|w| w.join(" ")),
        1 => prop::sample::select(WORDS).prop_map(str::to_string),
        1 => Just(String::new()),
        1 => "[a-z ]{0,12}",
    ]
}

pub fn arb_text() -> impl Strategy<Value = String> {
    prop::collection::vec(arb_line(), 0..5).prop_map(|lines| lines.join("\n"))
}

fn arb_single_line() -> impl Strategy<Value = String> {
    prop_oneof![
        "[A-Za-z][A-Za-z0-9 ,.()/-]{0,24}",
        prop::sample::select(WORDS).prop_map(str::to_string),
    ]
}

const ROUTABLE: &[ReqKind] = &[
    ReqKind::Functional,
    ReqKind::Behavioural,
    ReqKind::UserInterface,
    ReqKind::HardwareInterface,
    ReqKind::SoftwareInterface,
    ReqKind::CommunicationInterface,
    ReqKind::Performance,
    ReqKind::Safety,
    ReqKind::Security,
];

fn arb_req_id() -> impl Strategy<Value = ReqId> {
    (
        prop::sample::select(&["FR", "UI", "PERF", "A", "ABCD", "SEC"][..]),
        1u64..200,
    )
        .prop_map(|(p, n)| ReqId::parse(&format!("{p}-{n}")).unwrap())
}

#[derive(Debug, Clone)]
struct ReqRecipe {
    id: ReqId,
    kind: ReqKind,
    title: String,
    text: String,
    trace: Vec<ReqId>,
}

fn arb_req() -> impl Strategy<Value = ReqRecipe> {
    (
        arb_req_id(),
        prop::sample::select(ROUTABLE),
        arb_single_line(),
        arb_text(),
        prop::collection::vec(arb_req_id(), 0..4),
    )
        .prop_map(|(id, kind, title, text, trace)| ReqRecipe {
            id,
            kind,
            title,
            text,
            trace,
        })
}

fn arb_function_number() -> impl Strategy<Value = FunctionNumber> {
    prop::collection::vec(1u32..5, 1..4).prop_map(|c| FunctionNumber::from_components(c).unwrap())
}

type SignoffRecipe = (String, Option<(i32, u32, u32)>);

#[derive(Debug, Clone)]
struct Recipe {
    title: String,
    id: u64,
    customize: Vec<u8>,
    leaf_states: Vec<(u8, String)>,
    definitions: Vec<(String, String)>,
    functions: Vec<(FunctionNumber, String)>,
    requirements: Vec<ReqRecipe>,
    signoffs: Vec<SignoffRecipe>,
    signoff_title: Option<String>,
}

fn arb_recipe() -> impl Strategy<Value = Recipe> {
    (
        (arb_single_line(), any::<u64>(), prop::collection::vec(0u8..6, 0..3)),
        prop::collection::vec((0u8..3, arb_text()), 32),
        prop::collection::vec((arb_single_line(), arb_text()), 0..6),
        prop::collection::vec((arb_function_number(), arb_single_line()), 0..=20),
        prop::collection::vec(arb_req(), 0..=50),
        prop::collection::vec(
            (
                prop_oneof![Just(String::new()), arb_single_line()],
                prop::option::of((1900i32..2100, 1u32..13, 1u32..29)),
            ),
            5,
        ),
        prop::option::of(arb_single_line()),
    )
        .prop_map(
            |((title, id, customize), leaf_states, definitions, functions, requirements, signoffs, signoff_title)| {
                Recipe {
                    title,
                    id,
                    customize,
                    leaf_states,
                    definitions,
                    functions,
                    requirements,
                    signoffs,
                    signoff_title,
                }
            },
        )
}

fn edit(op: u8) -> TemplateEdit {
    match op {
        0 => TemplateEdit::Rename {
            path: path("introduction.references"),
            label: "References".into(),
        },
        1 => TemplateEdit::Remove {
            path: path("introduction.overview"),
        },
        2 => TemplateEdit::AddLeaf {
            parent: Some(path("non-functional")),
            token: "quality".into(),
            label: "Quality Requirements".into(),
            kind: LeafKind::Requirements(ReqKind::Quality),
            mandatory: false,
        },
        3 => TemplateEdit::AddLeaf {
            parent: None,
            token: "appendix".into(),
            label: "Appendix".into(),
            kind: LeafKind::Text,
            mandatory: true,
        },
        4 => TemplateEdit::SetMandatory {
            path: path("introduction.scope"),
            mandatory: false,
        },
        _ => TemplateEdit::Remove {
            path: path("external-interfaces.behavioural-requirements"),
        },
    }
}

fn build(r: Recipe) -> Project {
    let title = if r.title.trim().is_empty() {
        "Untitled".to_string()
    } else {
        r.title
    };
    let mut p = Project::with_template(&title, r.id, builtin_template(IEEE_830).unwrap()).unwrap();
    for op in r.customize {
        if let Ok(next) = p.customize(&[edit(op)]) {
            p = next;
        }
    }
    let leaves: Vec<(SectionPath, SectionKind)> = p.template().leaves().map(|n| (n.path.clone(), n.kind)).collect();
    for ((leaf, kind), (state, text)) in leaves.iter().zip(r.leaf_states) {
        let body = match state {
            0 => continue,
            1 => SectionBody::Na,
            _ if kind.is_structured() => SectionBody::Na,
            _ => SectionBody::text(&text).unwrap_or(SectionBody::Na),
        };
        p = p.set_section(leaf, body).unwrap();
    }
    for (term, meaning) in r.definitions {
        if let Ok(next) = p.add_definition(&term, &meaning) {
            p = next;
        }
    }
    for (num, title) in r.functions {
        if let Ok(next) = p.set_function(num, &title) {
            p = next;
        }
    }
    for rr in r.requirements {
        let mut trace: Vec<ReqId> = Vec::new();
        for t in rr.trace {
            if t != rr.id && !trace.contains(&t) {
                trace.push(t);
            }
        }
        let Ok(req) = Requirement::new(rr.id, rr.kind, &rr.title) else {
            continue;
        };
        let req = req.with_text(&rr.text).with_trace(trace).unwrap();
        if let Ok(next) = p.add_requirement(req) {
            p = next;
        }
    }
    for (role, (name, date)) in SignoffRole::ALL.iter().zip(r.signoffs) {
        let date = date.and_then(|(y, m, d)| chrono::NaiveDate::from_ymd_opt(y, m, d));
        p = p.set_signoff(*role, &name, date).unwrap();
    }
    if let Some(t) = r.signoff_title {
        if let Ok(next) = p.set_signoff_title(Some(&t)) {
            p = next;
        }
    }
    p
}

/// Random valid projects: random section states, up to 50 requirements,
/// up to 20 functions, random definitions and sign-offs, and sometimes a
/// customized template.
pub fn arb_project() -> impl Strategy<Value = Project> {
    arb_recipe().prop_map(build)
}
