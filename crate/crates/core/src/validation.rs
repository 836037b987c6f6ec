//! Rule engine over a project. Produces coded, deterministically ordered
//! diagnostics under a strict or lenient profile.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::model::{FunctionNumber, LeafState, Project, ReqId, SectionBody, SectionPath, SignoffRole};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Error => "error",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Locus {
    ProjectHeader,
    Section(SectionPath),
    Requirement(ReqId),
    Function(FunctionNumber),
    Signoff(SignoffRole),
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Locus::ProjectHeader => f.write_str("project-header"),
            Locus::Section(p) => write!(f, "{p}"),
            Locus::Requirement(id) => write!(f, "{id}"),
            Locus::Function(n) => write!(f, "{n}"),
            Locus::Signoff(r) => write!(f, "{r}"),
        }
    }
}

impl Serialize for Locus {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub code: &'static str,
    pub severity: Severity,
    pub locus: Locus,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "WARNING",
            Severity::Error => "ERROR",
        };
        write!(f, "{sev} {} {}: {}", self.code, self.locus, self.message)
    }
}

pub const V_UNSET: &str = "V-UNSET";
pub const V_NA_MAND: &str = "V-NA-MAND";
pub const V_TRACE_DANGLE: &str = "V-TRACE-DANGLE";
pub const V_FN_ORPHAN: &str = "V-FN-ORPHAN";
pub const V_FN_GAP: &str = "V-FN-GAP";
pub const V_REQ_EMPTY: &str = "V-REQ-EMPTY";
pub const V_SIGN_DATE: &str = "V-SIGN-DATE";
pub const V_DEF_UNUSED: &str = "V-DEF-UNUSED";

/// Every rule with its description.
pub const RULES: &[(&str, &str)] = &[
    (V_UNSET, "mandatory section has no content and no NA marker"),
    (V_NA_MAND, "mandatory section is marked NA"),
    (V_TRACE_DANGLE, "trace target does not exist"),
    (V_FN_ORPHAN, "function number has no parent function"),
    (V_FN_GAP, "sibling function numbering skips a number"),
    (V_REQ_EMPTY, "requirement has no text"),
    (V_SIGN_DATE, "sign-off has a name but no date"),
    (
        V_DEF_UNUSED,
        "defined term is never used in section or requirement text",
    ),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileName {
    Strict,
    Lenient,
}

impl FromStr for ProfileName {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(ProfileName::Strict),
            "lenient" => Ok(ProfileName::Lenient),
            other => Err(format!("unknown profile `{other}` (expected strict or lenient)")),
        }
    }
}

impl fmt::Display for ProfileName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ProfileName::Strict => "strict",
            ProfileName::Lenient => "lenient",
        })
    }
}

/// Severity policy. `None` in an override switches the rule off.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    pub name: ProfileName,
    overrides: BTreeMap<&'static str, Option<Severity>>,
}

impl Profile {
    pub fn strict() -> Self {
        Self {
            name: ProfileName::Strict,
            overrides: BTreeMap::new(),
        }
    }

    pub fn lenient() -> Self {
        Self {
            name: ProfileName::Lenient,
            overrides: BTreeMap::new(),
        }
    }

    pub fn named(name: ProfileName) -> Self {
        match name {
            ProfileName::Strict => Self::strict(),
            ProfileName::Lenient => Self::lenient(),
        }
    }

    /// Unknown codes are ignored.
    pub fn with_override(mut self, code: &str, severity: Option<Severity>) -> Self {
        if let Some((code, _)) = RULES.iter().find(|(c, _)| *c == code) {
            self.overrides.insert(code, severity);
        }
        self
    }

    pub fn severity(&self, code: &str) -> Option<Severity> {
        if let Some(s) = self.overrides.get(code) {
            return *s;
        }
        let strict = self.name == ProfileName::Strict;
        match code {
            V_UNSET if strict => Some(Severity::Error),
            V_UNSET => Some(Severity::Warning),
            V_NA_MAND if strict => Some(Severity::Warning),
            V_NA_MAND => None,
            V_TRACE_DANGLE | V_FN_ORPHAN => Some(Severity::Error),
            V_FN_GAP | V_REQ_EMPTY | V_SIGN_DATE | V_DEF_UNUSED => Some(Severity::Warning),
            _ => None,
        }
    }
}

struct Finding {
    code: &'static str,
    locus: Locus,
    message: String,
}

/// Runs every rule. Output is ordered by the template position of the locus,
/// then by code; ties keep rule emission order.
pub fn validate(project: &Project, profile: &Profile) -> Vec<Diagnostic> {
    let mut findings = Vec::new();
    check_sections(project, &mut findings);
    check_traces(project, &mut findings);
    check_functions(project, &mut findings);
    check_requirement_text(project, &mut findings);
    check_signoffs(project, &mut findings);
    check_definitions(project, &mut findings);

    let mut out: Vec<(usize, Diagnostic)> = findings
        .into_iter()
        .filter_map(|f| {
            let severity = profile.severity(f.code)?;
            Some((
                locus_position(project, &f.locus),
                Diagnostic {
                    code: f.code,
                    severity,
                    locus: f.locus,
                    message: f.message,
                },
            ))
        })
        .collect();
    out.sort_by(|(pa, a), (pb, b)| pa.cmp(pb).then(a.code.cmp(b.code)));
    out.into_iter().map(|(_, d)| d).collect()
}

/// Sort position of a locus: the project header first, then template
/// pre-order (requirements and functions sit at their section), then the
/// sign-off roles in block order.
fn locus_position(project: &Project, locus: &Locus) -> usize {
    let t = project.template();
    let n = t.nodes().len();
    match locus {
        Locus::ProjectHeader => 0,
        Locus::Section(p) => t.position(p).map_or(n + 1, |i| i + 1),
        Locus::Requirement(id) => project
            .requirements()
            .get(id)
            .and_then(|r| t.requirements_leaf(r.kind()))
            .and_then(|node| t.position(&node.path))
            .map_or(n + 1, |i| i + 1),
        Locus::Function(_) => t.position(&t.functions_leaf().path).map_or(n + 1, |i| i + 1),
        Locus::Signoff(role) => n + 2 + SignoffRole::ALL.iter().position(|r| r == role).unwrap_or(0),
    }
}

fn check_sections(project: &Project, out: &mut Vec<Finding>) {
    for node in project.template().leaves().filter(|n| n.mandatory) {
        let state = project.leaf_state(&node.path).expect("template leaf");
        match state {
            LeafState::Unset => out.push(Finding {
                code: V_UNSET,
                locus: Locus::Section(node.path.clone()),
                message: format!("mandatory section \"{}\" is unset", node.label),
            }),
            LeafState::Na => out.push(Finding {
                code: V_NA_MAND,
                locus: Locus::Section(node.path.clone()),
                message: format!("mandatory section \"{}\" is marked NA", node.label),
            }),
            LeafState::Filled => {}
        }
    }
}

fn check_traces(project: &Project, out: &mut Vec<Finding>) {
    for req in project.requirements().values() {
        for target in req.trace() {
            if !project.requirements().contains_key(target) {
                out.push(Finding {
                    code: V_TRACE_DANGLE,
                    locus: Locus::Requirement(req.id().clone()),
                    message: format!("trace target {target} does not exist"),
                });
            }
        }
    }
}

fn check_functions(project: &Project, out: &mut Vec<Finding>) {
    let functions = project.functions();
    // Sibling groups keyed by parent; `None` is the top level.
    let mut groups: BTreeMap<Option<FunctionNumber>, BTreeSet<u32>> = BTreeMap::new();
    for num in functions.keys() {
        let parent = num.parent();
        if let Some(parent) = &parent {
            if !functions.contains_key(parent) {
                out.push(Finding {
                    code: V_FN_ORPHAN,
                    locus: Locus::Function(num.clone()),
                    message: format!("function {num} has no parent function {parent}"),
                });
                continue;
            }
        }
        groups.entry(parent).or_default().insert(num.last());
    }
    for (parent, siblings) in groups {
        let present: Vec<u32> = siblings.iter().copied().collect();
        let mut expected = 1u32;
        for &n in &present {
            while expected < n {
                let mut parts = parent.as_ref().map(|p| p.components().to_vec()).unwrap_or_default();
                let mut next = parts.clone();
                parts.push(expected);
                next.push(n);
                let missing = FunctionNumber::from_components(parts).expect("positive components");
                let next = FunctionNumber::from_components(next).expect("positive components");
                out.push(Finding {
                    code: V_FN_GAP,
                    locus: Locus::Function(next.clone()),
                    message: format!("function {missing} is missing before {next}"),
                });
                expected += 1;
            }
            expected = n + 1;
        }
    }
}

fn check_requirement_text(project: &Project, out: &mut Vec<Finding>) {
    for req in project.requirements().values() {
        if req.text().trim().is_empty() {
            out.push(Finding {
                code: V_REQ_EMPTY,
                locus: Locus::Requirement(req.id().clone()),
                message: format!("requirement {} (\"{}\") has no text", req.id(), req.title()),
            });
        }
    }
}

fn check_signoffs(project: &Project, out: &mut Vec<Finding>) {
    for (role, s) in project.signoffs() {
        if s.is_signed() && s.date.is_none() {
            out.push(Finding {
                code: V_SIGN_DATE,
                locus: Locus::Signoff(*role),
                message: format!("{} is signed by {} but undated", role.display_name(), s.name),
            });
        }
    }
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Case-sensitive whole-word search.
pub(crate) fn contains_word(haystack: &str, word: &str) -> bool {
    if word.is_empty() {
        return false;
    }
    haystack.match_indices(word).any(|(i, _)| {
        let before = haystack[..i].chars().next_back();
        let after = haystack[i + word.len()..].chars().next();
        !before.is_some_and(is_word_char) && !after.is_some_and(is_word_char)
    })
}

fn check_definitions(project: &Project, out: &mut Vec<Finding>) {
    let mut corpus: Vec<&str> = project
        .sections()
        .values()
        .filter_map(|b| match b {
            SectionBody::Text(t) => Some(t.as_str()),
            SectionBody::Na => None,
        })
        .collect();
    for req in project.requirements().values() {
        corpus.push(req.title());
        corpus.push(req.text());
    }
    let locus = project.template().definitions_leaf().path.clone();
    for d in project.definitions() {
        if !corpus.iter().any(|text| contains_word(text, &d.term)) {
            out.push(Finding {
                code: V_DEF_UNUSED,
                locus: Locus::Section(locus.clone()),
                message: format!("term \"{}\" is never used", d.term),
            });
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoverageSummary {
    pub filled: usize,
    pub na: usize,
    pub unset: usize,
    pub total_leaves: usize,
}

pub fn coverage_report(project: &Project) -> CoverageSummary {
    let mut c = CoverageSummary {
        filled: 0,
        na: 0,
        unset: 0,
        total_leaves: 0,
    };
    for node in project.template().leaves() {
        c.total_leaves += 1;
        match project.leaf_state(&node.path).expect("template leaf") {
            LeafState::Filled => c.filled += 1,
            LeafState::Na => c.na += 1,
            LeafState::Unset => c.unset += 1,
        }
    }
    c
}

/// One line per diagnostic: `SEVERITY CODE locus: message`.
pub fn text_report(diagnostics: &[Diagnostic]) -> String {
    diagnostics.iter().map(|d| format!("{d}\n")).collect()
}

pub fn json_report(diagnostics: &[Diagnostic]) -> String {
    serde_json::to_string_pretty(diagnostics).expect("diagnostics serialize")
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(|d| d.severity == Severity::Error)
}
