//! The project value and its pure mutation operations.
//!
//! Every operation borrows the project and returns a new one; the input is
//! never modified.

use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;

use super::ids::{FunctionNumber, ReqId, ReqKind, SectionPath, SignoffRole};
use super::template::{customize_template, SectionKind, Template, TemplateEdit, TemplateRegistry};
use crate::error::ModelError;

/// Normalizes free text: CRLF and lone CR become LF, trailing blank lines
/// are dropped.
pub fn normalize_text(s: &str) -> String {
    let s = s.replace("\r\n", "\n").replace('\r', "\n");
    let mut lines: Vec<&str> = s.split('\n').collect();
    while lines.last().is_some_and(|l| l.trim().is_empty()) {
        lines.pop();
    }
    lines.join("\n")
}

fn single_line(field: &'static str, s: &str) -> Result<String, ModelError> {
    if s.contains(['\n', '\r']) {
        return Err(ModelError::MultiLine(field));
    }
    Ok(s.trim().to_string())
}

fn nonempty_line(field: &'static str, s: &str) -> Result<String, ModelError> {
    let s = single_line(field, s)?;
    if s.is_empty() {
        return Err(ModelError::Empty(field));
    }
    Ok(s)
}

/// Parses an ISO-8601 calendar date (`YYYY-MM-DD`); the empty string means
/// "no date".
pub fn parse_date(s: &str) -> Result<Option<NaiveDate>, ModelError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(None);
    }
    let date = NaiveDate::parse_from_str(s, "%Y-%m-%d").map_err(|_| ModelError::BadDate(s.to_string()))?;
    if date.format("%Y-%m-%d").to_string() != s {
        return Err(ModelError::BadDate(s.to_string()));
    }
    Ok(Some(date))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SectionBody {
    Na,
    Text(String),
}

impl SectionBody {
    /// Text body, normalized; empty text is rejected (use `Na`).
    pub fn text(s: &str) -> Result<Self, ModelError> {
        let s = normalize_text(s);
        if s.trim().is_empty() {
            return Err(ModelError::Empty("section text"));
        }
        Ok(SectionBody::Text(s))
    }
}

/// Whether a template leaf has content, an explicit NA marker, or nothing yet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeafState {
    Filled,
    Na,
    Unset,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Requirement {
    id: ReqId,
    kind: ReqKind,
    title: String,
    text: String,
    trace: Vec<ReqId>,
}

impl Requirement {
    pub fn new(id: ReqId, kind: ReqKind, title: &str) -> Result<Self, ModelError> {
        Ok(Self {
            id,
            kind,
            title: nonempty_line("requirement title", title)?,
            text: String::new(),
            trace: Vec::new(),
        })
    }

    pub fn with_text(mut self, text: &str) -> Self {
        self.text = normalize_text(text);
        self
    }

    pub fn with_trace(mut self, trace: Vec<ReqId>) -> Result<Self, ModelError> {
        let mut seen = BTreeSet::new();
        for target in &trace {
            if *target == self.id {
                return Err(ModelError::SelfTrace(self.id.clone()));
            }
            if !seen.insert(target) {
                return Err(ModelError::DuplicateTrace {
                    id: self.id.clone(),
                    target: target.clone(),
                });
            }
        }
        self.trace = trace;
        Ok(self)
    }

    pub fn id(&self) -> &ReqId {
        &self.id
    }

    pub fn kind(&self) -> ReqKind {
        self.kind
    }

    pub fn title(&self) -> &str {
        &self.title
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn trace(&self) -> &[ReqId] {
        &self.trace
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Definition {
    pub term: String,
    pub meaning: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signoff {
    pub name: String,
    pub date: Option<NaiveDate>,
}

impl Signoff {
    pub fn is_signed(&self) -> bool {
        !self.name.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Project {
    title: String,
    id: u64,
    template: Template,
    signoff_title: Option<String>,
    sections: BTreeMap<SectionPath, SectionBody>,
    definitions: Vec<Definition>,
    functions: BTreeMap<FunctionNumber, String>,
    requirements: BTreeMap<ReqId, Requirement>,
    signoffs: BTreeMap<SignoffRole, Signoff>,
}

/// Creates an empty project against a template resolved from `registry`.
pub fn new_project(title: &str, id: u64, template: &str, registry: &TemplateRegistry) -> Result<Project, ModelError> {
    let template = registry.resolve(template)?.clone();
    Project::with_template(title, id, template)
}

impl Project {
    pub fn with_template(title: &str, id: u64, template: Template) -> Result<Self, ModelError> {
        Ok(Self {
            title: nonempty_line("project title", title)?,
            id,
            template,
            signoff_title: None,
            sections: BTreeMap::new(),
            definitions: Vec::new(),
            functions: BTreeMap::new(),
            requirements: BTreeMap::new(),
            signoffs: SignoffRole::ALL.iter().map(|r| (*r, Signoff::default())).collect(),
        })
    }

    pub fn title(&self) -> &str {
        &self.title
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn template(&self) -> &Template {
        &self.template
    }

    /// Explicit sign-off block title, if one was set.
    pub fn signoff_title(&self) -> Option<&str> {
        self.signoff_title.as_deref()
    }

    /// Title printed above the sign-off block.
    pub fn document_title(&self) -> String {
        match &self.signoff_title {
            Some(t) => t.clone(),
            None => format!("SYSTEM REQUIREMENTS SPECIFICATION for {}", self.title),
        }
    }

    pub fn sections(&self) -> &BTreeMap<SectionPath, SectionBody> {
        &self.sections
    }

    pub fn section(&self, path: &SectionPath) -> Option<&SectionBody> {
        self.sections.get(path)
    }

    pub fn definitions(&self) -> &[Definition] {
        &self.definitions
    }

    pub fn functions(&self) -> &BTreeMap<FunctionNumber, String> {
        &self.functions
    }

    pub fn requirements(&self) -> &BTreeMap<ReqId, Requirement> {
        &self.requirements
    }

    pub fn requirements_of(&self, kind: ReqKind) -> impl Iterator<Item = &Requirement> {
        self.requirements.values().filter(move |r| r.kind == kind)
    }

    pub fn signoffs(&self) -> &BTreeMap<SignoffRole, Signoff> {
        &self.signoffs
    }

    pub fn signoff(&self, role: SignoffRole) -> &Signoff {
        &self.signoffs[&role]
    }

    /// Content state of a leaf. Structured leaves count as filled when they
    /// have at least one item, regardless of any stored NA marker.
    pub fn leaf_state(&self, path: &SectionPath) -> Result<LeafState, ModelError> {
        let node = self
            .template
            .node(path)
            .ok_or_else(|| ModelError::UnknownPath(path.to_string()))?;
        let has_items = match node.kind {
            SectionKind::Container => return Err(ModelError::ContainerPath(path.clone())),
            SectionKind::Text => false,
            SectionKind::Definitions => !self.definitions.is_empty(),
            SectionKind::Functions => !self.functions.is_empty(),
            SectionKind::Requirements(kind) => self.requirements_of(kind).next().is_some(),
        };
        Ok(match (has_items, self.sections.get(path)) {
            (true, _) | (false, Some(SectionBody::Text(_))) => LeafState::Filled,
            (false, Some(SectionBody::Na)) => LeafState::Na,
            (false, None) => LeafState::Unset,
        })
    }

    fn leaf_kind(&self, path: &SectionPath) -> Result<SectionKind, ModelError> {
        let node = self
            .template
            .node(path)
            .ok_or_else(|| ModelError::UnknownPath(path.to_string()))?;
        if !node.kind.is_leaf() {
            return Err(ModelError::ContainerPath(path.clone()));
        }
        Ok(node.kind)
    }

    pub fn set_section(&self, path: &SectionPath, body: SectionBody) -> Result<Project, ModelError> {
        let kind = self.leaf_kind(path)?;
        if kind.is_structured() && body != SectionBody::Na {
            return Err(ModelError::StructuredLeaf(path.clone()));
        }
        let mut next = self.clone();
        next.sections.insert(path.clone(), body);
        Ok(next)
    }

    /// Returns the leaf to the "unset" state.
    pub fn clear_section(&self, path: &SectionPath) -> Result<Project, ModelError> {
        self.leaf_kind(path)?;
        let mut next = self.clone();
        next.sections.remove(path);
        Ok(next)
    }

    pub fn add_requirement(&self, req: Requirement) -> Result<Project, ModelError> {
        if self.requirements.contains_key(&req.id) {
            return Err(ModelError::DuplicateId(req.id.clone()));
        }
        self.put_requirement(req)
    }

    /// Replaces an existing requirement with the same id.
    pub fn update_requirement(&self, req: Requirement) -> Result<Project, ModelError> {
        if !self.requirements.contains_key(&req.id) {
            return Err(ModelError::UnknownRequirement(req.id.clone()));
        }
        self.put_requirement(req)
    }

    fn put_requirement(&self, req: Requirement) -> Result<Project, ModelError> {
        if self.template.requirements_leaf(req.kind).is_none() {
            return Err(ModelError::UnroutableKind(req.kind));
        }
        let mut next = self.clone();
        next.requirements.insert(req.id.clone(), req);
        Ok(next)
    }

    pub fn remove_requirement(&self, id: &ReqId) -> Result<Project, ModelError> {
        if !self.requirements.contains_key(id) {
            return Err(ModelError::UnknownRequirement(id.clone()));
        }
        let mut next = self.clone();
        next.requirements.remove(id);
        Ok(next)
    }

    pub fn add_definition(&self, term: &str, meaning: &str) -> Result<Project, ModelError> {
        let term = nonempty_line("term", term)?;
        if self.definitions.iter().any(|d| d.term == term) {
            return Err(ModelError::DuplicateTerm(term));
        }
        let mut next = self.clone();
        next.definitions.push(Definition {
            term,
            meaning: normalize_text(meaning),
        });
        Ok(next)
    }

    /// Inserts or replaces a definition; a replaced term keeps its position.
    pub fn set_definition(&self, term: &str, meaning: &str) -> Result<Project, ModelError> {
        let term = nonempty_line("term", term)?;
        match self.definitions.iter().position(|d| d.term == term) {
            Some(i) => {
                let mut next = self.clone();
                next.definitions[i].meaning = normalize_text(meaning);
                Ok(next)
            }
            None => self.add_definition(&term, meaning),
        }
    }

    pub fn remove_definition(&self, term: &str) -> Result<Project, ModelError> {
        let i = self
            .definitions
            .iter()
            .position(|d| d.term == term)
            .ok_or_else(|| ModelError::UnknownTerm(term.to_string()))?;
        let mut next = self.clone();
        next.definitions.remove(i);
        Ok(next)
    }

    pub fn set_function(&self, num: FunctionNumber, title: &str) -> Result<Project, ModelError> {
        let title = nonempty_line("function title", title)?;
        let mut next = self.clone();
        next.functions.insert(num, title);
        Ok(next)
    }

    pub fn remove_function(&self, num: &FunctionNumber) -> Result<Project, ModelError> {
        if !self.functions.contains_key(num) {
            return Err(ModelError::UnknownFunction(num.clone()));
        }
        let mut next = self.clone();
        next.functions.remove(num);
        Ok(next)
    }

    pub fn set_signoff(&self, role: SignoffRole, name: &str, date: Option<NaiveDate>) -> Result<Project, ModelError> {
        let name = single_line("sign-off name", name)?;
        let mut next = self.clone();
        next.signoffs.insert(role, Signoff { name, date });
        Ok(next)
    }

    /// Overrides (or, with `None`, resets) the sign-off block title.
    pub fn set_signoff_title(&self, title: Option<&str>) -> Result<Project, ModelError> {
        let title = title.map(|t| nonempty_line("sign-off title", t)).transpose()?;
        let mut next = self.clone();
        next.signoff_title = title;
        Ok(next)
    }

    /// Switches the project to a customized copy of its template. Refused if
    /// a removed leaf still holds a body or a requirement kind would lose its
    /// section.
    pub fn customize(&self, edits: &[TemplateEdit]) -> Result<Project, ModelError> {
        let template = customize_template(&self.template, edits)?;
        self.retemplate(template)
    }

    pub fn retemplate(&self, template: Template) -> Result<Project, ModelError> {
        for (path, body) in &self.sections {
            match template.node(path) {
                Some(node) if node.kind.is_leaf() && (!node.kind.is_structured() || *body == SectionBody::Na) => {}
                _ => return Err(ModelError::SectionInUse(path.clone())),
            }
        }
        for req in self.requirements.values() {
            if template.requirements_leaf(req.kind).is_none() {
                return Err(ModelError::KindInUse(req.kind));
            }
        }
        let mut next = self.clone();
        next.template = template;
        Ok(next)
    }

    /// Walks the whole value and reports the first broken invariant.
    pub fn check_invariants(&self) -> Result<(), ModelError> {
        if self.title.trim().is_empty() {
            return Err(ModelError::Empty("project title"));
        }
        for (path, body) in &self.sections {
            let kind = self.leaf_kind(path)?;
            if kind.is_structured() && *body != SectionBody::Na {
                return Err(ModelError::StructuredLeaf(path.clone()));
            }
            if let SectionBody::Text(t) = body {
                if t.trim().is_empty() {
                    return Err(ModelError::Empty("section text"));
                }
            }
        }
        let mut terms = BTreeSet::new();
        for d in &self.definitions {
            if !terms.insert(d.term.as_str()) {
                return Err(ModelError::DuplicateTerm(d.term.clone()));
            }
        }
        for (id, req) in &self.requirements {
            if *id != req.id {
                return Err(ModelError::DuplicateId(id.clone()));
            }
            if req.trace.contains(id) {
                return Err(ModelError::SelfTrace(id.clone()));
            }
            if self.template.requirements_leaf(req.kind).is_none() {
                return Err(ModelError::UnroutableKind(req.kind));
            }
        }
        if self.signoffs.len() != SignoffRole::ALL.len() {
            return Err(ModelError::InvalidTemplate("sign-off role set is incomplete".into()));
        }
        Ok(())
    }
}
