//! Section templates: the ordered tree of headings a project is written
//! against, the built-in `ieee-830` organization, and template edits.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use super::ids::{is_path_token, ReqKind, SectionPath};
use crate::error::ModelError;

pub const IEEE_830: &str = "ieee-830";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TemplateId(String);

impl TemplateId {
    pub fn parse(s: &str) -> Result<Self, ModelError> {
        let valid = !s.is_empty()
            && s.chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'));
        if valid {
            Ok(Self(s.to_string()))
        } else {
            Err(ModelError::UnknownTemplate(s.to_string()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TemplateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SectionKind {
    Container,
    Text,
    Definitions,
    Functions,
    Requirements(ReqKind),
}

impl SectionKind {
    pub fn is_leaf(self) -> bool {
        self != SectionKind::Container
    }

    /// Leaves whose content comes from structured project data rather than a body.
    pub fn is_structured(self) -> bool {
        matches!(
            self,
            SectionKind::Definitions | SectionKind::Functions | SectionKind::Requirements(_)
        )
    }
}

impl fmt::Display for SectionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectionKind::Container => f.write_str("container"),
            SectionKind::Text => f.write_str("text"),
            SectionKind::Definitions => f.write_str("definitions"),
            SectionKind::Functions => f.write_str("functions"),
            SectionKind::Requirements(kind) => write!(f, "requirements:{kind}"),
        }
    }
}

impl FromStr for SectionKind {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "container" => Ok(SectionKind::Container),
            "text" => Ok(SectionKind::Text),
            "definitions" => Ok(SectionKind::Definitions),
            "functions" => Ok(SectionKind::Functions),
            _ => match s.strip_prefix("requirements:") {
                Some(kind) => Ok(SectionKind::Requirements(kind.parse()?)),
                None => Err(ModelError::InvalidTemplate(format!("unknown section kind `{s}`"))),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SectionNode {
    pub path: SectionPath,
    pub label: String,
    pub kind: SectionKind,
    pub mandatory: bool,
}

impl SectionNode {
    pub fn depth(&self) -> usize {
        self.path.depth()
    }
}

/// An ordered tree of section nodes, stored flat in pre-order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    id: TemplateId,
    nodes: Vec<SectionNode>,
}

impl Template {
    /// Builds a template, checking the structural invariants: unique paths,
    /// pre-order layout with container parents, exactly one definitions and
    /// one functions leaf, and at most one requirements leaf per kind.
    pub fn from_nodes(id: TemplateId, nodes: Vec<SectionNode>) -> Result<Self, ModelError> {
        let invalid = |msg: String| Err(ModelError::InvalidTemplate(msg));
        let mut seen = BTreeSet::new();
        let mut stack: Vec<&SectionNode> = Vec::new();
        let mut definitions = 0;
        let mut functions = 0;
        let mut kinds = BTreeSet::new();

        for node in &nodes {
            if node.label.trim().is_empty() {
                return invalid(format!("`{}` has an empty label", node.path));
            }
            if node.label.contains(['\n', '\r']) || node.label.trim() != node.label {
                return invalid(format!("label of `{}` must be a trimmed single line", node.path));
            }
            if !seen.insert(node.path.clone()) {
                return invalid(format!("duplicate path `{}`", node.path));
            }
            let parent = node.path.parent();
            while let Some(top) = stack.last() {
                if Some(&top.path) == parent.as_ref() {
                    break;
                }
                stack.pop();
            }
            if let Some(parent) = &parent {
                match stack.last() {
                    Some(top) if top.path == *parent => {
                        if top.kind != SectionKind::Container {
                            return invalid(format!("parent of `{}` is not a container", node.path));
                        }
                    }
                    _ => return invalid(format!("`{}` is not placed under its parent", node.path)),
                }
            }
            match node.kind {
                SectionKind::Definitions => definitions += 1,
                SectionKind::Functions => functions += 1,
                SectionKind::Requirements(kind) => {
                    if !kinds.insert(kind) {
                        return invalid(format!("two requirements sections for kind `{kind}`"));
                    }
                }
                SectionKind::Container | SectionKind::Text => {}
            }
            if node.kind == SectionKind::Container && node.mandatory {
                return invalid(format!("container `{}` cannot be mandatory", node.path));
            }
            stack.push(node);
        }
        if definitions != 1 {
            return invalid(format!("expected exactly one definitions section, found {definitions}"));
        }
        if functions != 1 {
            return invalid(format!("expected exactly one functions section, found {functions}"));
        }
        Ok(Self { id, nodes })
    }

    pub fn id(&self) -> &TemplateId {
        &self.id
    }

    pub fn is_builtin(&self) -> bool {
        self.id.as_str() == IEEE_830
    }

    /// Nodes in pre-order.
    pub fn nodes(&self) -> &[SectionNode] {
        &self.nodes
    }

    pub fn node(&self, path: &SectionPath) -> Option<&SectionNode> {
        self.nodes.iter().find(|n| n.path == *path)
    }

    /// Pre-order index of a node.
    pub fn position(&self, path: &SectionPath) -> Option<usize> {
        self.nodes.iter().position(|n| n.path == *path)
    }

    pub fn leaves(&self) -> impl Iterator<Item = &SectionNode> {
        self.nodes.iter().filter(|n| n.kind.is_leaf())
    }

    pub fn labels(&self) -> Vec<&str> {
        self.nodes.iter().map(|n| n.label.as_str()).collect()
    }

    pub fn requirements_leaf(&self, kind: ReqKind) -> Option<&SectionNode> {
        self.nodes.iter().find(|n| n.kind == SectionKind::Requirements(kind))
    }

    pub fn definitions_leaf(&self) -> &SectionNode {
        self.nodes
            .iter()
            .find(|n| n.kind == SectionKind::Definitions)
            .expect("template invariant: one definitions leaf")
    }

    pub fn functions_leaf(&self) -> &SectionNode {
        self.nodes
            .iter()
            .find(|n| n.kind == SectionKind::Functions)
            .expect("template invariant: one functions leaf")
    }

    /// Index one past the last descendant of the node at `index`.
    fn subtree_end(&self, index: usize) -> usize {
        let root = &self.nodes[index].path;
        let prefix = format!("{root}.");
        let mut end = index + 1;
        while end < self.nodes.len() && self.nodes[end].path.as_str().starts_with(&prefix) {
            end += 1;
        }
        end
    }

    fn content_id(nodes: &[SectionNode]) -> TemplateId {
        let mut hasher = Sha256::new();
        for node in nodes {
            hasher.update(format!(
                "{}\t{}\t{}\t{}\n",
                node.path, node.label, node.kind, node.mandatory
            ));
        }
        let digest = hasher.finalize();
        let hex: String = digest[..4].iter().map(|b| format!("{b:02x}")).collect();
        TemplateId(format!("custom-{hex}"))
    }
}

/// Leaf kinds that may be added by [`customize_template`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeafKind {
    Text,
    Requirements(ReqKind),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TemplateEdit {
    Rename {
        path: SectionPath,
        label: String,
    },
    /// Appends a leaf as the last child of `parent` (or at top level when `None`).
    AddLeaf {
        parent: Option<SectionPath>,
        token: String,
        label: String,
        kind: LeafKind,
        mandatory: bool,
    },
    Remove {
        path: SectionPath,
    },
    SetMandatory {
        path: SectionPath,
        mandatory: bool,
    },
}

/// Applies `edits` in order to a copy of `base`. The result gets a fresh
/// content-derived id of the form `custom-xxxxxxxx`.
pub fn customize_template(base: &Template, edits: &[TemplateEdit]) -> Result<Template, ModelError> {
    let mut work = base.clone();
    for edit in edits {
        apply_edit(&mut work, edit)?;
    }
    let id = Template::content_id(&work.nodes);
    Template::from_nodes(id, work.nodes)
}

fn apply_edit(t: &mut Template, edit: &TemplateEdit) -> Result<(), ModelError> {
    let index_of = |t: &Template, path: &SectionPath| {
        t.position(path)
            .ok_or_else(|| ModelError::UnknownPath(path.to_string()))
    };
    match edit {
        TemplateEdit::Rename { path, label } => {
            let i = index_of(t, path)?;
            if label.trim().is_empty() {
                return Err(ModelError::Empty("label"));
            }
            if label.contains(['\n', '\r']) {
                return Err(ModelError::MultiLine("label"));
            }
            t.nodes[i].label = label.trim().to_string();
        }
        TemplateEdit::AddLeaf {
            parent,
            token,
            label,
            kind,
            mandatory,
        } => {
            if !is_path_token(token) {
                return Err(ModelError::MalformedPath(token.clone()));
            }
            if label.trim().is_empty() {
                return Err(ModelError::Empty("label"));
            }
            if label.contains(['\n', '\r']) {
                return Err(ModelError::MultiLine("label"));
            }
            let (path, insert_at) = match parent {
                Some(parent) => {
                    let i = index_of(t, parent)?;
                    if t.nodes[i].kind != SectionKind::Container {
                        return Err(ModelError::NotAContainer(parent.clone()));
                    }
                    (parent.child(token)?, t.subtree_end(i))
                }
                None => (SectionPath::parse(token)?, t.nodes.len()),
            };
            if t.position(&path).is_some() {
                return Err(ModelError::DuplicateToken {
                    parent: parent.as_ref().map(ToString::to_string).unwrap_or_default(),
                    token: token.clone(),
                });
            }
            let kind = match kind {
                LeafKind::Text => SectionKind::Text,
                LeafKind::Requirements(k) => {
                    if t.requirements_leaf(*k).is_some() {
                        return Err(ModelError::InvalidTemplate(format!(
                            "kind `{k}` already has a requirements section"
                        )));
                    }
                    SectionKind::Requirements(*k)
                }
            };
            t.nodes.insert(
                insert_at,
                SectionNode {
                    path,
                    label: label.trim().to_string(),
                    kind,
                    mandatory: *mandatory,
                },
            );
        }
        TemplateEdit::Remove { path } => {
            let i = index_of(t, path)?;
            let end = t.subtree_end(i);
            if t.nodes[i..end]
                .iter()
                .any(|n| matches!(n.kind, SectionKind::Definitions | SectionKind::Functions))
            {
                return Err(ModelError::ProtectedNode(path.clone()));
            }
            t.nodes.drain(i..end);
        }
        TemplateEdit::SetMandatory { path, mandatory } => {
            let i = index_of(t, path)?;
            if !t.nodes[i].kind.is_leaf() {
                return Err(ModelError::ContainerPath(path.clone()));
            }
            t.nodes[i].mandatory = *mandatory;
        }
    }
    Ok(())
}

/// Returns a built-in template. Only `ieee-830` exists.
pub fn builtin_template(id: &str) -> Result<Template, ModelError> {
    match id {
        IEEE_830 => Ok(ieee_830()),
        other => Err(ModelError::UnknownTemplate(other.to_string())),
    }
}

fn ieee_830() -> Template {
    use ReqKind as K;
    use SectionKind as S;
    const M: bool = true;
    const O: bool = false;
    let table: [(&str, &str, SectionKind, bool); 30] = [
        ("introduction", "Introduction", S::Container, O),
        ("introduction.purpose", "Purpose", S::Text, M),
        ("introduction.scope", "Scope", S::Text, M),
        ("introduction.definitions", "Definition", S::Definitions, O),
        ("introduction.intended-audience", "Intended Audience", S::Text, O),
        ("introduction.references", "Reference", S::Text, O),
        ("introduction.overview", "Overview", S::Text, O),
        ("introduction.document-conventions", "Document Conventions", S::Text, O),
        ("overall-description", "Overall Description", S::Container, O),
        (
            "overall-description.product-perspective",
            "Product Perspective",
            S::Text,
            M,
        ),
        (
            "overall-description.product-functions",
            "Product Function",
            S::Functions,
            M,
        ),
        (
            "overall-description.user-characteristics",
            "User Characteristics",
            S::Text,
            O,
        ),
        (
            "overall-description.operating-environment",
            "Operating Environment",
            S::Text,
            O,
        ),
        (
            "overall-description.general-constraints",
            "General Constraints",
            S::Text,
            O,
        ),
        (
            "overall-description.user-documentation",
            "User Documentation",
            S::Text,
            O,
        ),
        (
            "overall-description.assumptions-dependencies",
            "Assumptions Dependencies",
            S::Text,
            O,
        ),
        ("specific-requirements", "Specific Requirements", S::Text, O),
        (
            "external-interfaces",
            "External Interface Requirements",
            S::Container,
            O,
        ),
        (
            "external-interfaces.user-interface",
            "User Interface",
            S::Requirements(K::UserInterface),
            O,
        ),
        (
            "external-interfaces.hardware-interface",
            "Hardware Interface",
            S::Requirements(K::HardwareInterface),
            O,
        ),
        (
            "external-interfaces.software-interface",
            "Software Interface",
            S::Requirements(K::SoftwareInterface),
            O,
        ),
        (
            "external-interfaces.communication-interface",
            "Communication Interface",
            S::Requirements(K::CommunicationInterface),
            O,
        ),
        (
            "external-interfaces.functional-requirements",
            "Functional Requirements",
            S::Requirements(K::Functional),
            M,
        ),
        (
            "external-interfaces.behavioural-requirements",
            "Behavioural Requirements",
            S::Requirements(K::Behavioural),
            O,
        ),
        ("non-functional", "Other Non-functional Requirements", S::Container, O),
        (
            "non-functional.performance",
            "Performance Requirements",
            S::Requirements(K::Performance),
            O,
        ),
        (
            "non-functional.safety",
            "Safety Requirements",
            S::Requirements(K::Safety),
            O,
        ),
        (
            "non-functional.security",
            "Security Requirements",
            S::Requirements(K::Security),
            O,
        ),
        ("non-functional.software-quality", "Software Quality", S::Text, O),
        ("other-requirements", "Other Requirements", S::Text, O),
    ];
    let nodes = table
        .into_iter()
        .map(|(path, label, kind, mandatory)| SectionNode {
            path: SectionPath::parse(path).expect("built-in path"),
            label: label.to_string(),
            kind,
            mandatory,
        })
        .collect();
    Template::from_nodes(TemplateId(IEEE_830.to_string()), nodes).expect("built-in template is valid")
}

/// Templates that `new_project` can resolve by id: the built-ins plus any
/// registered customizations.
#[derive(Debug, Clone)]
pub struct TemplateRegistry {
    templates: BTreeMap<TemplateId, Template>,
}

impl Default for TemplateRegistry {
    fn default() -> Self {
        let builtin = ieee_830();
        Self {
            templates: BTreeMap::from([(builtin.id.clone(), builtin)]),
        }
    }
}

impl TemplateRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, template: Template) {
        self.templates.insert(template.id.clone(), template);
    }

    pub fn resolve(&self, id: &str) -> Result<&Template, ModelError> {
        self.templates
            .iter()
            .find(|(k, _)| k.as_str() == id)
            .map(|(_, t)| t)
            .ok_or_else(|| ModelError::UnknownTemplate(id.to_string()))
    }
}
