//! Document generation. All three formats walk the same outline: the
//! template in pre-order with each leaf resolved to its content.

mod fhd;
mod html;
mod markdown;
mod text;

use std::fmt;
use std::str::FromStr;

pub use fhd::{build_fhd, render_fhd, FhdFormat, FhdNode, FhdTree};

use crate::model::{
    Definition, FunctionNumber, LeafState, Project, Requirement, SectionBody, SectionKind, SectionNode, SignoffRole,
};

pub const DOCUMENT_HEADING: &str = "SOFTWARE REQUIREMENT SPECIFICATION";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DocFormat {
    Text,
    Markdown,
    Html,
}

impl DocFormat {
    pub const ALL: [DocFormat; 3] = [DocFormat::Text, DocFormat::Markdown, DocFormat::Html];

    pub fn content_type(self) -> &'static str {
        match self {
            DocFormat::Text => "text/plain; charset=utf-8",
            DocFormat::Markdown => "text/markdown; charset=utf-8",
            DocFormat::Html => "text/html; charset=utf-8",
        }
    }
}

impl fmt::Display for DocFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DocFormat::Text => "text",
            DocFormat::Markdown => "markdown",
            DocFormat::Html => "html",
        })
    }
}

impl FromStr for DocFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(DocFormat::Text),
            "markdown" | "md" => Ok(DocFormat::Markdown),
            "html" => Ok(DocFormat::Html),
            other => Err(format!("unknown format `{other}` (expected text, markdown or html)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderedDocument {
    pub format: DocFormat,
    pub content: String,
}

pub fn render(project: &Project, format: DocFormat) -> RenderedDocument {
    let outline = Outline::build(project);
    let content = match format {
        DocFormat::Text => text::emit(&outline),
        DocFormat::Markdown => markdown::emit(&outline),
        DocFormat::Html => html::emit(&outline),
    };
    RenderedDocument { format, content }
}

pub fn render_text(project: &Project) -> RenderedDocument {
    render(project, DocFormat::Text)
}

pub fn render_markdown(project: &Project) -> RenderedDocument {
    render(project, DocFormat::Markdown)
}

pub fn render_html(project: &Project) -> RenderedDocument {
    render(project, DocFormat::Html)
}

pub(crate) enum Content<'a> {
    Na,
    Text(&'a str),
    Definitions(&'a [Definition]),
    Functions(Vec<(&'a FunctionNumber, &'a str)>),
    Requirements(Vec<&'a Requirement>),
}

pub(crate) struct Item<'a> {
    pub node: &'a SectionNode,
    /// `None` for containers.
    pub content: Option<Content<'a>>,
}

pub(crate) struct SignoffLine<'a> {
    pub role: SignoffRole,
    pub name: &'a str,
    pub date: Option<String>,
}

pub(crate) struct Outline<'a> {
    pub title: &'a str,
    pub id: u64,
    pub items: Vec<Item<'a>>,
    pub document_title: String,
    pub signoffs: Vec<SignoffLine<'a>>,
}

/// Sign-off groups in document order.
pub(crate) const SIGNOFF_GROUPS: [(&str, &[SignoffRole]); 3] = [
    ("Submitted by:", &[SignoffRole::SubmittedBy]),
    (
        "Coordination:",
        &[
            SignoffRole::CoordApplicationsArchitecture,
            SignoffRole::CoordEngineering,
            SignoffRole::CoordTestDirector,
        ],
    ),
    ("Approved by:", &[SignoffRole::ApprovedBy]),
];

impl<'a> Outline<'a> {
    fn build(project: &'a Project) -> Self {
        let items = project
            .template()
            .nodes()
            .iter()
            .map(|node| {
                let content = node.kind.is_leaf().then(|| leaf_content(project, node));
                Item { node, content }
            })
            .collect();
        let signoffs = project
            .signoffs()
            .iter()
            .map(|(role, s)| SignoffLine {
                role: *role,
                name: &s.name,
                date: s.date.map(|d| d.format("%Y-%m-%d").to_string()),
            })
            .collect();
        Outline {
            title: project.title(),
            id: project.id(),
            items,
            document_title: project.document_title(),
            signoffs,
        }
    }

    pub fn signoff(&self, role: SignoffRole) -> &SignoffLine<'a> {
        self.signoffs
            .iter()
            .find(|s| s.role == role)
            .expect("all roles present")
    }
}

fn leaf_content<'a>(project: &'a Project, node: &'a SectionNode) -> Content<'a> {
    if project.leaf_state(&node.path) != Ok(LeafState::Filled) {
        return Content::Na;
    }
    match node.kind {
        SectionKind::Text => match project.section(&node.path) {
            Some(SectionBody::Text(t)) => Content::Text(t),
            _ => Content::Na,
        },
        SectionKind::Definitions => Content::Definitions(project.definitions()),
        SectionKind::Functions => {
            Content::Functions(project.functions().iter().map(|(n, t)| (n, t.as_str())).collect())
        }
        SectionKind::Requirements(kind) => Content::Requirements(project.requirements_of(kind).collect()),
        SectionKind::Container => unreachable!("containers have no content"),
    }
}
