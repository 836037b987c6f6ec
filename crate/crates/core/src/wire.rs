//! JSON shapes exchanged between the HTTP service and its clients.

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::model::{parse_date, LeafState, Project, ReqId, Requirement, SectionBody, SignoffRole};
use crate::validation::{coverage_report, Diagnostic};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectDto {
    pub title: String,
    pub id: u64,
    pub document_title: String,
    pub signoff_title: Option<String>,
    pub template: TemplateDto,
    pub sections: Vec<SectionDto>,
    pub definitions: Vec<DefinitionDto>,
    pub functions: Vec<FunctionDto>,
    pub requirements: Vec<RequirementDto>,
    pub signoffs: Vec<SignoffDto>,
    pub coverage: CoverageDto,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemplateDto {
    pub id: String,
    pub nodes: Vec<NodeDto>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeDto {
    pub path: String,
    pub label: String,
    pub kind: String,
    pub mandatory: bool,
    pub depth: usize,
}

/// One entry per template leaf. `body` is `"NA"`, the text, or absent when unset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionDto {
    pub path: String,
    pub state: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub body: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionUpdate {
    pub body: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefinitionDto {
    pub term: String,
    pub meaning: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DefinitionUpdate {
    #[serde(default)]
    pub meaning: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionDto {
    pub number: String,
    pub title: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionUpdate {
    pub title: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequirementDto {
    pub id: String,
    pub kind: String,
    pub title: String,
    #[serde(default)]
    pub text: String,
    #[serde(default)]
    pub trace: Vec<String>,
}

/// Body of `PUT /api/requirements/{id}`; the id comes from the path.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequirementUpdate {
    pub kind: String,
    pub title: String,
    #[serde(default)]
    pub text: String,
    #[serde(default)]
    pub trace: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignoffDto {
    pub role: String,
    pub display_name: String,
    pub name: String,
    pub date: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignoffUpdate {
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub date: Option<String>,
}

/// Body of `PUT /api/signoff-title`; `null` restores the default title.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignoffTitleUpdate {
    #[serde(default)]
    pub title: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageDto {
    pub filled: usize,
    pub na: usize,
    pub unset: usize,
    pub total_leaves: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagnosticDto {
    pub code: String,
    pub severity: String,
    pub locus: String,
    pub message: String,
}

/// Error body returned with every non-2xx response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiErrorBody {
    pub code: String,
    pub message: String,
}

impl From<&Diagnostic> for DiagnosticDto {
    fn from(d: &Diagnostic) -> Self {
        Self {
            code: d.code.to_string(),
            severity: d.severity.to_string(),
            locus: d.locus.to_string(),
            message: d.message.clone(),
        }
    }
}

impl From<&Requirement> for RequirementDto {
    fn from(r: &Requirement) -> Self {
        Self {
            id: r.id().to_string(),
            kind: r.kind().to_string(),
            title: r.title().to_string(),
            text: r.text().to_string(),
            trace: r.trace().iter().map(ToString::to_string).collect(),
        }
    }
}

impl RequirementDto {
    pub fn to_requirement(&self) -> Result<Requirement, ModelError> {
        let trace = self
            .trace
            .iter()
            .map(|t| ReqId::parse(t.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        Requirement::new(ReqId::parse(&self.id)?, self.kind.parse()?, &self.title)?
            .with_text(&self.text)
            .with_trace(trace)
    }
}

impl RequirementUpdate {
    pub fn with_id(self, id: &str) -> RequirementDto {
        RequirementDto {
            id: id.to_string(),
            kind: self.kind,
            title: self.title,
            text: self.text,
            trace: self.trace,
        }
    }
}

impl SectionUpdate {
    /// `"NA"` is the marker; anything else is text.
    pub fn to_body(&self) -> Result<SectionBody, ModelError> {
        if self.body == "NA" {
            Ok(SectionBody::Na)
        } else {
            SectionBody::text(&self.body)
        }
    }
}

impl SignoffDto {
    pub fn of(project: &Project, role: SignoffRole) -> Self {
        let s = project.signoff(role);
        Self {
            role: role.to_string(),
            display_name: role.display_name().to_string(),
            name: s.name.clone(),
            date: s.date.map(|d| d.format("%Y-%m-%d").to_string()),
        }
    }
}

impl SignoffUpdate {
    pub fn parsed_date(&self) -> Result<Option<chrono::NaiveDate>, ModelError> {
        parse_date(self.date.as_deref().unwrap_or(""))
    }
}

pub fn section_dto(project: &Project, path: &crate::model::SectionPath) -> Result<SectionDto, ModelError> {
    let state = project.leaf_state(path)?;
    let body = match project.section(path) {
        Some(SectionBody::Na) => Some("NA".to_string()),
        Some(SectionBody::Text(t)) => Some(t.clone()),
        None => None,
    };
    Ok(SectionDto {
        path: path.to_string(),
        state: match state {
            LeafState::Filled => "filled",
            LeafState::Na => "na",
            LeafState::Unset => "unset",
        }
        .to_string(),
        body,
    })
}

impl From<&Project> for ProjectDto {
    fn from(p: &Project) -> Self {
        let t = p.template();
        let coverage = coverage_report(p);
        Self {
            title: p.title().to_string(),
            id: p.id(),
            document_title: p.document_title(),
            signoff_title: p.signoff_title().map(str::to_string),
            template: TemplateDto {
                id: t.id().to_string(),
                nodes: t
                    .nodes()
                    .iter()
                    .map(|n| NodeDto {
                        path: n.path.to_string(),
                        label: n.label.clone(),
                        kind: n.kind.to_string(),
                        mandatory: n.mandatory,
                        depth: n.depth(),
                    })
                    .collect(),
            },
            sections: t
                .leaves()
                .map(|n| section_dto(p, &n.path).expect("template leaf"))
                .collect(),
            definitions: p
                .definitions()
                .iter()
                .map(|d| DefinitionDto {
                    term: d.term.clone(),
                    meaning: d.meaning.clone(),
                })
                .collect(),
            functions: p
                .functions()
                .iter()
                .map(|(n, title)| FunctionDto {
                    number: n.to_string(),
                    title: title.clone(),
                })
                .collect(),
            requirements: p.requirements().values().map(RequirementDto::from).collect(),
            signoffs: p.signoffs().keys().map(|role| SignoffDto::of(p, *role)).collect(),
            coverage: CoverageDto {
                filled: coverage.filled,
                na: coverage.na,
                unset: coverage.unset,
                total_leaves: coverage.total_leaves,
            },
        }
    }
}
