use thiserror::Error;

use crate::model::{FunctionNumber, ReqId, ReqKind, SectionPath};

/// Rejection of a model operation. Every variant carries a stable code
/// (see [`ModelError::code`]) shared by the CLI and the HTTP service.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown template `{0}`")]
    UnknownTemplate(String),
    #[error("{0} must not be empty")]
    Empty(&'static str),
    #[error("{0} must be a single line")]
    MultiLine(&'static str),
    #[error("unknown section path `{0}`")]
    UnknownPath(String),
    #[error("malformed section path `{0}`")]
    MalformedPath(String),
    #[error("`{0}` is a container section and has no body")]
    ContainerPath(SectionPath),
    #[error("section `{0}` is filled from structured data and only accepts NA")]
    StructuredLeaf(SectionPath),
    #[error("requirement `{0}` already exists")]
    DuplicateId(ReqId),
    #[error("malformed requirement id `{0}` (expected e.g. FR-1)")]
    MalformedId(String),
    #[error("requirement `{0}` traces to itself")]
    SelfTrace(ReqId),
    #[error("requirement `{id}` lists trace target `{target}` more than once")]
    DuplicateTrace { id: ReqId, target: ReqId },
    #[error("unknown requirement `{0}`")]
    UnknownRequirement(ReqId),
    #[error("unknown requirement kind `{0}`")]
    UnknownKind(String),
    #[error("template has no requirements section for kind `{0}`")]
    UnroutableKind(ReqKind),
    #[error("term `{0}` is already defined")]
    DuplicateTerm(String),
    #[error("term `{0}` is not defined")]
    UnknownTerm(String),
    #[error("malformed function number `{0}`")]
    MalformedFunctionNumber(String),
    #[error("function `{0}` is not defined")]
    UnknownFunction(FunctionNumber),
    #[error("function `{0}` has no parent function")]
    OrphanFunction(FunctionNumber),
    #[error("unknown sign-off role `{0}`")]
    UnknownRole(String),
    #[error("malformed date `{0}` (expected YYYY-MM-DD)")]
    BadDate(String),
    #[error("malformed project id `{0}`")]
    BadProjectId(String),
    #[error("section `{0}` cannot be removed from the template")]
    ProtectedNode(SectionPath),
    #[error("`{parent}` already has a child named `{token}`")]
    DuplicateToken { parent: String, token: String },
    #[error("`{0}` is not a container section")]
    NotAContainer(SectionPath),
    #[error("section `{0}` still has content in the project")]
    SectionInUse(SectionPath),
    #[error("requirements of kind `{0}` would lose their section")]
    KindInUse(ReqKind),
    #[error("invalid template: {0}")]
    InvalidTemplate(String),
}

impl ModelError {
    pub fn code(&self) -> &'static str {
        match self {
            ModelError::UnknownTemplate(_) => "unknown-template",
            ModelError::Empty(_) => "empty-field",
            ModelError::MultiLine(_) => "multi-line",
            ModelError::UnknownPath(_) | ModelError::MalformedPath(_) => "E-PATH",
            ModelError::ContainerPath(_) => "container-path",
            ModelError::StructuredLeaf(_) => "structured-leaf",
            ModelError::DuplicateId(_) => "duplicate-id",
            ModelError::MalformedId(_) => "malformed-id",
            ModelError::SelfTrace(_) => "self-trace",
            ModelError::DuplicateTrace { .. } => "duplicate-trace",
            ModelError::UnknownRequirement(_) => "unknown-requirement",
            ModelError::UnknownKind(_) => "unknown-kind",
            ModelError::UnroutableKind(_) => "unroutable-kind",
            ModelError::DuplicateTerm(_) => "duplicate-term",
            ModelError::UnknownTerm(_) => "unknown-term",
            ModelError::MalformedFunctionNumber(_) => "malformed-function-number",
            ModelError::UnknownFunction(_) => "unknown-function",
            ModelError::OrphanFunction(_) => "orphan-function",
            ModelError::UnknownRole(_) => "unknown-role",
            ModelError::BadDate(_) => "bad-date",
            ModelError::BadProjectId(_) => "bad-project-id",
            ModelError::ProtectedNode(_) => "protected-node",
            ModelError::DuplicateToken { .. } => "duplicate-token",
            ModelError::NotAContainer(_) => "not-a-container",
            ModelError::SectionInUse(_) => "section-in-use",
            ModelError::KindInUse(_) => "kind-in-use",
            ModelError::InvalidTemplate(_) => "invalid-template",
        }
    }

    /// True when the error names something that does not exist.
    pub fn is_not_found(&self) -> bool {
        matches!(
            self,
            ModelError::UnknownTemplate(_)
                | ModelError::UnknownPath(_)
                | ModelError::UnknownRequirement(_)
                | ModelError::UnknownTerm(_)
                | ModelError::UnknownFunction(_)
                | ModelError::UnknownRole(_)
        )
    }

    /// True when the error is a clash with existing state.
    pub fn is_conflict(&self) -> bool {
        matches!(
            self,
            ModelError::DuplicateId(_)
                | ModelError::DuplicateTerm(_)
                | ModelError::DuplicateToken { .. }
                | ModelError::ProtectedNode(_)
                | ModelError::SectionInUse(_)
                | ModelError::KindInUse(_)
        )
    }
}
