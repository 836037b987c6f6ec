//! SRS domain types, the built-in template, and pure project operations.

mod ids;
mod project;
mod template;

pub use ids::{FunctionNumber, ReqId, ReqKind, SectionPath, SignoffRole};
pub use project::{
    new_project, normalize_text, parse_date, Definition, LeafState, Project, Requirement, SectionBody, Signoff,
};
pub use template::{
    builtin_template, customize_template, LeafKind, SectionKind, SectionNode, Template, TemplateEdit, TemplateId,
    TemplateRegistry, IEEE_830,
};
