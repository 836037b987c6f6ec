//! Requirements specification toolkit: a project model organized by an
//! IEEE-830 style template, a canonical `.srs` text format, a rule-based
//! validator, and deterministic document and function-hierarchy renderers.

pub mod error;
pub mod format;
pub mod model;
pub mod render;
pub mod validation;
pub mod wire;

pub use error::ModelError;
pub use model::*;
