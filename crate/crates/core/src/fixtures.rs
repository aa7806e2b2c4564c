//! Bundled model documents, usable as templates.

use crate::document::{ModelDocument, ModelError};

pub const STEEL_PIPE_API: &str = include_str!("../fixtures/steel-pipe-api.model.json");
pub const STEEL_PIPE_IS: &str = include_str!("../fixtures/steel-pipe-is.model.json");

pub const TEMPLATE_NAMES: [&str; 3] = ["steel-pipe-api", "steel-pipe-is", "blank"];

/// Looks up a template by name; `None` for unknown names. `paper-api` and
/// `paper-is` are accepted as aliases of the two steel-pipe models.
pub fn template(name: &str) -> Option<Result<ModelDocument, ModelError>> {
    match name {
        "steel-pipe-api" | "paper-api" => Some(ModelDocument::from_slice(STEEL_PIPE_API.as_bytes())),
        "steel-pipe-is" | "paper-is" => Some(ModelDocument::from_slice(STEEL_PIPE_IS.as_bytes())),
        "blank" => Some(Ok(ModelDocument::blank("Untitled decision"))),
        _ => None,
    }
}
