//! Property schema, (concept, property, feedback) triples and OWL output.

mod kb;
mod owl;
mod schema;

pub use kb::{load_triples, prefill_definitions, KnowledgeBase, Triple};
pub use owl::{export_owl, owl_class_id};
pub use schema::{Property, PropertyMatcher, PropertySchema, BASE_PROPERTIES, DEFAULT_PROPERTIES};

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum OntologyError {
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid property schema: {0}")]
    Schema(String),
}
