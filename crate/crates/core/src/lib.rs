//! Corpus-to-ontology toolchain.
//!
//! The pipeline runs in stages, each with its own module:
//!
//! 1. [`corpus`] loads plain-text resources and splits them into paragraphs.
//! 2. [`extract`] scores n-grams with tf-idf, filters everyday-language
//!    terms and produces the [`ConceptLexicon`](extract::ConceptLexicon).
//! 3. [`dfa`] compiles the lexicon into one merged state table and scans
//!    token streams for concept occurrences.
//! 4. [`mining`] turns paragraphs into transactions, builds the FP-tree and
//!    the rule-confidence matrix.
//! 5. [`taxonomy`] reshapes the FP-tree into a single-occurrence is-a
//!    hierarchy.
//! 6. [`ontology`] holds the property schema, the knowledge base of
//!    (concept, property, feedback) triples and the OWL writer.
//! 7. [`qa`] answers questions against the knowledge base.
//! 8. [`eval`] scores answers with LSA similarity and Pearson correlation.
//!
//! [`pipeline`] ties the stages together with persisted artifacts.

pub mod corpus;
pub mod dfa;
pub mod eval;
pub mod extract;
mod ids;
pub mod mining;
pub mod ontology;
pub mod pipeline;
pub mod qa;
pub mod taxonomy;

pub use ids::ConceptId;
