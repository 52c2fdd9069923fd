use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::extract::ConceptLexicon;
use crate::mining::TransactionDb;
use crate::ConceptId;

use super::{OntologyError, PropertySchema};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple {
    pub concept: ConceptId,
    pub property: String,
    pub feedback: String,
    /// Set for feedback filled in from the corpus rather than authored.
    pub auto_generated: bool,
}

/// On-disk record; concepts are referenced by name.
#[derive(Debug, Serialize, Deserialize)]
struct Record {
    concept: String,
    property: String,
    feedback: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    auto_generated: bool,
}

/// Triples keyed by (concept, property).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    triples: BTreeMap<(ConceptId, String), Triple>,
}

impl KnowledgeBase {
    /// Stores a triple, replacing any earlier one for the same pair.
    /// Returns the replaced triple.
    pub fn insert(&mut self, triple: Triple) -> Option<Triple> {
        self.triples
            .insert((triple.concept, triple.property.clone()), triple)
    }

    pub fn get(&self, concept: ConceptId, property: &str) -> Option<&Triple> {
        self.triples.get(&(concept, property.to_string()))
    }

    /// Triples ordered by concept id, then property name.
    pub fn iter(&self) -> impl Iterator<Item = &Triple> {
        self.triples.values()
    }

    /// Triples of one concept, ordered by property name.
    pub fn of_concept(&self, concept: ConceptId) -> impl Iterator<Item = &Triple> {
        self.triples
            .range((concept, String::new())..)
            .take_while(move |((c, _), _)| *c == concept)
            .map(|(_, t)| t)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Parses JSON-lines records
    /// `{"concept": …, "property": …, "feedback": …}`.
    ///
    /// Concepts resolve by canonical name or synonym, properties by name or
    /// cue. Records naming an unknown concept or property are skipped with a
    /// warning; a repeated pair keeps the later record.
    pub fn parse(
        text: &str,
        origin: &str,
        lexicon: &ConceptLexicon,
        schema: &PropertySchema,
    ) -> Result<KnowledgeBase, OntologyError> {
        let mut kb = KnowledgeBase::default();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let rec: Record = serde_json::from_str(line).map_err(|e| OntologyError::Parse {
                path: origin.to_string(),
                line: i + 1,
                message: e.to_string(),
            })?;
            let Some(concept) = lexicon.resolve(&rec.concept) else {
                log::warn!(
                    "{origin}:{}: unknown concept {:?}, record skipped",
                    i + 1,
                    rec.concept
                );
                continue;
            };
            let Some(property) = schema.resolve(&rec.property) else {
                log::warn!(
                    "{origin}:{}: unknown property {:?}, record skipped",
                    i + 1,
                    rec.property
                );
                continue;
            };
            let triple = Triple {
                concept,
                property: property.to_string(),
                feedback: rec.feedback,
                auto_generated: rec.auto_generated,
            };
            if kb.insert(triple).is_some() {
                log::warn!(
                    "{origin}:{}: duplicate ({}, {property}) record replaces the earlier one",
                    i + 1,
                    rec.concept
                );
            }
        }
        Ok(kb)
    }

    /// One record per line, readable by [`KnowledgeBase::parse`].
    pub fn to_jsonl(&self, lexicon: &ConceptLexicon) -> String {
        let mut out = String::new();
        for t in self.iter() {
            let rec = Record {
                concept: lexicon.canonical(t.concept).unwrap_or_default().to_string(),
                property: t.property.clone(),
                feedback: t.feedback.clone(),
                auto_generated: t.auto_generated,
            };
            out.push_str(&serde_json::to_string(&rec).expect("record serializes"));
            out.push('\n');
        }
        out
    }
}

pub fn load_triples(
    path: &Path,
    lexicon: &ConceptLexicon,
    schema: &PropertySchema,
) -> Result<KnowledgeBase, OntologyError> {
    let text = fs::read_to_string(path).map_err(|source| OntologyError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    KnowledgeBase::parse(&text, &path.display().to_string(), lexicon, schema)
}

/// Gives every concept lacking a definition the text of the first paragraph
/// whose transaction contains it, flagged as auto-generated. Returns the
/// number of triples added.
pub fn prefill_definitions(kb: &mut KnowledgeBase, corpus: &Corpus, db: &TransactionDb) -> usize {
    let mut added = 0;
    for t in &db.transactions {
        for &concept in &t.concepts {
            if kb.get(concept, "definition").is_some() {
                continue;
            }
            let Some(p) = corpus.paragraphs.get(t.paragraph) else {
                continue;
            };
            kb.insert(Triple {
                concept,
                property: "definition".to_string(),
                feedback: p.text.clone(),
                auto_generated: true,
            });
            added += 1;
        }
    }
    added
}
