//! Answering questions from (concept, property, feedback) triples.
//!
//! A question is split into sentences and normalized like corpus text.
//! Within each sentence the concept automaton finds concepts and the
//! property matcher finds property cues; every concept is paired with every
//! property of the same sentence, or with `definition` when the sentence
//! names no property. Pairs with a stored triple become answer items.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::corpus::normalize;
use crate::dfa::StateTable;
use crate::extract::ConceptLexicon;
use crate::ontology::{KnowledgeBase, PropertyMatcher, PropertySchema};
use crate::ConceptId;

/// Property assumed when a sentence names a concept but no property.
pub const DEFAULT_PROPERTY: &str = "definition";

/// Message shown for questions without an answer.
pub const NO_ANSWER_MESSAGE: &str = "no answer";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Question {
    pub raw: String,
    pub sentences: Vec<Vec<String>>,
}

impl Question {
    /// Splits on `.`, `?`, `!`, `;` and line breaks, then normalizes each
    /// piece. Pieces without tokens are dropped.
    pub fn new(raw: &str) -> Question {
        let sentences = raw
            .split(['.', '?', '!', ';', '\n'])
            .map(normalize)
            .filter(|t| !t.is_empty())
            .collect();
        Question {
            raw: raw.to_string(),
            sentences,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnswerStatus {
    Answered,
    NoAnswer,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnswerItem {
    pub concept_id: ConceptId,
    pub concept: String,
    pub property: String,
    pub feedback: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Answer {
    pub status: AnswerStatus,
    pub items: Vec<AnswerItem>,
}

impl Answer {
    fn from_items(items: Vec<AnswerItem>) -> Answer {
        let status = if items.is_empty() {
            AnswerStatus::NoAnswer
        } else {
            AnswerStatus::Answered
        };
        Answer { status, items }
    }

    pub fn is_answered(&self) -> bool {
        self.status == AnswerStatus::Answered
    }

    /// Feedback texts joined by blank lines, or the no-answer message.
    pub fn text(&self) -> String {
        if self.items.is_empty() {
            return NO_ANSWER_MESSAGE.to_string();
        }
        self.items
            .iter()
            .map(|i| i.feedback.as_str())
            .collect::<Vec<_>>()
            .join("\n\n")
    }
}

/// (concept, property) pairs asked for by `q`, deduplicated, in order of
/// appearance.
pub fn parse_question(
    q: &str,
    table: &StateTable,
    schema: &PropertySchema,
) -> Vec<(ConceptId, String)> {
    pairs(&Question::new(q), table, &schema.matcher())
}

fn pairs(q: &Question, table: &StateTable, matcher: &PropertyMatcher) -> Vec<(ConceptId, String)> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for sentence in &q.sentences {
        let concepts = table.concepts_in(sentence);
        if concepts.is_empty() {
            continue;
        }
        let mut props = matcher.find(sentence);
        if props.is_empty() {
            props.push(DEFAULT_PROPERTY);
        }
        for &c in &concepts {
            for &p in &props {
                if seen.insert((c, p)) {
                    out.push((c, p.to_string()));
                }
            }
        }
    }
    out
}

/// Answers `q` from `kb`; pairs without a triple are skipped.
pub fn answer(
    q: &str,
    kb: &KnowledgeBase,
    table: &StateTable,
    schema: &PropertySchema,
    lexicon: &ConceptLexicon,
) -> Answer {
    resolve(&parse_question(q, table, schema), kb, lexicon)
}

fn resolve(pairs: &[(ConceptId, String)], kb: &KnowledgeBase, lexicon: &ConceptLexicon) -> Answer {
    let items = pairs
        .iter()
        .filter_map(|(c, p)| kb.get(*c, p))
        .map(|t| AnswerItem {
            concept_id: t.concept,
            concept: lexicon.canonical(t.concept).unwrap_or_default().to_string(),
            property: t.property.clone(),
            feedback: t.feedback.clone(),
        })
        .collect();
    Answer::from_items(items)
}

/// Loaded question-answering state. Immutable, so one engine can serve any
/// number of threads.
#[derive(Debug, Clone)]
pub struct QaEngine {
    lexicon: ConceptLexicon,
    table: StateTable,
    schema: PropertySchema,
    matcher: PropertyMatcher,
    kb: KnowledgeBase,
}

impl QaEngine {
    pub fn new(
        lexicon: ConceptLexicon,
        table: StateTable,
        schema: PropertySchema,
        kb: KnowledgeBase,
    ) -> QaEngine {
        let matcher = schema.matcher();
        QaEngine {
            lexicon,
            table,
            schema,
            matcher,
            kb,
        }
    }

    pub fn parse(&self, q: &str) -> Vec<(ConceptId, String)> {
        pairs(&Question::new(q), &self.table, &self.matcher)
    }

    pub fn answer(&self, q: &str) -> Answer {
        resolve(&self.parse(q), &self.kb, &self.lexicon)
    }

    pub fn lexicon(&self) -> &ConceptLexicon {
        &self.lexicon
    }

    pub fn table(&self) -> &StateTable {
        &self.table
    }

    pub fn schema(&self) -> &PropertySchema {
        &self.schema
    }

    pub fn knowledge_base(&self) -> &KnowledgeBase {
        &self.kb
    }
}
