use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Corpus;
use crate::dfa::StateTable;
use crate::ConceptId;

#[derive(Debug, Error)]
pub enum TransactionError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transaction {
    /// Position of the source paragraph in the corpus.
    pub paragraph: usize,
    pub concepts: BTreeSet<ConceptId>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TransactionDb {
    pub transactions: Vec<Transaction>,
}

impl TransactionDb {
    /// Builds a database from item sets; empty sets are skipped.
    pub fn from_sets<I, T, C>(sets: I) -> TransactionDb
    where
        I: IntoIterator<Item = T>,
        T: IntoIterator<Item = C>,
        C: Into<ConceptId>,
    {
        let transactions = sets
            .into_iter()
            .enumerate()
            .map(|(paragraph, items)| Transaction {
                paragraph,
                concepts: items.into_iter().map(Into::into).collect(),
            })
            .filter(|t| !t.concepts.is_empty())
            .collect();
        TransactionDb { transactions }
    }

    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &BTreeSet<ConceptId>> {
        self.transactions.iter().map(|t| &t.concepts)
    }

    /// Number of transactions containing every concept of `items`.
    pub fn support(&self, items: &[ConceptId]) -> u64 {
        self.iter()
            .filter(|t| items.iter().all(|c| t.contains(c)))
            .count() as u64
    }

    /// One JSON object per line: `{"paragraph":3,"concepts":[6,9]}`.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for t in &self.transactions {
            out.push_str(&serde_json::to_string(t).expect("transaction serializes"));
            out.push('\n');
        }
        out
    }

    pub fn from_jsonl(text: &str) -> Result<TransactionDb, TransactionError> {
        let mut transactions = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let t: Transaction =
                serde_json::from_str(line).map_err(|e| TransactionError::Parse {
                    line: i + 1,
                    message: e.to_string(),
                })?;
            if t.concepts.is_empty() {
                return Err(TransactionError::Parse {
                    line: i + 1,
                    message: "empty transaction".into(),
                });
            }
            transactions.push(t);
        }
        Ok(TransactionDb { transactions })
    }
}

/// One transaction per paragraph that mentions at least one concept.
pub fn build_transactions(corpus: &Corpus, table: &StateTable) -> TransactionDb {
    let transactions = corpus
        .paragraphs
        .iter()
        .enumerate()
        .filter_map(|(paragraph, p)| {
            let concepts: BTreeSet<ConceptId> = table
                .scan(&p.tokens)
                .into_iter()
                .map(|o| o.concept_id)
                .collect();
            (!concepts.is_empty()).then_some(Transaction {
                paragraph,
                concepts,
            })
        })
        .collect();
    TransactionDb { transactions }
}
