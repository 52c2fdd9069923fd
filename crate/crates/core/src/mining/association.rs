use std::collections::HashMap;
use std::fmt::Write as _;

use super::TransactionDb;
use crate::extract::ConceptLexicon;
use crate::ConceptId;

/// Pairwise rule confidences `conf(x ⇒ y) = support({x,y}) / support({x})`.
///
/// Stores exact counts; confidences are computed on lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssociationMatrix {
    concepts: Vec<ConceptId>,
    index: HashMap<ConceptId, usize>,
    support: Vec<u64>,
    /// Row-major `concepts.len()²` co-occurrence counts.
    pair: Vec<u64>,
}

impl AssociationMatrix {
    pub fn build(db: &TransactionDb) -> AssociationMatrix {
        let mut concepts: Vec<ConceptId> = db.iter().flatten().copied().collect();
        concepts.sort_unstable();
        concepts.dedup();
        let index: HashMap<ConceptId, usize> =
            concepts.iter().enumerate().map(|(i, c)| (*c, i)).collect();
        let n = concepts.len();
        let mut support = vec![0u64; n];
        let mut pair = vec![0u64; n * n];
        for t in db.iter() {
            let rows: Vec<usize> = t.iter().map(|c| index[c]).collect();
            for &x in &rows {
                support[x] += 1;
                for &y in &rows {
                    pair[x * n + y] += 1;
                }
            }
        }
        AssociationMatrix {
            concepts,
            index,
            support,
            pair,
        }
    }

    /// Concepts occurring in at least one transaction, ascending.
    pub fn concepts(&self) -> &[ConceptId] {
        &self.concepts
    }

    pub fn support(&self, x: ConceptId) -> u64 {
        self.index.get(&x).map_or(0, |&i| self.support[i])
    }

    pub fn co_occurrence(&self, x: ConceptId, y: ConceptId) -> u64 {
        match (self.index.get(&x), self.index.get(&y)) {
            (Some(&i), Some(&j)) => self.pair[i * self.concepts.len() + j],
            _ => 0,
        }
    }

    /// Confidence of `x ⇒ y`; `None` when `x` never occurs.
    pub fn confidence(&self, x: ConceptId, y: ConceptId) -> Option<f64> {
        let &i = self.index.get(&x)?;
        let both = self.co_occurrence(x, y);
        Some(both as f64 / self.support[i] as f64)
    }

    /// Tab-separated grid with canonical names; row = antecedent.
    pub fn to_tsv(&self, lexicon: &ConceptLexicon) -> String {
        let name = |c: ConceptId| {
            lexicon
                .canonical(c)
                .map(str::to_string)
                .unwrap_or_else(|| c.to_string())
        };
        let mut out = String::from("term");
        for &c in &self.concepts {
            let _ = write!(out, "\t{}", name(c));
        }
        out.push('\n');
        for &x in &self.concepts {
            out.push_str(&name(x));
            for &y in &self.concepts {
                let _ = write!(out, "\t{:.6}", self.confidence(x, y).unwrap_or(0.0));
            }
            out.push('\n');
        }
        out
    }
}
