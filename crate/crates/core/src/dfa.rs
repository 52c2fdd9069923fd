//! Merged word-level DFA for concept recognition.
//!
//! Every concept phrase (canonical form and each synonym) is one small DFA
//! over words. All of them are merged on shared prefixes into a single
//! dense [`StateTable`]: one row per state, one column per alphabet word plus
//! a trailing "others" column, and a term-id column naming the concept
//! recognized at that state.
//!
//! A cell is one of:
//!
//! * [`Cell::Reset`]: unexpected word, restart from state 0;
//! * [`Cell::Goto`]: move to another state;
//! * [`Cell::Accept`]: the current state recognized a concept and the word
//!   does not extend it.
//!
//! [`StateTable::scan`] is leftmost-longest and non-overlapping: at each start
//! position it follows transitions as far as they go, remembers the last
//! state carrying a term id, emits it, and resumes right after the match.
//! With no match it resumes at the next token.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::normalize;
use crate::extract::{ConceptLexicon, MAX_PHRASE_WORDS};
use crate::ConceptId;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DfaError {
    #[error("lexicon is empty")]
    EmptyLexicon,
    #[error("phrase {phrase:?} is claimed by concepts {first} and {second}")]
    DuplicatePhrase {
        phrase: String,
        first: ConceptId,
        second: ConceptId,
    },
    #[error(
        "phrase {phrase:?} of concept {concept} has {words} words, expected 1..={MAX_PHRASE_WORDS}"
    )]
    PhraseLength {
        phrase: String,
        concept: ConceptId,
        words: usize,
    },
    #[error("malformed state table: {0}")]
    Malformed(String),
}

/// One transition-table entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cell {
    Reset,
    Goto(u32),
    Accept,
}

/// JSON form: `0` for reset, `n` for goto, `"α"` for accept.
impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match *self {
            Cell::Reset => s.serialize_u32(0),
            Cell::Goto(n) => s.serialize_u32(n),
            Cell::Accept => s.serialize_str(ACCEPT_MARK),
        }
    }
}

impl<'de> Deserialize<'de> for Cell {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            State(u32),
            Mark(String),
        }
        match Repr::deserialize(d)? {
            Repr::State(0) => Ok(Cell::Reset),
            Repr::State(n) => Ok(Cell::Goto(n)),
            Repr::Mark(m) if m == ACCEPT_MARK => Ok(Cell::Accept),
            Repr::Mark(m) => Err(de::Error::custom(format!("unknown cell marker {m:?}"))),
        }
    }
}

pub const ACCEPT_MARK: &str = "α";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ConceptOccurrence {
    pub concept_id: ConceptId,
    pub token_start: usize,
    pub token_len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateTable {
    alphabet: Vec<String>,
    /// `rows[state]` has `alphabet.len() + 1` cells; the last is "others".
    rows: Vec<Vec<Cell>>,
    /// Concept recognized at each state, `-1` for none.
    term_id: Vec<i64>,
    #[serde(skip)]
    word_index: HashMap<String, usize>,
}

impl StateTable {
    /// Compiles every phrase of the lexicon into one merged table.
    pub fn build(lexicon: &ConceptLexicon) -> Result<StateTable, DfaError> {
        if lexicon.is_empty() {
            return Err(DfaError::EmptyLexicon);
        }
        let mut alphabet: Vec<String> = Vec::new();
        let mut word_index: HashMap<String, usize> = HashMap::new();
        let mut edges: Vec<Vec<(usize, u32)>> = vec![Vec::new()];
        let mut accepts: Vec<Option<ConceptId>> = vec![None];

        for concept in &lexicon.concepts {
            for phrase in concept.phrases() {
                let words = normalize(phrase);
                if words.is_empty() || words.len() > MAX_PHRASE_WORDS {
                    return Err(DfaError::PhraseLength {
                        phrase: phrase.to_string(),
                        concept: concept.id,
                        words: words.len(),
                    });
                }
                let mut state = 0usize;
                for w in &words {
                    let col = *word_index.entry(w.clone()).or_insert_with(|| {
                        alphabet.push(w.clone());
                        alphabet.len() - 1
                    });
                    state = match edges[state].iter().find(|&&(c, _)| c == col) {
                        Some(&(_, next)) => next as usize,
                        None => {
                            let next = edges.len();
                            edges.push(Vec::new());
                            accepts.push(None);
                            edges[state].push((col, next as u32));
                            next
                        }
                    };
                }
                match accepts[state] {
                    Some(owner) if owner != concept.id => {
                        return Err(DfaError::DuplicatePhrase {
                            phrase: words.join(" "),
                            first: owner,
                            second: concept.id,
                        })
                    }
                    _ => accepts[state] = Some(concept.id),
                }
            }
        }

        let width = alphabet.len() + 1;
        let rows = edges
            .iter()
            .zip(&accepts)
            .map(|(out, acc)| {
                let fill = if acc.is_some() {
                    Cell::Accept
                } else {
                    Cell::Reset
                };
                let mut row = vec![fill; width];
                for &(col, next) in out {
                    row[col] = Cell::Goto(next);
                }
                row
            })
            .collect();
        let term_id = accepts
            .iter()
            .map(|a| a.map_or(-1, |id| id.0 as i64))
            .collect();
        Ok(StateTable {
            alphabet,
            rows,
            term_id,
            word_index,
        })
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.rows.len()
    }

    /// Column for `word`, or the "others" column.
    pub fn column(&self, word: &str) -> usize {
        self.word_index
            .get(word)
            .copied()
            .unwrap_or(self.alphabet.len())
    }

    pub fn cell(&self, state: usize, word: &str) -> Cell {
        self.rows[state][self.column(word)]
    }

    pub fn row(&self, state: usize) -> &[Cell] {
        &self.rows[state]
    }

    pub fn term_id(&self, state: usize) -> Option<ConceptId> {
        u32::try_from(self.term_id[state]).ok().map(ConceptId)
    }

    /// Leftmost-longest, non-overlapping concept occurrences in `tokens`.
    pub fn scan<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<ConceptOccurrence> {
        let mut out = Vec::new();
        let mut start = 0;
        while start < tokens.len() {
            let mut state = 0usize;
            let mut best: Option<(ConceptId, usize)> = None;
            let mut pos = start;
            while pos < tokens.len() {
                match self.cell(state, tokens[pos].as_ref()) {
                    Cell::Goto(next) => {
                        state = next as usize;
                        pos += 1;
                        if let Some(id) = self.term_id(state) {
                            best = Some((id, pos));
                        }
                    }
                    Cell::Reset | Cell::Accept => break,
                }
            }
            match best {
                Some((concept_id, end)) => {
                    out.push(ConceptOccurrence {
                        concept_id,
                        token_start: start,
                        token_len: end - start,
                    });
                    start = end;
                }
                None => start += 1,
            }
        }
        out
    }

    /// Distinct concepts of [`scan`](Self::scan), in order of first occurrence.
    pub fn concepts_in<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<ConceptId> {
        let mut seen = Vec::new();
        for occ in self.scan(tokens) {
            if !seen.contains(&occ.concept_id) {
                seen.push(occ.concept_id);
            }
        }
        seen
    }

    pub fn to_json(&self) -> String {
        // One row per line keeps the file readable as a grid.
        let mut s = String::from("{\n  \"alphabet\": ");
        s.push_str(&serde_json::to_string(&self.alphabet).expect("alphabet serializes"));
        s.push_str(",\n  \"rows\": [\n");
        for (i, row) in self.rows.iter().enumerate() {
            let sep = if i + 1 == self.rows.len() { "" } else { "," };
            let _ = writeln!(
                s,
                "    {}{sep}",
                serde_json::to_string(row).expect("row serializes")
            );
        }
        s.push_str("  ],\n  \"term_id\": ");
        s.push_str(&serde_json::to_string(&self.term_id).expect("ids serialize"));
        s.push_str("\n}\n");
        s
    }

    pub fn from_json(s: &str) -> Result<StateTable, DfaError> {
        let mut table: StateTable =
            serde_json::from_str(s).map_err(|e| DfaError::Malformed(e.to_string()))?;
        let width = table.alphabet.len() + 1;
        if table.rows.is_empty() || table.rows.len() != table.term_id.len() {
            return Err(DfaError::Malformed("row and term_id counts differ".into()));
        }
        if table.term_id[0] != -1 {
            return Err(DfaError::Malformed("start state carries a term id".into()));
        }
        for row in &table.rows {
            if row.len() != width {
                return Err(DfaError::Malformed(format!(
                    "row width {} != {width}",
                    row.len()
                )));
            }
            if row
                .iter()
                .any(|c| matches!(c, Cell::Goto(n) if *n as usize >= table.term_id.len()))
            {
                return Err(DfaError::Malformed("transition to unknown state".into()));
            }
        }
        table.word_index = table
            .alphabet
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        Ok(table)
    }

    /// Plain-text grid: one header line, one line per state.
    pub fn render(&self) -> String {
        let mut s = String::from("state");
        for w in &self.alphabet {
            let _ = write!(s, "\t{w}");
        }
        s.push_str("\tothers\tterm_id\n");
        for (i, row) in self.rows.iter().enumerate() {
            let _ = write!(s, "{i}");
            for c in row {
                match c {
                    Cell::Reset => s.push_str("\t0"),
                    Cell::Goto(n) => {
                        let _ = write!(s, "\t{n}");
                    }
                    Cell::Accept => {
                        s.push('\t');
                        s.push_str(ACCEPT_MARK);
                    }
                }
            }
            let _ = writeln!(s, "\t{}", self.term_id[i]);
        }
        s
    }
}
