use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::qa::QaEngine;

use super::{EvalError, LsaModel};

pub const HISTOGRAM_BINS: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalQuestion {
    pub id: String,
    pub question: String,
    pub key_answer: String,
}

/// Reads JSON-lines `{"id", "question", "key_answer"}` records.
pub fn load_questions(path: &Path) -> Result<Vec<EvalQuestion>, EvalError> {
    let text = fs::read_to_string(path).map_err(|source| EvalError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_questions(&text, &path.display().to_string())
}

pub fn parse_questions(text: &str, origin: &str) -> Result<Vec<EvalQuestion>, EvalError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| EvalError::Parse {
                path: origin.to_string(),
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuestionResult {
    pub id: String,
    pub question: String,
    pub answered: bool,
    pub answer: String,
    /// LSA similarity to the key answer, for answered questions.
    pub similarity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub total: usize,
    pub answered: usize,
    pub answered_pct: f64,
    /// Counts over [0.0, 0.1), …, [0.9, 1.0]; answered questions only.
    pub histogram: [usize; HISTOGRAM_BINS],
    pub mean_similarity: Option<f64>,
    pub results: Vec<QuestionResult>,
}

/// Histogram bin of a similarity value. Negative values land in the first
/// bin and 1.0 in the last.
pub fn histogram_bin(s: f64) -> usize {
    ((s * HISTOGRAM_BINS as f64).floor().max(0.0) as usize).min(HISTOGRAM_BINS - 1)
}

/// Answers each question and scores answered ones against their key.
pub fn evaluate_batch(
    questions: &[EvalQuestion],
    engine: &QaEngine,
    model: &LsaModel,
) -> EvalReport {
    let results: Vec<QuestionResult> = questions
        .iter()
        .map(|q| {
            let a = engine.answer(&q.question);
            let answered = a.is_answered();
            QuestionResult {
                id: q.id.clone(),
                question: q.question.clone(),
                answered,
                answer: a.text(),
                similarity: answered.then(|| model.similarity(&a.text(), &q.key_answer)),
            }
        })
        .collect();
    let answered = results.iter().filter(|r| r.answered).count();
    let mut histogram = [0; HISTOGRAM_BINS];
    let sims: Vec<f64> = results.iter().filter_map(|r| r.similarity).collect();
    for &s in &sims {
        histogram[histogram_bin(s)] += 1;
    }
    EvalReport {
        total: results.len(),
        answered,
        answered_pct: if results.is_empty() {
            0.0
        } else {
            100.0 * answered as f64 / results.len() as f64
        },
        histogram,
        mean_similarity: (!sims.is_empty()).then(|| sims.iter().sum::<f64>() / sims.len() as f64),
        results,
    }
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Answered rate followed by one row per similarity range.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "answered: {}/{} ({:.1}%)",
            self.answered, self.total, self.answered_pct
        );
        if let Some(m) = self.mean_similarity {
            let _ = writeln!(out, "mean similarity: {m:.3}");
        }
        out.push_str("similarity   questions   percent\n");
        for (i, &n) in self.histogram.iter().enumerate() {
            let pct = if self.answered == 0 {
                0.0
            } else {
                100.0 * n as f64 / self.answered as f64
            };
            let close = if i + 1 == HISTOGRAM_BINS { ']' } else { ')' };
            let _ = writeln!(
                out,
                "[{:.1}, {:.1}{}  {:>9}   {:>6.1}%",
                i as f64 / 10.0,
                (i + 1) as f64 / 10.0,
                close,
                n,
                pct
            );
        }
        out
    }
}
