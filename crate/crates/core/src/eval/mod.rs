//! Answer-quality measures: LSA text similarity, Pearson correlation and
//! batch question evaluation.

mod batch;
mod lsa;
mod stats;

pub use batch::{
    evaluate_batch, histogram_bin, load_questions, parse_questions, EvalQuestion, EvalReport,
    QuestionResult, HISTOGRAM_BINS,
};
pub use lsa::{
    default_rank, similarity, term_document_matrix, train_lsa, LsaModel, DEFAULT_MAX_RANK,
};
pub use stats::pearson;

use std::path::PathBuf;

use thiserror::Error;

use crate::extract::ExtractError;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("at least 2 documents are needed, got {0}")]
    TooFewDocuments(usize),
    #[error("rank must be at least 1")]
    InvalidRank,
    #[error("rank {k} exceeds the matrix limit {max}")]
    RankTooLarge { k: usize, max: usize },
    #[error("{0}")]
    Shape(String),
    #[error("samples differ in length: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("at least 2 samples are needed, got {0}")]
    TooShort(usize),
    #[error("a sample has zero variance")]
    DegenerateVariance,
    #[error(transparent)]
    Extract(#[from] ExtractError),
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
}
