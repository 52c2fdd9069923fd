//! Loading and segmenting plain-text learning resources.
//!
//! A corpus is a directory of UTF-8 `.txt` files. Each file becomes a
//! [`Document`]; each blank-line separated block of a document becomes a
//! [`Paragraph`], the unit later turned into a mining transaction.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("no .txt files found in {0}")]
    EmptyCorpus(PathBuf),
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("malformed corpus manifest: {0}")]
    Manifest(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    /// File name of the source, unique within a corpus.
    pub id: String,
    pub source_path: String,
    pub raw_text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Paragraph {
    pub doc_id: String,
    /// 0-based position within the owning document.
    pub index: usize,
    /// Paragraph text as it appeared in the source, trimmed.
    pub text: String,
    pub tokens: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corpus {
    pub documents: Vec<Document>,
    pub paragraphs: Vec<Paragraph>,
}

impl Corpus {
    /// Builds a corpus from in-memory `(id, text)` pairs, in the given order.
    pub fn from_texts<I, S, T>(texts: I) -> Corpus
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: Into<String>,
    {
        let mut corpus = Corpus::default();
        for (id, text) in texts {
            let id = id.into();
            corpus.push_document(Document {
                source_path: id.clone(),
                id,
                raw_text: text.into(),
            });
        }
        corpus
    }

    fn push_document(&mut self, doc: Document) {
        let raw = split_paragraphs(&doc.raw_text);
        let resolved = NoopCoref.resolve(raw);
        for (index, text) in resolved.into_iter().enumerate() {
            let tokens = normalize(&text);
            self.paragraphs.push(Paragraph {
                doc_id: doc.id.clone(),
                index,
                text,
                tokens,
            });
        }
        self.documents.push(doc);
    }

    /// Paragraphs belonging to the document with the given id.
    pub fn paragraphs_of<'a>(
        &'a self,
        doc_id: &'a str,
    ) -> impl Iterator<Item = &'a Paragraph> + 'a {
        self.paragraphs.iter().filter(move |p| p.doc_id == doc_id)
    }

    /// Total number of normalized tokens across all paragraphs.
    pub fn token_total(&self) -> usize {
        self.paragraphs.iter().map(|p| p.tokens.len()).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("corpus serializes")
    }

    pub fn from_json(s: &str) -> Result<Corpus, CorpusError> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Loads every `.txt` file of `dir`, ordered by file name.
///
/// Files that are empty after trimming are skipped with a warning.
pub fn load_corpus(dir: &Path) -> Result<Corpus, CorpusError> {
    let io_err = |source| CorpusError::Io {
        path: dir.to_path_buf(),
        source,
    };
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(io_err)?
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|ext| ext == "txt"))
        .collect();
    files.sort_by(|a, b| a.file_name().cmp(&b.file_name()));

    let mut corpus = Corpus::default();
    for path in files {
        let raw_text = fs::read_to_string(&path).map_err(|source| CorpusError::Io {
            path: path.clone(),
            source,
        })?;
        if raw_text.trim().is_empty() {
            log::warn!("skipping empty document {}", path.display());
            continue;
        }
        let id = path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        corpus.push_document(Document {
            id,
            source_path: path.to_string_lossy().into_owned(),
            raw_text,
        });
    }
    if corpus.documents.is_empty() {
        return Err(CorpusError::EmptyCorpus(dir.to_path_buf()));
    }
    Ok(corpus)
}

/// Splits text on runs of blank lines (lines empty after trimming).
///
/// Segments are trimmed and empty segments dropped.
pub fn split_paragraphs(raw_text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    for line in raw_text.lines() {
        if line.trim().is_empty() {
            flush(&mut current, &mut out);
        } else {
            current.push(line);
        }
    }
    flush(&mut current, &mut out);
    out
}

fn flush(lines: &mut Vec<&str>, out: &mut Vec<String>) {
    if lines.is_empty() {
        return;
    }
    let joined = lines.join("\n");
    let trimmed = joined.trim();
    if !trimmed.is_empty() {
        out.push(trimmed.to_string());
    }
    lines.clear();
}

/// Lowercases `raw` and splits it into `[a-z0-9]+` tokens.
///
/// Every other character, including hyphens and apostrophes, separates
/// tokens.
pub fn normalize(raw: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in raw.chars().flat_map(char::to_lowercase) {
        if ch.is_ascii_lowercase() || ch.is_ascii_digit() {
            current.push(ch);
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// Extension point for pronoun resolution over a document's paragraphs.
pub trait CorefResolver {
    fn resolve(&self, paragraphs: Vec<String>) -> Vec<String>;
}

/// Leaves pronouns unresolved.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoopCoref;

impl CorefResolver for NoopCoref {
    fn resolve(&self, paragraphs: Vec<String>) -> Vec<String> {
        paragraphs
    }
}
