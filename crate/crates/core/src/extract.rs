//! Candidate term extraction and the concept lexicon.
//!
//! Terms are contiguous n-grams of normalized tokens. Each term is scored
//! with tf-idf per document, keeps its best document score, and survives
//! when that score lies strictly above the `theta` quantile of its n-gram
//! length class. Survivors that are at least as frequent in an
//! everyday-language frequency list as in the subject corpus are dropped,
//! and the rest become concepts with synonyms attached from a flat lexicon
//! file.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{normalize, Corpus};
use crate::ConceptId;

/// Longest phrase, in words, a concept may have.
pub const MAX_PHRASE_WORDS: usize = 5;

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("corpus has no documents")]
    EmptyCorpus,
    #[error("tf-idf undefined for df={df}, n_docs={n_docs}, log_base={log_base}")]
    Domain {
        df: usize,
        n_docs: usize,
        log_base: f64,
    },
    #[error("common-language frequency list unavailable at {path}: {source}")]
    MissingCommonCorpus {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },
    #[error("invalid extraction config: {0}")]
    Config(String),
    #[error("invalid lexicon: {0}")]
    InvalidLexicon(String),
    #[error("malformed lexicon file: {0}")]
    Json(#[from] serde_json::Error),
}

// ---------------------------------------------------------------------------
// Document-term matrix
// ---------------------------------------------------------------------------

/// Sparse term × document count matrix over all n-grams up to a length.
#[derive(Debug, Clone)]
pub struct DocumentTermMatrix {
    terms: Vec<String>,
    ngram_len: Vec<usize>,
    doc_ids: Vec<String>,
    /// Per term, `(document, count)` pairs sorted by document.
    postings: Vec<Vec<(usize, u32)>>,
    index: HashMap<String, usize>,
}

impl DocumentTermMatrix {
    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn doc_count(&self) -> usize {
        self.doc_ids.len()
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    pub fn term_index(&self, term: &str) -> Option<usize> {
        self.index.get(term).copied()
    }

    pub fn ngram_len(&self, term: usize) -> usize {
        self.ngram_len[term]
    }

    /// Raw count of `term` in document `doc`.
    pub fn count(&self, term: usize, doc: usize) -> u32 {
        let row = &self.postings[term];
        row.binary_search_by_key(&doc, |&(d, _)| d)
            .map(|i| row[i].1)
            .unwrap_or(0)
    }

    /// Number of documents containing `term`.
    pub fn doc_freq(&self, term: usize) -> usize {
        self.postings[term].len()
    }

    /// Occurrences of `term` summed over all documents.
    pub fn total_count(&self, term: usize) -> u64 {
        self.postings[term].iter().map(|&(_, c)| c as u64).sum()
    }

    pub fn row(&self, term: usize) -> &[(usize, u32)] {
        &self.postings[term]
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// Counts every contiguous n-gram (1 ≤ n ≤ `max_ngram`) per document.
///
/// N-grams never span paragraph boundaries. Terms are ordered by length,
/// then lexicographically.
pub fn build_dtm(corpus: &Corpus, max_ngram: usize) -> Result<DocumentTermMatrix, ExtractError> {
    if corpus.documents.is_empty() {
        return Err(ExtractError::EmptyCorpus);
    }
    let doc_pos: HashMap<&str, usize> = corpus
        .documents
        .iter()
        .enumerate()
        .map(|(i, d)| (d.id.as_str(), i))
        .collect();

    let mut counts: BTreeMap<(usize, String), BTreeMap<usize, u32>> = BTreeMap::new();
    for para in &corpus.paragraphs {
        let Some(&doc) = doc_pos.get(para.doc_id.as_str()) else {
            continue;
        };
        for n in 1..=max_ngram.min(para.tokens.len()) {
            for window in para.tokens.windows(n) {
                *counts
                    .entry((n, window.join(" ")))
                    .or_default()
                    .entry(doc)
                    .or_default() += 1;
            }
        }
    }

    let mut dtm = DocumentTermMatrix {
        terms: Vec::with_capacity(counts.len()),
        ngram_len: Vec::with_capacity(counts.len()),
        doc_ids: corpus.documents.iter().map(|d| d.id.clone()).collect(),
        postings: Vec::with_capacity(counts.len()),
        index: HashMap::with_capacity(counts.len()),
    };
    for ((n, term), row) in counts {
        dtm.index.insert(term.clone(), dtm.terms.len());
        dtm.terms.push(term);
        dtm.ngram_len.push(n);
        dtm.postings.push(row.into_iter().collect());
    }
    Ok(dtm)
}

/// `tf × log_base(n_docs / df)`.
pub fn tf_idf(tf: u64, df: usize, n_docs: usize, log_base: f64) -> Result<f64, ExtractError> {
    if df == 0 || df > n_docs || log_base.is_nan() || log_base <= 0.0 || log_base == 1.0 {
        return Err(ExtractError::Domain {
            df,
            n_docs,
            log_base,
        });
    }
    Ok(tf as f64 * (n_docs as f64 / df as f64).log(log_base))
}

// ---------------------------------------------------------------------------
// Candidate selection
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtractionConfig {
    /// Quantile of the per-class score distribution a term must exceed.
    pub theta: f64,
    pub max_ngram: usize,
    pub log_base: f64,
    pub common_corpus_path: Option<PathBuf>,
    pub synonyms_path: Option<PathBuf>,
}

impl Default for ExtractionConfig {
    fn default() -> Self {
        ExtractionConfig {
            theta: 0.90,
            max_ngram: MAX_PHRASE_WORDS,
            log_base: 2.0,
            common_corpus_path: None,
            synonyms_path: None,
        }
    }
}

impl ExtractionConfig {
    pub fn validate(&self) -> Result<(), ExtractError> {
        if !(0.0..1.0).contains(&self.theta) {
            return Err(ExtractError::Config(format!(
                "theta {} outside [0,1)",
                self.theta
            )));
        }
        if !(2..=MAX_PHRASE_WORDS).contains(&self.max_ngram) {
            return Err(ExtractError::Config(format!(
                "max_ngram {} outside 2..={MAX_PHRASE_WORDS}",
                self.max_ngram
            )));
        }
        if self.log_base.is_nan() || self.log_base <= 0.0 || self.log_base == 1.0 {
            return Err(ExtractError::Config(format!(
                "log_base {} invalid",
                self.log_base
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub term: String,
    /// Best tf-idf over documents.
    pub score: f64,
    /// Occurrences across the whole corpus.
    pub occurrences: u64,
}

/// Linear-interpolation quantile of an ascending slice.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

fn rank_candidates(a: &Candidate, b: &Candidate) -> Ordering {
    b.score
        .partial_cmp(&a.score)
        .unwrap_or(Ordering::Equal)
        .then_with(|| a.term.cmp(&b.term))
}

/// Terms whose best tf-idf is strictly above the `theta` quantile of their
/// n-gram class. `theta == 0` disables the threshold.
///
/// Sorted by score descending, then term.
pub fn select_candidates(dtm: &DocumentTermMatrix, cfg: &ExtractionConfig) -> Vec<Candidate> {
    let n_docs = dtm.doc_count();
    let mut classes: BTreeMap<usize, Vec<Candidate>> = BTreeMap::new();
    for (t, term) in dtm.terms().iter().enumerate() {
        let df = dtm.doc_freq(t);
        let score = dtm
            .row(t)
            .iter()
            .map(|&(_, tf)| tf_idf(tf as u64, df, n_docs, cfg.log_base).unwrap_or(0.0))
            .fold(f64::NEG_INFINITY, f64::max);
        classes
            .entry(dtm.ngram_len(t))
            .or_default()
            .push(Candidate {
                term: term.clone(),
                score,
                occurrences: dtm.total_count(t),
            });
    }

    let mut out = Vec::new();
    for (_, class) in classes {
        if cfg.theta <= 0.0 {
            out.extend(class);
            continue;
        }
        let mut scores: Vec<f64> = class.iter().map(|c| c.score).collect();
        scores.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
        let cut = quantile(&scores, cfg.theta);
        out.extend(class.into_iter().filter(|c| c.score > cut));
    }
    out.sort_by(rank_candidates);
    out
}

// ---------------------------------------------------------------------------
// Common-language filter
// ---------------------------------------------------------------------------

/// Everyday-language relative frequencies, per million tokens.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CommonCorpusList {
    entries: HashMap<String, f64>,
}

impl CommonCorpusList {
    pub fn load(path: &Path) -> Result<CommonCorpusList, ExtractError> {
        let text =
            fs::read_to_string(path).map_err(|source| ExtractError::MissingCommonCorpus {
                path: path.to_path_buf(),
                source,
            })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses `term<TAB>freq_per_million` lines. `#` starts a comment line.
    pub fn parse(text: &str, origin: &str) -> Result<CommonCorpusList, ExtractError> {
        let mut entries = HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let err = |message: &str| ExtractError::Parse {
                path: origin.to_string(),
                line: i + 1,
                message: message.to_string(),
            };
            let (term, freq) = line
                .split_once('\t')
                .ok_or_else(|| err("expected term<TAB>frequency"))?;
            let freq: f64 = freq
                .trim()
                .parse()
                .map_err(|_| err("frequency is not a number"))?;
            if freq.is_nan() || freq < 0.0 {
                return Err(err("frequency must be non-negative"));
            }
            let key = normalize(term).join(" ");
            if key.is_empty() {
                return Err(err("empty term"));
            }
            entries.insert(key, freq);
        }
        Ok(CommonCorpusList { entries })
    }

    pub fn from_entries<I, S>(entries: I) -> CommonCorpusList
    where
        I: IntoIterator<Item = (S, f64)>,
        S: AsRef<str>,
    {
        CommonCorpusList {
            entries: entries
                .into_iter()
                .map(|(t, f)| (normalize(t.as_ref()).join(" "), f))
                .collect(),
        }
    }

    pub fn per_million(&self, term: &str) -> Option<f64> {
        self.entries.get(term).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Drops candidates at least as frequent in everyday language as in the
/// subject corpus. Order of survivors is preserved.
pub fn filter_common(
    candidates: Vec<Candidate>,
    common: &CommonCorpusList,
    corpus_token_total: usize,
) -> Result<Vec<Candidate>, ExtractError> {
    if corpus_token_total == 0 {
        return Err(ExtractError::EmptyCorpus);
    }
    let scale = 1.0e6 / corpus_token_total as f64;
    Ok(candidates
        .into_iter()
        .filter(|c| match common.per_million(&c.term) {
            Some(everyday) => everyday < c.occurrences as f64 * scale,
            None => true,
        })
        .collect())
}

// ---------------------------------------------------------------------------
// Concept lexicon
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Concept {
    pub id: ConceptId,
    pub canonical: String,
    #[serde(default)]
    pub synonyms: BTreeSet<String>,
}

impl Concept {
    /// Canonical phrase followed by the synonyms.
    pub fn phrases(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.canonical.as_str()).chain(self.synonyms.iter().map(String::as_str))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConceptLexicon {
    pub concepts: Vec<Concept>,
}

impl ConceptLexicon {
    /// Concepts without synonyms, ids assigned by position.
    pub fn from_terms<I, S>(terms: I) -> ConceptLexicon
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        expand_synonyms_with(terms, &SynonymMap::default())
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn get(&self, id: ConceptId) -> Option<&Concept> {
        let idx = (id.0 as usize).checked_sub(1)?;
        self.concepts.get(idx).filter(|c| c.id == id)
    }

    pub fn canonical(&self, id: ConceptId) -> Option<&str> {
        self.get(id).map(|c| c.canonical.as_str())
    }

    /// Resolves a canonical term or a synonym (normalized first).
    pub fn resolve(&self, phrase: &str) -> Option<ConceptId> {
        let key = normalize(phrase).join(" ");
        self.concepts
            .iter()
            .find(|c| c.canonical == key)
            .or_else(|| self.concepts.iter().find(|c| c.synonyms.contains(&key)))
            .map(|c| c.id)
    }

    pub fn ids(&self) -> impl Iterator<Item = ConceptId> + '_ {
        self.concepts.iter().map(|c| c.id)
    }

    pub fn validate(&self) -> Result<(), ExtractError> {
        let mut canon = HashSet::new();
        for (i, c) in self.concepts.iter().enumerate() {
            if c.id.0 as usize != i + 1 {
                return Err(ExtractError::InvalidLexicon(format!(
                    "concept at position {} has id {}, expected {}",
                    i,
                    c.id,
                    i + 1
                )));
            }
            if c.canonical.is_empty() {
                return Err(ExtractError::InvalidLexicon(format!(
                    "concept {} has empty name",
                    c.id
                )));
            }
            if !canon.insert(c.canonical.as_str()) {
                return Err(ExtractError::InvalidLexicon(format!(
                    "duplicate canonical term {:?}",
                    c.canonical
                )));
            }
        }
        for c in &self.concepts {
            if let Some(s) = c.synonyms.iter().find(|s| canon.contains(s.as_str())) {
                return Err(ExtractError::InvalidLexicon(format!(
                    "synonym {:?} of concept {} is a canonical term",
                    s, c.id
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("lexicon serializes")
    }

    pub fn from_json(s: &str) -> Result<ConceptLexicon, ExtractError> {
        let lex: ConceptLexicon = serde_json::from_str(s)?;
        lex.validate()?;
        Ok(lex)
    }
}

/// `canonical: syn1, syn2` entries, keyed by normalized canonical phrase.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SynonymMap {
    entries: BTreeMap<String, Vec<String>>,
}

impl SynonymMap {
    pub fn load(path: &Path) -> Result<SynonymMap, ExtractError> {
        let text = fs::read_to_string(path).map_err(|e| ExtractError::Parse {
            path: path.display().to_string(),
            line: 0,
            message: e.to_string(),
        })?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Parses `canonical: syn1, syn2, …` lines; `#` starts a comment line.
    /// Repeated headwords accumulate.
    pub fn parse(text: &str, origin: &str) -> Result<SynonymMap, ExtractError> {
        let mut entries: BTreeMap<String, Vec<String>> = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (head, rest) = line.split_once(':').ok_or_else(|| ExtractError::Parse {
                path: origin.to_string(),
                line: i + 1,
                message: "expected `term: synonym, …`".to_string(),
            })?;
            let head = normalize(head).join(" ");
            if head.is_empty() {
                return Err(ExtractError::Parse {
                    path: origin.to_string(),
                    line: i + 1,
                    message: "empty headword".to_string(),
                });
            }
            let syns = entries.entry(head).or_default();
            for s in rest.split(',') {
                let s = normalize(s).join(" ");
                if !s.is_empty() && !syns.contains(&s) {
                    syns.push(s);
                }
            }
        }
        Ok(SynonymMap { entries })
    }

    pub fn get(&self, term: &str) -> &[String] {
        self.entries.get(term).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &[String])> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }
}

/// Turns terms into concepts, attaching synonyms from the lexicon file.
///
/// A missing or unreadable lexicon file leaves every synonym set empty.
pub fn expand_synonyms<S: AsRef<str>>(terms: &[S], lexicon_path: Option<&Path>) -> ConceptLexicon {
    let map = match lexicon_path {
        Some(path) => SynonymMap::load(path).unwrap_or_else(|e| {
            log::warn!("synonym lexicon not loaded, continuing without synonyms: {e}");
            SynonymMap::default()
        }),
        None => SynonymMap::default(),
    };
    expand_synonyms_with(terms.iter().map(AsRef::as_ref), &map)
}

/// Like [`expand_synonyms`] with an already loaded [`SynonymMap`].
///
/// Synonyms equal to any canonical term, already claimed by an earlier
/// concept, or longer than [`MAX_PHRASE_WORDS`] words are discarded.
/// Duplicate and empty terms are skipped.
pub fn expand_synonyms_with<I, S>(terms: I, map: &SynonymMap) -> ConceptLexicon
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut canon: Vec<String> = Vec::new();
    let mut seen = HashSet::new();
    for t in terms {
        let key = normalize(t.as_ref()).join(" ");
        if !key.is_empty() && seen.insert(key.clone()) {
            canon.push(key);
        }
    }

    let mut claimed: HashSet<String> = HashSet::new();
    let concepts = canon
        .iter()
        .enumerate()
        .map(|(i, term)| {
            let mut synonyms = BTreeSet::new();
            for s in map.get(term) {
                if seen.contains(s) || claimed.contains(s) {
                    continue;
                }
                if s.split(' ').count() > MAX_PHRASE_WORDS {
                    log::warn!(
                        "dropping synonym {s:?} of {term:?}: longer than {MAX_PHRASE_WORDS} words"
                    );
                    continue;
                }
                claimed.insert(s.clone());
                synonyms.insert(s.clone());
            }
            Concept {
                id: ConceptId(i as u32 + 1),
                canonical: term.clone(),
                synonyms,
            }
        })
        .collect();
    ConceptLexicon { concepts }
}

/// Candidate selection followed by the common-language filter.
pub fn extract_candidates(
    corpus: &Corpus,
    cfg: &ExtractionConfig,
    common: &CommonCorpusList,
) -> Result<Vec<Candidate>, ExtractError> {
    cfg.validate()?;
    let dtm = build_dtm(corpus, cfg.max_ngram)?;
    let candidates = select_candidates(&dtm, cfg);
    filter_common(candidates, common, corpus.token_total())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn one_doc(text: &str) -> Corpus {
        Corpus::from_texts([("d", text)])
    }

    fn cand(term: &str, score: f64, occurrences: u64) -> Candidate {
        Candidate {
            term: term.into(),
            score,
            occurrences,
        }
    }

    #[test]
    fn dtm_unigram_counts() {
        let dtm = build_dtm(&one_doc("data model data"), 1).unwrap();
        assert_eq!(dtm.count(dtm.term_index("data").unwrap(), 0), 2);
        assert_eq!(dtm.count(dtm.term_index("model").unwrap(), 0), 1);
        assert!(dtm.term_index("data model").is_none());
    }

    #[test]
    fn dtm_bigram_contiguity() {
        let dtm = build_dtm(&one_doc("data model data"), 2).unwrap();
        assert_eq!(dtm.count(dtm.term_index("data model").unwrap(), 0), 1);
        assert_eq!(dtm.count(dtm.term_index("model data").unwrap(), 0), 1);
        assert!(dtm.term_index("data data").is_none());
    }

    #[test]
    fn dtm_doc_freq() {
        let c = Corpus::from_texts([("a", "data model"), ("b", "data item")]);
        let dtm = build_dtm(&c, 2).unwrap();
        assert_eq!(dtm.doc_freq(dtm.term_index("data").unwrap()), 2);
        assert_eq!(dtm.doc_freq(dtm.term_index("item").unwrap()), 1);
        assert_eq!(dtm.doc_count(), 2);
    }

    #[test]
    fn dtm_ngrams_stop_at_paragraph_boundary() {
        let dtm = build_dtm(&one_doc("data\n\nmodel"), 2).unwrap();
        assert!(dtm.term_index("data model").is_none());
    }

    #[test]
    fn dtm_empty_corpus() {
        assert!(matches!(
            build_dtm(&Corpus::default(), 2),
            Err(ExtractError::EmptyCorpus)
        ));
    }

    #[test]
    fn tf_idf_examples() {
        assert!((tf_idf(3, 2, 4, 2.0).unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(tf_idf(5, 7, 7, 2.0).unwrap(), 0.0);
        assert!((tf_idf(2, 1, 8, 2.0).unwrap() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn tf_idf_domain_errors() {
        assert!(matches!(
            tf_idf(1, 0, 3, 2.0),
            Err(ExtractError::Domain { .. })
        ));
        assert!(matches!(
            tf_idf(1, 4, 3, 2.0),
            Err(ExtractError::Domain { .. })
        ));
        assert!(matches!(
            tf_idf(1, 1, 3, 1.0),
            Err(ExtractError::Domain { .. })
        ));
    }

    #[test]
    fn quantile_hand_values() {
        assert_eq!(quantile(&[1.0, 2.0, 3.0, 4.0], 0.5), 2.5);
        assert_eq!(quantile(&[5.0], 0.9), 5.0);
    }

    /// Ten single-occurrence unigrams in one of two documents, with distinct
    /// term frequencies and therefore distinct scores.
    fn ten_unigram_dtm() -> DocumentTermMatrix {
        let words = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j"];
        let text: Vec<String> = words
            .iter()
            .enumerate()
            .flat_map(|(i, w)| std::iter::repeat_n(w.to_string(), i + 1))
            .collect();
        let c = Corpus::from_texts([
            ("x".to_string(), text.join("\n\n")),
            ("y".to_string(), "zzz".to_string()),
        ]);
        build_dtm(&c, 1).unwrap()
    }

    #[test]
    fn select_theta_zero_returns_all() {
        let dtm = ten_unigram_dtm();
        let cfg = ExtractionConfig {
            theta: 0.0,
            ..Default::default()
        };
        assert_eq!(select_candidates(&dtm, &cfg).len(), dtm.len());
    }

    #[test]
    fn select_top_decile_of_ten() {
        // Scores: a..j have tf 1..10, zzz has tf 1; all df = 1 of 2 docs,
        // so score = tf. Sorted 11 scores [1,1,2,...,10], q(0.9) = 9.0
        // exactly, only "j" (10) lies strictly above.
        let dtm = ten_unigram_dtm();
        let got = select_candidates(&dtm, &ExtractionConfig::default());
        assert_eq!(
            got.iter().map(|c| c.term.as_str()).collect::<Vec<_>>(),
            vec!["j"]
        );
        assert_eq!(got[0].score, 10.0);
    }

    #[test]
    fn select_median_strictly_above() {
        // a:1 b:2 c:3 d:4 occurrences, each in one of two documents.
        let c = Corpus::from_texts([("x", "a b b c c c d d d d"), ("y", "q")]);
        let mut dtm = build_dtm(&c, 1).unwrap();
        // drop the filler document's term from consideration
        let q = dtm.term_index("q").unwrap();
        dtm.postings.remove(q);
        dtm.terms.remove(q);
        dtm.ngram_len.remove(q);
        let cfg = ExtractionConfig {
            theta: 0.5,
            ..Default::default()
        };
        let got: Vec<_> = select_candidates(&dtm, &cfg)
            .into_iter()
            .map(|c| c.term)
            .collect();
        assert_eq!(got, vec!["d", "c"]);
    }

    #[test]
    fn select_ties_break_by_term() {
        let c = Corpus::from_texts([("x", "b a"), ("y", "z")]);
        let dtm = build_dtm(&c, 1).unwrap();
        let cfg = ExtractionConfig {
            theta: 0.0,
            ..Default::default()
        };
        let got: Vec<_> = select_candidates(&dtm, &cfg)
            .into_iter()
            .map(|c| c.term)
            .collect();
        assert_eq!(got, vec!["a", "b", "z"]);
    }

    #[test]
    fn common_filter_rules() {
        let common = CommonCorpusList::from_entries([("the", 50_000.0), ("table", 120.0)]);
        // 1000 corpus tokens: "the" 30 -> 30000/M, "table" 1 -> 1000/M
        let cands = vec![
            cand("database", 5.0, 3),
            cand("the", 4.0, 30),
            cand("table", 3.0, 1),
        ];
        let kept = filter_common(cands, &common, 1000).unwrap();
        let terms: Vec<_> = kept.iter().map(|c| c.term.as_str()).collect();
        assert_eq!(terms, vec!["database", "table"]);
    }

    #[test]
    fn common_filter_table_fixture() {
        // corpus frequency 900/M: 9 occurrences in 10000 tokens
        let common = CommonCorpusList::from_entries([("table", 120.0)]);
        let kept = filter_common(vec![cand("table", 1.0, 9)], &common, 10_000).unwrap();
        assert_eq!(kept.len(), 1);
        // equal frequencies drop the term
        let common = CommonCorpusList::from_entries([("table", 900.0)]);
        assert!(filter_common(vec![cand("table", 1.0, 9)], &common, 10_000)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn common_filter_zero_tokens() {
        let err = filter_common(vec![], &CommonCorpusList::default(), 0).unwrap_err();
        assert!(matches!(err, ExtractError::EmptyCorpus));
    }

    #[test]
    fn common_list_parse_and_missing() {
        let l = CommonCorpusList::parse("# freq\nThe\t50000\nData Model\t3.5\n", "x").unwrap();
        assert_eq!(l.per_million("the"), Some(50000.0));
        assert_eq!(l.per_million("data model"), Some(3.5));
        let err = CommonCorpusList::parse("the 5\n", "x").unwrap_err();
        assert!(matches!(err, ExtractError::Parse { line: 1, .. }));
        let err = CommonCorpusList::load(Path::new("/nonexistent/common.tsv")).unwrap_err();
        assert!(matches!(err, ExtractError::MissingCommonCorpus { .. }));
    }

    #[test]
    fn synonyms_single_mapping() {
        let map = SynonymMap::parse("data: information", "x").unwrap();
        let lex = expand_synonyms_with(["data"], &map);
        assert_eq!(lex.concepts[0].id, ConceptId(1));
        assert!(lex.concepts[0].synonyms.contains("information"));
    }

    #[test]
    fn synonym_colliding_with_canonical_is_dropped() {
        let map = SynonymMap::parse("data: information", "x").unwrap();
        let lex = expand_synonyms_with(["data", "information"], &map);
        assert!(lex.concepts[0].synonyms.is_empty());
        lex.validate().unwrap();
    }

    #[test]
    fn synonym_claimed_once() {
        let map = SynonymMap::parse("table: relation\nfile: relation, record set", "x").unwrap();
        let lex = expand_synonyms_with(["table", "file"], &map);
        assert!(lex.concepts[0].synonyms.contains("relation"));
        assert!(!lex.concepts[1].synonyms.contains("relation"));
        assert!(lex.concepts[1].synonyms.contains("record set"));
    }

    #[test]
    fn table_two_ids() {
        let terms = [
            "root",
            "data",
            "data file",
            "data independence",
            "data item",
            "data model",
            "data types",
            "data warehouse",
            "database",
            "database application",
            "database management",
        ];
        let lex = expand_synonyms(&terms, None);
        for (i, t) in terms.iter().enumerate() {
            assert_eq!(lex.resolve(t), Some(ConceptId(i as u32 + 1)));
        }
        assert_eq!(lex.canonical(ConceptId(11)), Some("database management"));
    }

    #[test]
    fn missing_synonym_file_gives_empty_sets() {
        let lex = expand_synonyms(&["data"], Some(Path::new("/nonexistent/syn.txt")));
        assert!(lex.concepts[0].synonyms.is_empty());
    }

    #[test]
    fn lexicon_rejects_bad_ids() {
        let bad = r#"{"concepts":[{"id":2,"canonical":"a","synonyms":[]}]}"#;
        assert!(matches!(
            ConceptLexicon::from_json(bad),
            Err(ExtractError::InvalidLexicon(_))
        ));
    }

    #[test]
    fn config_validation() {
        assert!(ExtractionConfig::default().validate().is_ok());
        let bad = ExtractionConfig {
            theta: 1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = ExtractionConfig {
            max_ngram: 6,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    fn arb_corpus() -> impl Strategy<Value = Corpus> {
        prop::collection::vec(prop::collection::vec("[a-e]", 1..15), 1..5).prop_map(|docs| {
            Corpus::from_texts(
                docs.into_iter()
                    .enumerate()
                    .map(|(i, words)| (format!("d{i}"), words.join(" "))),
            )
        })
    }

    proptest! {
        #[test]
        fn ubiquitous_terms_score_zero(corpus in arb_corpus()) {
            let dtm = build_dtm(&corpus, 2).unwrap();
            let n = dtm.doc_count();
            for t in 0..dtm.len() {
                let df = dtm.doc_freq(t);
                prop_assert!(df >= 1 && df <= n);
                if df == n {
                    for &(_, tf) in dtm.row(t) {
                        prop_assert_eq!(tf_idf(tf as u64, df, n, 2.0).unwrap(), 0.0);
                    }
                }
            }
        }

        #[test]
        fn candidates_shrink_as_theta_grows(corpus in arb_corpus(), a in 0.0f64..0.99, b in 0.0f64..0.99) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let dtm = build_dtm(&corpus, 3).unwrap();
            let cfg = |theta| ExtractionConfig { theta, ..Default::default() };
            let small: HashSet<String> = select_candidates(&dtm, &cfg(hi)).into_iter().map(|c| c.term).collect();
            let large: HashSet<String> = select_candidates(&dtm, &cfg(lo)).into_iter().map(|c| c.term).collect();
            prop_assert!(small.is_subset(&large));
            for t in &large {
                prop_assert!(dtm.term_index(t).is_some());
            }
        }

        #[test]
        fn filter_preserves_order(freqs in prop::collection::vec(0.0f64..2000.0, 0..12)) {
            let cands: Vec<Candidate> = freqs.iter().enumerate()
                .map(|(i, _)| cand(&format!("t{i}"), 1.0, i as u64 + 1)).collect();
            let common = CommonCorpusList::from_entries(
                freqs.iter().enumerate().map(|(i, f)| (format!("t{i}"), *f)));
            let kept = filter_common(cands.clone(), &common, 1000).unwrap();
            let pos: Vec<usize> = kept.iter()
                .map(|k| cands.iter().position(|c| c.term == k.term).unwrap()).collect();
            prop_assert!(pos.windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn lexicon_json_round_trip(terms in prop::collection::btree_set("[a-d]{1,3}( [a-d]{1,3}){0,2}", 1..8),
                                   syn_lines in prop::collection::vec(("[a-d]{1,3}", "[e-h]{1,3}"), 0..6)) {
            let text: String = syn_lines.iter().map(|(h, s)| format!("{h}: {s}\n")).collect();
            let map = SynonymMap::parse(&text, "p").unwrap();
            let lex = expand_synonyms_with(terms.iter(), &map);
            lex.validate().unwrap();
            prop_assert_eq!(ConceptLexicon::from_json(&lex.to_json()).unwrap(), lex);
        }
    }
}
