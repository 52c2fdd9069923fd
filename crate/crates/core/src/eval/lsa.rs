use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use crate::corpus::{normalize, Corpus};
use crate::extract::{build_dtm, tf_idf};

use super::EvalError;

/// Largest rank used when none is configured.
pub const DEFAULT_MAX_RANK: usize = 50;

/// Singular values below this fraction of the largest are treated as zero.
const RANK_TOLERANCE: f64 = 1e-12;

/// Rank-k truncated SVD `M ≈ T·S·Dᵀ` of a term-document matrix.
#[derive(Debug, Clone)]
pub struct LsaModel {
    terms: Vec<String>,
    term_index: HashMap<String, usize>,
    doc_count: usize,
    t: DMatrix<f64>,
    s: DVector<f64>,
    d: DMatrix<f64>,
    /// Rows of T·S, one per term.
    word_vectors: DMatrix<f64>,
}

/// Unigram tf-idf term-document matrix of `corpus`.
///
/// Terms found in every document weigh zero everywhere and are left out.
pub fn term_document_matrix(
    corpus: &Corpus,
    log_base: f64,
) -> Result<(Vec<String>, DMatrix<f64>), EvalError> {
    let dtm = build_dtm(corpus, 1)?;
    let n = dtm.doc_count();
    let mut terms = Vec::new();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for t in 0..dtm.len() {
        let df = dtm.doc_freq(t);
        if df == n {
            continue;
        }
        let mut row = vec![0.0; n];
        for &(doc, tf) in dtm.row(t) {
            row[doc] = tf_idf(tf as u64, df, n, log_base)?;
        }
        terms.push(dtm.terms()[t].clone());
        rows.push(row);
    }
    let m = DMatrix::from_fn(rows.len(), n, |i, j| rows[i][j]);
    Ok((terms, m))
}

/// `min(DEFAULT_MAX_RANK, rows, cols)` for the matrix of `corpus`.
pub fn default_rank(corpus: &Corpus) -> Result<usize, EvalError> {
    let (terms, m) = term_document_matrix(corpus, 2.0)?;
    Ok(DEFAULT_MAX_RANK.min(terms.len()).min(m.ncols()))
}

/// Trains on the base-2 tf-idf term-document matrix of `corpus`.
pub fn train_lsa(corpus: &Corpus, k: usize) -> Result<LsaModel, EvalError> {
    if corpus.documents.len() < 2 {
        return Err(EvalError::TooFewDocuments(corpus.documents.len()));
    }
    let (terms, m) = term_document_matrix(corpus, 2.0)?;
    LsaModel::from_matrix(terms, &m, k)
}

impl LsaModel {
    /// Decomposes `m` (rows = `terms`, columns = documents) and keeps the
    /// `k` largest singular values, minus any that are numerically zero.
    pub fn from_matrix(
        terms: Vec<String>,
        m: &DMatrix<f64>,
        k: usize,
    ) -> Result<LsaModel, EvalError> {
        if terms.len() != m.nrows() {
            return Err(EvalError::Shape(format!(
                "{} terms for {} rows",
                terms.len(),
                m.nrows()
            )));
        }
        let max = m.nrows().min(m.ncols());
        if k == 0 {
            return Err(EvalError::InvalidRank);
        }
        if k > max {
            return Err(EvalError::RankTooLarge { k, max });
        }
        let svd = m.clone().svd(true, true);
        let u = svd.u.expect("left vectors requested");
        let v_t = svd.v_t.expect("right vectors requested");
        let sigma = svd.singular_values;
        let top = sigma.iter().copied().fold(0.0, f64::max);
        let kept = sigma
            .iter()
            .take(k)
            .take_while(|&&s| s > top * RANK_TOLERANCE)
            .count();
        if kept < k {
            log::warn!("rank {k} requested, matrix has only {kept} non-zero singular values");
        }
        let t = u.columns(0, kept).into_owned();
        let s = sigma.rows(0, kept).into_owned();
        let d = v_t.rows(0, kept).transpose();
        let word_vectors = &t * DMatrix::from_diagonal(&s);
        let term_index = terms
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Ok(LsaModel {
            terms,
            term_index,
            doc_count: m.ncols(),
            t,
            s,
            d,
            word_vectors,
        })
    }

    pub fn k(&self) -> usize {
        self.s.len()
    }

    pub fn doc_count(&self) -> usize {
        self.doc_count
    }

    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    pub fn singular_values(&self) -> &DVector<f64> {
        &self.s
    }

    /// T, term × k with orthonormal columns.
    pub fn term_factors(&self) -> &DMatrix<f64> {
        &self.t
    }

    /// D, document × k with orthonormal columns.
    pub fn doc_factors(&self) -> &DMatrix<f64> {
        &self.d
    }

    /// T·S·Dᵀ.
    pub fn reconstruct(&self) -> DMatrix<f64> {
        &self.word_vectors * self.d.transpose()
    }

    /// Frobenius norm of `m − T·S·Dᵀ`.
    pub fn reconstruction_error(&self, m: &DMatrix<f64>) -> f64 {
        (m - self.reconstruct()).norm()
    }

    pub fn word_vector(&self, term: &str) -> Option<DVector<f64>> {
        let &i = self.term_index.get(term)?;
        Some(self.word_vectors.row(i).transpose())
    }

    /// Mean vector of the in-vocabulary tokens of `text`.
    pub fn text_vector(&self, text: &str) -> Option<DVector<f64>> {
        let mut sum = DVector::zeros(self.k());
        let mut n = 0usize;
        for tok in normalize(text) {
            if let Some(&i) = self.term_index.get(&tok) {
                sum += self.word_vectors.row(i).transpose();
                n += 1;
            }
        }
        (n > 0).then(|| sum / n as f64)
    }

    /// Cosine of the mean word vectors of two texts; 0 when either text has
    /// no in-vocabulary word.
    pub fn similarity(&self, a: &str, b: &str) -> f64 {
        match (self.text_vector(a), self.text_vector(b)) {
            (Some(x), Some(y)) => cosine(&x, &y),
            _ => {
                log::warn!("similarity of a text without known words taken as 0");
                0.0
            }
        }
    }
}

pub fn similarity(model: &LsaModel, a: &str, b: &str) -> f64 {
    model.similarity(a, b)
}

fn cosine(x: &DVector<f64>, y: &DVector<f64>) -> f64 {
    let denom = x.norm() * y.norm();
    if denom == 0.0 {
        return 0.0;
    }
    (x.dot(y) / denom).clamp(-1.0, 1.0)
}
