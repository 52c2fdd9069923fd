//! Independent reference implementations and random fixtures shared by the
//! integration tests.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::PathBuf;

use ontoforge_core::corpus::Corpus;
use ontoforge_core::dfa::ConceptOccurrence;
use ontoforge_core::extract::{Concept, ConceptLexicon};
use ontoforge_core::mining::TransactionDb;
use ontoforge_core::ConceptId;
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TABLE_TWO: [&str; 11] = [
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

pub const TABLE_FOUR: [&[u32]; 5] = [&[1, 2, 3], &[2, 4, 5], &[1, 2, 4], &[1, 4], &[1, 3]];

pub const DBMS_DEFINITION: &str =
    "is a computer software application that interacts with the user, \
other applications, and the database itself to capture and analyze data.";

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn toy_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/toy")
}

pub fn table_four_db() -> TransactionDb {
    TransactionDb::from_sets(TABLE_FOUR.iter().map(|t| t.to_vec()))
}

// ---------------------------------------------------------------------------
// DFA
// ---------------------------------------------------------------------------

/// Tries every window length from the longest phrase down at each position;
/// on a hit jumps past it, otherwise moves one token on.
pub fn windowed_matches(lexicon: &ConceptLexicon, tokens: &[String]) -> Vec<ConceptOccurrence> {
    let mut phrases: HashMap<String, ConceptId> = HashMap::new();
    let mut longest = 0;
    for c in &lexicon.concepts {
        for p in std::iter::once(&c.canonical).chain(&c.synonyms) {
            phrases.insert(p.clone(), c.id);
            longest = longest.max(p.split(' ').count());
        }
    }
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let hit = (1..=longest.min(tokens.len() - i)).rev().find_map(|len| {
            phrases
                .get(&tokens[i..i + len].join(" "))
                .map(|&c| (c, len))
        });
        match hit {
            Some((concept_id, len)) => {
                out.push(ConceptOccurrence {
                    concept_id,
                    token_start: i,
                    token_len: len,
                });
                i += len;
            }
            None => i += 1,
        }
    }
    out
}

const SMALL_WORDS: [&str; 7] = ["ab", "b", "cde", "d", "e", "fg", "hijkl"];

fn random_phrase(rng: &mut ChaCha8Rng) -> String {
    let len = rng.random_range(1..=5);
    (0..len)
        .map(|_| *SMALL_WORDS.choose(rng).unwrap())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Up to 20 distinct phrases over a small alphabet; some concepts get one
/// synonym.
pub fn random_lexicon(rng: &mut ChaCha8Rng) -> ConceptLexicon {
    let n = rng.random_range(1..=20);
    let mut seen = BTreeSet::new();
    let mut phrases = Vec::new();
    while phrases.len() < n {
        let p = random_phrase(rng);
        if seen.insert(p.clone()) {
            phrases.push(p);
        }
    }
    let mut concepts: Vec<Concept> = Vec::new();
    let mut iter = phrases.into_iter().peekable();
    while let Some(canonical) = iter.next() {
        let mut synonyms = BTreeSet::new();
        if rng.random_bool(0.25) {
            if let Some(s) = iter.next() {
                synonyms.insert(s);
            }
        }
        concepts.push(Concept {
            id: ConceptId(concepts.len() as u32 + 1),
            canonical,
            synonyms,
        });
    }
    ConceptLexicon { concepts }
}

/// Up to 30 tokens from the lexicon alphabet plus one foreign word.
pub fn random_tokens(rng: &mut ChaCha8Rng) -> Vec<String> {
    let n = rng.random_range(0..=30);
    (0..n)
        .map(|_| {
            if rng.random_bool(0.1) {
                "zz".to_string()
            } else {
                SMALL_WORDS.choose(rng).unwrap().to_string()
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Mining
// ---------------------------------------------------------------------------

/// Up to 12 transactions over at most 8 concepts.
pub fn random_db(rng: &mut ChaCha8Rng) -> TransactionDb {
    let concepts = rng.random_range(1..=8u32);
    let n = rng.random_range(1..=12);
    let sets: Vec<Vec<u32>> = (0..n)
        .map(|_| (1..=concepts).filter(|_| rng.random_bool(0.45)).collect())
        .collect();
    TransactionDb::from_sets(sets)
}

/// Every non-empty itemset with support strictly above `theta`, by
/// enumerating subsets of the concepts present.
pub fn brute_force_patterns(db: &TransactionDb, theta: u64) -> BTreeMap<Vec<ConceptId>, u64> {
    let items: Vec<ConceptId> = db
        .iter()
        .flat_map(|t| t.iter().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut out = BTreeMap::new();
    for mask in 1u32..(1 << items.len()) {
        let set: Vec<ConceptId> = (0..items.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| items[i])
            .collect();
        let support = db
            .iter()
            .filter(|t| set.iter().all(|c| t.contains(c)))
            .count() as u64;
        if support > theta {
            out.insert(set, support);
        }
    }
    out
}

/// `(support(x), count(x and y))` by scanning transactions.
pub fn direct_counts(db: &TransactionDb, x: ConceptId, y: ConceptId) -> (u64, u64) {
    let sx = db.iter().filter(|t| t.contains(&x)).count() as u64;
    let sxy = db
        .iter()
        .filter(|t| t.contains(&x) && t.contains(&y))
        .count() as u64;
    (sx, sxy)
}

// ---------------------------------------------------------------------------
// Hierarchy
// ---------------------------------------------------------------------------

const CORPUS_WORDS: [&str; 10] = [
    "alpha", "beta", "gamma", "delta", "omega", "tau", "rho", "mu", "nu", "xi",
];

/// Random multi-paragraph corpus plus a lexicon of phrases over its words.
pub fn random_corpus(rng: &mut ChaCha8Rng) -> (Corpus, ConceptLexicon) {
    let n_terms = rng.random_range(3..=9);
    let mut seen = BTreeSet::new();
    let mut terms = Vec::new();
    while terms.len() < n_terms {
        let len = if rng.random_bool(0.7) { 1 } else { 2 };
        let t = (0..len)
            .map(|_| *CORPUS_WORDS.choose(rng).unwrap())
            .collect::<Vec<_>>()
            .join(" ");
        if seen.insert(t.clone()) {
            terms.push(t);
        }
    }
    let docs: Vec<(String, String)> = (0..rng.random_range(1..=3))
        .map(|d| {
            let paragraphs: Vec<String> = (0..rng.random_range(2..=10))
                .map(|_| {
                    (0..rng.random_range(1..=12))
                        .map(|_| *CORPUS_WORDS.choose(rng).unwrap())
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect();
            (format!("d{d}.txt"), paragraphs.join("\n\n"))
        })
        .collect();
    (Corpus::from_texts(docs), ConceptLexicon::from_terms(&terms))
}

// ---------------------------------------------------------------------------
// Linear algebra
// ---------------------------------------------------------------------------

pub type Mat = Vec<Vec<f64>>;

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Mat {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.random_range(-3.0..3.0)).collect())
        .collect()
}

pub fn frobenius(m: &Mat) -> f64 {
    m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

fn gram(m: &Mat) -> Mat {
    let cols = m[0].len();
    let mut g = vec![vec![0.0; cols]; cols];
    for row in m {
        for i in 0..cols {
            for j in 0..cols {
                g[i][j] += row[i] * row[j];
            }
        }
    }
    g
}

/// Singular values of `m`, largest first, from power iteration with
/// deflation on `mᵀm`.
pub fn power_singular_values(m: &Mat) -> Vec<f64> {
    let mut g = gram(m);
    let n = g.len();
    let mut out = Vec::new();
    for start in 0..n {
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + (i + start) as f64 * 0.37).collect();
        let mut lambda = 0.0;
        for _ in 0..20_000 {
            let w: Vec<f64> = (0..n)
                .map(|i| (0..n).map(|j| g[i][j] * v[j]).sum())
                .collect();
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                lambda = 0.0;
                break;
            }
            v = w.iter().map(|x| x / norm).collect();
            let next = norm;
            let done = (next - lambda).abs() <= 1e-15 * next;
            lambda = next;
            if done {
                break;
            }
        }
        out.push(lambda.max(0.0).sqrt());
        for i in 0..n {
            for j in 0..n {
                g[i][j] -= lambda * v[i] * v[j];
            }
        }
    }
    out
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot / (na * nb)
}
