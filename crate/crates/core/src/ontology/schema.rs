use std::collections::HashMap;
use std::fs;
use std::path::Path;

use crate::corpus::normalize;
use crate::dfa::StateTable;
use crate::extract::{Concept, ConceptLexicon, MAX_PHRASE_WORDS};
use crate::ConceptId;

use super::OntologyError;

/// Shipped schema text; see `data/properties.txt`.
pub const DEFAULT_PROPERTIES: &str = include_str!("../../data/properties.txt");

/// Properties every schema must define.
pub const BASE_PROPERTIES: [&str; 9] = [
    "definition",
    "synonyms",
    "example",
    "further explanation",
    "purpose",
    "syntax",
    "characteristic",
    "advantage",
    "disadvantage",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Property {
    pub name: String,
    /// Phrases in a question that point at this property, besides the name.
    pub cues: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertySchema {
    properties: Vec<Property>,
    by_phrase: HashMap<String, usize>,
}

impl Default for PropertySchema {
    fn default() -> Self {
        PropertySchema::parse(DEFAULT_PROPERTIES, "default properties")
            .expect("bundled schema is valid")
    }
}

impl PropertySchema {
    pub fn load(path: &Path) -> Result<PropertySchema, OntologyError> {
        let text = fs::read_to_string(path).map_err(|source| OntologyError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        PropertySchema::parse(&text, &path.display().to_string())
    }

    /// Parses `name: cue, cue, …` lines in schema order. Blank lines and
    /// lines starting with `#` are ignored.
    pub fn parse(text: &str, origin: &str) -> Result<PropertySchema, OntologyError> {
        let mut properties: Vec<Property> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: &str| OntologyError::Parse {
                path: origin.to_string(),
                line: i + 1,
                message: message.to_string(),
            };
            let (name, rest) = line.split_once(':').unwrap_or((line, ""));
            let name = normalize(name).join(" ");
            if name.is_empty() {
                return Err(err("empty property name"));
            }
            if properties.iter().any(|p| p.name == name) {
                return Err(err("property listed twice"));
            }
            let cues = rest
                .split(',')
                .map(|c| normalize(c).join(" "))
                .filter(|c| !c.is_empty())
                .collect();
            properties.push(Property { name, cues });
        }
        PropertySchema::new(properties)
    }

    /// Validates and indexes a property list.
    pub fn new(properties: Vec<Property>) -> Result<PropertySchema, OntologyError> {
        let mut by_phrase: HashMap<String, usize> = HashMap::new();
        for (i, p) in properties.iter().enumerate() {
            for phrase in std::iter::once(&p.name).chain(&p.cues) {
                let words = phrase.split(' ').count();
                if words > MAX_PHRASE_WORDS {
                    return Err(OntologyError::Schema(format!(
                        "{phrase:?} is longer than {MAX_PHRASE_WORDS} words"
                    )));
                }
                if let Some(&j) = by_phrase.get(phrase) {
                    if j != i {
                        return Err(OntologyError::Schema(format!(
                            "{phrase:?} cues both {:?} and {:?}",
                            properties[j].name, p.name
                        )));
                    }
                }
                by_phrase.insert(phrase.clone(), i);
            }
        }
        for base in BASE_PROPERTIES {
            if !properties.iter().any(|p| p.name == base) {
                return Err(OntologyError::Schema(format!("missing property {base:?}")));
            }
        }
        Ok(PropertySchema {
            properties,
            by_phrase,
        })
    }

    pub fn properties(&self) -> &[Property] {
        &self.properties
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.properties.iter().map(|p| p.name.as_str())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.properties.iter().any(|p| p.name == name)
    }

    /// Property named or cued by `phrase`, after normalization.
    pub fn resolve(&self, phrase: &str) -> Option<&str> {
        let key = normalize(phrase).join(" ");
        self.by_phrase
            .get(&key)
            .map(|&i| self.properties[i].name.as_str())
    }

    /// `name: cue, …` lines, parseable by [`PropertySchema::parse`].
    pub fn to_text(&self) -> String {
        self.properties
            .iter()
            .map(|p| format!("{}: {}\n", p.name, p.cues.join(", ")))
            .collect()
    }

    pub fn matcher(&self) -> PropertyMatcher {
        let lexicon = ConceptLexicon {
            concepts: self
                .properties
                .iter()
                .enumerate()
                .map(|(i, p)| Concept {
                    id: ConceptId(i as u32 + 1),
                    canonical: p.name.clone(),
                    synonyms: p.cues.iter().cloned().collect(),
                })
                .collect(),
        };
        let table = StateTable::build(&lexicon).expect("schema phrases are distinct and short");
        PropertyMatcher {
            table,
            names: self.properties.iter().map(|p| p.name.clone()).collect(),
        }
    }
}

/// Finds property mentions in token streams with the same automaton used
/// for concepts.
#[derive(Debug, Clone)]
pub struct PropertyMatcher {
    table: StateTable,
    names: Vec<String>,
}

impl PropertyMatcher {
    /// Distinct properties mentioned in `tokens`, in order of first mention.
    pub fn find<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<&str> {
        self.table
            .concepts_in(tokens)
            .into_iter()
            .map(|id| self.names[id.0 as usize - 1].as_str())
            .collect()
    }
}
