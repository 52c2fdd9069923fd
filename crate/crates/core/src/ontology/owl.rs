use std::collections::HashSet;
use std::fmt::Write as _;

use crate::extract::ConceptLexicon;
use crate::taxonomy::ConceptHierarchy;
use crate::ConceptId;

use super::KnowledgeBase;

const RDF_NS: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
const RDFS_NS: &str = "http://www.w3.org/2000/01/rdf-schema#";
const OWL_NS: &str = "http://www.w3.org/2002/07/owl#";

/// Class identifier for a canonical term: spaces become underscores.
pub fn owl_class_id(canonical: &str) -> String {
    canonical.replace(' ', "_")
}

/// Serializes the hierarchy and triples as an OWL/RDF XML document.
///
/// Every lexicon concept becomes a `Class`; concepts with a parent carry an
/// `rdfs:subClassOf`. Each triple becomes an `owl:ObjectProperty` whose
/// domain is the concept and which embeds the answer text in a `feedback`
/// element. Classes follow hierarchy pre-order, then concepts outside the
/// hierarchy by id; properties follow the same concept order, then name.
pub fn export_owl(h: &ConceptHierarchy, kb: &KnowledgeBase, lexicon: &ConceptLexicon) -> String {
    let mut order = h.preorder();
    let placed: HashSet<ConceptId> = order.iter().copied().collect();
    order.extend(lexicon.ids().filter(|c| !placed.contains(c)));
    let id = |c: ConceptId| {
        escape(&owl_class_id(
            lexicon
                .canonical(c)
                .map(str::to_string)
                .unwrap_or_else(|| c.to_string())
                .as_str(),
        ))
    };

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<rdf:RDF xmlns=\"{OWL_NS}\" xmlns:rdf=\"{RDF_NS}\" xmlns:rdfs=\"{RDFS_NS}\" xmlns:owl=\"{OWL_NS}\">"
    );
    for &c in &order {
        match h.parent(c) {
            None => {
                let _ = writeln!(out, "<Class rdf:ID=\"{}\" />", id(c));
            }
            Some(p) => {
                let _ = writeln!(out, "<Class rdf:ID=\"{}\">", id(c));
                let _ = writeln!(out, "  <rdfs:subClassOf rdf:resource=\"{}\" />", id(p));
                out.push_str("</Class>\n");
            }
        }
    }
    for &c in &order {
        for t in kb.of_concept(c) {
            let _ = writeln!(
                out,
                "<owl:ObjectProperty owl:name=\"{}\">",
                escape(&t.property)
            );
            let _ = writeln!(out, "  <owl:domain owl:class=\"{}\" />", id(c));
            let _ = writeln!(out, "  <feedback>{}</feedback>", escape(&t.feedback));
            out.push_str("</owl:ObjectProperty>\n");
        }
    }
    out.push_str("</rdf:RDF>\n");
    out
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(ch),
        }
    }
    out
}
