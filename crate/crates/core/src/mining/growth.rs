use serde::Serialize;

use super::FpTree;
use crate::ConceptId;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrequentPattern {
    /// Ascending concept ids.
    pub concepts: Vec<ConceptId>,
    pub support: u64,
}

/// All concept sets with support strictly above `theta`, mined by FP-growth.
///
/// Sorted by size, then descending support, then concept ids.
pub fn frequent_patterns(tree: &FpTree, theta: u64) -> Vec<FrequentPattern> {
    let mut out = Vec::new();
    grow(tree, &[], theta, &mut out);
    for p in &mut out {
        p.concepts.sort_unstable();
    }
    out.sort_by(|a, b| {
        a.concepts
            .len()
            .cmp(&b.concepts.len())
            .then(b.support.cmp(&a.support))
            .then_with(|| a.concepts.cmp(&b.concepts))
    });
    out
}

fn grow(tree: &FpTree, suffix: &[ConceptId], theta: u64, out: &mut Vec<FrequentPattern>) {
    for entry in tree.header().iter().rev() {
        if entry.support <= theta {
            continue;
        }
        let mut pattern = suffix.to_vec();
        pattern.push(entry.concept);
        out.push(FrequentPattern {
            concepts: pattern.clone(),
            support: entry.support,
        });

        let base: Vec<(Vec<ConceptId>, u64)> = tree
            .node_links(entry.concept)
            .map(|n| (tree.prefix_path(n), tree.node(n).count))
            .filter(|(path, _)| !path.is_empty())
            .collect();
        if base.is_empty() {
            continue;
        }
        let conditional = FpTree::from_weighted(&base, theta);
        if !conditional.header().is_empty() {
            grow(&conditional, &pattern, theta, out);
        }
    }
}
