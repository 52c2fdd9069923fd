use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use super::TransactionDb;
use crate::ConceptId;

pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FpNode {
    /// `None` only for the root.
    pub concept: Option<ConceptId>,
    pub count: u64,
    pub parent: Option<NodeId>,
    /// Ordered by header rank.
    pub children: Vec<NodeId>,
    /// Next node carrying the same concept, in insertion order.
    pub next_same: Option<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HeaderEntry {
    pub concept: ConceptId,
    pub support: u64,
    /// First node of the node-link chain.
    pub head: Option<NodeId>,
    #[serde(skip)]
    tail: Option<NodeId>,
}

/// Frequency-ordered prefix tree with a header table.
///
/// Header entries are sorted by descending support, ties by ascending
/// concept id. Node 0 is the root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FpTree {
    nodes: Vec<FpNode>,
    header: Vec<HeaderEntry>,
    min_support: u64,
    #[serde(skip)]
    rank: HashMap<ConceptId, usize>,
}

pub const ROOT: NodeId = 0;

/// Builds the tree keeping concepts whose support is strictly above `theta`.
pub fn build_fp_tree(db: &TransactionDb, theta: u64) -> FpTree {
    let weighted: Vec<(Vec<ConceptId>, u64)> = db
        .iter()
        .map(|t| (t.iter().copied().collect(), 1))
        .collect();
    FpTree::from_weighted(&weighted, theta)
}

impl FpTree {
    /// Builds from item lists carrying a multiplicity each. Items inside a
    /// list must be distinct.
    pub(crate) fn from_weighted(transactions: &[(Vec<ConceptId>, u64)], theta: u64) -> FpTree {
        let mut support: HashMap<ConceptId, u64> = HashMap::new();
        for (items, w) in transactions {
            for c in items {
                *support.entry(*c).or_default() += w;
            }
        }
        let mut header: Vec<HeaderEntry> = support
            .into_iter()
            .filter(|&(_, s)| s > theta)
            .map(|(concept, support)| HeaderEntry {
                concept,
                support,
                head: None,
                tail: None,
            })
            .collect();
        header.sort_by(|a, b| b.support.cmp(&a.support).then(a.concept.cmp(&b.concept)));
        let rank = header
            .iter()
            .enumerate()
            .map(|(i, h)| (h.concept, i))
            .collect();

        let mut tree = FpTree {
            nodes: vec![FpNode {
                concept: None,
                count: 0,
                parent: None,
                children: Vec::new(),
                next_same: None,
            }],
            header,
            min_support: theta,
            rank,
        };
        for (items, w) in transactions {
            let mut ranked: Vec<(usize, ConceptId)> = items
                .iter()
                .filter_map(|c| tree.rank.get(c).map(|&r| (r, *c)))
                .collect();
            if ranked.is_empty() {
                continue;
            }
            ranked.sort_unstable();
            tree.insert(ranked, *w);
        }
        tree
    }

    fn insert(&mut self, ranked: Vec<(usize, ConceptId)>, weight: u64) {
        self.nodes[ROOT].count += weight;
        let mut current = ROOT;
        for (rank, concept) in ranked {
            let existing = self.nodes[current]
                .children
                .iter()
                .copied()
                .find(|&c| self.nodes[c].concept == Some(concept));
            current = match existing {
                Some(child) => {
                    self.nodes[child].count += weight;
                    child
                }
                None => {
                    let id = self.nodes.len();
                    self.nodes.push(FpNode {
                        concept: Some(concept),
                        count: weight,
                        parent: Some(current),
                        children: Vec::new(),
                        next_same: None,
                    });
                    let pos = self.nodes[current]
                        .children
                        .partition_point(|&c| self.rank_of_node(c) < rank);
                    self.nodes[current].children.insert(pos, id);
                    let entry = &mut self.header[rank];
                    match entry.tail {
                        Some(t) => self.nodes[t].next_same = Some(id),
                        None => entry.head = Some(id),
                    }
                    self.header[rank].tail = Some(id);
                    id
                }
            };
        }
    }

    fn rank_of_node(&self, node: NodeId) -> usize {
        self.nodes[node]
            .concept
            .and_then(|c| self.rank.get(&c).copied())
            .unwrap_or(usize::MAX)
    }

    pub fn root(&self) -> &FpNode {
        &self.nodes[ROOT]
    }

    pub fn node(&self, id: NodeId) -> &FpNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[FpNode] {
        &self.nodes
    }

    pub fn header(&self) -> &[HeaderEntry] {
        &self.header
    }

    pub fn min_support(&self) -> u64 {
        self.min_support
    }

    /// Header position of `concept`; lower is more frequent.
    pub fn rank(&self, concept: ConceptId) -> Option<usize> {
        self.rank.get(&concept).copied()
    }

    pub fn support(&self, concept: ConceptId) -> Option<u64> {
        self.rank(concept).map(|r| self.header[r].support)
    }

    /// Nodes carrying `concept`, following the node-link chain.
    pub fn node_links(&self, concept: ConceptId) -> impl Iterator<Item = NodeId> + '_ {
        let head = self.rank(concept).and_then(|r| self.header[r].head);
        std::iter::successors(head, move |&n| self.nodes[n].next_same)
    }

    /// Concepts on the path from the root's child down to `node`'s parent.
    pub fn prefix_path(&self, node: NodeId) -> Vec<ConceptId> {
        let mut path = Vec::new();
        let mut cur = self.nodes[node].parent;
        while let Some(p) = cur {
            if let Some(c) = self.nodes[p].concept {
                path.push(c);
            }
            cur = self.nodes[p].parent;
        }
        path.reverse();
        path
    }

    /// Node ids in breadth-first order, root first, children left to right.
    pub fn bfs_order(&self) -> Vec<NodeId> {
        let mut order = vec![ROOT];
        let mut i = 0;
        while i < order.len() {
            order.extend_from_slice(&self.nodes[order[i]].children);
            i += 1;
        }
        order
    }

    /// Indented `C<id>:<count>` lines, one node per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut stack: Vec<(NodeId, usize)> = self.nodes[ROOT]
            .children
            .iter()
            .rev()
            .map(|&c| (c, 0))
            .collect();
        while let Some((n, depth)) = stack.pop() {
            let node = &self.nodes[n];
            let concept = node.concept.expect("non-root node has a concept");
            let _ = writeln!(out, "{}{}:{}", "  ".repeat(depth), concept, node.count);
            stack.extend(node.children.iter().rev().map(|&c| (c, depth + 1)));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tree serializes")
    }
}
