//! Reshaping an FP-tree into a single-occurrence is-a hierarchy.
//!
//! Two passes run over a copy of the tree:
//!
//! * [`merge_occurrences`] walks the tree breadth-first. The first concept
//!   found with several occurrences is collapsed into its highest-count
//!   occurrence: the subtrees of the other occurrences move under it, their
//!   counts are added to it and they are deleted. This repeats until every
//!   concept occurs once. A moved child that meets a sibling with the same
//!   concept is merged into that sibling recursively.
//! * [`promote_siblings`] visits nodes bottom-up and moves a node next to
//!   its parent whenever the node's rule confidence towards its grandparent
//!   is strictly higher than towards its parent. Passes repeat until none
//!   moves a node. The artificial root never acts as a grandparent.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extract::ConceptLexicon;
use crate::mining::{AssociationMatrix, FpTree, NodeId};
use crate::ConceptId;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TaxonomyError {
    #[error("concept {0} does not occur in the tree")]
    ConceptAbsent(ConceptId),
    #[error("malformed hierarchy: {0}")]
    Malformed(String),
}

const ROOT: usize = 0;

#[derive(Debug, Clone, PartialEq, Eq)]
struct Node {
    concept: Option<ConceptId>,
    count: u64,
    parent: Option<usize>,
    children: Vec<usize>,
    alive: bool,
}

/// Tree of concepts linked child is-a parent under an artificial root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptHierarchy {
    nodes: Vec<Node>,
    /// Sibling ordering key; lower sorts first.
    rank: HashMap<ConceptId, usize>,
}

/// Highest-count node carrying `concept`; ties go to the earliest node in
/// breadth-first order.
pub fn max_count_occurrence(tree: &FpTree, concept: ConceptId) -> Result<NodeId, TaxonomyError> {
    let mut best: Option<NodeId> = None;
    for n in tree.bfs_order() {
        if tree.node(n).concept != Some(concept) {
            continue;
        }
        if best.is_none_or(|b| tree.node(n).count > tree.node(b).count) {
            best = Some(n);
        }
    }
    best.ok_or(TaxonomyError::ConceptAbsent(concept))
}

/// Collapses repeated concepts of `tree` into one node each.
pub fn merge_occurrences(tree: &FpTree) -> ConceptHierarchy {
    let mut h = ConceptHierarchy::from_tree(tree);
    h.merge_all();
    h
}

/// Moves nodes up one level while they associate more strongly with their
/// grandparent than with their parent. Returns the number of moves made.
pub fn promote_siblings(h: &mut ConceptHierarchy, assoc: &AssociationMatrix) -> usize {
    let conf = |x: ConceptId, y: ConceptId| assoc.confidence(x, y).unwrap_or(0.0);
    let mut moves = 0;
    loop {
        let mut changed = false;
        let mut order = h.bfs_order();
        order.reverse();
        for n in order {
            let Some(c) = h.nodes[n].concept else {
                continue;
            };
            let Some(p) = h.nodes[n].parent else { continue };
            let Some(g) = h.nodes[p].parent else { continue };
            let (Some(pc), Some(gc)) = (h.nodes[p].concept, h.nodes[g].concept) else {
                continue;
            };
            if conf(c, pc) < conf(c, gc) {
                h.detach(n);
                h.adopt(g, n);
                moves += 1;
                changed = true;
            }
        }
        if !changed {
            return moves;
        }
    }
}

/// Both passes: merge repeated occurrences, then promote siblings.
pub fn build_hierarchy(tree: &FpTree, assoc: &AssociationMatrix) -> ConceptHierarchy {
    let mut h = merge_occurrences(tree);
    promote_siblings(&mut h, assoc);
    h
}

impl ConceptHierarchy {
    fn from_tree(tree: &FpTree) -> ConceptHierarchy {
        let nodes = tree
            .nodes()
            .iter()
            .map(|n| Node {
                concept: n.concept,
                count: n.count,
                parent: n.parent,
                children: n.children.clone(),
                alive: true,
            })
            .collect();
        let rank = tree
            .header()
            .iter()
            .enumerate()
            .map(|(i, h)| (h.concept, i))
            .collect();
        ConceptHierarchy { nodes, rank }
    }

    /// Hierarchy from explicit `(child, parent)` edges; `None` parent means
    /// a top-level concept. Siblings are ordered by first appearance.
    pub fn from_edges<I>(edges: I) -> Result<ConceptHierarchy, TaxonomyError>
    where
        I: IntoIterator<Item = (ConceptId, Option<ConceptId>)>,
    {
        let edges: Vec<(ConceptId, Option<ConceptId>)> = edges.into_iter().collect();
        let mut h = ConceptHierarchy {
            nodes: vec![Node {
                concept: None,
                count: 0,
                parent: None,
                children: Vec::new(),
                alive: true,
            }],
            rank: HashMap::new(),
        };
        let mut slot = HashMap::new();
        for (i, &(c, _)) in edges.iter().enumerate() {
            if slot.insert(c, h.nodes.len()).is_some() {
                return Err(TaxonomyError::Malformed(format!(
                    "concept {c} listed twice"
                )));
            }
            h.rank.insert(c, i);
            h.nodes.push(Node {
                concept: Some(c),
                count: 0,
                parent: None,
                children: Vec::new(),
                alive: true,
            });
        }
        for &(c, parent) in &edges {
            let p = match parent {
                None => ROOT,
                Some(pc) => *slot.get(&pc).ok_or_else(|| {
                    TaxonomyError::Malformed(format!("unknown parent {pc} of {c}"))
                })?,
            };
            h.adopt(p, slot[&c]);
        }
        if h.bfs_order().len() != h.nodes.len() {
            return Err(TaxonomyError::Malformed("parent links form a cycle".into()));
        }
        Ok(h)
    }

    fn rank_of(&self, n: usize) -> (usize, u32) {
        let c = self.nodes[n].concept;
        (
            c.and_then(|c| self.rank.get(&c).copied())
                .unwrap_or(usize::MAX),
            c.map_or(0, |c| c.0),
        )
    }

    fn adopt(&mut self, parent: usize, child: usize) {
        let key = self.rank_of(child);
        let pos = self.nodes[parent]
            .children
            .partition_point(|&c| self.rank_of(c) < key);
        self.nodes[parent].children.insert(pos, child);
        self.nodes[child].parent = Some(parent);
    }

    fn detach(&mut self, node: usize) {
        if let Some(p) = self.nodes[node].parent.take() {
            self.nodes[p].children.retain(|&c| c != node);
        }
    }

    /// Places `node` under `parent`, merging into an existing same-concept
    /// child if there is one. Returns the surviving node.
    fn attach(&mut self, node: usize, parent: usize) -> usize {
        let concept = self.nodes[node].concept;
        let twin = self.nodes[parent]
            .children
            .iter()
            .copied()
            .find(|&c| c != node && self.nodes[c].concept == concept);
        match twin {
            None => {
                self.adopt(parent, node);
                node
            }
            Some(t) => {
                self.nodes[t].count += self.nodes[node].count;
                for child in std::mem::take(&mut self.nodes[node].children) {
                    self.nodes[child].parent = None;
                    self.attach(child, t);
                }
                self.nodes[node].alive = false;
                t
            }
        }
    }

    fn is_ancestor(&self, anc: usize, mut node: usize) -> bool {
        while let Some(p) = self.nodes[node].parent {
            if p == anc {
                return true;
            }
            node = p;
        }
        false
    }

    fn occurrences(&self, concept: ConceptId) -> Vec<usize> {
        self.bfs_order()
            .into_iter()
            .filter(|&n| self.nodes[n].concept == Some(concept))
            .collect()
    }

    fn merge_all(&mut self) {
        loop {
            let order = self.bfs_order();
            let mut seen = HashSet::new();
            let dup = order
                .iter()
                .filter_map(|&n| self.nodes[n].concept)
                .find(|c| !seen.insert(*c));
            let Some(concept) = dup else { return };
            self.merge_concept(concept);
        }
    }

    fn merge_concept(&mut self, concept: ConceptId) {
        loop {
            let occ = self.occurrences(concept);
            if occ.len() < 2 {
                return;
            }
            // occ is in BFS order, so the first maximum wins ties
            let mut target = occ[0];
            for &n in &occ[1..] {
                if self.nodes[n].count > self.nodes[target].count {
                    target = n;
                }
            }
            let victim = *occ.iter().find(|&&n| n != target).expect("two occurrences");
            self.absorb(target, victim);
        }
    }

    /// Deletes `victim`, adding its count to `target` and re-homing its
    /// children.
    fn absorb(&mut self, target: usize, victim: usize) {
        let concept = self.nodes[target].concept;
        let parent = self.nodes[victim].parent.expect("victim is not the root");
        let above_target = self.is_ancestor(victim, target);
        let children = std::mem::take(&mut self.nodes[victim].children);
        self.detach(victim);
        self.nodes[victim].alive = false;
        self.nodes[target].count += self.nodes[victim].count;

        for child in children {
            let leads_to_target =
                above_target && (child == target || self.is_ancestor(child, target));
            self.nodes[child].parent = None;
            if leads_to_target {
                // the branch holding the target takes the victim's place
                self.attach(child, parent);
            } else {
                let home = self.live_occurrence(target, concept);
                self.attach(child, home);
            }
        }
    }

    /// `target` while it is alive, else the node it was merged into.
    fn live_occurrence(&self, target: usize, concept: Option<ConceptId>) -> usize {
        if self.nodes[target].alive {
            return target;
        }
        self.bfs_order()
            .into_iter()
            .find(|&n| self.nodes[n].concept == concept)
            .expect("merged node has a live twin")
    }

    /// Live node ids reachable from the root, breadth-first.
    fn bfs_order(&self) -> Vec<usize> {
        let mut order = vec![ROOT];
        let mut i = 0;
        while i < order.len() {
            order.extend_from_slice(&self.nodes[order[i]].children);
            i += 1;
        }
        order
    }

    /// Concepts in pre-order (parents before children, siblings in order).
    pub fn preorder(&self) -> Vec<ConceptId> {
        let mut out = Vec::new();
        let mut stack: Vec<usize> = self.nodes[ROOT].children.iter().rev().copied().collect();
        while let Some(n) = stack.pop() {
            out.extend(self.nodes[n].concept);
            stack.extend(self.nodes[n].children.iter().rev());
        }
        out
    }

    fn slot(&self, concept: ConceptId) -> Option<usize> {
        self.bfs_order()
            .into_iter()
            .find(|&n| self.nodes[n].concept == Some(concept))
    }

    pub fn contains(&self, concept: ConceptId) -> bool {
        self.slot(concept).is_some()
    }

    /// Parent concept; `None` for top-level or unknown concepts.
    pub fn parent(&self, concept: ConceptId) -> Option<ConceptId> {
        let n = self.slot(concept)?;
        self.nodes[self.nodes[n].parent?].concept
    }

    pub fn children(&self, concept: Option<ConceptId>) -> Vec<ConceptId> {
        let n = match concept {
            None => Some(ROOT),
            Some(c) => self.slot(c),
        };
        n.map(|n| {
            self.nodes[n]
                .children
                .iter()
                .filter_map(|&c| self.nodes[c].concept)
                .collect()
        })
        .unwrap_or_default()
    }

    /// Depth of a concept; top-level concepts have depth 1.
    pub fn depth(&self, concept: ConceptId) -> Option<usize> {
        let mut n = self.slot(concept)?;
        let mut d = 0;
        while let Some(p) = self.nodes[n].parent {
            d += 1;
            n = p;
        }
        Some(d)
    }

    pub fn count(&self, concept: ConceptId) -> Option<u64> {
        self.slot(concept).map(|n| self.nodes[n].count)
    }

    /// `(child, parent)` is-a edges, in pre-order of the child.
    pub fn edges(&self) -> Vec<(ConceptId, ConceptId)> {
        self.preorder()
            .into_iter()
            .filter_map(|c| self.parent(c).map(|p| (c, p)))
            .collect()
    }

    /// Number of concept nodes.
    pub fn len(&self) -> usize {
        self.bfs_order().len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn max_depth(&self) -> usize {
        self.preorder()
            .into_iter()
            .filter_map(|c| self.depth(c))
            .max()
            .unwrap_or(0)
    }

    /// Sum of all concept depths.
    pub fn total_depth(&self) -> usize {
        let mut total = 0;
        let mut stack = vec![(ROOT, 0usize)];
        while let Some((n, d)) = stack.pop() {
            total += d;
            stack.extend(self.nodes[n].children.iter().map(|&c| (c, d + 1)));
        }
        total
    }

    /// Checks single occurrence, parent/child link agreement and
    /// reachability of every live node.
    pub fn validate(&self) -> Result<(), TaxonomyError> {
        let order = self.bfs_order();
        let mut seen = HashSet::new();
        for &n in &order {
            if !self.nodes[n].alive {
                return Err(TaxonomyError::Malformed(format!("dead node {n} reachable")));
            }
            for &c in &self.nodes[n].children {
                if self.nodes[c].parent != Some(n) {
                    return Err(TaxonomyError::Malformed(format!(
                        "node {c} has a stale parent link"
                    )));
                }
            }
            if let Some(c) = self.nodes[n].concept {
                if !seen.insert(c) {
                    return Err(TaxonomyError::Malformed(format!(
                        "concept {c} occurs twice"
                    )));
                }
            }
        }
        let live = self.nodes.iter().filter(|n| n.alive).count();
        if live != order.len() {
            return Err(TaxonomyError::Malformed("unreachable live nodes".into()));
        }
        Ok(())
    }

    /// One concept per line, two spaces of indent per level.
    pub fn to_indented_text(&self, lexicon: &ConceptLexicon) -> String {
        let mut out = String::new();
        for c in self.preorder() {
            let depth = self.depth(c).unwrap_or(1);
            let name = lexicon
                .canonical(c)
                .map(str::to_string)
                .unwrap_or_else(|| c.to_string());
            let _ = writeln!(out, "{}{}", "  ".repeat(depth - 1), name);
        }
        out
    }

    /// Flat node list with parent links.
    pub fn to_json(&self, lexicon: &ConceptLexicon) -> String {
        let nodes: Vec<FlatNode> = self
            .preorder()
            .into_iter()
            .map(|c| FlatNode {
                concept: c,
                name: lexicon.canonical(c).unwrap_or_default().to_string(),
                parent: self.parent(c),
                count: self.count(c).unwrap_or(0),
            })
            .collect();
        serde_json::to_string_pretty(&FlatHierarchy { nodes }).expect("hierarchy serializes")
    }

    pub fn from_json(s: &str) -> Result<ConceptHierarchy, TaxonomyError> {
        let flat: FlatHierarchy =
            serde_json::from_str(s).map_err(|e| TaxonomyError::Malformed(e.to_string()))?;
        let mut h = ConceptHierarchy::from_edges(flat.nodes.iter().map(|n| (n.concept, n.parent)))?;
        for n in &flat.nodes {
            let slot = h.slot(n.concept).expect("inserted above");
            h.nodes[slot].count = n.count;
        }
        Ok(h)
    }

    /// Nested `{concept, name, children}` tree under a nameless root.
    pub fn to_tree(&self, lexicon: &ConceptLexicon) -> TreeNode {
        self.tree_at(ROOT, lexicon)
    }

    fn tree_at(&self, n: usize, lexicon: &ConceptLexicon) -> TreeNode {
        let concept = self.nodes[n].concept;
        TreeNode {
            concept,
            name: concept
                .and_then(|c| lexicon.canonical(c))
                .unwrap_or("root")
                .to_string(),
            children: self.nodes[n]
                .children
                .iter()
                .map(|&c| self.tree_at(c, lexicon))
                .collect(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct FlatHierarchy {
    nodes: Vec<FlatNode>,
}

#[derive(Debug, Serialize, Deserialize)]
struct FlatNode {
    concept: ConceptId,
    name: String,
    parent: Option<ConceptId>,
    count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    pub concept: Option<ConceptId>,
    pub name: String,
    pub children: Vec<TreeNode>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mining::{build_fp_tree, TransactionDb};

    fn c(v: u32) -> ConceptId {
        ConceptId(v)
    }

    fn table_four() -> TransactionDb {
        TransactionDb::from_sets([
            vec![1u32, 2, 3],
            vec![2, 4, 5],
            vec![1, 2, 4],
            vec![1, 4],
            vec![1, 3],
        ])
    }

    #[test]
    fn max_count_occurrence_cases() {
        // C2 occurs under root (count 1) and under C1 (count 2)
        let tree = build_fp_tree(&table_four(), 0);
        let n = max_count_occurrence(&tree, c(2)).unwrap();
        assert_eq!(tree.node(n).count, 2);
        assert_eq!(tree.node(tree.node(n).parent.unwrap()).concept, Some(c(1)));
        let n = max_count_occurrence(&tree, c(5)).unwrap();
        assert_eq!(tree.node(n).count, 1);
        assert_eq!(
            max_count_occurrence(&tree, c(7)),
            Err(TaxonomyError::ConceptAbsent(c(7)))
        );
    }

    #[test]
    fn max_count_tie_prefers_earlier_bfs() {
        // root → C1 → C3:2 and root → C2 → C3:2
        let mut sets = vec![vec![1u32, 3], vec![1, 3], vec![2, 3], vec![2, 3]];
        for _ in 0..3 {
            sets.push(vec![1]);
            sets.push(vec![2]);
        }
        let db = TransactionDb::from_sets(sets);
        let tree = build_fp_tree(&db, 0);
        let occ: Vec<NodeId> = tree.node_links(c(3)).collect();
        assert_eq!(occ.len(), 2);
        let bfs = tree.bfs_order();
        let pos = |n| bfs.iter().position(|&x| x == n).unwrap();
        let expected = *occ.iter().min_by_key(|&&n| pos(n)).unwrap();
        assert_eq!(max_count_occurrence(&tree, c(3)).unwrap(), expected);
    }

    #[test]
    fn merge_moves_root_side_subtree_under_max() {
        let tree = build_fp_tree(&table_four(), 0);
        let h = merge_occurrences(&tree);
        h.validate().unwrap();
        assert_eq!(h.len(), 5);
        assert_eq!(h.parent(c(2)), Some(c(1)));
        assert_eq!(h.count(c(2)), Some(3));
        // C4's three occurrences collapse into one
        assert_eq!(h.count(c(4)), Some(3));
        // C5 came from the root-side C2 → C4 chain and now hangs under C4
        assert_eq!(h.parent(c(5)), Some(c(4)));
    }

    #[test]
    fn merge_table_four_by_hand() {
        // Initial tree (children in header order C1, C2, C4, C3, C5):
        //   C1:4 → {C2:2 → {C4:1, C3:1}, C4:1, C3:1};  C2:1 → C4:1 → C5:1
        // BFS finds C2 first: keep C1→C2 (2), root-side C2 folds in (→3) and
        // its C4:1→C5 merges into the existing C4 under C1→C2 (→2).
        // Then C4: C1→C2→C4 (2) beats C1→C4 (1) → count 3.
        // Then C3: C1→C2→C3 (1) vs C1→C3 (1) tie, BFS-earlier C1→C3 wins.
        let h = merge_occurrences(&build_fp_tree(&table_four(), 0));
        let edges: Vec<(u32, u32)> = h.edges().iter().map(|(a, b)| (a.0, b.0)).collect();
        assert_eq!(edges, vec![(2, 1), (4, 2), (5, 4), (3, 1)]);
        assert_eq!(h.count(c(3)), Some(2));
        assert_eq!(h.children(None), vec![c(1)]);
    }

    #[test]
    fn unique_tree_is_fixed_point() {
        let db = TransactionDb::from_sets([vec![1u32, 2], vec![1, 2], vec![1, 3]]);
        let tree = build_fp_tree(&db, 0);
        let h = merge_occurrences(&tree);
        assert_eq!(h.len(), tree.nodes().len() - 1);
        for n in 1..tree.nodes().len() {
            let node = tree.node(n);
            let concept = node.concept.unwrap();
            assert_eq!(h.count(concept), Some(node.count));
            assert_eq!(h.parent(concept), tree.node(node.parent.unwrap()).concept);
        }
    }

    #[test]
    fn merge_handles_occurrence_above_its_max() {
        // After C2 merges, its moved subtree can place a concept beneath
        // another occurrence of itself; merging must not create a cycle.
        let db = TransactionDb::from_sets([
            vec![1u32, 2, 3],
            vec![1, 2, 3],
            vec![1, 3, 4],
            vec![2, 4],
            vec![4, 5],
            vec![4, 5],
            vec![2, 4, 5],
            vec![1, 5],
        ]);
        let tree = build_fp_tree(&db, 0);
        let h = merge_occurrences(&tree);
        h.validate().unwrap();
        assert_eq!(h.len(), 5);
    }

    #[test]
    fn promotion_moves_chain_tail() {
        // chain root→a(1)→b(2)→c(3)
        // 10 transactions contain c: c with b in 1, c with a in 9
        let mut sets: Vec<Vec<u32>> = Vec::new();
        sets.push(vec![1, 2, 3]);
        for _ in 0..8 {
            sets.push(vec![1, 3]);
        }
        sets.push(vec![3]);
        // b: 10 transactions, 8 with a (one already above)
        for _ in 0..7 {
            sets.push(vec![1, 2]);
        }
        sets.push(vec![2]);
        sets.push(vec![2]);
        let db = TransactionDb::from_sets(sets);
        let m = AssociationMatrix::build(&db);
        assert_eq!(m.confidence(c(3), c(2)), Some(0.1));
        assert_eq!(m.confidence(c(3), c(1)), Some(0.9));
        assert_eq!(m.confidence(c(2), c(1)), Some(0.8));

        let mut h =
            ConceptHierarchy::from_edges([(c(1), None), (c(2), Some(c(1))), (c(3), Some(c(2)))])
                .unwrap();
        let moves = promote_siblings(&mut h, &m);
        assert_eq!(moves, 1);
        assert_eq!(h.children(Some(c(1))), vec![c(2), c(3)]);
        h.validate().unwrap();
    }

    #[test]
    fn promotion_requires_strict_inequality() {
        // conf(3⇒2) = conf(3⇒1) = 1
        let db = TransactionDb::from_sets([vec![1u32, 2, 3]]);
        let m = AssociationMatrix::build(&db);
        let mut h =
            ConceptHierarchy::from_edges([(c(1), None), (c(2), Some(c(1))), (c(3), Some(c(2)))])
                .unwrap();
        assert_eq!(promote_siblings(&mut h, &m), 0);
        assert_eq!(h.parent(c(3)), Some(c(2)));
    }

    #[test]
    fn depth_one_and_two_never_promoted() {
        let db = TransactionDb::from_sets([vec![1u32], vec![2]]);
        let m = AssociationMatrix::build(&db);
        let mut h = ConceptHierarchy::from_edges([(c(1), None), (c(2), Some(c(1)))]).unwrap();
        assert_eq!(promote_siblings(&mut h, &m), 0);
    }

    #[test]
    fn json_round_trip_and_text() {
        let tree = build_fp_tree(&table_four(), 0);
        let h = merge_occurrences(&tree);
        let lex = ConceptLexicon::from_terms(["a", "b", "c", "d", "e"]);
        let back = ConceptHierarchy::from_json(&h.to_json(&lex)).unwrap();
        assert_eq!(back.edges(), h.edges());
        assert_eq!(back.preorder(), h.preorder());
        assert_eq!(h.to_indented_text(&lex), "a\n  b\n    d\n      e\n  c\n");
        let t = h.to_tree(&lex);
        assert_eq!(t.name, "root");
        assert_eq!(t.children.len(), 1);
    }

    #[test]
    fn from_edges_rejects_cycles_and_duplicates() {
        assert!(ConceptHierarchy::from_edges([(c(1), Some(c(2))), (c(2), Some(c(1)))]).is_err());
        assert!(ConceptHierarchy::from_edges([(c(1), None), (c(1), None)]).is_err());
    }
}
