//! Binary topic hierarchy built by recursive rank-2 splits.
//!
//! Every committed split factors the node's column submatrix with rank-2 NMF
//! and routes each document to the child whose basis coefficient is larger.
//! Candidate splits are scored by `doc_count * (1 - cos(w_left, w_right))` —
//! large, well-separated daughters first — and the frontier grows greedily
//! until the leaf cap is reached or no leaf can produce two viable children.
//! Terminal leaves, numbered left to right, form the flat topic model.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{Document, Vocabulary};
use crate::error::{Error, Result};
use crate::matrix::TermDocMatrix;
use crate::nmf::{nmf_rank2, solve_gram};

/// Tuning knobs for tree construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    /// Cap on terminal nodes.
    pub max_leaves: usize,
    /// A split is rejected when either child would hold fewer documents.
    pub min_leaf_docs: usize,
    /// Minimum score a pending split needs to be committed. Scores are
    /// nonnegative, so the default of 0 disables the threshold.
    pub score_threshold: f64,
    /// Outer iteration cap for each rank-2 factorization.
    pub max_iters: usize,
    /// Relative-change tolerance for each rank-2 factorization.
    pub tol: f64,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            max_leaves: 20,
            min_leaf_docs: 5,
            score_threshold: 0.0,
            max_iters: crate::nmf::DEFAULT_MAX_ITERS,
            tol: crate::nmf::DEFAULT_TOL,
        }
    }
}

/// One node of the hierarchy. `term_vector` is the node's unit-norm basis
/// column stored sparsely as sorted `(row, weight)` pairs; for the root it
/// is the normalized centroid of all document columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicNode {
    /// Letter label in creation order: root `A`, then `B`, `C`, ...
    pub name: String,
    pub parent: Option<usize>,
    /// Indices of the (left, right) children; `None` for leaves.
    pub children: Option<(usize, usize)>,
    /// Matrix columns routed to this node, ascending.
    pub doc_cols: Vec<usize>,
    pub term_vector: Vec<(u32, f64)>,
    /// Score of the split performed at this node; `None` while it is a leaf.
    pub split_score: Option<f64>,
    /// Highest-weight vocabulary terms, filled by [`annotate`].
    #[serde(default)]
    pub top_terms: Vec<(String, f64)>,
    /// Fraction of this node's documents per label, sorted by label,
    /// filled by [`annotate`].
    #[serde(default)]
    pub label_shares: Vec<(String, f64)>,
}

impl TopicNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_none()
    }

    pub fn doc_count(&self) -> usize {
        self.doc_cols.len()
    }
}

/// The full hierarchy plus the left-to-right leaf ordering that defines the
/// flat topic numbering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopicTree {
    pub nodes: Vec<TopicNode>,
    pub root: usize,
    /// Leaf node indices in left-to-right order; leaf `leaves[t]` is flat
    /// topic `t + 1`.
    pub leaves: Vec<usize>,
}

impl TopicTree {
    /// Flat topic number (1-based) of a leaf node, if it is one.
    pub fn topic_index(&self, node: usize) -> Option<usize> {
        self.leaves.iter().position(|&l| l == node).map(|p| p + 1)
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    /// Maps every document column to its leaf node index.
    pub fn doc_to_leaf(&self) -> Vec<usize> {
        let n: usize = self.leaves.iter().map(|&l| self.nodes[l].doc_count()).sum();
        let mut assignment = vec![usize::MAX; n];
        for &leaf in &self.leaves {
            for &col in &self.nodes[leaf].doc_cols {
                assignment[col] = leaf;
            }
        }
        assignment
    }

    /// Maps every document column to its flat topic number (1-based).
    pub fn doc_to_topic(&self) -> Vec<usize> {
        let by_leaf = self.doc_to_leaf();
        by_leaf
            .into_iter()
            .map(|leaf| self.topic_index(leaf).expect("leaf"))
            .collect()
    }
}

/// Dot product of two sorted sparse vectors.
pub(crate) fn sparse_dot(a: &[(u32, f64)], b: &[(u32, f64)]) -> f64 {
    let mut acc = 0.0;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc += a[i].1 * b[j].1;
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

fn sparse_norm_sq(a: &[(u32, f64)]) -> f64 {
    a.iter().map(|&(_, v)| v * v).sum()
}

/// Routes a document vector to child 0 (left) or 1 (right) by solving the
/// exact rank-2 NNLS against the children's term vectors and taking the
/// larger coefficient; ties go left. The cross-check replays documents
/// through this same routine, so training assignments reproduce exactly.
pub(crate) fn assign_to_child(
    doc: &[(u32, f64)],
    left: &[(u32, f64)],
    right: &[(u32, f64)],
) -> usize {
    let g = [
        sparse_norm_sq(left),
        sparse_dot(left, right),
        sparse_norm_sq(right),
    ];
    let c = [sparse_dot(doc, left), sparse_dot(doc, right)];
    let h = solve_gram(g, c);
    usize::from(h[1] > h[0])
}

/// A viable trial split of one node.
#[derive(Debug, Clone)]
pub struct NodeSplit {
    pub left_docs: Vec<usize>,
    pub right_docs: Vec<usize>,
    pub left_vector: Vec<(u32, f64)>,
    pub right_vector: Vec<(u32, f64)>,
    /// `doc_count * (1 - cos(w_left, w_right))`.
    pub score: f64,
}

/// Attempts a rank-2 split of the documents in `doc_cols`. Returns `None`
/// when the node is too small, the submatrix cannot be factored, or either
/// child would receive fewer than `min_leaf_docs` documents.
pub fn split_node(
    a: &TermDocMatrix,
    doc_cols: &[usize],
    seed: u64,
    params: &TreeParams,
) -> Option<NodeSplit> {
    if doc_cols.len() < 2 * params.min_leaf_docs {
        return None;
    }
    let sub = a.select_columns(doc_cols);
    let factors = nmf_rank2(&sub, seed, params.max_iters, params.tol).ok()?;

    let left_vector = sparsify(&factors.w, 0);
    let right_vector = sparsify(&factors.w, 1);

    let mut left_docs = Vec::new();
    let mut right_docs = Vec::new();
    for (local, &col) in doc_cols.iter().enumerate() {
        match assign_to_child(sub.column(local), &left_vector, &right_vector) {
            0 => left_docs.push(col),
            _ => right_docs.push(col),
        }
    }
    if left_docs.len() < params.min_leaf_docs || right_docs.len() < params.min_leaf_docs {
        return None;
    }

    let cosine = sparse_dot(&left_vector, &right_vector).clamp(0.0, 1.0);
    let score = doc_cols.len() as f64 * (1.0 - cosine);
    Some(NodeSplit {
        left_docs,
        right_docs,
        left_vector,
        right_vector,
        score,
    })
}

fn sparsify(w: &[[f64; 2]], col: usize) -> Vec<(u32, f64)> {
    w.iter()
        .enumerate()
        .filter(|(_, row)| row[col] != 0.0)
        .map(|(i, row)| (i as u32, row[col]))
        .collect()
}

/// Per-node factorization seeds derived from the run seed and the node's
/// creation index, so a trial split does not depend on commit order.
fn node_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Excel-style letter labels: A..Z, AA, AB, ...
fn letter_name(mut index: usize) -> String {
    let mut bytes = Vec::new();
    loop {
        bytes.push(b'A' + (index % 26) as u8);
        if index < 26 {
            break;
        }
        index = index / 26 - 1;
    }
    bytes.reverse();
    String::from_utf8(bytes).expect("ascii")
}

/// Builds the topic tree by greedy frontier expansion: every current leaf
/// holds a cached trial split, and the highest-scoring pending split (ties
/// to the earliest-created node) is committed until `max_leaves` is reached
/// or no splittable leaf remains. A corpus too small to split the root
/// yields a valid single-leaf tree.
pub fn build_tree(a: &TermDocMatrix, seed: u64, params: &TreeParams) -> Result<TopicTree> {
    if !a.is_weighted() {
        return Err(Error::NotWeighted);
    }
    let n = a.doc_count();
    if n == 0 {
        return Err(Error::EmptyCorpus);
    }

    let root_vector = centroid(a);
    let mut nodes = vec![TopicNode {
        name: letter_name(0),
        parent: None,
        children: None,
        doc_cols: (0..n).collect(),
        term_vector: root_vector,
        split_score: None,
        top_terms: Vec::new(),
        label_shares: Vec::new(),
    }];
    let mut frontier = vec![0usize];
    let mut pending: BTreeMap<usize, Option<NodeSplit>> = BTreeMap::new();
    pending.insert(
        0,
        split_node(a, &nodes[0].doc_cols, node_seed(seed, 0), params),
    );

    while frontier.len() < params.max_leaves {
        let mut best: Option<(usize, f64)> = None;
        for &leaf in &frontier {
            if let Some(Some(split)) = pending.get(&leaf) {
                if split.score >= params.score_threshold
                    && best.is_none_or(|(_, s)| split.score > s)
                {
                    best = Some((leaf, split.score));
                }
            }
        }
        let Some((leaf, score)) = best else { break };
        let split = pending
            .remove(&leaf)
            .flatten()
            .expect("pending split exists for chosen leaf");

        let left_idx = nodes.len();
        let right_idx = nodes.len() + 1;
        nodes.push(TopicNode {
            name: letter_name(left_idx),
            parent: Some(leaf),
            children: None,
            doc_cols: split.left_docs,
            term_vector: split.left_vector,
            split_score: None,
            top_terms: Vec::new(),
            label_shares: Vec::new(),
        });
        nodes.push(TopicNode {
            name: letter_name(right_idx),
            parent: Some(leaf),
            children: None,
            doc_cols: split.right_docs,
            term_vector: split.right_vector,
            split_score: None,
            top_terms: Vec::new(),
            label_shares: Vec::new(),
        });
        nodes[leaf].children = Some((left_idx, right_idx));
        nodes[leaf].split_score = Some(score);

        let pos = frontier.iter().position(|&f| f == leaf).expect("in frontier");
        frontier.remove(pos);
        frontier.push(left_idx);
        frontier.push(right_idx);

        let (left_split, right_split) = rayon::join(
            || split_node(a, &nodes[left_idx].doc_cols, node_seed(seed, left_idx as u64), params),
            || split_node(a, &nodes[right_idx].doc_cols, node_seed(seed, right_idx as u64), params),
        );
        pending.insert(left_idx, left_split);
        pending.insert(right_idx, right_split);
    }

    let leaves = collect_leaves(&nodes, 0);
    Ok(TopicTree {
        nodes,
        root: 0,
        leaves,
    })
}

/// Unit-norm centroid of all document columns; the root's term vector.
fn centroid(a: &TermDocMatrix) -> Vec<(u32, f64)> {
    let mut sums: BTreeMap<u32, f64> = BTreeMap::new();
    for j in 0..a.doc_count() {
        for &(row, v) in a.column(j) {
            *sums.entry(row).or_insert(0.0) += v;
        }
    }
    let mut vec: Vec<(u32, f64)> = sums.into_iter().collect();
    let norm = sparse_norm_sq(&vec).sqrt();
    if norm > 0.0 {
        for (_, v) in &mut vec {
            *v /= norm;
        }
    }
    vec
}

/// Leaves in left-to-right (depth-first, left-child-first) order.
fn collect_leaves(nodes: &[TopicNode], root: usize) -> Vec<usize> {
    let mut leaves = Vec::new();
    let mut stack = vec![root];
    while let Some(idx) = stack.pop() {
        match nodes[idx].children {
            None => leaves.push(idx),
            Some((l, r)) => {
                stack.push(r);
                stack.push(l);
            }
        }
    }
    leaves
}

/// Per-leaf view of the flat topic model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeafTopic {
    pub topic_index: usize,
    pub node: usize,
    pub name: String,
    pub doc_count: usize,
    pub top_terms: Vec<(String, f64)>,
    pub label_shares: Vec<(String, f64)>,
}

/// Fills `top_terms` and `label_shares` for every node: the `top_k`
/// highest-weight terms (descending weight, ties by term string) and the
/// label distribution of the node's documents.
pub fn annotate(tree: &mut TopicTree, vocab: &Vocabulary, docs: &[Document], top_k: usize) {
    for node in &mut tree.nodes {
        node.top_terms = top_terms(&node.term_vector, vocab, top_k);
        node.label_shares = label_shares(&node.doc_cols, docs);
    }
}

fn top_terms(term_vector: &[(u32, f64)], vocab: &Vocabulary, top_k: usize) -> Vec<(String, f64)> {
    let mut weighted: Vec<(String, f64)> = term_vector
        .iter()
        .filter(|&&(_, w)| w > 0.0)
        .map(|&(row, w)| (vocab.term(row as usize).to_string(), w))
        .collect();
    weighted.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
    weighted.truncate(top_k);
    weighted
}

fn label_shares(doc_cols: &[usize], docs: &[Document]) -> Vec<(String, f64)> {
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for &col in doc_cols {
        *counts.entry(docs[col].label.as_str()).or_default() += 1;
    }
    let total = doc_cols.len() as f64;
    counts
        .into_iter()
        .map(|(label, count)| (label.to_string(), count as f64 / total))
        .collect()
}

/// The flat topic model: one entry per terminal leaf with its numbering,
/// keywords and label distribution. Document counts over all leaves sum to
/// the corpus size.
pub fn leaf_topics(
    tree: &TopicTree,
    vocab: &Vocabulary,
    docs: &[Document],
    top_k: usize,
) -> Vec<LeafTopic> {
    tree.leaves
        .iter()
        .enumerate()
        .map(|(t, &leaf)| {
            let node = &tree.nodes[leaf];
            LeafTopic {
                topic_index: t + 1,
                node: leaf,
                name: node.name.clone(),
                doc_count: node.doc_count(),
                top_terms: top_terms(&node.term_vector, vocab, top_k),
                label_shares: label_shares(&node.doc_cols, docs),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{prune_corpus, Document};
    use crate::matrix::{count_matrix, tfidf};

    /// Corpus with `blocks` disjoint vocabularies, `docs_per_block`
    /// documents each; every doc uses its block's terms only.
    fn block_corpus(blocks: usize, docs_per_block: usize) -> (Vec<Document>, Vocabulary) {
        let mut docs = Vec::new();
        for b in 0..blocks {
            for d in 0..docs_per_block {
                let tokens: Vec<String> = (0..6)
                    .map(|t| format!("blk{b}term{}", (d + t) % 8))
                    .collect();
                docs.push(Document {
                    id: format!("b{b}d{d}"),
                    label: format!("L{b}"),
                    raw_text: String::new(),
                    tokens,
                });
            }
        }
        prune_corpus(docs, 1, 1)
    }

    fn weighted(docs: &[Document], vocab: &Vocabulary) -> TermDocMatrix {
        tfidf(&count_matrix(docs, vocab).unwrap()).unwrap()
    }

    #[test]
    fn letter_names_extend_past_z() {
        assert_eq!(letter_name(0), "A");
        assert_eq!(letter_name(25), "Z");
        assert_eq!(letter_name(26), "AA");
        assert_eq!(letter_name(27), "AB");
        assert_eq!(letter_name(52), "BA");
    }

    #[test]
    fn disjoint_blocks_split_exactly_with_score_n() {
        let (docs, vocab) = block_corpus(2, 10);
        let a = weighted(&docs, &vocab);
        let split = split_node(&a, &(0..20).collect::<Vec<_>>(), 7, &TreeParams::default())
            .expect("split should succeed");
        // Disjoint supports mean orthogonal children, so the score is N up
        // to the cross-block residue the alternation has not yet decayed.
        assert!((split.score - 20.0).abs() < 0.01, "score {}", split.score);
        assert!(split.score <= 20.0 + 1e-12);
        let mut sides: Vec<Vec<usize>> = vec![split.left_docs.clone(), split.right_docs.clone()];
        sides.sort_by_key(|s| s[0]);
        assert_eq!(sides[0], (0..10).collect::<Vec<_>>());
        assert_eq!(sides[1], (10..20).collect::<Vec<_>>());
    }

    #[test]
    fn duplicate_documents_cannot_split() {
        let docs: Vec<Document> = (0..12)
            .map(|i| Document {
                id: format!("d{i}"),
                label: "x".into(),
                raw_text: String::new(),
                tokens: vec!["alpha".into(), "beta".into(), "gamma".into(), "delta".into()],
            })
            .collect();
        let (docs, vocab) = prune_corpus(docs, 1, 1);
        let a = weighted(&docs, &vocab);
        let split = split_node(&a, &(0..12).collect::<Vec<_>>(), 3, &TreeParams::default());
        assert!(split.is_none(), "identical documents have no two daughters");
    }

    #[test]
    fn undersized_nodes_are_not_split() {
        let (docs, vocab) = block_corpus(2, 4);
        let a = weighted(&docs, &vocab);
        // 8 docs < 2 * min_leaf_docs = 10.
        assert!(split_node(&a, &(0..8).collect::<Vec<_>>(), 1, &TreeParams::default()).is_none());
    }

    #[test]
    fn max_leaves_one_yields_root_only() {
        let (docs, vocab) = block_corpus(2, 10);
        let a = weighted(&docs, &vocab);
        let params = TreeParams {
            max_leaves: 1,
            ..TreeParams::default()
        };
        let tree = build_tree(&a, 5, &params).unwrap();
        assert_eq!(tree.nodes.len(), 1);
        assert_eq!(tree.leaves, vec![0]);
        assert_eq!(tree.nodes[0].name, "A");
    }

    #[test]
    fn two_block_corpus_recovers_blocks_with_pure_leaves() {
        let (docs, vocab) = block_corpus(2, 12);
        let a = weighted(&docs, &vocab);
        let params = TreeParams {
            max_leaves: 2,
            ..TreeParams::default()
        };
        let tree = build_tree(&a, 11, &params).unwrap();
        assert_eq!(tree.leaf_count(), 2);
        for &leaf in &tree.leaves {
            let labels: std::collections::BTreeSet<&str> = tree.nodes[leaf]
                .doc_cols
                .iter()
                .map(|&c| docs[c].label.as_str())
                .collect();
            assert_eq!(labels.len(), 1, "leaf mixes blocks");
        }
    }

    #[test]
    fn first_split_outscores_within_block_resplits() {
        let (docs, vocab) = block_corpus(4, 12);
        let a = weighted(&docs, &vocab);
        let params = TreeParams {
            max_leaves: 4,
            ..TreeParams::default()
        };
        let tree = build_tree(&a, 19, &params).unwrap();
        let root_score = tree.nodes[tree.root].split_score.unwrap();
        for node in &tree.nodes {
            if node.parent.is_some() {
                if let Some(score) = node.split_score {
                    assert!(
                        score < root_score,
                        "descendant split score {score} >= root {root_score}"
                    );
                }
            }
        }
    }

    #[test]
    fn tree_is_a_partition_with_binary_shape() {
        let (docs, vocab) = block_corpus(3, 10);
        let a = weighted(&docs, &vocab);
        let params = TreeParams {
            max_leaves: 3,
            ..TreeParams::default()
        };
        let tree = build_tree(&a, 23, &params).unwrap();
        let internal = tree.nodes.iter().filter(|n| !n.is_leaf()).count();
        assert_eq!(internal, tree.leaf_count() - 1);
        let total: usize = tree.leaves.iter().map(|&l| tree.nodes[l].doc_count()).sum();
        assert_eq!(total, 30);
        // Disjointness plus parent/child consistency.
        let mut seen = vec![false; 30];
        for &leaf in &tree.leaves {
            for &col in &tree.nodes[leaf].doc_cols {
                assert!(!seen[col], "column {col} in two leaves");
                seen[col] = true;
            }
        }
        for (idx, node) in tree.nodes.iter().enumerate() {
            if let Some((l, r)) = node.children {
                let mut union: Vec<usize> = tree.nodes[l]
                    .doc_cols
                    .iter()
                    .chain(&tree.nodes[r].doc_cols)
                    .copied()
                    .collect();
                union.sort_unstable();
                assert_eq!(union, node.doc_cols, "node {idx} children do not partition it");
            }
        }
    }

    #[test]
    fn build_is_deterministic_for_a_seed() {
        let (docs, vocab) = block_corpus(3, 8);
        let a = weighted(&docs, &vocab);
        let params = TreeParams {
            max_leaves: 3,
            ..TreeParams::default()
        };
        let t1 = build_tree(&a, 77, &params).unwrap();
        let t2 = build_tree(&a, 77, &params).unwrap();
        assert_eq!(t1, t2);
    }

    #[test]
    fn topic_index_is_a_left_to_right_bijection() {
        let (docs, vocab) = block_corpus(4, 10);
        let a = weighted(&docs, &vocab);
        let params = TreeParams {
            max_leaves: 4,
            ..TreeParams::default()
        };
        let tree = build_tree(&a, 3, &params).unwrap();
        let indices: Vec<usize> = tree
            .leaves
            .iter()
            .map(|&l| tree.topic_index(l).unwrap())
            .collect();
        assert_eq!(indices, (1..=tree.leaf_count()).collect::<Vec<_>>());
        assert_eq!(tree.topic_index(tree.root), None);
    }

    #[test]
    fn annotation_fills_terms_and_shares() {
        let (docs, vocab) = block_corpus(2, 10);
        let a = weighted(&docs, &vocab);
        let params = TreeParams {
            max_leaves: 2,
            ..TreeParams::default()
        };
        let mut tree = build_tree(&a, 13, &params).unwrap();
        annotate(&mut tree, &vocab, &docs, 10);
        for topic in leaf_topics(&tree, &vocab, &docs, 10) {
            assert!(!topic.top_terms.is_empty());
            let share_sum: f64 = topic.label_shares.iter().map(|(_, s)| s).sum();
            assert!((share_sum - 1.0).abs() < 1e-9);
            // Pure leaves: the single label owns the whole node.
            assert_eq!(topic.label_shares.len(), 1);
            assert_eq!(topic.label_shares[0].1, 1.0);
            // Block vocabularies are disjoint: the heavy terms come from the
            // leaf's own block (deeper ranks can carry tiny cross-block
            // residue from the alternation).
            let block = topic.label_shares[0].0.trim_start_matches('L').to_string();
            for (term, _) in topic.top_terms.iter().take(5) {
                assert!(
                    term.starts_with(&format!("blk{block}")),
                    "term {term} leaked into block {block}"
                );
            }
        }
    }

    #[test]
    fn top_terms_truncate_at_support() {
        let vocab = Vocabulary {
            terms: vec!["a".into(), "b".into(), "c".into(), "d".into()],
            corpus_count: vec![1; 4],
            doc_freq: vec![1; 4],
        };
        let tv = vec![(0, 0.5), (2, 0.8), (3, 0.1)];
        let terms = top_terms(&tv, &vocab, 10);
        assert_eq!(terms.len(), 3);
        assert_eq!(terms[0].0, "c");
    }
}
