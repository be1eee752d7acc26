//! Label-versus-topic analysis.
//!
//! Once a tree is built, each label's documents spread over the flat topics.
//! The confusion table counts that spread; mixture vectors normalize the
//! rows; cosine similarity compares labels through their mixtures; average
//! linkage groups labels into clusters; and the cross-check replays a
//! document through the tree and flags disagreement between its label and
//! the dominant label of its assigned topic.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::tree::{assign_to_child, TopicTree};

/// Counts of documents per (label, topic). Labels are ordered by frequency
/// (descending, ties by label string); topics are the flat topic numbers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelTopicTable {
    pub labels: Vec<String>,
    pub topic_count: usize,
    /// `counts[l][t]` is the number of documents labeled `labels[l]` that
    /// landed in topic `t + 1`.
    pub counts: Vec<Vec<u64>>,
}

impl LabelTopicTable {
    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn row_total(&self, label_idx: usize) -> u64 {
        self.counts[label_idx].iter().sum()
    }

    pub fn col_total(&self, topic_idx: usize) -> u64 {
        self.counts.iter().map(|row| row[topic_idx]).sum()
    }

    pub fn grand_total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    /// The most frequent label of a topic column (ties to the
    /// lexicographically smaller label); `None` when the column is empty.
    pub fn dominant_label(&self, topic_idx: usize) -> Option<&str> {
        let mut best: Option<(&str, u64)> = None;
        for (row, label) in self.counts.iter().zip(&self.labels) {
            let c = row[topic_idx];
            if c > 0 && best.is_none_or(|(_, bc)| c > bc) {
                best = Some((label, c));
            }
        }
        best.map(|(label, _)| label)
    }

    /// Documents whose label is not their topic's dominant label, summed
    /// over topics. Replaying the training corpus through the cross-check
    /// yields exactly this many mismatches.
    pub fn off_dominant_mass(&self) -> u64 {
        (0..self.topic_count)
            .map(|t| {
                let total = self.col_total(t);
                let max = self.counts.iter().map(|row| row[t]).max().unwrap_or(0);
                total - max
            })
            .sum()
    }
}

/// Builds the confusion table from a tree and the documents behind its
/// columns. `top_labels` keeps only the most frequent labels (0 keeps all);
/// documents with excluded labels are dropped from the table, so row totals
/// always count all documents carrying an included label.
pub fn confusion(tree: &TopicTree, docs: &[Document], top_labels: usize) -> LabelTopicTable {
    let doc_topics = tree.doc_to_topic();
    assert_eq!(
        doc_topics.len(),
        docs.len(),
        "tree columns and documents disagree"
    );
    let mut freq: BTreeMap<&str, u64> = BTreeMap::new();
    for doc in docs {
        *freq.entry(doc.label.as_str()).or_default() += 1;
    }
    let mut ordered: Vec<(&str, u64)> = freq.into_iter().collect();
    ordered.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    if top_labels > 0 {
        ordered.truncate(top_labels);
    }
    let labels: Vec<String> = ordered.iter().map(|(l, _)| l.to_string()).collect();
    let index: BTreeMap<&str, usize> = ordered
        .iter()
        .enumerate()
        .map(|(i, &(l, _))| (l, i))
        .collect();

    let k = tree.leaf_count();
    let mut counts = vec![vec![0u64; k]; labels.len()];
    for (doc, &topic) in docs.iter().zip(&doc_topics) {
        if let Some(&l) = index.get(doc.label.as_str()) {
            counts[l][topic - 1] += 1;
        }
    }
    LabelTopicTable {
        labels,
        topic_count: k,
        counts,
    }
}

/// A label's topic-mixture vector: the fraction of its documents in each
/// topic. Sums to 1 for any label with documents.
pub fn mixture(table: &LabelTopicTable, label: &str) -> Result<Vec<f64>> {
    let idx = table
        .label_index(label)
        .ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
    let total = table.row_total(idx);
    if total == 0 {
        return Err(Error::EmptyLabel(label.to_string()));
    }
    Ok(table.counts[idx]
        .iter()
        .map(|&c| c as f64 / total as f64)
        .collect())
}

/// Cosine similarity of two nonnegative vectors. Always in [0, 1] for
/// nonnegative inputs, exactly 1 for equal vectors; errors on a zero vector.
pub fn cosine(a: &[f64], b: &[f64]) -> Result<f64> {
    assert_eq!(a.len(), b.len(), "vector lengths differ");
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return Err(Error::ZeroVector);
    }
    if a == b {
        return Ok(1.0);
    }
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    Ok((dot / (na * nb)).clamp(0.0, 1.0))
}

/// Symmetric label-by-label cosine similarity over mixture vectors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityMatrix {
    pub labels: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

impl SimilarityMatrix {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn value(&self, a: usize, b: usize) -> f64 {
        self.values[a][b]
    }

    /// Label order for display: descending breadth of similarity, measured
    /// as the row sum of off-diagonal entries (ties by label string). Labels
    /// broadly similar to everything come first.
    pub fn breadth_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        let breadth: Vec<f64> = (0..self.len())
            .map(|i| {
                self.values[i]
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, v)| v)
                    .sum()
            })
            .collect();
        order.sort_by(|&a, &b| {
            breadth[b]
                .partial_cmp(&breadth[a])
                .unwrap()
                .then_with(|| self.labels[a].cmp(&self.labels[b]))
        });
        order
    }
}

/// Pairwise cosine similarity between label mixtures. Each unordered pair is
/// computed once and mirrored, and the diagonal is exactly 1.
pub fn similarity_matrix(table: &LabelTopicTable) -> Result<SimilarityMatrix> {
    let mixtures: Vec<Vec<f64>> = table
        .labels
        .iter()
        .map(|l| mixture(table, l))
        .collect::<Result<_>>()?;
    let n = mixtures.len();
    let mut values = vec![vec![0.0; n]; n];
    for i in 0..n {
        values[i][i] = 1.0;
        for j in i + 1..n {
            let s = cosine(&mixtures[i], &mixtures[j])?;
            values[i][j] = s;
            values[j][i] = s;
        }
    }
    Ok(SimilarityMatrix {
        labels: table.labels.clone(),
        values,
    })
}

/// One agglomerative merge: the two clusters (named by their
/// lexicographically smallest member) and the mean similarity that joined
/// them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MergeStep {
    pub cluster_a: String,
    pub cluster_b: String,
    pub similarity: f64,
}

/// Merge history plus the flat cut at the requested cluster count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    pub merges: Vec<MergeStep>,
    /// (label, cluster id) pairs, labels ascending. Cluster ids are 1-based,
    /// assigned to clusters ordered by their smallest member label.
    pub flat_cut: Vec<(String, usize)>,
    pub cluster_count: usize,
}

/// Unweighted average-linkage (UPGMA) clustering over a similarity matrix.
///
/// Starts from singletons and repeatedly merges the pair of clusters with
/// the highest mean of the original pairwise similarities between their
/// members, until `target_clusters` remain. Ties prefer the pair whose
/// (smallest-member, smallest-member) names are lexicographically least.
pub fn average_linkage(sim: &SimilarityMatrix, target_clusters: usize) -> Result<Dendrogram> {
    let n = sim.len();
    if target_clusters == 0 || target_clusters > n {
        return Err(Error::ClusterCountOutOfRange {
            got: target_clusters,
            max: n,
        });
    }

    // Members per live cluster and the cross-cluster sums of original
    // similarities; a merge just adds the two sum rows, so every mean is an
    // exact average of original entries.
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut sums: Vec<Vec<f64>> = sim.values.clone();
    let mut merges = Vec::new();

    while members.len() > target_clusters {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..members.len() {
            for j in i + 1..members.len() {
                let mean = sums[i][j] / (members[i].len() * members[j].len()) as f64;
                let better = match best {
                    None => true,
                    Some((bi, bj, bmean)) => {
                        mean > bmean
                            || (mean == bmean
                                && pair_names(sim, &members, i, j)
                                    < pair_names(sim, &members, bi, bj))
                    }
                };
                if better {
                    best = Some((i, j, mean));
                }
            }
        }
        let (i, j, mean) = best.expect("at least two clusters remain");
        let (name_a, name_b) = pair_names(sim, &members, i, j);
        merges.push(MergeStep {
            cluster_a: name_a,
            cluster_b: name_b,
            similarity: mean,
        });

        // Fold cluster j into i, then drop row/column j.
        let row_j = sums.remove(j);
        for (x, sums_x) in sums.iter_mut().enumerate() {
            let sj = sums_x.remove(j);
            if x == i {
                continue;
            }
            sums_x[i] += sj;
        }
        for (x, v) in row_j.into_iter().enumerate() {
            if x == j || x == i {
                continue;
            }
            let xi = if x > j { x - 1 } else { x };
            sums[i][xi] += v;
        }
        let moved = members.remove(j);
        members[i].extend(moved);
        members[i].sort_unstable();
    }

    let mut cluster_reps: Vec<(String, usize)> = members
        .iter()
        .enumerate()
        .map(|(ci, m)| (sim.labels[m[0]].clone(), ci))
        .collect();
    cluster_reps.sort();
    let mut flat_cut = Vec::new();
    for (id, (_, ci)) in cluster_reps.iter().enumerate() {
        for &m in &members[*ci] {
            flat_cut.push((sim.labels[m].clone(), id + 1));
        }
    }
    flat_cut.sort();
    Ok(Dendrogram {
        merges,
        flat_cut,
        cluster_count: target_clusters,
    })
}

/// Cluster display names for a candidate pair, ordered lexicographically.
fn pair_names(
    sim: &SimilarityMatrix,
    members: &[Vec<usize>],
    i: usize,
    j: usize,
) -> (String, String) {
    let a = sim.labels[members[i][0]].clone();
    let b = sim.labels[members[j][0]].clone();
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Outcome of replaying one document through a fitted model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Crosscheck {
    /// The document reached a leaf. `mismatch` is set when its label is not
    /// the assigned topic's dominant label.
    Assigned {
        topic: usize,
        dominant_label: String,
        mismatch: bool,
    },
    /// No in-vocabulary tokens: the document cannot be placed.
    Unclassifiable,
}

/// Routes a weighted document vector from the root to a leaf, choosing at
/// each internal node by exact rank-2 NNLS against the children's term
/// vectors. Returns the flat topic number, or `None` for an empty vector.
pub fn assign_topic(tree: &TopicTree, doc: &[(u32, f64)]) -> Option<usize> {
    if doc.is_empty() {
        return None;
    }
    let mut node = tree.root;
    while let Some((left, right)) = tree.nodes[node].children {
        let child = assign_to_child(
            doc,
            &tree.nodes[left].term_vector,
            &tree.nodes[right].term_vector,
        );
        node = if child == 0 { left } else { right };
    }
    tree.topic_index(node)
}

/// Compares a document's label against the dominant label of its assigned
/// topic. The document vector must be projected through the model's own
/// vocabulary and idf weights (out-of-vocabulary tokens dropped).
pub fn crosscheck(
    tree: &TopicTree,
    table: &LabelTopicTable,
    doc: &[(u32, f64)],
    label: &str,
) -> Crosscheck {
    match assign_topic(tree, doc) {
        None => Crosscheck::Unclassifiable,
        Some(topic) => {
            let dominant = table.dominant_label(topic - 1).unwrap_or("").to_string();
            let mismatch = label != dominant;
            Crosscheck::Assigned {
                topic,
                dominant_label: dominant,
                mismatch,
            }
        }
    }
}
