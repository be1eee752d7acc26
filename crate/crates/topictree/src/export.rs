//! Writers and readers for every file the pipeline emits.
//!
//! Floats are printed with Rust's shortest round-trip formatting, so reading
//! an export back recovers the exact values that were written. The DOT
//! output is a rendering format, but its reader still recovers the node ids,
//! edges and terminal flags for structural checks.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::analysis::{Crosscheck, Dendrogram, LabelTopicTable, SimilarityMatrix};
use crate::corpus::Vocabulary;
use crate::error::{Error, Result};
use crate::matrix::TermDocMatrix;
use crate::tree::TopicTree;

fn malformed(msg: impl Into<String>) -> Error {
    Error::MalformedExport(msg.into())
}

// ---------------------------------------------------------------------------
// Topic tree: JSON + DOT

/// One node of the JSON tree export: structure and display statistics, not
/// the internal term vectors (those live in the model archive).
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TreeJsonNode {
    pub id: String,
    pub parent: Option<String>,
    pub children: Option<(String, String)>,
    pub doc_count: usize,
    pub split_score: Option<f64>,
    pub terminal: bool,
    /// Flat topic number for terminal nodes.
    pub topic: Option<usize>,
    pub top_terms: Vec<(String, f64)>,
    pub label_shares: Vec<(String, f64)>,
}

pub fn tree_json_view(tree: &TopicTree) -> Vec<TreeJsonNode> {
    tree.nodes
        .iter()
        .enumerate()
        .map(|(idx, node)| TreeJsonNode {
            id: node.name.clone(),
            parent: node.parent.map(|p| tree.nodes[p].name.clone()),
            children: node
                .children
                .map(|(l, r)| (tree.nodes[l].name.clone(), tree.nodes[r].name.clone())),
            doc_count: node.doc_count(),
            split_score: node.split_score,
            terminal: node.is_leaf(),
            topic: tree.topic_index(idx),
            top_terms: node.top_terms.clone(),
            label_shares: node.label_shares.clone(),
        })
        .collect()
}

pub fn write_tree_json(path: &Path, tree: &TopicTree) -> Result<()> {
    let mut file = fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut file, &tree_json_view(tree))?;
    file.write_all(b"\n")?;
    Ok(())
}

pub fn read_tree_json(path: &Path) -> Result<Vec<TreeJsonNode>> {
    Ok(serde_json::from_reader(fs::File::open(path)?)?)
}

/// DOT digraph of the hierarchy. Terminal leaves are filled gray and carry
/// their flat topic number; labels show doc counts and the top terms filled
/// in by annotation.
pub fn write_tree_dot(path: &Path, tree: &TopicTree) -> Result<()> {
    let mut out = String::new();
    out.push_str("digraph topic_tree {\n");
    out.push_str("  rankdir=TB;\n");
    out.push_str("  node [shape=box, fontname=\"Helvetica\"];\n");
    for (idx, node) in tree.nodes.iter().enumerate() {
        let terms: Vec<&str> = node
            .top_terms
            .iter()
            .take(3)
            .map(|(t, _)| t.as_str())
            .collect();
        let mut label = match tree.topic_index(idx) {
            Some(t) => format!("{} (topic {t})\\n{} docs", node.name, node.doc_count()),
            None => format!("{}\\n{} docs", node.name, node.doc_count()),
        };
        if !terms.is_empty() {
            label.push_str("\\n");
            label.push_str(&terms.join(" "));
        }
        if node.is_leaf() {
            out.push_str(&format!(
                "  \"{}\" [label=\"{}\", style=filled, fillcolor=gray90];\n",
                node.name, label
            ));
        } else {
            out.push_str(&format!("  \"{}\" [label=\"{}\"];\n", node.name, label));
        }
    }
    for node in &tree.nodes {
        if let Some((l, r)) = node.children {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\";\n  \"{}\" -> \"{}\";\n",
                node.name, tree.nodes[l].name, node.name, tree.nodes[r].name
            ));
        }
    }
    out.push_str("}\n");
    fs::write(path, out)?;
    Ok(())
}

/// Structural view recovered from a DOT export.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DotStructure {
    pub nodes: BTreeSet<String>,
    pub terminals: BTreeSet<String>,
    pub edges: Vec<(String, String)>,
}

pub fn read_tree_dot(path: &Path) -> Result<DotStructure> {
    let text = fs::read_to_string(path)?;
    let mut structure = DotStructure {
        nodes: BTreeSet::new(),
        terminals: BTreeSet::new(),
        edges: Vec::new(),
    };
    for line in text.lines() {
        let line = line.trim();
        if let Some((from, rest)) = line.split_once(" -> ") {
            let from = from.trim().trim_matches('"');
            let to = rest.trim_end_matches(';').trim().trim_matches('"');
            structure.edges.push((from.to_string(), to.to_string()));
        } else if line.starts_with('"') {
            let Some(name) = line.trim_start_matches('"').split('"').next() else {
                continue;
            };
            structure.nodes.insert(name.to_string());
            if line.contains("fillcolor=gray90") {
                structure.terminals.insert(name.to_string());
            }
        }
    }
    if structure.nodes.is_empty() {
        return Err(malformed("no node declarations found in DOT file"));
    }
    Ok(structure)
}

// ---------------------------------------------------------------------------
// Assignments

pub fn write_assignments_csv(
    path: &Path,
    rows: &[(String, String, usize)], // (doc id, label, topic)
) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["id", "label", "topic"])?;
    for (id, label, topic) in rows {
        w.write_record([id.as_str(), label.as_str(), &topic.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_assignments_csv(path: &Path) -> Result<Vec<(String, String, usize)>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let topic = rec
            .get(2)
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| malformed("bad topic number in assignments file"))?;
        rows.push((
            rec.get(0).unwrap_or_default().to_string(),
            rec.get(1).unwrap_or_default().to_string(),
            topic,
        ));
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Confusion table

/// Label rows by topic columns with a totals column and a totals row.
pub fn write_confusion_csv(path: &Path, table: &LabelTopicTable) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["label".to_string()];
    header.extend((1..=table.topic_count).map(|t| t.to_string()));
    header.push("total".to_string());
    w.write_record(&header)?;
    for (l, label) in table.labels.iter().enumerate() {
        let mut row = vec![label.clone()];
        row.extend(table.counts[l].iter().map(|c| c.to_string()));
        row.push(table.row_total(l).to_string());
        w.write_record(&row)?;
    }
    let mut totals = vec!["total".to_string()];
    totals.extend((0..table.topic_count).map(|t| table.col_total(t).to_string()));
    totals.push(table.grand_total().to_string());
    w.write_record(&totals)?;
    w.flush()?;
    Ok(())
}

pub fn read_confusion_csv(path: &Path) -> Result<LabelTopicTable> {
    let mut r = csv::Reader::from_path(path)?;
    let topic_count = r.headers()?.len().saturating_sub(2);
    let mut labels = Vec::new();
    let mut counts = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let label = rec.get(0).unwrap_or_default().to_string();
        let row: Vec<u64> = (1..=topic_count)
            .map(|i| {
                rec.get(i)
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| malformed("bad count in confusion file"))
            })
            .collect::<Result<_>>()?;
        let total: u64 = rec
            .get(topic_count + 1)
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| malformed("bad total in confusion file"))?;
        if label == "total" {
            let grand: u64 = counts.iter().flat_map(|r: &Vec<u64>| r.iter()).sum();
            if grand != total {
                return Err(malformed("confusion totals row disagrees with counts"));
            }
            break;
        }
        if row.iter().sum::<u64>() != total {
            return Err(malformed(format!("row total mismatch for label {label}")));
        }
        labels.push(label);
        counts.push(row);
    }
    Ok(LabelTopicTable {
        labels,
        topic_count,
        counts,
    })
}

// ---------------------------------------------------------------------------
// Similarity matrix

/// Writes the matrix with rows and columns permuted into breadth order
/// (broadly similar labels first).
pub fn write_similarity_csv(path: &Path, sim: &SimilarityMatrix) -> Result<()> {
    let order = sim.breadth_order();
    let mut w = csv::Writer::from_path(path)?;
    let mut header = vec!["label".to_string()];
    header.extend(order.iter().map(|&i| sim.labels[i].clone()));
    w.write_record(&header)?;
    for &i in &order {
        let mut row = vec![sim.labels[i].clone()];
        row.extend(order.iter().map(|&j| sim.value(i, j).to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a similarity matrix back in file order.
pub fn read_similarity_csv(path: &Path) -> Result<SimilarityMatrix> {
    let mut r = csv::Reader::from_path(path)?;
    let header_labels: Vec<String> = r.headers()?.iter().skip(1).map(String::from).collect();
    let mut labels = Vec::new();
    let mut values = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        labels.push(rec.get(0).unwrap_or_default().to_string());
        let row: Vec<f64> = (1..rec.len())
            .map(|i| {
                rec.get(i)
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| malformed("bad similarity value"))
            })
            .collect::<Result<_>>()?;
        if row.len() != header_labels.len() {
            return Err(malformed("ragged similarity matrix"));
        }
        values.push(row);
    }
    if labels != header_labels {
        return Err(malformed("similarity row labels disagree with header"));
    }
    Ok(SimilarityMatrix { labels, values })
}

// ---------------------------------------------------------------------------
// Dendrogram: merge list + flat cut

pub fn write_dendrogram_csv(path: &Path, dendrogram: &Dendrogram) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["step", "cluster_a", "cluster_b", "similarity"])?;
    for (step, m) in dendrogram.merges.iter().enumerate() {
        w.write_record([
            (step + 1).to_string(),
            m.cluster_a.clone(),
            m.cluster_b.clone(),
            m.similarity.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_dendrogram_csv(path: &Path) -> Result<Vec<crate::analysis::MergeStep>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut merges = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        merges.push(crate::analysis::MergeStep {
            cluster_a: rec.get(1).unwrap_or_default().to_string(),
            cluster_b: rec.get(2).unwrap_or_default().to_string(),
            similarity: rec
                .get(3)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| malformed("bad merge similarity"))?,
        });
    }
    Ok(merges)
}

pub fn write_flat_cut_csv(path: &Path, dendrogram: &Dendrogram) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["label", "cluster"])?;
    for (label, cluster) in &dendrogram.flat_cut {
        w.write_record([label.as_str(), &cluster.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_flat_cut_csv(path: &Path) -> Result<Vec<(String, usize)>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut cut = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        cut.push((
            rec.get(0).unwrap_or_default().to_string(),
            rec.get(1)
                .and_then(|v| v.parse().ok())
                .ok_or_else(|| malformed("bad cluster id"))?,
        ));
    }
    Ok(cut)
}

// ---------------------------------------------------------------------------
// Cross-check results

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrosscheckRow {
    pub id: String,
    pub label: String,
    pub outcome: Crosscheck,
}

/// One row per record. Unclassifiable records keep empty topic and dominant
/// label fields and carry `unclassifiable` in the mismatch column.
pub fn write_crosscheck_csv(path: &Path, rows: &[CrosscheckRow]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["id", "label", "assigned_topic", "dominant_label", "mismatch"])?;
    for row in rows {
        match &row.outcome {
            Crosscheck::Assigned {
                topic,
                dominant_label,
                mismatch,
            } => w.write_record([
                row.id.as_str(),
                row.label.as_str(),
                &topic.to_string(),
                dominant_label.as_str(),
                if *mismatch { "true" } else { "false" },
            ])?,
            Crosscheck::Unclassifiable => {
                w.write_record([row.id.as_str(), row.label.as_str(), "", "", "unclassifiable"])?
            }
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_crosscheck_csv(path: &Path) -> Result<Vec<CrosscheckRow>> {
    let mut r = csv::Reader::from_path(path)?;
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec?;
        let id = rec.get(0).unwrap_or_default().to_string();
        let label = rec.get(1).unwrap_or_default().to_string();
        let outcome = match rec.get(4) {
            Some("unclassifiable") => Crosscheck::Unclassifiable,
            Some(flag @ ("true" | "false")) => Crosscheck::Assigned {
                topic: rec
                    .get(2)
                    .and_then(|v| v.parse().ok())
                    .ok_or_else(|| malformed("bad topic in crosscheck file"))?,
                dominant_label: rec.get(3).unwrap_or_default().to_string(),
                mismatch: flag == "true",
            },
            other => {
                return Err(malformed(format!(
                    "bad mismatch flag {other:?} in crosscheck file"
                )))
            }
        };
        rows.push(CrosscheckRow { id, label, outcome });
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Matrix debug dump: coordinate text + term-index sidecar

/// `row col value` lines, space-separated, entries in column-major order.
pub fn write_matrix_coo(path: &Path, matrix: &TermDocMatrix) -> Result<()> {
    let mut out = String::new();
    for j in 0..matrix.doc_count() {
        for &(row, v) in matrix.column(j) {
            out.push_str(&format!("{row} {j} {v}\n"));
        }
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_matrix_coo(path: &Path) -> Result<Vec<(u32, u32, f64)>> {
    let text = fs::read_to_string(path)?;
    let mut entries = Vec::new();
    for line in text.lines() {
        let mut parts = line.split_whitespace();
        let (Some(r), Some(c), Some(v)) = (parts.next(), parts.next(), parts.next()) else {
            return Err(malformed(format!("bad coordinate line: {line}")));
        };
        entries.push((
            r.parse().map_err(|_| malformed("bad row id"))?,
            c.parse().map_err(|_| malformed("bad col id"))?,
            v.parse().map_err(|_| malformed("bad value"))?,
        ));
    }
    Ok(entries)
}

/// `row term` sidecar mapping matrix rows to vocabulary terms.
pub fn write_term_index(path: &Path, vocab: &Vocabulary) -> Result<()> {
    let mut out = String::new();
    for (row, term) in vocab.terms.iter().enumerate() {
        out.push_str(&format!("{row} {term}\n"));
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_term_index(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path)?;
    let mut terms = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let Some((row, term)) = line.split_once(' ') else {
            return Err(malformed(format!("bad term index line: {line}")));
        };
        if row.parse::<usize>() != Ok(i) {
            return Err(malformed("term index rows out of order"));
        }
        terms.push(term.to_string());
    }
    Ok(terms)
}
