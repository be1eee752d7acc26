//! End-to-end orchestration: ingest -> preprocess -> weight -> fit ->
//! analyze -> export, plus the persisted model used for cross-checking.
//!
//! All randomness flows from the single seed in [`RunConfig`], and every
//! artifact is written deterministically, so two runs with the same records
//! and config produce byte-identical output directories.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analysis::{
    average_linkage, confusion, crosscheck, similarity_matrix, Crosscheck, Dendrogram,
    LabelTopicTable, SimilarityMatrix,
};
use crate::corpus::{prune_corpus, tokenize, tokenize_documents, Document, StopRules, Vocabulary};
use crate::error::{Error, Result};
use crate::export::{self, CrosscheckRow};
use crate::input::RawRecord;
use crate::matrix::{count_matrix, idf_factors, tfidf, weight_column, TermDocMatrix};
use crate::tree::{annotate, build_tree, TopicTree, TreeParams};

pub const FORMAT_VERSION: u32 = 1;

/// Knobs of one fit. Input and output locations stay on the command line;
/// the config carries everything that shapes the model itself and is
/// embedded in every archive for provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub stem: bool,
    pub min_term_count: usize,
    pub min_doc_len: usize,
    pub max_leaves: usize,
    pub min_leaf_docs: usize,
    pub score_threshold: f64,
    pub top_k: usize,
    /// Label cap for the displayed confusion table and for clustering.
    pub top_labels: usize,
    /// Flat cluster count for the analyze stage.
    pub clusters: usize,
    pub seed: u64,
    pub tol: f64,
    pub max_iters: usize,
    /// When set, only records carrying one of these labels are fitted.
    pub label_filter: Option<BTreeSet<String>>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            stem: true,
            min_term_count: 5,
            min_doc_len: 3,
            max_leaves: 20,
            min_leaf_docs: 5,
            score_threshold: 0.0,
            top_k: 10,
            top_labels: 40,
            clusters: 6,
            seed: 0,
            tol: crate::nmf::DEFAULT_TOL,
            max_iters: crate::nmf::DEFAULT_MAX_ITERS,
            label_filter: None,
        }
    }
}

impl RunConfig {
    fn tree_params(&self) -> TreeParams {
        TreeParams {
            max_leaves: self.max_leaves,
            min_leaf_docs: self.min_leaf_docs,
            score_threshold: self.score_threshold,
            max_iters: self.max_iters,
            tol: self.tol,
        }
    }
}

/// Everything needed to re-run classification later: vocabulary, tree with
/// per-node term vectors, the full label/topic table, the stop rules that
/// shaped the tokens, and the config. Serialized as one versioned JSON file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelArchive {
    pub format_version: u32,
    pub config: RunConfig,
    pub stop_rules: StopRules,
    pub vocabulary: Vocabulary,
    /// Document count of the fitted corpus (the idf denominator).
    pub n_docs: usize,
    pub tree: TopicTree,
    /// Unrestricted label-by-topic counts of the training corpus.
    pub table: LabelTopicTable,
}

impl ModelArchive {
    pub fn save(&self, path: &Path) -> Result<()> {
        use std::io::Write;
        let mut file = fs::File::create(path)?;
        serde_json::to_writer_pretty(&mut file, self)?;
        file.write_all(b"\n")?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let archive: ModelArchive = serde_json::from_reader(fs::File::open(path)?)?;
        if archive.format_version != FORMAT_VERSION {
            return Err(Error::UnsupportedVersion(archive.format_version));
        }
        Ok(archive)
    }

    /// Idf factors recomputed from the stored document frequencies; identical
    /// to the factors used at fit time.
    pub fn idf(&self) -> Vec<f64> {
        idf_factors(self.n_docs, &self.vocabulary.doc_freq)
    }

    /// Projects raw text into the model's weighted term space. Tokens outside
    /// the fitted vocabulary are dropped; a training document projects to its
    /// original matrix column bit for bit.
    pub fn project(&self, text: &str, idf: &[f64]) -> Vec<(u32, f64)> {
        let tokens = tokenize(text, &self.stop_rules, self.config.stem);
        let mut counts: std::collections::BTreeMap<u32, f64> = std::collections::BTreeMap::new();
        for token in &tokens {
            if let Some(row) = self.vocabulary.index_of(token) {
                *counts.entry(row as u32).or_insert(0.0) += 1.0;
            }
        }
        let mut entries: Vec<(u32, f64)> = counts.into_iter().collect();
        weight_column(&mut entries, idf);
        entries
    }

    /// Replays one record through the model.
    pub fn crosscheck_record(&self, label: &str, text: &str, idf: &[f64]) -> Crosscheck {
        let entries = self.project(text, idf);
        crosscheck(&self.tree, &self.table, &entries, label)
    }
}

/// A completed fit: the archive plus the fitted corpus and matrix backing
/// the exports.
#[derive(Debug)]
pub struct FitOutput {
    pub archive: ModelArchive,
    pub docs: Vec<Document>,
    pub matrix: TermDocMatrix,
    /// Non-fatal notes (e.g. filter labels that matched nothing).
    pub warnings: Vec<String>,
}

/// Runs the full pipeline over in-memory records. Honors the label filter
/// (a stratified fit equals a fit on the pre-filtered file), errors with
/// [`Error::EmptyCorpus`] when preprocessing discards everything.
pub fn fit(records: Vec<RawRecord>, config: &RunConfig, stop_rules: StopRules) -> Result<FitOutput> {
    let mut warnings = Vec::new();
    let records = match &config.label_filter {
        None => records,
        Some(filter) => {
            let present: BTreeSet<&str> = records.iter().map(|r| r.label.as_str()).collect();
            for wanted in filter {
                if !present.contains(wanted.as_str()) {
                    warnings.push(format!("label filter entry '{wanted}' matches no records"));
                }
            }
            records
                .into_iter()
                .filter(|r| filter.contains(&r.label))
                .collect()
        }
    };

    let mut docs: Vec<Document> = records
        .into_iter()
        .map(|r| Document {
            id: r.id,
            label: r.label,
            raw_text: r.text,
            tokens: Vec::new(),
        })
        .collect();
    tokenize_documents(&mut docs, &stop_rules, config.stem);
    let (docs, vocabulary) = prune_corpus(docs, config.min_term_count, config.min_doc_len);
    if docs.is_empty() {
        return Err(Error::EmptyCorpus);
    }

    let counts = count_matrix(&docs, &vocabulary)?;
    debug_assert_eq!(
        counts.row_doc_freq(),
        vocabulary.doc_freq,
        "matrix document frequencies disagree with the vocabulary"
    );
    let weighted = tfidf(&counts)?;
    let mut tree = build_tree(&weighted, config.seed, &config.tree_params())?;
    annotate(&mut tree, &vocabulary, &docs, config.top_k);
    let table = confusion(&tree, &docs, 0);

    let archive = ModelArchive {
        format_version: FORMAT_VERSION,
        config: config.clone(),
        stop_rules,
        vocabulary,
        n_docs: docs.len(),
        tree,
        table,
    };
    Ok(FitOutput {
        archive,
        docs,
        matrix: weighted,
        warnings,
    })
}

/// Writes every fit artifact into `out_dir`: `model.json`, `tree.json`,
/// `tree.dot`, `assignments.csv`, `confusion.csv` (restricted to the
/// configured label cap) and `summary.txt`; with `dump_matrix`, also the
/// weighted matrix in coordinate form plus its term-index sidecar.
pub fn write_fit_outputs(out_dir: &Path, fit: &FitOutput, dump_matrix: bool) -> Result<()> {
    fs::create_dir_all(out_dir)?;
    let archive = &fit.archive;
    archive.save(&out_dir.join("model.json"))?;
    export::write_tree_json(&out_dir.join("tree.json"), &archive.tree)?;
    export::write_tree_dot(&out_dir.join("tree.dot"), &archive.tree)?;

    let topics = archive.tree.doc_to_topic();
    let rows: Vec<(String, String, usize)> = fit
        .docs
        .iter()
        .zip(&topics)
        .map(|(d, &t)| (d.id.clone(), d.label.clone(), t))
        .collect();
    export::write_assignments_csv(&out_dir.join("assignments.csv"), &rows)?;

    let display_table = confusion(&archive.tree, &fit.docs, archive.config.top_labels);
    export::write_confusion_csv(&out_dir.join("confusion.csv"), &display_table)?;

    fs::write(out_dir.join("summary.txt"), summary_text(fit))?;

    if dump_matrix {
        export::write_matrix_coo(&out_dir.join("matrix.coo.txt"), &fit.matrix)?;
        export::write_term_index(&out_dir.join("matrix.terms.txt"), &archive.vocabulary)?;
    }
    Ok(())
}

/// Human-readable per-node report: doc counts, split scores, label shares
/// and top terms for every node, then the flat topic listing.
fn summary_text(fit: &FitOutput) -> String {
    use std::fmt::Write;
    let archive = &fit.archive;
    let mut out = String::new();
    let cfg = &archive.config;
    writeln!(out, "documents: {}", archive.n_docs).unwrap();
    writeln!(out, "vocabulary: {} terms", archive.vocabulary.len()).unwrap();
    writeln!(out, "leaves: {}", archive.tree.leaf_count()).unwrap();
    writeln!(
        out,
        "seed: {}  stem: {}  min_term_count: {}  min_doc_len: {}  max_leaves: {}  min_leaf_docs: {}",
        cfg.seed, cfg.stem, cfg.min_term_count, cfg.min_doc_len, cfg.max_leaves, cfg.min_leaf_docs
    )
    .unwrap();
    writeln!(out).unwrap();

    for (idx, node) in archive.tree.nodes.iter().enumerate() {
        let kind = match archive.tree.topic_index(idx) {
            Some(t) => format!("topic {t}"),
            None => "internal".to_string(),
        };
        let parent = node
            .parent
            .map(|p| archive.tree.nodes[p].name.clone())
            .unwrap_or_else(|| "-".to_string());
        writeln!(
            out,
            "node {}  parent={}  docs={}  {}{}",
            node.name,
            parent,
            node.doc_count(),
            kind,
            node.split_score
                .map(|s| format!("  split_score={s:.4}"))
                .unwrap_or_default()
        )
        .unwrap();
        let mut shares = node.label_shares.clone();
        shares.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then_with(|| a.0.cmp(&b.0)));
        let shares: Vec<String> = shares
            .iter()
            .take(8)
            .map(|(l, s)| format!("{l} {:.1}%", s * 100.0))
            .collect();
        writeln!(out, "  labels: {}", shares.join(" | ")).unwrap();
        let terms: Vec<String> = node
            .top_terms
            .iter()
            .map(|(t, w)| format!("{t} {w:.4}"))
            .collect();
        writeln!(out, "  terms: {}", terms.join(", ")).unwrap();
    }
    out
}

/// Analyze-stage products for a given cluster count.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisOutput {
    /// Table restricted to the most frequent labels per the config.
    pub table: LabelTopicTable,
    pub similarity: SimilarityMatrix,
    pub dendrogram: Dendrogram,
}

/// Restricts the archived table to its `top_labels` most frequent labels
/// (rows are already in frequency order), computes pairwise label
/// similarities and the average-linkage clustering with `clusters` flat
/// clusters.
pub fn analyze(
    archive: &ModelArchive,
    clusters: usize,
    top_labels: usize,
) -> Result<AnalysisOutput> {
    let mut table = archive.table.clone();
    if top_labels > 0 && top_labels < table.labels.len() {
        table.labels.truncate(top_labels);
        table.counts.truncate(top_labels);
    }
    let similarity = similarity_matrix(&table)?;
    let dendrogram = average_linkage(&similarity, clusters)?;
    Ok(AnalysisOutput {
        table,
        similarity,
        dendrogram,
    })
}

/// Writes `similarity.csv`, `dendrogram.csv` and `clusters.csv`.
pub fn write_analysis_outputs(out_dir: &Path, analysis: &AnalysisOutput) -> Result<()> {
    fs::create_dir_all(out_dir)?;
    export::write_similarity_csv(&out_dir.join("similarity.csv"), &analysis.similarity)?;
    export::write_dendrogram_csv(&out_dir.join("dendrogram.csv"), &analysis.dendrogram)?;
    export::write_flat_cut_csv(&out_dir.join("clusters.csv"), &analysis.dendrogram)?;
    Ok(())
}

/// Replays a batch of records through a fitted model.
pub fn crosscheck_records(archive: &ModelArchive, records: &[RawRecord]) -> Vec<CrosscheckRow> {
    let idf = archive.idf();
    records
        .iter()
        .map(|rec| CrosscheckRow {
            id: rec.id.clone(),
            label: rec.label.clone(),
            outcome: archive.crosscheck_record(&rec.label, &rec.text, &idf),
        })
        .collect()
}
