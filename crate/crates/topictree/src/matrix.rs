//! Sparse term-document matrix construction and TF-IDF weighting.
//!
//! The matrix is stored column-major: one sorted `(row, value)` list per
//! document. Weighting computes `tf * ln(n / df)` per entry and then scales
//! every nonzero column to unit Euclidean norm, the form the factorization
//! stage expects.

use serde::{Deserialize, Serialize};

use crate::corpus::{Document, Vocabulary};
use crate::error::{Error, Result};

/// Sparse nonnegative matrix with one row per vocabulary term and one column
/// per document. All stored values are strictly positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermDocMatrix {
    term_count: usize,
    doc_ids: Vec<String>,
    /// Per-column entries, sorted by row id.
    cols: Vec<Vec<(u32, f64)>>,
    weighted: bool,
}

impl TermDocMatrix {
    /// Number of term rows.
    pub fn term_count(&self) -> usize {
        self.term_count
    }

    /// Number of document columns.
    pub fn doc_count(&self) -> usize {
        self.cols.len()
    }

    pub fn is_weighted(&self) -> bool {
        self.weighted
    }

    pub fn doc_id(&self, col: usize) -> &str {
        &self.doc_ids[col]
    }

    pub fn doc_ids(&self) -> &[String] {
        &self.doc_ids
    }

    /// Sorted `(row, value)` entries of one column.
    pub fn column(&self, col: usize) -> &[(u32, f64)] {
        &self.cols[col]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.len()).sum()
    }

    /// Number of columns with at least one entry in `row`.
    pub fn row_doc_freq(&self) -> Vec<u32> {
        let mut df = vec![0u32; self.term_count];
        for col in &self.cols {
            for &(row, _) in col {
                df[row as usize] += 1;
            }
        }
        df
    }

    /// Squared Frobenius norm.
    pub fn frob_sq(&self) -> f64 {
        self.cols
            .iter()
            .map(|c| c.iter().map(|&(_, v)| v * v).sum::<f64>())
            .sum()
    }

    /// New matrix over the same term rows restricted to `cols` (in the given
    /// order). Column unit norms are preserved, so a weighted matrix stays
    /// weighted.
    pub fn select_columns(&self, cols: &[usize]) -> TermDocMatrix {
        TermDocMatrix {
            term_count: self.term_count,
            doc_ids: cols.iter().map(|&c| self.doc_ids[c].clone()).collect(),
            cols: cols.iter().map(|&c| self.cols[c].clone()).collect(),
            weighted: self.weighted,
        }
    }
}

/// Builds the raw count matrix: entry `(i, j)` is the number of occurrences
/// of term `i` in document `j`. Token order is ignored. A token missing from
/// the vocabulary is a pipeline bug and reported as an error.
pub fn count_matrix(docs: &[Document], vocab: &Vocabulary) -> Result<TermDocMatrix> {
    let mut cols = Vec::with_capacity(docs.len());
    let mut doc_ids = Vec::with_capacity(docs.len());
    for doc in docs {
        let mut counts: std::collections::BTreeMap<u32, f64> = std::collections::BTreeMap::new();
        for token in &doc.tokens {
            let row = vocab
                .index_of(token)
                .ok_or_else(|| Error::UnknownToken(token.clone()))? as u32;
            *counts.entry(row).or_insert(0.0) += 1.0;
        }
        cols.push(counts.into_iter().collect());
        doc_ids.push(doc.id.clone());
    }
    Ok(TermDocMatrix {
        term_count: vocab.len(),
        doc_ids,
        cols,
        weighted: false,
    })
}

/// The pre-normalization TF-IDF weight of one entry: `tf * ln(n / df)`.
/// A term present in every document gets weight zero.
pub fn tfidf_weight(tf: f64, n_docs: usize, doc_freq: u32) -> f64 {
    tf * (n_docs as f64 / doc_freq as f64).ln()
}

/// Inverse-document-frequency factors for every term row.
pub fn idf_factors(n_docs: usize, doc_freq: &[u32]) -> Vec<f64> {
    doc_freq
        .iter()
        .map(|&df| {
            if df == 0 {
                0.0
            } else {
                (n_docs as f64 / df as f64).ln()
            }
        })
        .collect()
}

/// Multiplies a sorted sparse column by per-row idf factors, drops zeroed
/// entries and scales the column to unit Euclidean norm (all-zero columns are
/// left zero). The model cross-check projects unseen documents through this
/// same routine so replayed training columns are reproduced bit for bit.
pub fn weight_column(entries: &mut Vec<(u32, f64)>, idf: &[f64]) {
    for (row, v) in entries.iter_mut() {
        *v *= idf[*row as usize];
    }
    entries.retain(|&(_, v)| v != 0.0);
    let norm = entries.iter().map(|&(_, v)| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        for (_, v) in entries.iter_mut() {
            *v /= norm;
        }
    }
}

/// Applies TF-IDF weighting with unit-norm column scaling. Rejects matrices
/// that were already weighted.
pub fn tfidf(counts: &TermDocMatrix) -> Result<TermDocMatrix> {
    if counts.weighted {
        return Err(Error::AlreadyWeighted);
    }
    let idf = idf_factors(counts.doc_count(), &counts.row_doc_freq());
    let mut out = counts.clone();
    for col in &mut out.cols {
        weight_column(col, &idf);
    }
    out.weighted = true;
    Ok(out)
}

/// Test constructor: builds a weighted matrix directly from dense data,
/// normalizing each nonzero column. Used by factorization tests and the
/// synthetic benchmarks; not part of the text pipeline.
pub fn from_dense_normalized(dense: &[Vec<f64>]) -> TermDocMatrix {
    let m = dense.len();
    let n = if m == 0 { 0 } else { dense[0].len() };
    let mut cols: Vec<Vec<(u32, f64)>> = vec![Vec::new(); n];
    for (i, row) in dense.iter().enumerate() {
        assert_eq!(row.len(), n, "ragged dense input");
        for (j, &v) in row.iter().enumerate() {
            assert!(v >= 0.0 && v.is_finite(), "entries must be nonnegative");
            if v > 0.0 {
                cols[j].push((i as u32, v));
            }
        }
    }
    for col in &mut cols {
        let norm = col.iter().map(|&(_, v)| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            for (_, v) in col.iter_mut() {
                *v /= norm;
            }
        }
    }
    TermDocMatrix {
        term_count: m,
        doc_ids: (0..n).map(|j| format!("doc{j}")).collect(),
        cols,
        weighted: true,
    }
}
