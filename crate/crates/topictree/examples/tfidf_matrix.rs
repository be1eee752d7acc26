//! Sparse term-document counts and TF-IDF weighting.
//!
//! Run with: cargo run -p topictree --example tfidf_matrix

use topictree::corpus::{prune_corpus, tokenize, Document, StopRules};
use topictree::matrix::{count_matrix, tfidf, tfidf_weight};

fn main() {
    let rules = StopRules::default();
    let texts = [
        ("n1", "SUSP SMASHED WINDOW REMOVED RADIO FLED"),
        ("n2", "SUSP SMASHED WINDOW REMOVED PURSE"),
        ("n3", "SUSP PUNCHED VICTIM FACE FLED"),
        ("n4", "SUSP PUNCHED VICTIM HEAD"),
    ];
    let docs: Vec<Document> = texts
        .iter()
        .map(|&(id, text)| Document {
            id: id.into(),
            label: "x".into(),
            raw_text: text.into(),
            tokens: tokenize(text, &rules, true),
        })
        .collect();
    let (docs, vocab) = prune_corpus(docs, 1, 1);

    let counts = count_matrix(&docs, &vocab).expect("counts");
    println!(
        "count matrix: {} terms x {} documents, {} nonzeros",
        counts.term_count(),
        counts.doc_count(),
        counts.nnz()
    );
    for j in 0..counts.doc_count() {
        let entries: Vec<String> = counts
            .column(j)
            .iter()
            .map(|&(row, v)| format!("{}:{v}", vocab.term(row as usize)))
            .collect();
        println!("  {}: {}", counts.doc_id(j), entries.join(" "));
    }

    // A term in half the documents over a 4-document corpus weighs
    // tf * ln(4/2) per occurrence before column normalization.
    println!(
        "\nraw weight of tf=1, df=2, n=4: {:.4}",
        tfidf_weight(1.0, 4, 2)
    );

    let weighted = tfidf(&counts).expect("weighting");
    println!("\nweighted matrix (unit-norm columns):");
    for j in 0..weighted.doc_count() {
        let entries: Vec<String> = weighted
            .column(j)
            .iter()
            .map(|&(row, v)| format!("{}:{v:.3}", vocab.term(row as usize)))
            .collect();
        let norm_sq: f64 = weighted.column(j).iter().map(|&(_, v)| v * v).sum();
        println!(
            "  {} (norm^2 = {norm_sq:.9}): {}",
            weighted.doc_id(j),
            entries.join(" ")
        );
    }
    println!(
        "\nnote: 'susp' is removed as role shorthand and terms present in \
         every document weigh zero, so sparsity only ever decreases ({} -> {} nonzeros)",
        counts.nnz(),
        weighted.nnz()
    );
}
