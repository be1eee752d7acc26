//! The whole pipeline in one pass, writing every artifact to a directory
//! (what the `topictree` binary does across its subcommands).
//!
//! Run with: cargo run -p topictree --example full_pipeline [OUT_DIR]

use topictree::corpus::StopRules;
use topictree::pipeline::{
    analyze, crosscheck_records, fit, write_analysis_outputs, write_fit_outputs, RunConfig,
};
use topictree::synthetic::{generate, SyntheticSpec};

fn main() -> topictree::Result<()> {
    let out_dir = std::env::args()
        .nth(1)
        .map(std::path::PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("topictree_demo"));

    let spec = SyntheticSpec {
        topics: 5,
        docs_per_topic: 150,
        terms_per_topic: 40,
        doc_len: 16,
        noise: 0.12,
        seed: 29,
    };
    let records = generate(&spec);
    println!("generated {} records", records.len());

    let config = RunConfig {
        max_leaves: 5,
        clusters: 3,
        seed: 4,
        ..RunConfig::default()
    };
    let out = fit(records.clone(), &config, StopRules::default())?;
    write_fit_outputs(&out_dir, &out, true)?;
    println!(
        "fit: {} docs, {} terms, {} topics",
        out.archive.n_docs,
        out.archive.vocabulary.len(),
        out.archive.tree.leaf_count()
    );

    let analysis = analyze(&out.archive, config.clusters, config.top_labels)?;
    write_analysis_outputs(&out_dir, &analysis)?;
    println!(
        "analyze: {} labels into {} clusters",
        analysis.similarity.len(),
        analysis.dendrogram.cluster_count
    );

    let rows = crosscheck_records(&out.archive, &records);
    topictree::export::write_crosscheck_csv(&out_dir.join("crosscheck.csv"), &rows)?;
    let mismatches = rows
        .iter()
        .filter(|r| {
            matches!(
                r.outcome,
                topictree::analysis::Crosscheck::Assigned { mismatch: true, .. }
            )
        })
        .count();
    println!(
        "crosscheck: {mismatches} of {} training records sit off their topic's dominant label",
        rows.len()
    );

    println!("\nartifacts in {}:", out_dir.display());
    let mut names: Vec<String> = std::fs::read_dir(&out_dir)?
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    for name in names {
        println!("  {name}");
    }
    Ok(())
}
