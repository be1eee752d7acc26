//! Growing a topic tree on a planted corpus and reading its structure.
//!
//! Run with: cargo run -p topictree --example topic_tree

use topictree::corpus::StopRules;
use topictree::pipeline::{fit, RunConfig};
use topictree::synthetic::{generate, SyntheticSpec};
use topictree::tree::leaf_topics;

fn main() {
    let spec = SyntheticSpec {
        topics: 4,
        docs_per_topic: 120,
        terms_per_topic: 30,
        doc_len: 15,
        noise: 0.1,
        seed: 3,
    };
    let records = generate(&spec);
    let config = RunConfig {
        max_leaves: 4,
        seed: 1,
        top_k: 5,
        ..RunConfig::default()
    };
    let out = fit(records, &config, StopRules::default()).expect("fit");
    let archive = &out.archive;

    println!(
        "fitted {} documents into {} topics over {} terms\n",
        archive.n_docs,
        archive.tree.leaf_count(),
        archive.vocabulary.len()
    );

    println!("nodes in creation order:");
    for (idx, node) in archive.tree.nodes.iter().enumerate() {
        let role = match archive.tree.topic_index(idx) {
            Some(t) => format!("topic {t}"),
            None => "internal".into(),
        };
        let score = node
            .split_score
            .map(|s| format!(", split score {s:.1}"))
            .unwrap_or_default();
        println!("  {}: {} docs, {role}{score}", node.name, node.doc_count());
    }

    println!("\nflat topic model:");
    for leaf in leaf_topics(&archive.tree, &archive.vocabulary, &out.docs, 5) {
        let terms: Vec<&str> = leaf.top_terms.iter().map(|(t, _)| t.as_str()).collect();
        let labels: Vec<String> = leaf
            .label_shares
            .iter()
            .map(|(l, s)| format!("{l} {:.0}%", s * 100.0))
            .collect();
        println!(
            "  topic {} ({} docs): {} | labels: {}",
            leaf.topic_index,
            leaf.doc_count,
            terms.join(" "),
            labels.join(", ")
        );
    }
}
