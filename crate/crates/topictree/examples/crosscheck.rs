//! Using a fitted model to flag suspicious labels on incoming records.
//!
//! Run with: cargo run -p topictree --example crosscheck

use topictree::analysis::Crosscheck;
use topictree::corpus::StopRules;
use topictree::pipeline::{fit, RunConfig};
use topictree::synthetic::{generate, SyntheticSpec};

fn main() {
    let spec = SyntheticSpec {
        topics: 2,
        docs_per_topic: 80,
        terms_per_topic: 25,
        doc_len: 12,
        noise: 0.05,
        seed: 17,
    };
    let records = generate(&spec);
    let sample = records[0].clone();
    let config = RunConfig {
        max_leaves: 2,
        seed: 1,
        ..RunConfig::default()
    };
    let out = fit(records, &config, StopRules::default()).expect("fit");
    let archive = &out.archive;
    let idf = archive.idf();

    println!("dominant label per topic:");
    for t in 0..archive.table.topic_count {
        println!(
            "  topic {}: {}",
            t + 1,
            archive.table.dominant_label(t).unwrap_or("-")
        );
    }

    let show = |title: &str, label: &str, text: &str, outcome: &Crosscheck| {
        println!("\n{title}");
        println!("  label: {label}");
        match outcome {
            Crosscheck::Assigned {
                topic,
                dominant_label,
                mismatch,
            } => println!(
                "  assigned topic {topic} (dominant label {dominant_label}) -> mismatch: {mismatch}"
            ),
            Crosscheck::Unclassifiable => println!("  unclassifiable: no usable tokens ({text:?})"),
        }
    };

    // A training record replays to its own topic: no alarm.
    let ok = archive.crosscheck_record(&sample.label, &sample.text, &idf);
    show("consistent record", &sample.label, &sample.text, &ok);

    // The same narrative with its label swapped trips the alarm.
    let other = archive
        .table
        .labels
        .iter()
        .find(|l| **l != sample.label)
        .unwrap();
    let swapped = archive.crosscheck_record(other, &sample.text, &idf);
    show("label swapped", other, &sample.text, &swapped);

    // A narrative made of unseen words cannot be placed at all.
    let oov = archive.crosscheck_record(&sample.label, "TOTALLY UNSEEN VOCABULARY", &idf);
    show(
        "out-of-vocabulary record",
        &sample.label,
        "TOTALLY UNSEEN VOCABULARY",
        &oov,
    );
}
