//! From confusion counts to label similarity and average-linkage clusters.
//!
//! Run with: cargo run -p topictree --example label_similarity

use topictree::analysis::{average_linkage, mixture, similarity_matrix, LabelTopicTable};

fn main() {
    // A hand-built confusion table: six labels over five topics. The first
    // two labels share a topic profile, the next two share another, and the
    // last two live in topics of their own.
    let table = LabelTopicTable {
        labels: [
            "burglary",
            "theft",
            "battery",
            "robbery",
            "identity-theft",
            "shoplifting",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect(),
        topic_count: 5,
        counts: vec![
            vec![60, 30, 0, 0, 0],
            vec![50, 40, 5, 0, 0],
            vec![0, 5, 70, 25, 0],
            vec![0, 0, 60, 30, 0],
            vec![0, 0, 0, 0, 90],
            vec![10, 0, 0, 0, 80],
        ],
    };

    println!("label mixtures over topics:");
    for label in &table.labels {
        let m = mixture(&table, label).expect("mixture");
        let parts: Vec<String> = m.iter().map(|v| format!("{v:.2}")).collect();
        println!("  {label:15} [{}]", parts.join(", "));
    }

    let sim = similarity_matrix(&table).expect("similarity");
    println!("\npairwise cosine similarity (breadth order):");
    let order = sim.breadth_order();
    print!("{:15} ", "");
    for &j in &order {
        print!("{:>10.10} ", sim.labels[j]);
    }
    println!();
    for &i in &order {
        print!("{:15} ", sim.labels[i]);
        for &j in &order {
            print!("{:10.3} ", sim.value(i, j));
        }
        println!();
    }

    let dendrogram = average_linkage(&sim, 3).expect("clustering");
    println!("\nmerges down to 3 clusters:");
    for (step, m) in dendrogram.merges.iter().enumerate() {
        println!(
            "  step {}: {} + {} at mean similarity {:.3}",
            step + 1,
            m.cluster_a,
            m.cluster_b,
            m.similarity
        );
    }
    println!("\nflat cut:");
    for (label, cluster) in &dendrogram.flat_cut {
        println!("  cluster {cluster}: {label}");
    }
}
