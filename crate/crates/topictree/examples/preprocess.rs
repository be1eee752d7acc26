//! Tokenization and iterative corpus pruning.
//!
//! Run with: cargo run -p topictree --example preprocess

use topictree::corpus::{prune_corpus, tokenize, Document, StopRules};

fn main() {
    let rules = StopRules::default();

    let narratives = [
        "SUSP ENTERED LOCATION PRODUCED HANDGUN DEMANDED MONEY",
        "V1 STATES SUSP PUNCHED V1 IN FACE DURING VERBAL DISPUTE",
        "UNKNOWN SUSP SMASHED REAR WINDOW OF VEHICLE REMOVED PROPERTY",
        "S1 AND S2 ENTERED STORE CONCEALED MERCHANDISE AND FLED",
    ];

    println!("tokenization (stop-words and role shorthand removed, stems on):\n");
    for text in narratives {
        let tokens = tokenize(text, &rules, true);
        println!("  {text}");
        println!("  -> {tokens:?}\n");
    }

    // Pruning: terms under the count threshold disappear, documents that get
    // too short are dropped, and the two rules feed each other until nothing
    // changes.
    let texts = [
        ("a1", "robbery", "SUSP GRABBED PURSE FLED ON FOOT"),
        ("a2", "robbery", "SUSP GRABBED WALLET FLED IN VEHICLE"),
        ("a3", "robbery", "SUSP GRABBED PHONE FLED ON FOOT"),
        ("a4", "burglary", "SUSP PRIED DOOR REMOVED PROPERTY FLED"),
        ("a5", "burglary", "SUSP PRIED WINDOW REMOVED PROPERTY"),
        ("a6", "burglary", "SUSP PRIED GATE REMOVED TOOLS"),
        ("a7", "vandalism", "SUSP SCRATCHED PAINT"),
    ];
    let mut docs: Vec<Document> = texts
        .iter()
        .map(|&(id, label, text)| Document {
            id: id.into(),
            label: label.into(),
            raw_text: text.into(),
            tokens: tokenize(text, &rules, true),
        })
        .collect();
    for d in &mut docs {
        println!("{}: {:?}", d.id, d.tokens);
    }

    let (kept, vocab) = prune_corpus(docs, 2, 3);
    println!("\nafter pruning (min term count 2, min doc length 3):");
    for d in &kept {
        println!("  {}: {:?}", d.id, d.tokens);
    }
    println!("\nvocabulary ({} terms):", vocab.len());
    for (term, (&count, &df)) in vocab
        .terms
        .iter()
        .zip(vocab.corpus_count.iter().zip(&vocab.doc_freq))
    {
        println!("  {term:10} corpus count {count:2}  document frequency {df}");
    }
}
