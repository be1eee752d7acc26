//! Hierarchical rank-2 NMF topic trees for labeled short-text records.
//!
//! `topictree` discovers latent topics in corpora of short narratives (police
//! report text, incident descriptions, support tickets) and quantifies how
//! the records' categorical labels distribute over those topics.
//!
//! The pipeline:
//!
//! 1. **Preprocess** ([`corpus`]) — lowercase alphanumeric tokenization,
//!    stop-word and role-shorthand removal (`SUSP`, `V1`, ...), Porter
//!    stemming, and iterative pruning of rare terms and short documents.
//! 2. **Weight** ([`matrix`]) — sparse term-document counts with TF-IDF
//!    weighting and unit-norm columns.
//! 3. **Factor** ([`nmf`]) — rank-2 NMF via alternating exact NNLS, the
//!    kernel that makes recursive splitting fast.
//! 4. **Grow the tree** ([`tree`]) — greedy binary splits scored by size and
//!    child separation, capped at a leaf budget; terminal leaves are the
//!    flat topics.
//! 5. **Analyze** ([`analysis`]) — label/topic confusion counts, topic
//!    mixtures, cosine similarity between labels, average-linkage label
//!    clusters, and a per-record label cross-check.
//!
//! The [`pipeline`] module wires the stages together and persists a
//! versioned model archive; [`synthetic`] generates planted-topic corpora
//! for experiments.
//!
//! # Runnable examples
//!
//! Each stage has a standalone example under `examples/`:
//!
//! ```text
//! cargo run -p topictree --example preprocess
//! cargo run -p topictree --example tfidf_matrix
//! cargo run -p topictree --example rank2_factorization
//! cargo run -p topictree --example topic_tree
//! cargo run -p topictree --example label_similarity
//! cargo run -p topictree --example crosscheck
//! cargo run -p topictree --example full_pipeline
//! ```
//!
//! The `topictree` binary exposes the same pipeline as `fit`, `analyze`,
//! `crosscheck` and `gen-synthetic` subcommands.

pub mod analysis;
pub mod corpus;
mod error;
pub mod export;
pub mod input;
pub mod matrix;
pub mod nmf;
pub mod pipeline;
pub mod synthetic;
pub mod tree;

pub use error::{Error, Result};
