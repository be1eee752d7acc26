//! Thin command-line front end over the library pipeline.
//!
//! Exit codes: 0 on success, 1 for usage errors, 2 for data errors.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use topictree::corpus::StopRules;
use topictree::export;
use topictree::input::{read_records, write_records, ColumnSpec};
use topictree::pipeline::{
    analyze, crosscheck_records, fit, write_analysis_outputs, write_fit_outputs, ModelArchive,
    RunConfig,
};
use topictree::synthetic::{generate, SyntheticSpec};

#[derive(Parser)]
#[command(
    name = "topictree",
    about = "Discover latent topics in labeled short-text records and check labels against them",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a topic tree on a delimited file and write all model artifacts.
    Fit(FitArgs),
    /// Compute label similarity and clusters from a fitted model.
    Analyze(AnalyzeArgs),
    /// Replay records through a fitted model and flag label mismatches.
    Crosscheck(CrosscheckArgs),
    /// Generate a planted-topic synthetic corpus.
    GenSynthetic(GenSyntheticArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Delimited input file with a header row.
    #[arg(long)]
    input: PathBuf,
    /// Column delimiter: comma or tab (default: by file extension).
    #[arg(long, value_parser = parse_delimiter)]
    delimiter: Option<u8>,
    /// Header name of the record id column.
    #[arg(long, default_value = "id")]
    id_col: String,
    /// Header name of the label column.
    #[arg(long, default_value = "label")]
    label_col: String,
    /// Header name of the text column.
    #[arg(long, default_value = "text")]
    text_col: String,
}

impl InputArgs {
    fn columns(&self) -> ColumnSpec {
        ColumnSpec {
            id: self.id_col.clone(),
            label: self.label_col.clone(),
            text: self.text_col.clone(),
        }
    }
}

fn parse_delimiter(s: &str) -> Result<u8, String> {
    match s {
        "comma" | "," => Ok(b','),
        "tab" | "\\t" => Ok(b'\t'),
        other => Err(format!("unsupported delimiter '{other}' (use comma or tab)")),
    }
}

#[derive(Args)]
struct FitArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Output directory for all artifacts.
    #[arg(long)]
    out: PathBuf,
    /// Replace the built-in stop-word list with this file (one word per line).
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Add stop words from this file on top of the active list.
    #[arg(long)]
    add_stopwords: Option<PathBuf>,
    /// Disable Porter stemming.
    #[arg(long)]
    no_stem: bool,
    /// Drop terms occurring fewer times than this in the corpus.
    #[arg(long, default_value_t = 5)]
    min_term_count: usize,
    /// Drop documents left with fewer tokens than this.
    #[arg(long, default_value_t = 3)]
    min_doc_len: usize,
    /// Cap on terminal topics.
    #[arg(long, default_value_t = 20)]
    max_leaves: usize,
    /// Reject splits that would leave a child with fewer documents.
    #[arg(long, default_value_t = 5)]
    min_leaf_docs: usize,
    /// Minimum split score; 0 disables the threshold.
    #[arg(long, default_value_t = 0.0)]
    score_threshold: f64,
    /// Keywords listed per node.
    #[arg(long, default_value_t = 10)]
    top_k: usize,
    /// Label cap for the displayed confusion table and clustering.
    #[arg(long, default_value_t = 40)]
    top_labels: usize,
    /// Flat cluster count recorded in the config for the analyze stage.
    #[arg(long, default_value_t = 6)]
    clusters: usize,
    /// Seed for all randomness in the fit.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative-change stopping tolerance of each factorization.
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,
    /// Outer iteration cap of each factorization.
    #[arg(long, default_value_t = 50)]
    max_iters: usize,
    /// Fit only records with these labels (comma separated; repeatable).
    #[arg(long, value_delimiter = ',')]
    label_filter: Vec<String>,
    /// Also dump the weighted matrix in coordinate form.
    #[arg(long)]
    dump_matrix: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Fitted model archive (model.json).
    #[arg(long)]
    model: PathBuf,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
    /// Flat cluster count (default: the value recorded in the model config).
    #[arg(long)]
    clusters: Option<usize>,
    /// Label cap (default: the value recorded in the model config).
    #[arg(long)]
    top_labels: Option<usize>,
}

#[derive(Args)]
struct CrosscheckArgs {
    /// Fitted model archive (model.json).
    #[arg(long)]
    model: PathBuf,
    #[command(flatten)]
    input: InputArgs,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct GenSyntheticArgs {
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 4)]
    topics: usize,
    #[arg(long, default_value_t = 250)]
    docs_per_topic: usize,
    #[arg(long, default_value_t = 50)]
    terms_per_topic: usize,
    #[arg(long, default_value_t = 20)]
    doc_len: usize,
    #[arg(long, default_value_t = 0.10)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> topictree::Result<()> {
    match cli.command {
        Command::Fit(args) => run_fit(args),
        Command::Analyze(args) => run_analyze(args),
        Command::Crosscheck(args) => run_crosscheck(args),
        Command::GenSynthetic(args) => run_gen_synthetic(args),
    }
}

fn load_word_list(path: &PathBuf) -> topictree::Result<Vec<String>> {
    let text = std::fs::read_to_string(path)?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(String::from)
        .collect())
}

fn run_fit(args: FitArgs) -> topictree::Result<()> {
    let mut stop_rules = match &args.stopwords {
        Some(path) => StopRules::with_stop_words(load_word_list(path)?),
        None => StopRules::default(),
    };
    if let Some(path) = &args.add_stopwords {
        stop_rules.add_stop_words(load_word_list(path)?);
    }

    let label_filter: Option<BTreeSet<String>> = if args.label_filter.is_empty() {
        None
    } else {
        Some(args.label_filter.iter().cloned().collect())
    };
    let config = RunConfig {
        stem: !args.no_stem,
        min_term_count: args.min_term_count,
        min_doc_len: args.min_doc_len,
        max_leaves: args.max_leaves,
        min_leaf_docs: args.min_leaf_docs,
        score_threshold: args.score_threshold,
        top_k: args.top_k,
        top_labels: args.top_labels,
        clusters: args.clusters,
        seed: args.seed,
        tol: args.tol,
        max_iters: args.max_iters,
        label_filter,
    };

    let records = read_records(&args.input.input, args.input.delimiter, &args.input.columns())?;
    let output = fit(records, &config, stop_rules)?;
    for warning in &output.warnings {
        eprintln!("warning: {warning}");
    }
    write_fit_outputs(&args.out, &output, args.dump_matrix)?;
    println!(
        "fit: {} documents, {} terms, {} topics -> {}",
        output.archive.n_docs,
        output.archive.vocabulary.len(),
        output.archive.tree.leaf_count(),
        args.out.display()
    );
    Ok(())
}

fn run_analyze(args: AnalyzeArgs) -> topictree::Result<()> {
    let archive = ModelArchive::load(&args.model)?;
    let clusters = args.clusters.unwrap_or(archive.config.clusters);
    let top_labels = args.top_labels.unwrap_or(archive.config.top_labels);
    let analysis = analyze(&archive, clusters, top_labels)?;
    write_analysis_outputs(&args.out, &analysis)?;
    println!(
        "analyze: {} labels, {} clusters -> {}",
        analysis.similarity.len(),
        analysis.dendrogram.cluster_count,
        args.out.display()
    );
    Ok(())
}

fn run_crosscheck(args: CrosscheckArgs) -> topictree::Result<()> {
    let archive = ModelArchive::load(&args.model)?;
    let records = read_records(&args.input.input, args.input.delimiter, &args.input.columns())?;
    let rows = crosscheck_records(&archive, &records);
    export::write_crosscheck_csv(&args.out, &rows)?;
    let mismatches = rows
        .iter()
        .filter(|r| {
            matches!(
                r.outcome,
                topictree::analysis::Crosscheck::Assigned { mismatch: true, .. }
            )
        })
        .count();
    let unclassifiable = rows
        .iter()
        .filter(|r| r.outcome == topictree::analysis::Crosscheck::Unclassifiable)
        .count();
    println!(
        "crosscheck: {} records, {} mismatches, {} unclassifiable -> {}",
        rows.len(),
        mismatches,
        unclassifiable,
        args.out.display()
    );
    Ok(())
}

fn run_gen_synthetic(args: GenSyntheticArgs) -> topictree::Result<()> {
    let spec = SyntheticSpec {
        topics: args.topics,
        docs_per_topic: args.docs_per_topic,
        terms_per_topic: args.terms_per_topic,
        doc_len: args.doc_len,
        noise: args.noise,
        seed: args.seed,
    };
    let records = generate(&spec);
    write_records(&args.out, &records)?;
    println!(
        "gen-synthetic: {} records ({} topics x {}) -> {}",
        records.len(),
        spec.topics,
        spec.docs_per_topic,
        args.out.display()
    );
    Ok(())
}
