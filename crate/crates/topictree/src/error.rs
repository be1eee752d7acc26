use thiserror::Error;

/// Errors produced by the corpus, matrix, factorization and analysis stages.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("input is missing required column '{0}'")]
    MissingColumn(String),

    #[error("corpus is empty after preprocessing")]
    EmptyCorpus,

    #[error("token '{0}' is not in the vocabulary")]
    UnknownToken(String),

    #[error("matrix is already TF-IDF weighted")]
    AlreadyWeighted,

    #[error("operation requires a TF-IDF weighted matrix")]
    NotWeighted,

    #[error("matrix has no nonzero entries")]
    ZeroMatrix,

    #[error("matrix is too small to factor: need at least 2 terms and 2 documents, got {rows}x{cols}")]
    MatrixTooSmall { rows: usize, cols: usize },

    #[error("NNLS subproblem is degenerate: both basis columns are zero")]
    DegenerateBasis,

    #[error("cosine similarity is undefined for a zero vector")]
    ZeroVector,

    #[error("label '{0}' is not present in the table")]
    UnknownLabel(String),

    #[error("label '{0}' has no documents")]
    EmptyLabel(String),

    #[error("cluster count {got} is out of range 1..={max}")]
    ClusterCountOutOfRange { got: usize, max: usize },

    #[error("unsupported model format version {0}")]
    UnsupportedVersion(u32),

    #[error("{0}")]
    InvalidInput(String),

    #[error("malformed export file: {0}")]
    MalformedExport(String),
}

pub type Result<T> = std::result::Result<T, Error>;
