use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by corpus ingestion and indicator computation.
///
/// Variants are grouped so callers can map them onto coarse exit classes:
/// [`Error::kind`] distinguishes bad input data from bad run configuration
/// and from internal invariant violations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },

    #[error("duplicate paper_id {0}")]
    DuplicatePaper(String),

    #[error("duplicate reference target {target} in paper {paper}")]
    DuplicateReference { paper: String, target: String },

    #[error("paper {paper} published {pub_year}, after census year {census_year}")]
    BeyondCensus {
        paper: String,
        pub_year: i32,
        census_year: i32,
    },

    #[error("unknown paper_id {0}")]
    UnknownPaper(String),

    #[error(
        "incomplete citation window: publication year {pub_year} with window {window} \
         extends past census year {census_year}"
    )]
    IncompleteWindow {
        pub_year: i32,
        window: String,
        census_year: i32,
    },

    #[error("invalid year interval: first year {first} after last year {last}")]
    InvalidInterval { first: i32, last: i32 },

    #[error("no papers in journal {journal} for year {year}")]
    EmptyJournalYear { journal: String, year: i32 },

    #[error("empty paper set")]
    EmptySet,

    #[error("papers without scores: {}", .0.join(", "))]
    UnscoredPapers(Vec<String>),

    #[error("multiple evaluation categories for {paper}: {first} and {second}")]
    EvaluationConflict {
        paper: String,
        first: String,
        second: String,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// The input data (corpus, scheme file, baseline file) is unusable.
    Input,
    /// The requested run cannot be carried out as configured.
    Config,
    /// A bug: an invariant the engine maintains itself was violated.
    Internal,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Malformed { .. }
            | Error::DuplicatePaper(_)
            | Error::DuplicateReference { .. }
            | Error::BeyondCensus { .. }
            | Error::UnknownPaper(_)
            | Error::InvalidInterval { .. }
            | Error::EmptyJournalYear { .. }
            | Error::EmptySet
            | Error::UnscoredPapers(_)
            | Error::EvaluationConflict { .. }
            | Error::Io(_) => ErrorKind::Input,
            Error::IncompleteWindow { .. } | Error::InvalidConfig(_) => ErrorKind::Config,
            Error::Internal(_) => ErrorKind::Internal,
        }
    }
}
