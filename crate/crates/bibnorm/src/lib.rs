//! Citation indicator engine over publication corpora.
//!
//! The crate ingests a line-oriented corpus of publication records, resolves
//! cited references into a citation graph, and computes field-normalized
//! citation indicators on both the cited side (reference-based scores, mean
//! normalized citation scores, percentiles) and the citing side (the SNCS
//! family), plus two bare citation-count baselines.  A fairness analysis
//! checks how evenly each indicator spreads top-decile papers over an
//! independent category scheme, and a seeded synthetic generator provides
//! corpora with controlled per-field referencing behavior for exactly those
//! checks.
//!
//! Everything downstream of ingestion is a pure function over an immutable
//! [`corpus::Corpus`]; identical inputs give identical outputs, including
//! serialized reports.

pub mod cited;
pub mod citing;
pub mod classify;
pub mod corpus;
pub mod csncr;
pub mod descriptives;
pub mod error;
pub mod fairness;
pub mod indicators;
pub mod report;
pub mod score;
pub mod synthgen;
pub mod windows;

#[cfg(test)]
pub(crate) mod testutil;

pub use corpus::{Corpus, IngestOptions, IngestSummary, PaperRecord, ReferenceLink};
pub use error::{Error, ErrorKind, Result};
pub use indicators::{compute_indicator, Indicator, RunSettings, ALL_INDICATORS};
pub use score::ScoreTable;
pub use windows::{WindowSpec, YearInterval};
