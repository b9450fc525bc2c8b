//! Cited-side normalization: field-mean citation scores, the journal
//! variant, and Hazen percentiles.

use std::collections::BTreeMap;
use std::collections::HashMap;

use serde::Serialize;

use crate::classify::{build_journal_scheme, FieldScheme};
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::score::ScoreTable;
use crate::windows::{citation_interval, windowed_citation_count, WindowSpec};

pub const REASON_NOT_IN_SCHEME: &str = "not in scheme";
pub const REASON_ZERO_FIELD_MEAN: &str = "zero field mean";
pub const REASON_ZERO_JOURNAL_MEAN: &str = "zero journal mean";

/// Mean windowed citation count of one field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldMeanCitations {
    pub field: String,
    /// Arithmetic mean of windowed citation counts over the field's papers.
    pub mean_citations: f64,
    pub papers: usize,
}

fn check_scheme_year(scheme: &FieldScheme, pub_year: i32) -> Result<()> {
    if scheme.pub_year() != pub_year {
        return Err(Error::InvalidConfig(format!(
            "scheme built for {} used with publication year {}",
            scheme.pub_year(),
            pub_year
        )));
    }
    Ok(())
}

/// Incomplete windows fail the whole run up front, never one paper at a
/// time.
fn check_window(corpus: &Corpus, spec: WindowSpec, pub_year: i32) -> Result<()> {
    citation_interval(spec, pub_year, corpus.census_year()).map(|_| ())
}

/// Windowed citation counts for every paper covered by the scheme.
fn scheme_citation_counts(
    corpus: &Corpus,
    scheme: &FieldScheme,
    spec: WindowSpec,
) -> Result<HashMap<String, usize>> {
    let mut counts = HashMap::with_capacity(scheme.paper_count());
    for paper_id in scheme.assignment().keys() {
        counts.insert(
            paper_id.clone(),
            windowed_citation_count(corpus, paper_id, spec)?,
        );
    }
    Ok(counts)
}

/// Mean windowed citation count per field over the scheme's papers.
pub fn field_mean_citations(
    corpus: &Corpus,
    scheme: &FieldScheme,
    spec: WindowSpec,
    pub_year: i32,
) -> Result<BTreeMap<String, FieldMeanCitations>> {
    check_scheme_year(scheme, pub_year)?;
    check_window(corpus, spec, pub_year)?;
    let counts = scheme_citation_counts(corpus, scheme, spec)?;
    let mut means = BTreeMap::new();
    for (field, papers) in scheme.fields() {
        let total: usize = papers.iter().map(|p| counts[p]).sum();
        means.insert(
            field.clone(),
            FieldMeanCitations {
                field: field.clone(),
                mean_citations: total as f64 / papers.len() as f64,
                papers: papers.len(),
            },
        );
    }
    Ok(means)
}

/// Normalized citation scores: each paper's windowed citation count divided
/// by its field mean; papers in several fields get the average of their
/// per-field scores.  Papers touching a field with mean zero are unscored.
pub fn ncs_scores(
    corpus: &Corpus,
    scheme: &FieldScheme,
    spec: WindowSpec,
    pub_year: i32,
) -> Result<ScoreTable> {
    ncs_scores_named(
        corpus,
        scheme,
        spec,
        pub_year,
        "ncs",
        REASON_ZERO_FIELD_MEAN,
    )
}

fn ncs_scores_named(
    corpus: &Corpus,
    scheme: &FieldScheme,
    spec: WindowSpec,
    pub_year: i32,
    indicator: &str,
    zero_reason: &str,
) -> Result<ScoreTable> {
    check_scheme_year(scheme, pub_year)?;
    check_window(corpus, spec, pub_year)?;
    let means = field_mean_citations(corpus, scheme, spec, pub_year)?;
    let counts = scheme_citation_counts(corpus, scheme, spec)?;
    let mut table = ScoreTable::new(indicator, pub_year, spec);
    for paper in corpus.analyzed_in_year(pub_year) {
        let Some(fields) = scheme.fields_of(&paper.paper_id) else {
            table.set_unscored(&paper.paper_id, REASON_NOT_IN_SCHEME);
            continue;
        };
        if fields.iter().any(|f| means[f].mean_citations == 0.0) {
            table.set_unscored(&paper.paper_id, zero_reason);
            continue;
        }
        let c = counts[&paper.paper_id] as f64;
        let sum: f64 = fields.iter().map(|f| c / means[f].mean_citations).sum();
        table.set_score(&paper.paper_id, sum / fields.len() as f64);
    }
    Ok(table)
}

/// NCS variant normalized against the paper's own journal-year mean.
pub fn ncs_journal_scores(corpus: &Corpus, spec: WindowSpec, pub_year: i32) -> Result<ScoreTable> {
    let scheme = build_journal_scheme(corpus, pub_year);
    ncs_scores_named(
        corpus,
        &scheme,
        spec,
        pub_year,
        "ncs_j",
        REASON_ZERO_JOURNAL_MEAN,
    )
}

/// Hazen percentiles of windowed citation counts within each field.
///
/// Papers are ranked ascending (rank 1 = fewest citations), tied counts get
/// the mean of the ranks they occupy, and the percentile is
/// `(rank - 0.5) / n * 100`.  Multi-field papers get the mean of their
/// per-field percentiles.
pub fn hazen_percentiles(
    corpus: &Corpus,
    scheme: &FieldScheme,
    spec: WindowSpec,
    pub_year: i32,
) -> Result<ScoreTable> {
    check_scheme_year(scheme, pub_year)?;
    check_window(corpus, spec, pub_year)?;
    let counts = scheme_citation_counts(corpus, scheme, spec)?;
    let mut per_field: HashMap<&str, HashMap<&str, f64>> = HashMap::new();
    for (field, papers) in scheme.fields() {
        let mut items: Vec<(&str, usize)> =
            papers.iter().map(|p| (p.as_str(), counts[p])).collect();
        items.sort_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(b.0)));
        let n = items.len() as f64;
        let mut percentiles = HashMap::with_capacity(items.len());
        let mut i = 0;
        while i < items.len() {
            let mut j = i;
            while j < items.len() && items[j].1 == items[i].1 {
                j += 1;
            }
            // ranks i+1 ..= j share the mid-rank
            let mid_rank = (i + 1 + j) as f64 / 2.0;
            let percentile = (mid_rank - 0.5) / n * 100.0;
            for item in &items[i..j] {
                percentiles.insert(item.0, percentile);
            }
            i = j;
        }
        per_field.insert(field.as_str(), percentiles);
    }

    let mut table = ScoreTable::new("percentiles", pub_year, spec);
    for paper in corpus.analyzed_in_year(pub_year) {
        let Some(fields) = scheme.fields_of(&paper.paper_id) else {
            table.set_unscored(&paper.paper_id, REASON_NOT_IN_SCHEME);
            continue;
        };
        let sum: f64 = fields
            .iter()
            .map(|f| per_field[f.as_str()][paper.paper_id.as_str()])
            .sum();
        table.set_score(&paper.paper_id, sum / fields.len() as f64);
    }
    Ok(table)
}
