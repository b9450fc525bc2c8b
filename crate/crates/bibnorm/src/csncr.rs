//! Citation scores normalized by cited references.
//!
//! A field's citation potential is the mean number of linked references per
//! paper (inside the reference window), computed once per field and
//! publication year.  Each paper's score is its windowed citation count
//! divided by that potential.  Because potentials depend only on reference
//! lists, they are final as soon as the publication year is fully indexed
//! and can be published as a baseline file and reused verbatim.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use serde::Serialize;

use crate::classify::FieldScheme;
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::score::ScoreTable;
use crate::windows::{citation_interval, reference_interval, windowed_citation_count, WindowSpec};

pub const REASON_NOT_IN_SCHEME: &str = "not in scheme";
pub const REASON_ZERO_POTENTIAL: &str = "zero citation potential";
pub const REASON_NO_BASELINE: &str = "no baseline potential";

/// Citation potential of one field in one publication year.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CitationPotential {
    pub field: String,
    pub pub_year: i32,
    /// Mean linked references per paper inside the reference window.
    pub mean_linked_refs: f64,
    pub papers: usize,
}

fn check_scheme(scheme: &FieldScheme, pub_year: i32) -> Result<()> {
    if scheme.pub_year() != pub_year {
        return Err(Error::InvalidConfig(format!(
            "scheme built for {} used with publication year {}",
            scheme.pub_year(),
            pub_year
        )));
    }
    if !scheme.is_single_assignment() {
        return Err(Error::InvalidConfig(
            "citation potentials need a single-assignment scheme".into(),
        ));
    }
    Ok(())
}

/// Mean in-window linked-reference count per field.
pub fn citation_potentials(
    corpus: &Corpus,
    scheme: &FieldScheme,
    spec: WindowSpec,
    pub_year: i32,
) -> Result<BTreeMap<String, CitationPotential>> {
    check_scheme(scheme, pub_year)?;
    let window = reference_interval(spec, pub_year);
    let mut potentials = BTreeMap::new();
    for (field, papers) in scheme.fields() {
        let mut total = 0usize;
        for paper_id in papers {
            total += corpus.linked_reference_count(paper_id, window)?;
        }
        potentials.insert(
            field.clone(),
            CitationPotential {
                field: field.clone(),
                pub_year,
                mean_linked_refs: total as f64 / papers.len() as f64,
                papers: papers.len(),
            },
        );
    }
    Ok(potentials)
}

/// Windowed citation count over the field's citation potential, per paper.
pub fn csncr_scores(
    corpus: &Corpus,
    scheme: &FieldScheme,
    spec: WindowSpec,
    pub_year: i32,
) -> Result<ScoreTable> {
    let potentials = citation_potentials(corpus, scheme, spec, pub_year)?;
    csncr_scores_with_potentials(corpus, scheme, &potentials, spec, pub_year)
}

/// Like [`csncr_scores`] but with externally supplied potentials, e.g. from
/// a previously published baseline file.
pub fn csncr_scores_with_potentials(
    corpus: &Corpus,
    scheme: &FieldScheme,
    potentials: &BTreeMap<String, CitationPotential>,
    spec: WindowSpec,
    pub_year: i32,
) -> Result<ScoreTable> {
    check_scheme(scheme, pub_year)?;
    // surface incomplete windows before scoring
    citation_interval(spec, pub_year, corpus.census_year())?;
    let mut table = ScoreTable::new("csncr", pub_year, spec);
    for paper in corpus.analyzed_in_year(pub_year) {
        let Some(fields) = scheme.fields_of(&paper.paper_id) else {
            table.set_unscored(&paper.paper_id, REASON_NOT_IN_SCHEME);
            continue;
        };
        let field = fields.iter().next().expect("single assignment");
        let Some(potential) = potentials.get(field) else {
            table.set_unscored(&paper.paper_id, REASON_NO_BASELINE);
            continue;
        };
        if potential.mean_linked_refs == 0.0 {
            table.set_unscored(&paper.paper_id, REASON_ZERO_POTENTIAL);
            continue;
        }
        let c = windowed_citation_count(corpus, &paper.paper_id, spec)? as f64;
        table.set_score(&paper.paper_id, c / potential.mean_linked_refs);
    }
    Ok(table)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AggregateMode {
    Mean,
    Sum,
}

/// Mean or sum of an indicator over a paper set.
///
/// Every paper in the set must carry a score; duplicates collapse.  The sum
/// accumulates in id order so repeated runs agree bit for bit.
pub fn aggregate_scores<I, S>(table: &ScoreTable, papers: I, mode: AggregateMode) -> Result<f64>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let ids: BTreeSet<String> = papers.into_iter().map(|s| s.as_ref().to_string()).collect();
    if ids.is_empty() {
        return Err(Error::EmptySet);
    }
    let missing: Vec<String> = ids
        .iter()
        .filter(|id| table.score(id).is_none())
        .cloned()
        .collect();
    if !missing.is_empty() {
        return Err(Error::UnscoredPapers(missing));
    }
    let sum: f64 = ids.iter().map(|id| table.score(id).expect("checked")).sum();
    Ok(match mode {
        AggregateMode::Sum => sum,
        AggregateMode::Mean => sum / ids.len() as f64,
    })
}

/// One row of a published citation-potential baseline.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BaselineRow {
    pub field_id: String,
    pub pub_year: i32,
    pub window: WindowSpec,
    pub mean_linked_refs: f64,
    pub papers: usize,
}

pub fn potentials_to_rows(
    potentials: &BTreeMap<String, CitationPotential>,
    window: WindowSpec,
) -> Vec<BaselineRow> {
    potentials
        .values()
        .map(|p| BaselineRow {
            field_id: p.field.clone(),
            pub_year: p.pub_year,
            window,
            mean_linked_refs: p.mean_linked_refs,
            papers: p.papers,
        })
        .collect()
}

/// Select the rows matching `(pub_year, window)` as usable potentials.
pub fn rows_to_potentials(
    rows: &[BaselineRow],
    pub_year: i32,
    window: WindowSpec,
) -> BTreeMap<String, CitationPotential> {
    rows.iter()
        .filter(|r| r.pub_year == pub_year && r.window == window)
        .map(|r| {
            (
                r.field_id.clone(),
                CitationPotential {
                    field: r.field_id.clone(),
                    pub_year: r.pub_year,
                    mean_linked_refs: r.mean_linked_refs,
                    papers: r.papers,
                },
            )
        })
        .collect()
}

const BASELINE_COLUMNS: &str = "field_id\tpub_year\twindow\tR\tN";

/// Write baseline rows as delimited text.  Comment lines (starting with
/// `#`) may precede the column header; values keep full precision.
pub fn write_baselines(
    mut writer: impl Write,
    rows: &[BaselineRow],
    comments: &[String],
) -> std::io::Result<()> {
    for line in comments {
        writeln!(writer, "# {line}")?;
    }
    writeln!(writer, "{BASELINE_COLUMNS}")?;
    for row in rows {
        writeln!(
            writer,
            "{}\t{}\t{}\t{}\t{}",
            row.field_id, row.pub_year, row.window, row.mean_linked_refs, row.papers
        )?;
    }
    Ok(())
}

pub fn read_baselines(reader: impl BufRead) -> Result<Vec<BaselineRow>> {
    let mut rows = Vec::new();
    let mut saw_header = false;
    for (number, line) in reader.lines().enumerate() {
        let line = line?;
        let malformed = |message: &str| Error::Malformed {
            line: number + 1,
            message: message.to_string(),
        };
        let trimmed = line.trim_end();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if !saw_header {
            if trimmed != BASELINE_COLUMNS {
                return Err(malformed(&format!("expected header {BASELINE_COLUMNS:?}")));
            }
            saw_header = true;
            continue;
        }
        let parts: Vec<&str> = trimmed.split('\t').collect();
        if parts.len() != 5 {
            return Err(malformed("expected 5 tab-separated columns"));
        }
        rows.push(BaselineRow {
            field_id: parts[0].to_string(),
            pub_year: parts[1].parse().map_err(|_| malformed("bad pub_year"))?,
            window: parts[2].parse()?,
            mean_linked_refs: parts[3].parse().map_err(|_| malformed("bad R"))?,
            papers: parts[4].parse().map_err(|_| malformed("bad N"))?,
        });
    }
    Ok(rows)
}
