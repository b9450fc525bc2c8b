//! Report serialization: delimited tables for reading, JSON for machines.
//!
//! Every report starts with a header block recording the tool version, a
//! hash of the run configuration, and a hash of the corpus, so any output
//! file can be traced back to exactly what produced it.  Delimited output
//! rounds for presentation; JSON keeps full precision.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::fairness::FairnessReport;
use crate::score::ScoreTable;

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::new_with_prefix(bytes).finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Provenance block carried by every report file.
#[derive(Debug, Clone, Serialize)]
pub struct ReportHeader {
    pub tool: String,
    pub version: String,
    pub config_hash: String,
    pub corpus_hash: String,
}

impl ReportHeader {
    pub fn new(
        tool: impl Into<String>,
        version: impl Into<String>,
        config_hash: impl Into<String>,
        corpus_hash: impl Into<String>,
    ) -> Self {
        ReportHeader {
            tool: tool.into(),
            version: version.into(),
            config_hash: config_hash.into(),
            corpus_hash: corpus_hash.into(),
        }
    }

    pub fn comment_lines(&self) -> Vec<String> {
        vec![
            format!("tool: {} {}", self.tool, self.version),
            format!("config_hash: {}", self.config_hash),
            format!("corpus_hash: {}", self.corpus_hash),
        ]
    }

    fn write_comments(&self, mut writer: impl Write) -> std::io::Result<()> {
        for line in self.comment_lines() {
            writeln!(writer, "# {line}")?;
        }
        Ok(())
    }
}

/// Envelope for the structured (JSON) form of any report.
#[derive(Debug, Clone, Serialize)]
pub struct Enveloped<'a, T: Serialize> {
    pub header: &'a ReportHeader,
    pub report: &'a T,
}

pub fn write_json<T: Serialize>(
    mut writer: impl Write,
    header: &ReportHeader,
    report: &T,
) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut writer, &Enveloped { header, report })?;
    writer.write_all(b"\n")
}

/// Delimited score table: `paper_id  indicator  value`, presentation-rounded
/// to four decimals.  Unscored papers follow as comment rows.
pub fn write_scores_tsv(
    mut writer: impl Write,
    header: &ReportHeader,
    table: &ScoreTable,
) -> std::io::Result<()> {
    header.write_comments(&mut writer)?;
    writeln!(writer, "# pub_year: {}", table.pub_year())?;
    writeln!(writer, "# window: {}", table.window())?;
    writeln!(writer, "paper_id\tindicator\tvalue")?;
    for (paper, value) in table.scores() {
        writeln!(writer, "{paper}\t{}\t{value:.4}", table.indicator())?;
    }
    for (paper, reason) in table.unscored() {
        writeln!(writer, "# unscored\t{paper}\t{reason}")?;
    }
    Ok(())
}

/// Per-year fairness table: one row per indicator and year, one column per
/// category, then the mean absolute deviation.
pub fn write_fairness_by_year_tsv(
    mut writer: impl Write,
    header: &ReportHeader,
    report: &FairnessReport,
) -> std::io::Result<()> {
    header.write_comments(&mut writer)?;
    writeln!(
        writer,
        "# expected percent per category: {:.2}",
        report.expected_percent
    )?;
    write!(writer, "pub_year\tindicator")?;
    for category in &report.categories {
        write!(writer, "\t{category}")?;
    }
    writeln!(writer, "\tmad")?;
    for cell in &report.cells {
        write!(writer, "{}\t{}", cell.pub_year, cell.indicator)?;
        for category in &report.categories {
            match cell.shares.get(category) {
                Some(share) => write!(writer, "\t{:.2}", share.percent)?,
                None => write!(writer, "\t-")?,
            }
        }
        writeln!(writer, "\t{:.2}", cell.mad)?;
    }
    Ok(())
}

/// Cross-year summary: indicators ranked by mean deviation, best first.
pub fn write_fairness_summary_tsv(
    mut writer: impl Write,
    header: &ReportHeader,
    report: &FairnessReport,
) -> std::io::Result<()> {
    header.write_comments(&mut writer)?;
    writeln!(writer, "indicator\tmean_mad")?;
    for entry in &report.ranking {
        writeln!(writer, "{}\t{:.2}", entry.indicator, entry.mean_mad)?;
    }
    Ok(())
}

/// Generic one-row-per-group delimited table.
pub fn write_rows_tsv(
    mut writer: impl Write,
    header: &ReportHeader,
    columns: &[&str],
    rows: &[Vec<String>],
) -> std::io::Result<()> {
    header.write_comments(&mut writer)?;
    writeln!(writer, "{}", columns.join("\t"))?;
    for row in rows {
        writeln!(writer, "{}", row.join("\t"))?;
    }
    Ok(())
}

/// Canonical hash of any serializable run configuration.
pub fn config_hash<T: Serialize>(config: &T) -> String {
    let canonical = serde_json::to_vec(config).expect("config serializes");
    sha256_hex(&canonical)
}

/// Format a float for delimited presentation output.
pub fn fmt_f64(value: f64, decimals: usize) -> String {
    format!("{value:.decimals$}")
}

/// Column assembly for descriptive summaries.
pub fn summary_rows(groups: &[crate::descriptives::DistributionSummary]) -> Vec<Vec<String>> {
    groups
        .iter()
        .map(|s| {
            vec![
                s.group.clone(),
                fmt_f64(s.mean, 4),
                fmt_f64(s.median, 4),
                fmt_f64(s.q1, 4),
                fmt_f64(s.q3, 4),
                s.n.to_string(),
            ]
        })
        .collect()
}

/// Column assembly for trend series (group, year, mean).
pub fn trend_rows(series: &BTreeMap<String, BTreeMap<i32, f64>>) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for (group, by_year) in series {
        for (year, mean) in by_year {
            rows.push(vec![group.clone(), year.to_string(), fmt_f64(*mean, 4)]);
        }
    }
    rows
}
