//! The supported indicator set and a single computation entry point.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::cited::{hazen_percentiles, ncs_journal_scores, ncs_scores};
use crate::citing::{sncs1_scores, sncs2_scores, sncs3_scores, ZeroRefCitations};
use crate::classify::{build_base_scheme, build_overlapping_scheme};
use crate::corpus::Corpus;
use crate::csncr::csncr_scores;
use crate::error::{Error, Result};
use crate::score::ScoreTable;
use crate::windows::{windowed_citation_count, WindowSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Indicator {
    Csncr,
    Ncs,
    NcsJournal,
    Percentiles,
    Sncs1,
    Sncs2,
    Sncs3,
    /// Bare citation counts, publication year through census year.
    CitesFull,
    /// Bare citation counts in a three-year window after publication.
    CitesFixed3,
}

pub const ALL_INDICATORS: [Indicator; 9] = [
    Indicator::Csncr,
    Indicator::Ncs,
    Indicator::NcsJournal,
    Indicator::Percentiles,
    Indicator::Sncs1,
    Indicator::Sncs2,
    Indicator::Sncs3,
    Indicator::CitesFull,
    Indicator::CitesFixed3,
];

impl Indicator {
    pub fn name(&self) -> &'static str {
        match self {
            Indicator::Csncr => "csncr",
            Indicator::Ncs => "ncs",
            Indicator::NcsJournal => "ncs_j",
            Indicator::Percentiles => "percentiles",
            Indicator::Sncs1 => "sncs1",
            Indicator::Sncs2 => "sncs2",
            Indicator::Sncs3 => "sncs3",
            Indicator::CitesFull => "cites_full",
            Indicator::CitesFixed3 => "cites_fixed3",
        }
    }
}

impl fmt::Display for Indicator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Indicator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ALL_INDICATORS
            .iter()
            .find(|i| i.name() == s)
            .copied()
            .ok_or_else(|| {
                let known: Vec<&str> = ALL_INDICATORS.iter().map(|i| i.name()).collect();
                Error::InvalidConfig(format!(
                    "unknown indicator {s:?} (supported: {})",
                    known.join(", ")
                ))
            })
    }
}

/// Shared parameters of an indicator run.
#[derive(Debug, Clone, Serialize)]
pub struct RunSettings {
    /// Window applied to every indicator without an override; the two bare
    /// citation-count indicators carry their own fixed semantics.
    pub window: WindowSpec,
    pub window_overrides: BTreeMap<Indicator, WindowSpec>,
    /// Minimum papers per overlapping category combination.
    pub min_size: usize,
    pub zero_ref_rule: ZeroRefCitations,
}

impl Default for RunSettings {
    fn default() -> Self {
        RunSettings {
            window: WindowSpec::Fixed(3),
            window_overrides: BTreeMap::new(),
            min_size: 10,
            zero_ref_rule: ZeroRefCitations::default(),
        }
    }
}

impl RunSettings {
    pub fn window_for(&self, indicator: Indicator) -> WindowSpec {
        match indicator {
            Indicator::CitesFull => WindowSpec::Full,
            Indicator::CitesFixed3 => WindowSpec::Fixed(3),
            _ => self
                .window_overrides
                .get(&indicator)
                .copied()
                .unwrap_or(self.window),
        }
    }
}

/// Bare windowed citation counts as a score table.
pub fn citation_count_scores(
    corpus: &Corpus,
    spec: WindowSpec,
    pub_year: i32,
    indicator: &str,
) -> Result<ScoreTable> {
    crate::windows::citation_interval(spec, pub_year, corpus.census_year())?;
    let mut table = ScoreTable::new(indicator, pub_year, spec);
    for paper in corpus.analyzed_in_year(pub_year) {
        let count = windowed_citation_count(corpus, &paper.paper_id, spec)?;
        table.set_score(&paper.paper_id, count as f64);
    }
    Ok(table)
}

/// Compute one indicator for one publication year.
pub fn compute_indicator(
    corpus: &Corpus,
    indicator: Indicator,
    pub_year: i32,
    settings: &RunSettings,
) -> Result<ScoreTable> {
    let window = settings.window_for(indicator);
    match indicator {
        Indicator::Csncr => {
            let (scheme, _) = build_overlapping_scheme(corpus, pub_year, settings.min_size)?;
            csncr_scores(corpus, &scheme, window, pub_year)
        }
        Indicator::Ncs => {
            let (scheme, _) = build_base_scheme(corpus, pub_year);
            ncs_scores(corpus, &scheme, window, pub_year)
        }
        Indicator::NcsJournal => ncs_journal_scores(corpus, window, pub_year),
        Indicator::Percentiles => {
            let (scheme, _) = build_base_scheme(corpus, pub_year);
            hazen_percentiles(corpus, &scheme, window, pub_year)
        }
        Indicator::Sncs1 => sncs1_scores(corpus, window, pub_year),
        Indicator::Sncs2 => sncs2_scores(corpus, window, pub_year, settings.zero_ref_rule),
        Indicator::Sncs3 => sncs3_scores(corpus, window, pub_year, settings.zero_ref_rule),
        Indicator::CitesFull | Indicator::CitesFixed3 => {
            citation_count_scores(corpus, window, pub_year, indicator.name())
        }
    }
}
