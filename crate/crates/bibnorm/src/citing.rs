//! Citing-side (source) normalization: the three SNCS variants.
//!
//! Every incoming citation is weighted by properties of the citing paper or
//! its journal-year: the citing paper's own linked-reference count, the mean
//! linked-reference count of its journal-year, or both combined with the
//! journal-year's share of papers that reference anything at all.  Reference
//! counts are always taken inside a window anchored at the citing paper's
//! publication year, with the same length as the citation window.

use std::collections::HashMap;

use serde::Serialize;

use crate::corpus::{Corpus, PaperRecord};
use crate::error::{Error, Result};
use crate::score::ScoreTable;
use crate::windows::{citation_interval, reference_interval, WindowSpec};

/// Per journal-year reference statistics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JournalYearRefStats {
    pub journal_id: String,
    pub year: i32,
    /// Mean linked references per paper inside the reference window.
    pub mean_linked_refs: f64,
    /// Share of papers with at least one linked reference in the window.
    pub referencing_share: f64,
    pub papers: usize,
}

/// How a citation from a paper without in-window linked references counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroRefCitations {
    /// Contribute nothing (equivalently: skip the citation).
    #[default]
    Ignore,
    /// Contribute a full unweighted citation.
    UnitWeight,
}

impl ZeroRefCitations {
    fn contribution(&self) -> f64 {
        match self {
            ZeroRefCitations::Ignore => 0.0,
            ZeroRefCitations::UnitWeight => 1.0,
        }
    }
}

fn in_window_linked_refs(paper: &PaperRecord, spec: WindowSpec) -> usize {
    paper.linked_reference_count(reference_interval(spec, paper.pub_year))
}

/// Reference statistics of the analyzed papers in one journal-year.
pub fn journal_year_ref_stats(
    corpus: &Corpus,
    journal_id: &str,
    year: i32,
    spec: WindowSpec,
) -> Result<JournalYearRefStats> {
    let counts: Vec<usize> = corpus
        .analyzed_in_year(year)
        .filter(|p| p.journal_id == journal_id)
        .map(|p| in_window_linked_refs(p, spec))
        .collect();
    if counts.is_empty() {
        return Err(Error::EmptyJournalYear {
            journal: journal_id.to_string(),
            year,
        });
    }
    let n = counts.len();
    let total: usize = counts.iter().sum();
    let with_refs = counts.iter().filter(|&&c| c > 0).count();
    Ok(JournalYearRefStats {
        journal_id: journal_id.to_string(),
        year,
        mean_linked_refs: total as f64 / n as f64,
        referencing_share: with_refs as f64 / n as f64,
        papers: n,
    })
}

/// Shared per-run caches: the citing paper's own reference count and its
/// journal-year statistics are needed once per distinct citer.
struct CitingRun<'c> {
    corpus: &'c Corpus,
    spec: WindowSpec,
    r_cache: HashMap<String, usize>,
    /// journal -> year -> (a, p) over the analyzed papers of that cell
    jy_stats: HashMap<String, HashMap<i32, (f64, f64)>>,
}

impl<'c> CitingRun<'c> {
    fn new(corpus: &'c Corpus, spec: WindowSpec) -> Self {
        let mut counts: HashMap<String, HashMap<i32, (usize, usize, usize)>> = HashMap::new();
        for paper in corpus.papers().filter(|p| corpus.is_analyzed(p)) {
            let r = in_window_linked_refs(paper, spec);
            let cell = counts
                .entry(paper.journal_id.clone())
                .or_default()
                .entry(paper.pub_year)
                .or_insert((0, 0, 0));
            cell.0 += r;
            cell.1 += usize::from(r > 0);
            cell.2 += 1;
        }
        let jy_stats = counts
            .into_iter()
            .map(|(journal, by_year)| {
                let stats = by_year
                    .into_iter()
                    .map(|(year, (total, with_refs, n))| {
                        (year, (total as f64 / n as f64, with_refs as f64 / n as f64))
                    })
                    .collect();
                (journal, stats)
            })
            .collect();
        CitingRun {
            corpus,
            spec,
            r_cache: HashMap::new(),
            jy_stats,
        }
    }

    fn citer(&self, citing_id: &str) -> &'c PaperRecord {
        self.corpus
            .paper(citing_id)
            .expect("citation edges only come from corpus papers")
    }

    fn linked_refs_of(&mut self, citing: &PaperRecord) -> usize {
        if let Some(&r) = self.r_cache.get(&citing.paper_id) {
            return r;
        }
        let r = in_window_linked_refs(citing, self.spec);
        self.r_cache.insert(citing.paper_id.clone(), r);
        r
    }

    /// `(a, p)` of the citing paper's journal-year; zeros when the
    /// journal-year has no analyzed papers.
    fn journal_year(&mut self, citing: &PaperRecord) -> (f64, f64) {
        self.jy_stats
            .get(&citing.journal_id)
            .and_then(|by_year| by_year.get(&citing.pub_year))
            .copied()
            .unwrap_or((0.0, 0.0))
    }
}

fn sncs_scores(
    corpus: &Corpus,
    spec: WindowSpec,
    pub_year: i32,
    indicator: &str,
    mut weight: impl FnMut(&mut CitingRun, &PaperRecord) -> f64,
) -> Result<ScoreTable> {
    // Fail on incomplete windows before scoring anything.
    let interval = citation_interval(spec, pub_year, corpus.census_year())?;
    let mut run = CitingRun::new(corpus, spec);
    let mut table = ScoreTable::new(indicator, pub_year, spec);
    for paper in corpus.analyzed_in_year(pub_year) {
        let mut total = 0.0;
        for citation in corpus.citations_of(&paper.paper_id) {
            if !interval.contains(citation.citing_year) {
                continue;
            }
            let citing = run.citer(&citation.citing_id);
            total += weight(&mut run, citing);
        }
        table.set_score(&paper.paper_id, total);
    }
    Ok(table)
}

/// Each citation weighted by 1 over the journal-year mean linked-reference
/// count of the citing paper; citations from journal-years with mean zero
/// contribute nothing.
pub fn sncs1_scores(corpus: &Corpus, spec: WindowSpec, pub_year: i32) -> Result<ScoreTable> {
    sncs_scores(corpus, spec, pub_year, "sncs1", |run, citing| {
        let (a, _) = run.journal_year(citing);
        if a == 0.0 {
            0.0
        } else {
            1.0 / a
        }
    })
}

/// Each citation weighted by 1 over the citing paper's own linked-reference
/// count.
pub fn sncs2_scores(
    corpus: &Corpus,
    spec: WindowSpec,
    pub_year: i32,
    zero_rule: ZeroRefCitations,
) -> Result<ScoreTable> {
    sncs_scores(corpus, spec, pub_year, "sncs2", |run, citing| {
        let r = run.linked_refs_of(citing);
        if r == 0 {
            zero_rule.contribution()
        } else {
            1.0 / r as f64
        }
    })
}

/// Each citation weighted by 1 over the product of the citing paper's own
/// linked-reference count and its journal-year share of referencing papers.
pub fn sncs3_scores(
    corpus: &Corpus,
    spec: WindowSpec,
    pub_year: i32,
    zero_rule: ZeroRefCitations,
) -> Result<ScoreTable> {
    sncs_scores(corpus, spec, pub_year, "sncs3", |run, citing| {
        let r = run.linked_refs_of(citing);
        let (_, p) = run.journal_year(citing);
        let denominator = p * r as f64;
        if denominator == 0.0 {
            zero_rule.contribution()
        } else {
            1.0 / denominator
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::IngestOptions;
    use crate::testutil::{linked, record};
    use approx::assert_relative_eq;

    const SPEC: WindowSpec = WindowSpec::Fixed(3);

    /// Assembles a corpus around one cited paper P published 2011
    /// (census 2016): citers reference P plus `r - 1` fillers.
    struct Citers {
        records: Vec<crate::corpus::PaperRecord>,
        fillers: usize,
    }

    impl Citers {
        fn new() -> Self {
            Citers {
                records: vec![record("P", 2011, "cited-journal", &[])],
                fillers: 0,
            }
        }

        /// A paper in `journal`/`year` with `r` in-window linked references,
        /// one of which cites P when `cites` is set.
        fn paper(mut self, id: &str, journal: &str, year: i32, r: usize, cites: bool) -> Self {
            let mut rec = record(id, year, journal, &[]);
            let mut remaining = r;
            if cites {
                rec.references.push(linked("P", 2011));
                remaining = remaining.saturating_sub(1);
            }
            for _ in 0..remaining {
                self.fillers += 1;
                rec.references
                    .push(linked(&format!("fl-{:04}", self.fillers), year - 1));
            }
            self.records.push(rec);
            self
        }

        fn build(mut self) -> Corpus {
            // fillers span the years citers need; publish each in the year
            // encoded at creation time via its reference entry
            let mut filler_years: Vec<(String, i32)> = Vec::new();
            for rec in &self.records {
                for r in &rec.references {
                    if let Some(t) = &r.target_id {
                        if t.starts_with("fl-") {
                            filler_years.push((t.clone(), r.ref_year));
                        }
                    }
                }
            }
            for (id, year) in filler_years {
                self.records.push(record(&id, year, "filler-journal", &[]));
            }
            Corpus::from_records(self.records, 2016, IngestOptions::default())
                .unwrap()
                .0
        }
    }

    #[test]
    fn journal_year_stats_mix_of_counts() {
        let corpus = Citers::new()
            .paper("C1", "J", 2012, 2, false)
            .paper("C2", "J", 2012, 0, false)
            .paper("C3", "J", 2012, 4, false)
            .build();
        let stats = journal_year_ref_stats(&corpus, "J", 2012, SPEC).unwrap();
        assert_relative_eq!(stats.mean_linked_refs, 2.0);
        assert_relative_eq!(stats.referencing_share, 2.0 / 3.0);
        assert_eq!(stats.papers, 3);
    }

    #[test]
    fn journal_year_stats_all_zero() {
        let corpus = Citers::new()
            .paper("C1", "J", 2012, 0, false)
            .paper("C2", "J", 2012, 0, false)
            .build();
        let stats = journal_year_ref_stats(&corpus, "J", 2012, SPEC).unwrap();
        assert_relative_eq!(stats.mean_linked_refs, 0.0);
        assert_relative_eq!(stats.referencing_share, 0.0);
    }

    #[test]
    fn journal_year_stats_singleton() {
        let corpus = Citers::new().paper("C1", "J", 2012, 5, false).build();
        let stats = journal_year_ref_stats(&corpus, "J", 2012, SPEC).unwrap();
        assert_relative_eq!(stats.mean_linked_refs, 5.0);
        assert_relative_eq!(stats.referencing_share, 1.0);
        assert_eq!(stats.papers, 1);
    }

    #[test]
    fn empty_journal_year_is_an_error() {
        let corpus = Citers::new().build();
        assert!(matches!(
            journal_year_ref_stats(&corpus, "nowhere", 2012, SPEC),
            Err(Error::EmptyJournalYear { .. })
        ));
    }

    #[test]
    fn sncs2_sums_reciprocal_reference_counts() {
        let corpus = Citers::new()
            .paper("C1", "J1", 2012, 4, true)
            .paper("C2", "J2", 2012, 5, true)
            .build();
        let table = sncs2_scores(&corpus, SPEC, 2011, ZeroRefCitations::Ignore).unwrap();
        assert_relative_eq!(table.score("P").unwrap(), 0.45);
    }

    #[test]
    fn sncs2_uncited_paper_scores_zero() {
        let corpus = Citers::new().build();
        let table = sncs2_scores(&corpus, SPEC, 2011, ZeroRefCitations::Ignore).unwrap();
        assert_relative_eq!(table.score("P").unwrap(), 0.0);
    }

    #[test]
    fn sncs2_single_reference_citer_contributes_one() {
        let corpus = Citers::new().paper("C1", "J1", 2012, 1, true).build();
        let table = sncs2_scores(&corpus, SPEC, 2011, ZeroRefCitations::Ignore).unwrap();
        assert_relative_eq!(table.score("P").unwrap(), 1.0);
    }

    #[test]
    fn sncs1_uses_journal_year_means() {
        // C1 alone in J1-2012 with r = 10 -> a = 10; C2 alone in J2 -> a = 20
        let corpus = Citers::new()
            .paper("C1", "J1", 2012, 10, true)
            .paper("C2", "J2", 2012, 20, true)
            .build();
        let table = sncs1_scores(&corpus, SPEC, 2011).unwrap();
        assert_relative_eq!(table.score("P").unwrap(), 0.15);
    }

    #[test]
    fn sncs1_unit_weight_when_mean_is_one() {
        let corpus = Citers::new().paper("C1", "J1", 2012, 1, true).build();
        let table = sncs1_scores(&corpus, SPEC, 2011).unwrap();
        assert_relative_eq!(table.score("P").unwrap(), 1.0);
    }

    #[test]
    fn sncs3_combines_share_and_reference_count() {
        // J-2012 has 5 papers, 4 with references -> p = 0.8; citer r = 5
        let corpus = Citers::new()
            .paper("C1", "J", 2012, 5, true)
            .paper("C2", "J", 2012, 3, false)
            .paper("C3", "J", 2012, 2, false)
            .paper("C4", "J", 2012, 1, false)
            .paper("C5", "J", 2012, 0, false)
            .build();
        let table = sncs3_scores(&corpus, SPEC, 2011, ZeroRefCitations::Ignore).unwrap();
        assert_relative_eq!(table.score("P").unwrap(), 0.25);
    }

    #[test]
    fn sncs3_with_full_share_matches_reciprocal_count() {
        let corpus = Citers::new().paper("C1", "J", 2012, 2, true).build();
        let table = sncs3_scores(&corpus, SPEC, 2011, ZeroRefCitations::Ignore).unwrap();
        assert_relative_eq!(table.score("P").unwrap(), 0.5);
    }

    #[test]
    fn citing_paper_always_has_its_own_citation_in_window() {
        // Window symmetry: a citation inside the cited paper's window is a
        // linked reference inside the citing paper's window, so r >= 1 for
        // every counted citation.
        for year in 2012..=2014 {
            let corpus = Citers::new().paper("C1", "J", year, 1, true).build();
            let table = sncs2_scores(&corpus, SPEC, 2011, ZeroRefCitations::Ignore).unwrap();
            assert_relative_eq!(table.score("P").unwrap(), 1.0);
        }
    }

    #[test]
    fn zero_denominator_citations_follow_the_configured_rule() {
        // A non-analyzed citing paper is absent from its own journal-year
        // population; when the analyzed papers of that journal-year have no
        // linked references, p = 0 and the citation's denominator vanishes.
        let mut review = record("X", 2012, "JR", &[]);
        review.doc_type = "review".into();
        review.references.push(linked("P", 2011));
        let records = vec![
            record("P", 2011, "cited-journal", &[]),
            review,
            record("Y", 2012, "JR", &[]), // analyzed, zero linked refs
        ];
        let options = IngestOptions {
            doc_type: Some("article".into()),
            restrict_citing: false,
        };
        let corpus = Corpus::from_records(records, 2016, options).unwrap().0;

        let ignore = sncs3_scores(&corpus, SPEC, 2011, ZeroRefCitations::Ignore).unwrap();
        assert_relative_eq!(ignore.score("P").unwrap(), 0.0);
        let unit = sncs3_scores(&corpus, SPEC, 2011, ZeroRefCitations::UnitWeight).unwrap();
        assert_relative_eq!(unit.score("P").unwrap(), 1.0);
        // the journal-year mean is zero too, so the citation adds nothing
        let s1 = sncs1_scores(&corpus, SPEC, 2011).unwrap();
        assert_relative_eq!(s1.score("P").unwrap(), 0.0);
        // the citer's own reference count is unaffected by the filter
        let s2 = sncs2_scores(&corpus, SPEC, 2011, ZeroRefCitations::Ignore).unwrap();
        assert_relative_eq!(s2.score("P").unwrap(), 1.0);
    }

    #[test]
    fn sncs3_equals_sncs2_when_every_share_is_one() {
        let corpus = Citers::new()
            .paper("C1", "J1", 2012, 3, true)
            .paper("C2", "J1", 2012, 5, true)
            .paper("C3", "J2", 2013, 2, true)
            .build();
        let s2 = sncs2_scores(&corpus, SPEC, 2011, ZeroRefCitations::Ignore).unwrap();
        let s3 = sncs3_scores(&corpus, SPEC, 2011, ZeroRefCitations::Ignore).unwrap();
        assert_eq!(s2.score("P"), s3.score("P"));
    }

    #[test]
    fn sncs1_equals_sncs2_when_journal_counts_are_uniform() {
        let corpus = Citers::new()
            .paper("C1", "J1", 2012, 4, true)
            .paper("C2", "J1", 2012, 4, true)
            .build();
        let s1 = sncs1_scores(&corpus, SPEC, 2011).unwrap();
        let s2 = sncs2_scores(&corpus, SPEC, 2011, ZeroRefCitations::Ignore).unwrap();
        assert_eq!(s1.score("P"), s2.score("P"));
    }
}
