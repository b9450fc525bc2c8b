//! Corpus data model, ingestion, and citation-graph resolution.
//!
//! The input format is line-oriented: one JSON record per line with the
//! fields `paper_id`, `pub_year`, `journal_id`, `doc_type`, `categories`
//! (list of tokens) and `references` (list of `{target_id?, ref_year}`
//! objects).  Those field names are normative; unknown fields are rejected.
//!
//! References whose `target_id` resolves to a record in the corpus become
//! citation edges ("linked" references).  References that do not resolve are
//! demoted: the target is cleared, the reference year is kept, and the
//! demotion is counted in the ingestion summary.  Indicator math only ever
//! sees linked references; the kept years feed the descriptive statistics.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::windows::YearInterval;

/// One cited reference: the year of the referenced work, plus the target
/// paper id when the reference resolves inside the corpus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceLink {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_id: Option<String>,
    pub ref_year: i32,
}

impl ReferenceLink {
    pub fn is_linked(&self) -> bool {
        self.target_id.is_some()
    }
}

/// One publication record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PaperRecord {
    pub paper_id: String,
    pub pub_year: i32,
    pub journal_id: String,
    pub doc_type: String,
    #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
    pub categories: BTreeSet<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub references: Vec<ReferenceLink>,
}

impl PaperRecord {
    /// Linked references, optionally restricted to a reference window.
    pub fn linked_reference_count(&self, window: Option<YearInterval>) -> usize {
        self.references
            .iter()
            .filter(|r| r.is_linked() && window.is_none_or(|w| w.contains(r.ref_year)))
            .count()
    }
}

/// One incoming citation edge, derived from a resolved reference link.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Citation {
    pub citing_id: String,
    pub citing_year: i32,
}

/// Ingestion settings.
///
/// `doc_type` selects the analyzed document type: schemes, indicator scores,
/// and descriptive populations only cover matching papers, while papers of
/// other types stay in the corpus and still contribute citations.  Setting
/// `restrict_citing` drops non-matching papers entirely, so their references
/// are demoted and they no longer cite anything.
#[derive(Debug, Clone, Default)]
pub struct IngestOptions {
    pub doc_type: Option<String>,
    pub restrict_citing: bool,
}

/// Counters reported after ingestion.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IngestSummary {
    pub papers_read: usize,
    pub papers_kept: usize,
    pub papers_dropped: usize,
    pub analyzed_papers: usize,
    pub links_resolved: usize,
    pub links_demoted: usize,
    pub ref_years_corrected: usize,
    pub census_year: i32,
}

/// A validated publication corpus with its resolved citation graph.
///
/// Immutable after construction; every downstream module holds it by shared
/// reference.
#[derive(Debug, Clone)]
pub struct Corpus {
    papers: BTreeMap<String, PaperRecord>,
    citations: BTreeMap<String, Vec<Citation>>,
    census_year: i32,
    analyzed_doc_type: Option<String>,
}

fn valid_token(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace())
}

impl Corpus {
    /// Validate records, resolve reference links, and build the citation
    /// graph.
    pub fn from_records(
        records: Vec<PaperRecord>,
        census_year: i32,
        options: IngestOptions,
    ) -> Result<(Corpus, IngestSummary)> {
        let mut summary = IngestSummary {
            census_year,
            ..Default::default()
        };
        let mut papers: BTreeMap<String, PaperRecord> = BTreeMap::new();

        for record in records {
            summary.papers_read += 1;
            if !valid_token(&record.paper_id) {
                return Err(Error::InvalidConfig(format!(
                    "paper_id {:?} is not a valid token",
                    record.paper_id
                )));
            }
            if !valid_token(&record.journal_id) {
                return Err(Error::InvalidConfig(format!(
                    "journal_id {:?} of paper {} is not a valid token",
                    record.journal_id, record.paper_id
                )));
            }
            if record.pub_year > census_year {
                return Err(Error::BeyondCensus {
                    paper: record.paper_id,
                    pub_year: record.pub_year,
                    census_year,
                });
            }
            if options.restrict_citing
                && options
                    .doc_type
                    .as_deref()
                    .is_some_and(|dt| dt != record.doc_type)
            {
                summary.papers_dropped += 1;
                continue;
            }
            let mut seen_targets: BTreeSet<&str> = BTreeSet::new();
            for reference in &record.references {
                if let Some(target) = reference.target_id.as_deref() {
                    if !seen_targets.insert(target) {
                        return Err(Error::DuplicateReference {
                            paper: record.paper_id.clone(),
                            target: target.to_string(),
                        });
                    }
                }
            }
            if papers.contains_key(&record.paper_id) {
                return Err(Error::DuplicatePaper(record.paper_id));
            }
            papers.insert(record.paper_id.clone(), record);
        }
        summary.papers_kept = papers.len();

        // Resolution pass: demote dangling targets, canonicalize resolved
        // reference years to the target's publication year, build edges.
        let mut resolved_years: BTreeMap<&str, i32> = BTreeMap::new();
        for (id, record) in &papers {
            resolved_years.insert(id, record.pub_year);
        }
        let mut edits: Vec<(String, usize, Option<i32>)> = Vec::new();
        for (id, record) in &papers {
            for (idx, reference) in record.references.iter().enumerate() {
                if let Some(target) = reference.target_id.as_deref() {
                    match resolved_years.get(target) {
                        Some(&year) => {
                            summary.links_resolved += 1;
                            if year != reference.ref_year {
                                summary.ref_years_corrected += 1;
                                edits.push((id.clone(), idx, Some(year)));
                            }
                        }
                        None => {
                            summary.links_demoted += 1;
                            edits.push((id.clone(), idx, None));
                        }
                    }
                }
            }
        }
        drop(resolved_years);
        for (id, idx, new_year) in edits {
            let reference = &mut papers.get_mut(&id).expect("edited paper exists").references[idx];
            match new_year {
                Some(year) => reference.ref_year = year,
                None => reference.target_id = None,
            }
        }

        let mut citations: BTreeMap<String, Vec<Citation>> = BTreeMap::new();
        for (id, record) in &papers {
            for reference in &record.references {
                if let Some(target) = reference.target_id.clone() {
                    citations.entry(target).or_default().push(Citation {
                        citing_id: id.clone(),
                        citing_year: record.pub_year,
                    });
                }
            }
        }

        let corpus = Corpus {
            papers,
            citations,
            census_year,
            analyzed_doc_type: options.doc_type,
        };
        summary.analyzed_papers = corpus
            .papers
            .values()
            .filter(|p| corpus.is_analyzed(p))
            .count();
        Ok((corpus, summary))
    }

    /// Ingest the line-oriented corpus format.
    pub fn read_jsonl(
        reader: impl BufRead,
        census_year: i32,
        options: IngestOptions,
    ) -> Result<(Corpus, IngestSummary)> {
        let mut records = Vec::new();
        for (number, line) in reader.lines().enumerate() {
            let line = line?;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            let record: PaperRecord =
                serde_json::from_str(trimmed).map_err(|e| Error::Malformed {
                    line: number + 1,
                    message: e.to_string(),
                })?;
            records.push(record);
        }
        Corpus::from_records(records, census_year, options)
    }

    /// Serialize in the ingestion format; re-ingesting the output yields an
    /// identical corpus.
    pub fn write_jsonl(&self, mut writer: impl Write) -> std::io::Result<()> {
        for record in self.papers.values() {
            serde_json::to_writer(&mut writer, record)?;
            writer.write_all(b"\n")?;
        }
        Ok(())
    }

    /// Hex SHA-256 over the census year and the canonical serialization.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(format!("census_year={}\n", self.census_year).as_bytes());
        let mut bytes = Vec::new();
        self.write_jsonl(&mut bytes).expect("in-memory write");
        hasher.update(&bytes);
        let digest = hasher.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn census_year(&self) -> i32 {
        self.census_year
    }

    pub fn analyzed_doc_type(&self) -> Option<&str> {
        self.analyzed_doc_type.as_deref()
    }

    pub fn len(&self) -> usize {
        self.papers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.papers.is_empty()
    }

    pub fn paper(&self, id: &str) -> Option<&PaperRecord> {
        self.papers.get(id)
    }

    pub fn papers(&self) -> impl Iterator<Item = &PaperRecord> {
        self.papers.values()
    }

    /// Whether a paper belongs to the analyzed document type.
    pub fn is_analyzed(&self, paper: &PaperRecord) -> bool {
        self.analyzed_doc_type
            .as_deref()
            .is_none_or(|dt| dt == paper.doc_type)
    }

    /// Analyzed papers published in `year`, in id order.
    pub fn analyzed_in_year(&self, year: i32) -> impl Iterator<Item = &PaperRecord> {
        self.papers
            .values()
            .filter(move |p| p.pub_year == year && self.is_analyzed(p))
    }

    /// Incoming citation edges of a paper (empty when uncited or unknown).
    pub fn citations_of(&self, id: &str) -> &[Citation] {
        self.citations.get(id).map_or(&[], |v| v.as_slice())
    }

    pub fn total_citation_edges(&self) -> usize {
        self.citations.values().map(Vec::len).sum()
    }

    /// Count of resolved references of one paper inside an optional window.
    pub fn linked_reference_count(
        &self,
        paper_id: &str,
        window: Option<YearInterval>,
    ) -> Result<usize> {
        let paper = self
            .paper(paper_id)
            .ok_or_else(|| Error::UnknownPaper(paper_id.to_string()))?;
        Ok(paper.linked_reference_count(window))
    }

    pub fn min_pub_year(&self) -> Option<i32> {
        self.papers.values().map(|p| p.pub_year).min()
    }

    pub fn max_pub_year(&self) -> Option<i32> {
        self.papers.values().map(|p| p.pub_year).max()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, year: i32, refs: Vec<ReferenceLink>) -> PaperRecord {
        PaperRecord {
            paper_id: id.into(),
            pub_year: year,
            journal_id: "j1".into(),
            doc_type: "article".into(),
            categories: BTreeSet::new(),
            references: refs,
        }
    }

    fn linked(target: &str, year: i32) -> ReferenceLink {
        ReferenceLink {
            target_id: Some(target.into()),
            ref_year: year,
        }
    }

    fn unlinked(year: i32) -> ReferenceLink {
        ReferenceLink {
            target_id: None,
            ref_year: year,
        }
    }

    #[test]
    fn empty_input_yields_empty_corpus() {
        let (corpus, summary) =
            Corpus::read_jsonl(&b""[..], 2014, IngestOptions::default()).unwrap();
        assert!(corpus.is_empty());
        assert_eq!(summary.papers_read, 0);
        assert_eq!(summary.links_resolved, 0);
    }

    #[test]
    fn minimal_citation_edge() {
        let records = vec![
            rec("A", 2010, vec![]),
            rec("B", 2011, vec![linked("A", 2010)]),
        ];
        let (corpus, summary) =
            Corpus::from_records(records, 2014, IngestOptions::default()).unwrap();
        assert_eq!(summary.links_resolved, 1);
        assert_eq!(summary.links_demoted, 0);
        let edges = corpus.citations_of("A");
        assert_eq!(edges.len(), 1);
        assert_eq!(edges[0].citing_id, "B");
        assert_eq!(edges[0].citing_year, 2011);
        assert!(corpus.citations_of("B").is_empty());
    }

    #[test]
    fn duplicate_paper_id_is_a_hard_error() {
        let records = vec![rec("P1", 2010, vec![]), rec("P1", 2011, vec![])];
        let err = Corpus::from_records(records, 2014, IngestOptions::default()).unwrap_err();
        assert_eq!(err.to_string(), "duplicate paper_id P1");
    }

    #[test]
    fn publication_after_census_is_a_hard_error() {
        let err =
            Corpus::from_records(vec![rec("A", 2015, vec![])], 2014, IngestOptions::default())
                .unwrap_err();
        assert!(matches!(err, Error::BeyondCensus { pub_year: 2015, .. }));
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let input = b"{\"paper_id\":\"A\",\"pub_year\":2010,\"journal_id\":\"j\",\"doc_type\":\"article\"}\nnot json\n";
        let err = Corpus::read_jsonl(&input[..], 2014, IngestOptions::default()).unwrap_err();
        match err {
            Error::Malformed { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn dangling_reference_is_demoted_keeping_year() {
        let records = vec![rec(
            "A",
            2011,
            vec![linked("missing", 2005), unlinked(2001)],
        )];
        let (corpus, summary) =
            Corpus::from_records(records, 2014, IngestOptions::default()).unwrap();
        assert_eq!(summary.links_demoted, 1);
        assert_eq!(summary.links_resolved, 0);
        let refs = &corpus.paper("A").unwrap().references;
        assert_eq!(refs[0], unlinked(2005));
        assert_eq!(refs[1], unlinked(2001));
    }

    #[test]
    fn demotion_leaves_other_citation_counts_alone() {
        let with_dangle = vec![
            rec("A", 2010, vec![]),
            rec("B", 2011, vec![linked("A", 2010), linked("ghost", 2009)]),
        ];
        let without = vec![
            rec("A", 2010, vec![]),
            rec("B", 2011, vec![linked("A", 2010)]),
        ];
        let (c1, _) = Corpus::from_records(with_dangle, 2014, IngestOptions::default()).unwrap();
        let (c2, _) = Corpus::from_records(without, 2014, IngestOptions::default()).unwrap();
        assert_eq!(c1.citations_of("A").len(), c2.citations_of("A").len());
    }

    #[test]
    fn resolved_reference_year_is_canonicalized() {
        let records = vec![
            rec("A", 2010, vec![]),
            rec("B", 2012, vec![linked("A", 2009)]),
        ];
        let (corpus, summary) =
            Corpus::from_records(records, 2014, IngestOptions::default()).unwrap();
        assert_eq!(summary.ref_years_corrected, 1);
        assert_eq!(corpus.paper("B").unwrap().references[0].ref_year, 2010);
    }

    #[test]
    fn duplicate_reference_target_is_a_hard_error() {
        let records = vec![rec("B", 2011, vec![linked("A", 2010), linked("A", 2010)])];
        let err = Corpus::from_records(records, 2014, IngestOptions::default()).unwrap_err();
        assert!(matches!(err, Error::DuplicateReference { .. }));
    }

    #[test]
    fn linked_reference_count_windows() {
        let records = vec![
            rec("X", 2007, vec![]),
            rec("Y", 2008, vec![]),
            rec("Z", 2010, vec![]),
            rec(
                "P",
                2011,
                vec![linked("X", 2007), linked("Y", 2008), linked("Z", 2010)],
            ),
        ];
        let (corpus, _) = Corpus::from_records(records, 2014, IngestOptions::default()).unwrap();
        let window = YearInterval::new(2008, 2010).unwrap();
        assert_eq!(corpus.linked_reference_count("P", Some(window)).unwrap(), 2);
        assert_eq!(corpus.linked_reference_count("P", None).unwrap(), 3);
        assert_eq!(corpus.linked_reference_count("X", None).unwrap(), 0);
    }

    #[test]
    fn unlinked_references_never_count() {
        let records = vec![
            rec("A", 2009, vec![]),
            rec("B", 2009, vec![]),
            rec("C", 2009, vec![]),
            rec(
                "P",
                2011,
                vec![
                    linked("A", 2009),
                    linked("B", 2009),
                    linked("C", 2009),
                    unlinked(2009),
                    unlinked(1999),
                ],
            ),
        ];
        let (corpus, _) = Corpus::from_records(records, 2014, IngestOptions::default()).unwrap();
        assert_eq!(corpus.linked_reference_count("P", None).unwrap(), 3);
    }

    #[test]
    fn sum_of_linked_counts_equals_edge_total() {
        let records = vec![
            rec("A", 2008, vec![]),
            rec("B", 2009, vec![linked("A", 2008)]),
            rec(
                "C",
                2010,
                vec![linked("A", 2008), linked("B", 2009), unlinked(1990)],
            ),
            rec("D", 2011, vec![linked("ghost", 2000)]),
        ];
        let (corpus, _) = Corpus::from_records(records, 2014, IngestOptions::default()).unwrap();
        let total: usize = corpus
            .papers()
            .map(|p| p.linked_reference_count(None))
            .sum();
        assert_eq!(total, corpus.total_citation_edges());
        assert_eq!(total, 3);
    }

    #[test]
    fn jsonl_round_trip_is_identity() {
        let records = vec![
            rec("A", 2009, vec![unlinked(2001)]),
            rec("B", 2011, vec![linked("A", 2009), linked("nowhere", 2003)]),
        ];
        let (corpus, _) = Corpus::from_records(records, 2014, IngestOptions::default()).unwrap();
        let mut buffer = Vec::new();
        corpus.write_jsonl(&mut buffer).unwrap();
        let (again, summary) =
            Corpus::read_jsonl(&buffer[..], 2014, IngestOptions::default()).unwrap();
        assert_eq!(summary.links_demoted, 0);
        let mut buffer2 = Vec::new();
        again.write_jsonl(&mut buffer2).unwrap();
        assert_eq!(buffer, buffer2);
        assert_eq!(corpus.content_hash(), again.content_hash());
    }

    #[test]
    fn doc_type_filter_controls_analysis_not_citing() {
        let mut review = rec("R", 2012, vec![linked("A", 2010)]);
        review.doc_type = "review".into();
        let records = vec![rec("A", 2010, vec![]), review];
        let options = IngestOptions {
            doc_type: Some("article".into()),
            restrict_citing: false,
        };
        let (corpus, summary) = Corpus::from_records(records.clone(), 2014, options).unwrap();
        assert_eq!(summary.analyzed_papers, 1);
        assert_eq!(corpus.citations_of("A").len(), 1);

        let options = IngestOptions {
            doc_type: Some("article".into()),
            restrict_citing: true,
        };
        let (corpus, summary) = Corpus::from_records(records, 2014, options).unwrap();
        assert_eq!(summary.papers_dropped, 1);
        assert_eq!(corpus.citations_of("A").len(), 0);
    }
}
