//! Fixture helpers for unit tests: corpora with exact windowed citation
//! counts and linked-reference counts.

use crate::corpus::{Corpus, IngestOptions, PaperRecord, ReferenceLink};

pub fn record(id: &str, year: i32, journal: &str, cats: &[&str]) -> PaperRecord {
    PaperRecord {
        paper_id: id.into(),
        pub_year: year,
        journal_id: journal.into(),
        doc_type: "article".into(),
        categories: cats.iter().map(|c| c.to_string()).collect(),
        references: vec![],
    }
}

pub fn linked(target: &str, year: i32) -> ReferenceLink {
    ReferenceLink {
        target_id: Some(target.into()),
        ref_year: year,
    }
}

pub fn unlinked(year: i32) -> ReferenceLink {
    ReferenceLink {
        target_id: None,
        ref_year: year,
    }
}

/// Builds a corpus of focal papers published in one year.
///
/// Citations are realized as one citing paper per edge, published the year
/// after the focal year (inside every citation window).  Linked references
/// point at shared filler papers published the year before the focal year
/// (inside every fixed reference window).
pub struct CorpusBuilder {
    pub_year: i32,
    census_year: i32,
    records: Vec<PaperRecord>,
    citer_count: usize,
    filler_needed: usize,
}

impl CorpusBuilder {
    pub fn new(pub_year: i32, census_year: i32) -> Self {
        CorpusBuilder {
            pub_year,
            census_year,
            records: Vec::new(),
            citer_count: 0,
            filler_needed: 0,
        }
    }

    pub fn paper(self, id: &str, journal: &str, cats: &[&str], citations: usize) -> Self {
        self.paper_with_refs(id, journal, cats, citations, 0)
    }

    pub fn paper_with_refs(
        mut self,
        id: &str,
        journal: &str,
        cats: &[&str],
        citations: usize,
        linked_refs: usize,
    ) -> Self {
        let mut focal = record(id, self.pub_year, journal, cats);
        for k in 1..=linked_refs {
            focal
                .references
                .push(linked(&format!("fill-{k:04}"), self.pub_year - 1));
        }
        self.filler_needed = self.filler_needed.max(linked_refs);
        self.records.push(focal);
        for _ in 0..citations {
            self.citer_count += 1;
            let mut citer = record(
                &format!("cite-{:05}", self.citer_count),
                self.pub_year + 1,
                "citing-journal",
                &[],
            );
            citer.references.push(linked(id, self.pub_year));
            self.records.push(citer);
        }
        self
    }

    pub fn build(self) -> Corpus {
        self.build_with_options(IngestOptions::default())
    }

    pub fn build_with_options(mut self, options: IngestOptions) -> Corpus {
        for k in 1..=self.filler_needed {
            self.records.push(record(
                &format!("fill-{k:04}"),
                self.pub_year - 1,
                "filler-journal",
                &[],
            ));
        }
        let (corpus, _) =
            Corpus::from_records(self.records, self.census_year, options).expect("valid fixture");
        corpus
    }
}
