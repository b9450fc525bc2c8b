//! Field schemes for normalization and the independent evaluation scheme.
//!
//! Three scheme kinds cover the indicator needs: base categories (a paper may
//! sit in several fields), overlapping category combinations (each distinct
//! category set is its own field, so every paper has exactly one), and
//! journal-year fields.  The evaluation scheme is a single-assignment
//! classification loaded from a separate file and kept independent of the
//! normalization schemes.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;
use std::io::BufRead;

use serde::Serialize;

use crate::corpus::Corpus;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    BaseCategories,
    OverlappingCombinations,
    JournalYear,
}

/// Assignment of one year's analyzed papers to normalization fields.
#[derive(Debug, Clone)]
pub struct FieldScheme {
    kind: SchemeKind,
    pub_year: i32,
    assignment: BTreeMap<String, BTreeSet<String>>,
    fields: BTreeMap<String, BTreeSet<String>>,
}

impl FieldScheme {
    fn build(
        kind: SchemeKind,
        pub_year: i32,
        memberships: impl IntoIterator<Item = (String, String)>,
    ) -> Self {
        let mut assignment: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        let mut fields: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
        for (paper, field) in memberships {
            assignment
                .entry(paper.clone())
                .or_default()
                .insert(field.clone());
            fields.entry(field).or_default().insert(paper);
        }
        FieldScheme {
            kind,
            pub_year,
            assignment,
            fields,
        }
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn pub_year(&self) -> i32 {
        self.pub_year
    }

    pub fn contains(&self, paper_id: &str) -> bool {
        self.assignment.contains_key(paper_id)
    }

    pub fn fields_of(&self, paper_id: &str) -> Option<&BTreeSet<String>> {
        self.assignment.get(paper_id)
    }

    pub fn papers_in(&self, field: &str) -> Option<&BTreeSet<String>> {
        self.fields.get(field)
    }

    pub fn fields(&self) -> &BTreeMap<String, BTreeSet<String>> {
        &self.fields
    }

    pub fn assignment(&self) -> &BTreeMap<String, BTreeSet<String>> {
        &self.assignment
    }

    pub fn field_count(&self) -> usize {
        self.fields.len()
    }

    pub fn paper_count(&self) -> usize {
        self.assignment.len()
    }

    /// True when no paper belongs to more than one field.
    pub fn is_single_assignment(&self) -> bool {
        self.assignment.values().all(|f| f.len() == 1)
    }
}

/// Why a paper received no field in an overlapping scheme.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "reason")]
pub enum ExclusionReason {
    NoCategories,
    BelowMinSize { field: String, size: usize },
}

impl fmt::Display for ExclusionReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExclusionReason::NoCategories => write!(f, "no categories"),
            ExclusionReason::BelowMinSize { field, size } => {
                write!(f, "field {field} has only {size} papers")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Exclusion {
    pub paper_id: String,
    #[serde(flatten)]
    pub reason: ExclusionReason,
}

/// Field id for one combination of base categories.
fn combination_id(categories: &BTreeSet<String>) -> String {
    categories.iter().cloned().collect::<Vec<_>>().join("+")
}

/// Group one year's papers by their exact category set.
///
/// Every distinct combination is one field, so each paper has exactly one
/// field.  Combinations with fewer than `min_size` papers are dropped and
/// their papers land on the exclusion list, as do papers without categories.
pub fn build_overlapping_scheme(
    corpus: &Corpus,
    pub_year: i32,
    min_size: usize,
) -> Result<(FieldScheme, Vec<Exclusion>)> {
    if min_size < 1 {
        return Err(Error::InvalidConfig("min_size must be at least 1".into()));
    }
    let mut excluded = Vec::new();
    let mut combos: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for paper in corpus.analyzed_in_year(pub_year) {
        if paper.categories.is_empty() {
            excluded.push(Exclusion {
                paper_id: paper.paper_id.clone(),
                reason: ExclusionReason::NoCategories,
            });
            continue;
        }
        combos
            .entry(combination_id(&paper.categories))
            .or_default()
            .push(paper.paper_id.clone());
    }
    let mut memberships = Vec::new();
    for (field, papers) in combos {
        if papers.len() < min_size {
            let size = papers.len();
            for paper_id in papers {
                excluded.push(Exclusion {
                    paper_id,
                    reason: ExclusionReason::BelowMinSize {
                        field: field.clone(),
                        size,
                    },
                });
            }
            continue;
        }
        for paper in papers {
            memberships.push((paper, field.clone()));
        }
    }
    excluded.sort_by(|a, b| a.paper_id.cmp(&b.paper_id));
    Ok((
        FieldScheme::build(SchemeKind::OverlappingCombinations, pub_year, memberships),
        excluded,
    ))
}

/// One field per base category; papers with several categories belong to
/// several fields.  Papers without categories are excluded.
pub fn build_base_scheme(corpus: &Corpus, pub_year: i32) -> (FieldScheme, Vec<Exclusion>) {
    let mut excluded = Vec::new();
    let mut memberships = Vec::new();
    for paper in corpus.analyzed_in_year(pub_year) {
        if paper.categories.is_empty() {
            excluded.push(Exclusion {
                paper_id: paper.paper_id.clone(),
                reason: ExclusionReason::NoCategories,
            });
            continue;
        }
        for category in &paper.categories {
            memberships.push((paper.paper_id.clone(), category.clone()));
        }
    }
    (
        FieldScheme::build(SchemeKind::BaseCategories, pub_year, memberships),
        excluded,
    )
}

/// One field per journal among the year's papers.
pub fn build_journal_scheme(corpus: &Corpus, pub_year: i32) -> FieldScheme {
    let memberships = corpus
        .analyzed_in_year(pub_year)
        .map(|p| (p.paper_id.clone(), p.journal_id.clone()))
        .collect::<Vec<_>>();
    FieldScheme::build(SchemeKind::JournalYear, pub_year, memberships)
}

/// Single-assignment classification used by the fairness test.
#[derive(Debug, Clone, Default)]
pub struct EvaluationScheme {
    assignment: BTreeMap<String, String>,
}

impl EvaluationScheme {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (String, String)>) -> Result<Self> {
        let mut assignment: BTreeMap<String, String> = BTreeMap::new();
        for (paper, category) in pairs {
            if let Some(existing) = assignment.get(&paper) {
                if existing != &category {
                    return Err(Error::EvaluationConflict {
                        paper,
                        first: existing.clone(),
                        second: category,
                    });
                }
                continue;
            }
            assignment.insert(paper, category);
        }
        Ok(EvaluationScheme { assignment })
    }

    pub fn category_of(&self, paper_id: &str) -> Option<&str> {
        self.assignment.get(paper_id).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn categories(&self) -> BTreeSet<&str> {
        self.assignment.values().map(String::as_str).collect()
    }
}

/// Load `paper_id<TAB>category` lines.  Every paper must exist in the
/// corpus; a paper mapped to two different categories is a hard error.
pub fn load_evaluation_scheme(reader: impl BufRead, corpus: &Corpus) -> Result<EvaluationScheme> {
    let mut pairs = Vec::new();
    for (number, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim_end_matches(['\r', '\n']);
        if trimmed.trim().is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (paper, category) = trimmed.split_once('\t').ok_or_else(|| Error::Malformed {
            line: number + 1,
            message: "expected paper_id<TAB>category".into(),
        })?;
        let (paper, category) = (paper.trim(), category.trim());
        if paper.is_empty() || category.is_empty() {
            return Err(Error::Malformed {
                line: number + 1,
                message: "empty paper_id or category".into(),
            });
        }
        if corpus.paper(paper).is_none() {
            return Err(Error::UnknownPaper(paper.to_string()));
        }
        pairs.push((paper.to_string(), category.to_string()));
    }
    EvaluationScheme::from_pairs(pairs)
}
