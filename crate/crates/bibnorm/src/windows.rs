//! Year-window arithmetic shared by every indicator.
//!
//! Citation windows look forward from publication, reference windows look
//! backward, and for fixed-length windows both have exactly the same length.
//! Keeping the arithmetic in one place makes that symmetry checkable instead
//! of a convention scattered across the indicator modules.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};

/// Inclusive range of calendar years.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "(i32, i32)", into = "(i32, i32)")]
pub struct YearInterval {
    first: i32,
    last: i32,
}

impl YearInterval {
    pub fn new(first: i32, last: i32) -> Result<Self> {
        if first > last {
            return Err(Error::InvalidInterval { first, last });
        }
        Ok(YearInterval { first, last })
    }

    pub fn first(&self) -> i32 {
        self.first
    }

    pub fn last(&self) -> i32 {
        self.last
    }

    /// Number of years covered, both endpoints inclusive.
    pub fn len(&self) -> u32 {
        (self.last - self.first) as u32 + 1
    }

    pub fn is_empty(&self) -> bool {
        false // first <= last by construction
    }

    pub fn contains(&self, year: i32) -> bool {
        self.first <= year && year <= self.last
    }

    pub fn years(&self) -> impl Iterator<Item = i32> {
        self.first..=self.last
    }
}

impl TryFrom<(i32, i32)> for YearInterval {
    type Error = Error;

    fn try_from((first, last): (i32, i32)) -> Result<Self> {
        YearInterval::new(first, last)
    }
}

impl From<YearInterval> for (i32, i32) {
    fn from(iv: YearInterval) -> Self {
        (iv.first, iv.last)
    }
}

impl fmt::Display for YearInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.first, self.last)
    }
}

/// How citation and reference years are restricted for one indicator run.
///
/// `Fixed(n)` counts citations in the n years after publication (excluding
/// the publication year) and references in the n years before it.  `Full`
/// counts citations from the publication year through the census year and
/// leaves reference years unrestricted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum WindowSpec {
    Fixed(u32),
    Full,
}

impl WindowSpec {
    pub fn fixed(length: u32) -> Result<Self> {
        if length == 0 {
            return Err(Error::InvalidConfig(
                "fixed window length must be at least 1".into(),
            ));
        }
        Ok(WindowSpec::Fixed(length))
    }

    fn check(&self) -> Result<()> {
        match self {
            WindowSpec::Fixed(0) => Err(Error::InvalidConfig(
                "fixed window length must be at least 1".into(),
            )),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for WindowSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowSpec::Fixed(n) => write!(f, "fixed{n}"),
            WindowSpec::Full => write!(f, "full"),
        }
    }
}

impl FromStr for WindowSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "full" {
            return Ok(WindowSpec::Full);
        }
        if let Some(rest) = s.strip_prefix("fixed") {
            let n: u32 = rest.parse().map_err(|_| {
                Error::InvalidConfig(format!(
                    "unknown window spec {s:?} (expected fixedN or full)"
                ))
            })?;
            return WindowSpec::fixed(n);
        }
        Err(Error::InvalidConfig(format!(
            "unknown window spec {s:?} (expected fixedN or full)"
        )))
    }
}

impl TryFrom<String> for WindowSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<WindowSpec> for String {
    fn from(w: WindowSpec) -> Self {
        w.to_string()
    }
}

/// Inclusive interval of citing years for a paper published in `pub_year`.
///
/// Fixed windows must fit entirely before the census year; an incomplete
/// window is an error so that short windows are never silently truncated.
pub fn citation_interval(
    spec: WindowSpec,
    pub_year: i32,
    census_year: i32,
) -> Result<YearInterval> {
    spec.check()?;
    match spec {
        WindowSpec::Fixed(n) => {
            let last = pub_year + n as i32;
            if last > census_year {
                return Err(Error::IncompleteWindow {
                    pub_year,
                    window: spec.to_string(),
                    census_year,
                });
            }
            YearInterval::new(pub_year + 1, last)
        }
        WindowSpec::Full => {
            if pub_year > census_year {
                return Err(Error::IncompleteWindow {
                    pub_year,
                    window: spec.to_string(),
                    census_year,
                });
            }
            YearInterval::new(pub_year, census_year)
        }
    }
}

/// Inclusive interval of reference years, or `None` when unrestricted.
pub fn reference_interval(spec: WindowSpec, pub_year: i32) -> Option<YearInterval> {
    match spec {
        WindowSpec::Fixed(n) => {
            Some(YearInterval::new(pub_year - n as i32, pub_year - 1).expect("n >= 1"))
        }
        WindowSpec::Full => None,
    }
}

/// Number of citation edges to `paper_id` whose citing year falls inside the
/// citation interval of `spec`.
pub fn windowed_citation_count(corpus: &Corpus, paper_id: &str, spec: WindowSpec) -> Result<usize> {
    let paper = corpus
        .paper(paper_id)
        .ok_or_else(|| Error::UnknownPaper(paper_id.to_string()))?;
    let interval = citation_interval(spec, paper.pub_year, corpus.census_year())?;
    Ok(corpus
        .citations_of(paper_id)
        .iter()
        .filter(|c| interval.contains(c.citing_year))
        .count())
}
