//! Per-paper indicator values for one publication year.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::windows::WindowSpec;

/// Scores of one indicator over one publication year.
///
/// `scores` and `unscored` are disjoint: a paper either has a finite
/// nonnegative value or an unscored reason, never both.
#[derive(Debug, Clone, Serialize)]
pub struct ScoreTable {
    indicator: String,
    pub_year: i32,
    window: WindowSpec,
    scores: BTreeMap<String, f64>,
    unscored: BTreeMap<String, String>,
}

impl ScoreTable {
    pub fn new(indicator: impl Into<String>, pub_year: i32, window: WindowSpec) -> Self {
        ScoreTable {
            indicator: indicator.into(),
            pub_year,
            window,
            scores: BTreeMap::new(),
            unscored: BTreeMap::new(),
        }
    }

    /// Record a value.  Panics on non-finite or negative values and on
    /// papers already marked unscored; both would be engine bugs.
    pub fn set_score(&mut self, paper_id: impl Into<String>, value: f64) {
        let paper_id = paper_id.into();
        assert!(
            value.is_finite() && value >= 0.0,
            "score of {paper_id} must be finite and nonnegative, got {value}"
        );
        assert!(
            !self.unscored.contains_key(&paper_id),
            "paper {paper_id} is already unscored"
        );
        self.scores.insert(paper_id, value);
    }

    pub fn set_unscored(&mut self, paper_id: impl Into<String>, reason: impl Into<String>) {
        let paper_id = paper_id.into();
        assert!(
            !self.scores.contains_key(&paper_id),
            "paper {paper_id} is already scored"
        );
        self.unscored.insert(paper_id, reason.into());
    }

    pub fn indicator(&self) -> &str {
        &self.indicator
    }

    pub fn pub_year(&self) -> i32 {
        self.pub_year
    }

    pub fn window(&self) -> WindowSpec {
        self.window
    }

    pub fn score(&self, paper_id: &str) -> Option<f64> {
        self.scores.get(paper_id).copied()
    }

    pub fn scores(&self) -> &BTreeMap<String, f64> {
        &self.scores
    }

    pub fn unscored(&self) -> &BTreeMap<String, String> {
        &self.unscored
    }

    pub fn scored_len(&self) -> usize {
        self.scores.len()
    }

    /// Mean over all scored papers, or `None` when nothing is scored.
    pub fn mean_score(&self) -> Option<f64> {
        if self.scores.is_empty() {
            return None;
        }
        Some(self.scores.values().sum::<f64>() / self.scores.len() as f64)
    }
}
