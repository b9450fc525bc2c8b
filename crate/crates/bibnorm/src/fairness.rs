//! Fairness analysis: mark the global top share of papers by an indicator,
//! then check how evenly the marks spread over an independent
//! single-assignment category scheme.
//!
//! A perfectly field-normalized indicator puts (close to) the same share of
//! every category's papers into the global top decile; the mean absolute
//! deviation of the per-category percentages from the expected percentage
//! summarizes the bias, and the cross-year mean of those deviations ranks
//! indicators.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::classify::EvaluationScheme;
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::indicators::{compute_indicator, Indicator, RunSettings};
use crate::score::ScoreTable;

/// What happens to papers whose value ties the cut-off value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TieRule {
    /// Mark every paper tied with the threshold value (value-deterministic;
    /// the marked count may exceed the nominal cut).
    #[default]
    MarkThresholdTies,
    /// Mark exactly the nominal cut, breaking ties by paper id.
    StrictCount,
}

/// Rounding of `share * n` to the integer cut count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CutRounding {
    #[default]
    HalfEven,
    HalfUp,
    Floor,
    Ceil,
}

impl CutRounding {
    fn apply(&self, x: f64) -> usize {
        let rounded = match self {
            CutRounding::HalfEven => x.round_ties_even(),
            CutRounding::HalfUp => x.round(),
            CutRounding::Floor => x.floor(),
            CutRounding::Ceil => x.ceil(),
        };
        rounded.max(0.0) as usize
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FairnessConfig {
    /// Fraction of scored papers to mark (0.10 marks the top decile).
    pub share: f64,
    pub tie_rule: TieRule,
    pub rounding: CutRounding,
    /// Count unscored papers as unmarked instead of dropping them.
    pub include_unscored: bool,
}

impl Default for FairnessConfig {
    fn default() -> Self {
        FairnessConfig {
            share: 0.10,
            tie_rule: TieRule::default(),
            rounding: CutRounding::default(),
            include_unscored: false,
        }
    }
}

impl FairnessConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.share > 0.0 && self.share <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "top share must be in (0, 1], got {}",
                self.share
            )));
        }
        Ok(())
    }

    /// The per-category percentage a perfectly fair indicator would show.
    pub fn expected_percent(&self) -> f64 {
        self.share * 100.0
    }
}

/// Mark the top `share` of scored papers by value.
///
/// Unscored papers are dropped unless `include_unscored` is set, in which
/// case they appear unmarked.
pub fn mark_top_share(
    table: &ScoreTable,
    config: &FairnessConfig,
) -> Result<BTreeMap<String, bool>> {
    config.validate()?;
    if table.scored_len() == 0 {
        return Err(Error::EmptySet);
    }
    let mut ranked: Vec<(&str, f64)> = table
        .scores()
        .iter()
        .map(|(id, &v)| (id.as_str(), v))
        .collect();
    ranked.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .expect("scores are finite")
            .then_with(|| a.0.cmp(b.0))
    });
    let n = ranked.len();
    let cut = config.rounding.apply(config.share * n as f64).min(n);

    let mut flags: BTreeMap<String, bool> = BTreeMap::new();
    if config.include_unscored {
        for id in table.unscored().keys() {
            flags.insert(id.clone(), false);
        }
    }
    match config.tie_rule {
        TieRule::MarkThresholdTies => {
            let threshold = if cut == 0 {
                None
            } else {
                Some(ranked[cut - 1].1)
            };
            for (id, value) in ranked {
                let marked = threshold.is_some_and(|t| value >= t);
                flags.insert(id.to_string(), marked);
            }
        }
        TieRule::StrictCount => {
            for (rank, (id, _)) in ranked.into_iter().enumerate() {
                flags.insert(id.to_string(), rank < cut);
            }
        }
    }
    Ok(flags)
}

/// Convenience wrapper with the default 10% share semantics.
pub fn mark_top_decile(table: &ScoreTable, share: f64) -> Result<BTreeMap<String, bool>> {
    mark_top_share(
        table,
        &FairnessConfig {
            share,
            ..FairnessConfig::default()
        },
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CategoryShare {
    pub marked: usize,
    pub total: usize,
    pub percent: f64,
}

/// Per-category shares of marked papers under an evaluation scheme.
#[derive(Debug, Clone, Serialize)]
pub struct ProportionReport {
    pub shares: BTreeMap<String, CategoryShare>,
    /// Flagged papers missing from the evaluation scheme, excluded above.
    pub unevaluated: Vec<String>,
    pub marked_total: usize,
    pub evaluated_total: usize,
}

impl ProportionReport {
    pub fn percents(&self) -> impl Iterator<Item = f64> + '_ {
        self.shares.values().map(|s| s.percent)
    }

    /// Realized marked percentage over all evaluated papers.
    pub fn global_marked_percent(&self) -> f64 {
        100.0 * self.marked_total as f64 / self.evaluated_total as f64
    }

    /// Paper-count-weighted mean of the category percentages; equals the
    /// realized global percentage by construction (conservation of marks).
    pub fn weighted_mean_percent(&self) -> f64 {
        let weighted: f64 = self
            .shares
            .values()
            .map(|s| s.percent * s.total as f64)
            .sum();
        weighted / self.evaluated_total as f64
    }
}

pub fn fairness_proportions(
    flags: &BTreeMap<String, bool>,
    evaluation: &EvaluationScheme,
) -> Result<ProportionReport> {
    let mut tallies: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    let mut unevaluated = Vec::new();
    let mut marked_total = 0usize;
    let mut evaluated_total = 0usize;
    for (paper, &marked) in flags {
        match evaluation.category_of(paper) {
            Some(category) => {
                let entry = tallies.entry(category.to_string()).or_insert((0, 0));
                entry.1 += 1;
                if marked {
                    entry.0 += 1;
                    marked_total += 1;
                }
                evaluated_total += 1;
            }
            None => unevaluated.push(paper.clone()),
        }
    }
    if evaluated_total == 0 {
        return Err(Error::InvalidConfig(
            "no scored paper is covered by the evaluation scheme".into(),
        ));
    }
    let shares = tallies
        .into_iter()
        .map(|(category, (marked, total))| {
            (
                category,
                CategoryShare {
                    marked,
                    total,
                    percent: 100.0 * marked as f64 / total as f64,
                },
            )
        })
        .collect();
    Ok(ProportionReport {
        shares,
        unevaluated,
        marked_total,
        evaluated_total,
    })
}

/// Unweighted mean of `|percent - expected|` over categories.
pub fn mean_absolute_deviation(percents: impl IntoIterator<Item = f64>, expected: f64) -> f64 {
    let (mut sum, mut count) = (0.0, 0usize);
    for p in percents {
        sum += (p - expected).abs();
        count += 1;
    }
    assert!(
        count > 0,
        "mean absolute deviation needs at least one category"
    );
    sum / count as f64
}

/// One (indicator, year) cell of the fairness report.
#[derive(Debug, Clone, Serialize)]
pub struct FairnessCell {
    pub indicator: String,
    pub pub_year: i32,
    pub shares: BTreeMap<String, CategoryShare>,
    pub mad: f64,
    pub marked_total: usize,
    pub evaluated_total: usize,
    pub global_marked_percent: f64,
    pub unevaluated_papers: usize,
    pub unscored_papers: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RankEntry {
    pub indicator: String,
    pub mean_mad: f64,
}

/// Fairness results per indicator and year plus the cross-year aggregate.
#[derive(Debug, Clone, Serialize)]
pub struct FairnessReport {
    pub share: f64,
    pub expected_percent: f64,
    pub categories: Vec<String>,
    pub cells: Vec<FairnessCell>,
    pub cross_year_mad: BTreeMap<String, f64>,
    /// Indicators ranked by cross-year mean deviation, best first.
    pub ranking: Vec<RankEntry>,
}

impl FairnessReport {
    pub fn cell(&self, indicator: Indicator, year: i32) -> Option<&FairnessCell> {
        self.cells
            .iter()
            .find(|c| c.indicator == indicator.name() && c.pub_year == year)
    }
}

/// Run the full analysis: every indicator scored per year, marked at the
/// configured share, and summarized per category.
pub fn fairness_suite(
    corpus: &Corpus,
    indicators: &[Indicator],
    years: &[i32],
    evaluation: &EvaluationScheme,
    settings: &RunSettings,
    config: &FairnessConfig,
) -> Result<FairnessReport> {
    config.validate()?;
    if indicators.is_empty() || years.is_empty() {
        return Err(Error::InvalidConfig(
            "fairness needs at least one indicator and one year".into(),
        ));
    }
    let mut cells = Vec::new();
    let mut categories: std::collections::BTreeSet<String> = Default::default();
    for &indicator in indicators {
        for &year in years {
            let table = compute_indicator(corpus, indicator, year, settings)?;
            let flags = mark_top_share(&table, config)?;
            let proportions = fairness_proportions(&flags, evaluation)?;
            let mad = mean_absolute_deviation(proportions.percents(), config.expected_percent());
            debug_assert!(
                (proportions.weighted_mean_percent() - proportions.global_marked_percent()).abs()
                    < 1e-9
            );
            categories.extend(proportions.shares.keys().cloned());
            cells.push(FairnessCell {
                indicator: indicator.name().to_string(),
                pub_year: year,
                global_marked_percent: proportions.global_marked_percent(),
                marked_total: proportions.marked_total,
                evaluated_total: proportions.evaluated_total,
                unevaluated_papers: proportions.unevaluated.len(),
                unscored_papers: table.unscored().len(),
                shares: proportions.shares,
                mad,
            });
        }
    }
    let mut cross_year_mad = BTreeMap::new();
    for &indicator in indicators {
        let mads: Vec<f64> = cells
            .iter()
            .filter(|c| c.indicator == indicator.name())
            .map(|c| c.mad)
            .collect();
        cross_year_mad.insert(
            indicator.name().to_string(),
            mads.iter().sum::<f64>() / mads.len() as f64,
        );
    }
    let mut ranking: Vec<RankEntry> = cross_year_mad
        .iter()
        .map(|(indicator, &mean_mad)| RankEntry {
            indicator: indicator.clone(),
            mean_mad,
        })
        .collect();
    ranking.sort_by(|a, b| {
        a.mean_mad
            .partial_cmp(&b.mean_mad)
            .expect("finite")
            .then_with(|| a.indicator.cmp(&b.indicator))
    });
    Ok(FairnessReport {
        share: config.share,
        expected_percent: config.expected_percent(),
        categories: categories.into_iter().collect(),
        cells,
        cross_year_mad,
        ranking,
    })
}
