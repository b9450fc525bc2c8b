//! Referencing-pattern descriptives: per-group reference-count and
//! reference-year distributions, and the windowed reference-count trend over
//! publication years.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::windows::{reference_interval, WindowSpec, YearInterval};

/// Five-number-ish summary of one group's distribution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionSummary {
    pub group: String,
    pub mean: f64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub n: usize,
}

/// Quantile with Hazen plotting positions: the k-th of n sorted values sits
/// at probability (k - 0.5) / n and values in between are interpolated
/// linearly.  Same convention family as the percentile indicator.
fn hazen_quantile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    assert!(n > 0, "quantile of an empty slice");
    let h = q * n as f64 + 0.5;
    if h <= 1.0 {
        return sorted[0];
    }
    if h >= n as f64 {
        return sorted[n - 1];
    }
    let lo = h.floor() as usize; // 1-indexed lower rank
    let frac = h - lo as f64;
    sorted[lo - 1] + frac * (sorted[lo] - sorted[lo - 1])
}

fn summarize(group: &str, mut values: Vec<f64>) -> DistributionSummary {
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    let n = values.len();
    DistributionSummary {
        group: group.to_string(),
        mean: values.iter().sum::<f64>() / n as f64,
        median: hazen_quantile(&values, 0.5),
        q1: hazen_quantile(&values, 0.25),
        q3: hazen_quantile(&values, 0.75),
        n,
    }
}

/// Per-group summaries plus the papers and groups that fell out.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryReport {
    pub groups: Vec<DistributionSummary>,
    /// Analyzed papers of the year missing from the grouping.
    pub ungrouped: Vec<String>,
    /// Groups named by the grouping but empty after filtering.
    pub skipped_groups: Vec<String>,
}

fn collect_groups<'c, T>(
    corpus: &'c Corpus,
    grouping: &BTreeMap<String, String>,
    pub_year: i32,
    mut values_of: impl FnMut(&'c crate::corpus::PaperRecord) -> Vec<T>,
) -> (BTreeMap<String, Vec<T>>, Vec<String>) {
    let mut per_group: BTreeMap<String, Vec<T>> = BTreeMap::new();
    let mut ungrouped = Vec::new();
    for paper in corpus.analyzed_in_year(pub_year) {
        match grouping.get(&paper.paper_id) {
            Some(group) => per_group
                .entry(group.clone())
                .or_default()
                .extend(values_of(paper)),
            None => ungrouped.push(paper.paper_id.clone()),
        }
    }
    (per_group, ungrouped)
}

fn skipped(grouping: &BTreeMap<String, String>, seen: &BTreeMap<String, Vec<f64>>) -> Vec<String> {
    let mut named: Vec<String> = grouping.values().cloned().collect();
    named.sort();
    named.dedup();
    named.retain(|g| !seen.contains_key(g) || seen[g].is_empty());
    named
}

/// Per-group distribution of linked references per paper, all reference
/// years included.
pub fn reference_count_summary(
    corpus: &Corpus,
    grouping: &BTreeMap<String, String>,
    pub_year: i32,
) -> Result<SummaryReport> {
    let (per_group, ungrouped) = collect_groups(corpus, grouping, pub_year, |paper| {
        vec![paper.linked_reference_count(None) as f64]
    });
    let skipped_groups = skipped(grouping, &per_group);
    let groups = per_group
        .into_iter()
        .filter(|(_, values)| !values.is_empty())
        .map(|(group, values)| summarize(&group, values))
        .collect();
    Ok(SummaryReport {
        groups,
        ungrouped,
        skipped_groups,
    })
}

/// Per-group distribution of cited-reference years, pooled at the reference
/// level (one observation per reference).  With `linked_only`, references
/// that do not resolve in the corpus are skipped.
pub fn reference_year_summary(
    corpus: &Corpus,
    grouping: &BTreeMap<String, String>,
    pub_year: i32,
    linked_only: bool,
) -> Result<SummaryReport> {
    let (per_group, ungrouped) = collect_groups(corpus, grouping, pub_year, |paper| {
        paper
            .references
            .iter()
            .filter(|r| !linked_only || r.is_linked())
            .map(|r| r.ref_year as f64)
            .collect()
    });
    let skipped_groups = skipped(grouping, &per_group);
    let groups = per_group
        .into_iter()
        .filter(|(_, values)| !values.is_empty())
        .map(|(group, values)| summarize(&group, values))
        .collect();
    Ok(SummaryReport {
        groups,
        ungrouped,
        skipped_groups,
    })
}

/// Mean in-window linked references per paper, per group and publication
/// year.  Years in which a group has no papers are gaps, not zeros.
#[derive(Debug, Clone, Serialize)]
pub struct TrendReport {
    pub window_length: u32,
    pub series: BTreeMap<String, BTreeMap<i32, f64>>,
}

pub fn reference_trend(
    corpus: &Corpus,
    grouping: &BTreeMap<String, String>,
    year_range: YearInterval,
    window_length: u32,
) -> Result<TrendReport> {
    if window_length == 0 {
        return Err(Error::InvalidConfig(
            "trend window must be at least 1".into(),
        ));
    }
    let start = corpus.min_pub_year().ok_or(Error::EmptySet)?;
    if year_range.first() < start + window_length as i32 {
        return Err(Error::InvalidConfig(format!(
            "trend years starting {} need {} lookback years but the corpus starts in {}",
            year_range.first(),
            window_length,
            start
        )));
    }
    let spec = WindowSpec::Fixed(window_length);
    let mut series: BTreeMap<String, BTreeMap<i32, f64>> = BTreeMap::new();
    for year in year_range.years() {
        let window = reference_interval(spec, year);
        let mut per_group: BTreeMap<String, (usize, usize)> = BTreeMap::new();
        for paper in corpus.analyzed_in_year(year) {
            if let Some(group) = grouping.get(&paper.paper_id) {
                let entry = per_group.entry(group.clone()).or_insert((0, 0));
                entry.0 += paper.linked_reference_count(window);
                entry.1 += 1;
            }
        }
        for (group, (total, count)) in per_group {
            series
                .entry(group)
                .or_default()
                .insert(year, total as f64 / count as f64);
        }
    }
    Ok(TrendReport {
        window_length,
        series,
    })
}
