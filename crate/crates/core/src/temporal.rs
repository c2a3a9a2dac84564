//! Line lifetimes, commissioning and change rates, and underperforming assets.

use std::collections::BTreeMap;

use crate::error::ParameterError;
use crate::ingest::{AssetRecordSet, ChangeKind};

/// Event kinds that end a line's lifetime by default.
pub const MAJOR_CHANGES: [ChangeKind; 4] = [
    ChangeKind::Split,
    ChangeKind::Reroute,
    ChangeKind::VoltageUpgrade,
    ChangeKind::Decommission,
];

pub const DEFAULT_WINDOW: usize = 5;
pub const DEFAULT_UNDERPERFORMER_THRESHOLD: f64 = 0.2;

#[derive(Debug, Clone, PartialEq)]
pub struct LifetimeRecord {
    pub edge_id: String,
    pub year_commissioned: i32,
    pub first_change_year: Option<i32>,
    pub lifetime_years: Option<i32>,
    pub censored: bool,
    /// `dataset_end - year_commissioned`.
    pub max_expected_lifetime: i32,
    /// `lifetime_years / max_expected_lifetime` when both are defined and the
    /// denominator is positive.
    pub survived_ratio: Option<f64>,
}

pub fn line_lifetimes(set: &AssetRecordSet) -> Vec<LifetimeRecord> {
    line_lifetimes_with(set, &MAJOR_CHANGES)
}

/// Lifetimes where the first major change is the earliest event whose kind is
/// in `major`, or the decommissioning year when `major` includes
/// [`ChangeKind::Decommission`].
pub fn line_lifetimes_with(set: &AssetRecordSet, major: &[ChangeKind]) -> Vec<LifetimeRecord> {
    let counts_decommission = major.contains(&ChangeKind::Decommission);
    set.edges
        .iter()
        .map(|e| {
            let first_event = e
                .events
                .iter()
                .filter(|ev| major.contains(&ev.kind))
                .map(|ev| ev.year)
                .min();
            let decommission = e.year_out.filter(|_| counts_decommission);
            let first_change_year = match (first_event, decommission) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
            let lifetime_years = first_change_year.map(|y| y - e.year_in);
            let max_expected_lifetime = set.dataset_end - e.year_in;
            let survived_ratio = lifetime_years
                .filter(|_| max_expected_lifetime > 0)
                .map(|l| l as f64 / max_expected_lifetime as f64);
            LifetimeRecord {
                edge_id: e.edge_id.clone(),
                year_commissioned: e.year_in,
                first_change_year,
                lifetime_years,
                censored: first_change_year.is_none(),
                max_expected_lifetime,
                survived_ratio,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LifetimeByYear {
    pub year: i32,
    pub mean_lifetime: Option<f64>,
    /// Records that contributed to the mean.
    pub contributing: usize,
}

/// Mean lifetime per commissioning year. Censored records are skipped, or
/// with `include_censored` contribute their maximal expected lifetime as a
/// lower bound.
pub fn average_lifetime_by_year(
    records: &[LifetimeRecord],
    include_censored: bool,
) -> Vec<LifetimeByYear> {
    let mut by_year: BTreeMap<i32, (i64, usize)> = BTreeMap::new();
    for r in records {
        let entry = by_year.entry(r.year_commissioned).or_default();
        let value = match r.lifetime_years {
            Some(l) => Some(l),
            None if include_censored => Some(r.max_expected_lifetime),
            None => None,
        };
        if let Some(v) = value {
            entry.0 += i64::from(v);
            entry.1 += 1;
        }
    }
    by_year
        .into_iter()
        .map(|(year, (sum, count))| LifetimeByYear {
            year,
            mean_lifetime: (count > 0).then(|| sum as f64 / count as f64),
            contributing: count,
        })
        .collect()
}

/// Centered moving average over `window` consecutive entries. The window
/// shrinks at the boundaries and missing values are skipped; an entry is
/// `None` only when its whole window is missing.
pub fn moving_average(
    series: &[Option<f64>],
    window: usize,
) -> Result<Vec<Option<f64>>, ParameterError> {
    if window < 1 {
        return Err(ParameterError::new(
            "moving-average window must be at least 1",
        ));
    }
    if window.is_multiple_of(2) {
        return Err(ParameterError::new(format!(
            "moving-average window must be odd, got {window}"
        )));
    }
    let half = window / 2;
    Ok((0..series.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(series.len() - 1);
            let (sum, count) = series[lo..=hi]
                .iter()
                .flatten()
                .fold((0.0, 0usize), |(s, c), &x| (s + x, c + 1));
            (count > 0).then(|| sum / count as f64)
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChangeRateRow {
    pub year: i32,
    pub lines_in_operation: usize,
    pub new_lines: usize,
    pub decommissions: usize,
    /// Non-decommission change events plus decommissions dated this year.
    pub topological_changes: usize,
    pub new_lines_relative: Option<f64>,
    pub changes_relative: Option<f64>,
    pub new_lines_smoothed: Option<f64>,
    pub changes_smoothed: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChangeRateSeries {
    pub window: usize,
    pub rows: Vec<ChangeRateRow>,
}

/// Per-year commissioning and change counts over the dataset span, normalized
/// by the lines alive that year and smoothed with a centered window.
pub fn annual_change_rates(
    set: &AssetRecordSet,
    window: usize,
) -> Result<ChangeRateSeries, ParameterError> {
    let mut rows: Vec<ChangeRateRow> = set
        .span()
        .map(|year| {
            let mut row = ChangeRateRow {
                year,
                lines_in_operation: 0,
                new_lines: 0,
                decommissions: 0,
                topological_changes: 0,
                new_lines_relative: None,
                changes_relative: None,
                new_lines_smoothed: None,
                changes_smoothed: None,
            };
            for e in &set.edges {
                row.lines_in_operation += usize::from(e.alive_at(year));
                row.new_lines += usize::from(e.year_in == year);
                row.decommissions += usize::from(e.year_out == Some(year));
                row.topological_changes += e
                    .events
                    .iter()
                    .filter(|ev| ev.year == year && ev.kind != ChangeKind::Decommission)
                    .count();
            }
            row.topological_changes += row.decommissions;
            if row.lines_in_operation > 0 {
                let alive = row.lines_in_operation as f64;
                row.new_lines_relative = Some(row.new_lines as f64 / alive);
                row.changes_relative = Some(row.topological_changes as f64 / alive);
            }
            row
        })
        .collect();
    let new: Vec<_> = rows.iter().map(|r| r.new_lines_relative).collect();
    let changes: Vec<_> = rows.iter().map(|r| r.changes_relative).collect();
    let new = moving_average(&new, window)?;
    let changes = moving_average(&changes, window)?;
    for (i, row) in rows.iter_mut().enumerate() {
        row.new_lines_smoothed = new[i];
        row.changes_smoothed = changes[i];
    }
    Ok(ChangeRateSeries { window, rows })
}

/// Uncensored records whose survived ratio is strictly below `threshold`,
/// sorted by commissioning year then edge id.
pub fn underperformers(
    records: &[LifetimeRecord],
    threshold: f64,
) -> Result<Vec<LifetimeRecord>, ParameterError> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(ParameterError::new(format!(
            "underperformer threshold must lie in (0, 1), got {threshold}"
        )));
    }
    let mut out: Vec<LifetimeRecord> = records
        .iter()
        .filter(|r| !r.censored && r.max_expected_lifetime > 0)
        .filter(|r| r.survived_ratio.is_some_and(|x| x < threshold))
        .cloned()
        .collect();
    out.sort_by(|a, b| {
        a.year_commissioned
            .cmp(&b.year_commissioned)
            .then_with(|| a.edge_id.cmp(&b.edge_id))
    });
    Ok(out)
}
