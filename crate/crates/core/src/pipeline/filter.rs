//! Three-step day and entity filter: incomplete days, corrupted days, minimum span.

use std::collections::BTreeSet;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use super::population::CorruptionRule;
use super::report::{DropEntry, DropReason, DropReport};
use super::resample::DayCompleteness;
use crate::curves::CurveSet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterThresholds {
    /// Entity dropped when incomplete days exceed this share of calendar days.
    pub max_incomplete_fraction: f64,
    /// Entity dropped when corrupted days exceed this share of calendar days.
    pub max_corrupted_fraction: f64,
    /// Entity dropped when fewer days survive.
    pub min_days: usize,
}

impl Default for FilterThresholds {
    fn default() -> Self {
        Self {
            max_incomplete_fraction: 0.2,
            max_corrupted_fraction: 0.1,
            min_days: 1095,
        }
    }
}

#[derive(Debug, Clone)]
pub struct FilterOutcome {
    pub curves: CurveSet,
    pub report: DropReport,
    /// Calendar days between first and last observation, inclusive.
    pub available_days: usize,
    pub incomplete_days: usize,
    pub corrupted_days: usize,
}

impl FilterOutcome {
    pub fn entity_kept(&self) -> bool {
        !self.report.entity_dropped(self.curves.entity_id())
    }
}

fn span_days(dates: impl Iterator<Item = NaiveDate> + Clone) -> usize {
    match (dates.clone().min(), dates.max()) {
        (Some(a), Some(b)) => ((b - a).num_days() + 1) as usize,
        _ => 0,
    }
}

/// Applies the three filter steps in order.
///
/// 1. Days with fewer filled slots than grid points are dropped; the entity is
///    dropped if they exceed `max_incomplete_fraction` of the available days.
/// 2. Days matching `rule` are dropped; the entity is dropped if they exceed
///    `max_corrupted_fraction` of the available days.
/// 3. The entity is dropped if fewer than `min_days` days remain.
///
/// Available days span the first to the last date seen in `completeness` (or
/// in the set, when `completeness` is empty). Feeding the output back with the
/// same `completeness` drops nothing further.
pub fn filter_days(
    set: &CurveSet,
    completeness: &[DayCompleteness],
    rule: CorruptionRule,
    thresholds: &FilterThresholds,
) -> FilterOutcome {
    let entity = set.entity_id().to_string();
    let m = set.grid().len();
    let available = if completeness.is_empty() {
        span_days(set.curves().iter().map(|c| c.date))
    } else {
        span_days(completeness.iter().map(|c| c.date))
    };
    let mut entries = Vec::new();
    let entity_drop = |reason, detail: String| DropEntry {
        entity_id: entity.clone(),
        date: None,
        reason,
        detail,
    };
    let empty = set.filter_dates(|_| false);

    // (i) incomplete days
    let incomplete: BTreeSet<NaiveDate> = completeness
        .iter()
        .filter(|c| !c.is_complete(m))
        .map(|c| c.date)
        .collect();
    let n_incomplete = incomplete.len();
    if n_incomplete as f64 > thresholds.max_incomplete_fraction * available as f64 {
        entries.push(entity_drop(
            DropReason::TooManyIncompleteDays,
            format!("{n_incomplete} of {available} days incomplete"),
        ));
        return FilterOutcome {
            curves: empty,
            report: DropReport::new(entries),
            available_days: available,
            incomplete_days: n_incomplete,
            corrupted_days: 0,
        };
    }
    for c in completeness.iter().filter(|c| !c.is_complete(m)) {
        entries.push(DropEntry {
            entity_id: entity.clone(),
            date: Some(c.date),
            reason: DropReason::IncompleteDay,
            detail: format!("{} of {m} slots filled", c.filled_slots),
        });
    }
    let step1 = set.filter_dates(|d| !incomplete.contains(&d));

    // (ii) corrupted days
    let corrupted: BTreeSet<NaiveDate> = step1
        .curves()
        .iter()
        .filter(|c| rule.is_corrupted(&c.values))
        .map(|c| c.date)
        .collect();
    let n_corrupted = corrupted.len();
    if n_corrupted as f64 > thresholds.max_corrupted_fraction * available as f64 {
        entries.push(entity_drop(
            DropReason::TooManyCorruptedDays,
            format!("{n_corrupted} of {available} days corrupted"),
        ));
        return FilterOutcome {
            curves: empty,
            report: DropReport::new(entries),
            available_days: available,
            incomplete_days: n_incomplete,
            corrupted_days: n_corrupted,
        };
    }
    for d in &corrupted {
        entries.push(DropEntry {
            entity_id: entity.clone(),
            date: Some(*d),
            reason: DropReason::CorruptedDay,
            detail: format!("{rule:?}"),
        });
    }
    let step2 = step1.filter_dates(|d| !corrupted.contains(&d));

    // (iii) minimum number of surviving days
    if step2.len() < thresholds.min_days {
        entries.push(entity_drop(
            DropReason::TooFewDays,
            format!("{} days, need {}", step2.len(), thresholds.min_days),
        ));
        return FilterOutcome {
            curves: empty,
            report: DropReport::new(entries),
            available_days: available,
            incomplete_days: n_incomplete,
            corrupted_days: n_corrupted,
        };
    }
    FilterOutcome {
        curves: step2,
        report: DropReport::new(entries),
        available_days: available,
        incomplete_days: n_incomplete,
        corrupted_days: n_corrupted,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{DailyCurve, TimeGrid};

    fn d0() -> NaiveDate {
        NaiveDate::from_ymd_opt(2014, 1, 1).unwrap()
    }

    /// `n` days of 24 slots; `incomplete` days have 23 slots and no curve.
    fn fixture(
        n: usize,
        incomplete: &[usize],
        corrupt: impl Fn(usize) -> Option<Vec<f64>>,
    ) -> (CurveSet, Vec<DayCompleteness>) {
        let mut curves = Vec::new();
        let mut comp = Vec::new();
        for i in 0..n {
            let date = d0() + chrono::Days::new(i as u64);
            if incomplete.contains(&i) {
                comp.push(DayCompleteness { date, filled_slots: 23, readings: 92 });
                continue;
            }
            comp.push(DayCompleteness { date, filled_slots: 24, readings: 96 });
            let values = corrupt(i).unwrap_or_else(|| vec![5.0; 24]);
            curves.push(DailyCurve::new("S", date, values));
        }
        (CurveSet::new(TimeGrid::hourly(), "S", curves).unwrap(), comp)
    }

    fn small() -> FilterThresholds {
        FilterThresholds { min_days: 1, ..FilterThresholds::default() }
    }

    #[test]
    fn incomplete_fraction_boundary() {
        // 20 of 100 incomplete is allowed, 21 is not.
        let twenty: Vec<usize> = (0..20).map(|i| i * 5).collect();
        let (s, c) = fixture(100, &twenty, |_| None);
        let out = filter_days(&s, &c, CorruptionRule::AnyZeroSample, &small());
        assert!(out.entity_kept());
        assert_eq!(out.curves.len(), 80);
        assert_eq!(out.report.count(DropReason::IncompleteDay), 20);

        let mut more = twenty.clone();
        more.push(1);
        let (s, c) = fixture(100, &more, |_| None);
        let out = filter_days(&s, &c, CorruptionRule::AnyZeroSample, &small());
        assert!(!out.entity_kept());
        assert!(out.curves.is_empty());
        assert_eq!(out.report.len(), 1);
        assert_eq!(out.report.entries()[0].reason, DropReason::TooManyIncompleteDays);
    }

    #[test]
    fn corrupted_fraction_boundary() {
        let zero_day = |k: usize| {
            move |i: usize| {
                (i < k).then(|| {
                    let mut v = vec![5.0; 24];
                    v[12] = 0.0;
                    v
                })
            }
        };
        let (s, c) = fixture(100, &[], zero_day(10));
        let out = filter_days(&s, &c, CorruptionRule::AnyZeroSample, &small());
        assert!(out.entity_kept());
        assert_eq!(out.curves.len(), 90);
        assert_eq!(out.report.count(DropReason::CorruptedDay), 10);

        let (s, c) = fixture(100, &[], zero_day(11));
        let out = filter_days(&s, &c, CorruptionRule::AnyZeroSample, &small());
        assert!(!out.entity_kept());
        assert_eq!(out.report.entries()[0].reason, DropReason::TooManyCorruptedDays);
    }

    #[test]
    fn res_vs_plt_corruption_rules() {
        let midday_zero = |i: usize| {
            (i == 3).then(|| {
                let mut v = vec![4.0; 24];
                v[12] = 0.0;
                v
            })
        };
        let (s, c) = fixture(30, &[], midday_zero);
        let res = filter_days(&s, &c, CorruptionRule::AnyZeroSample, &small());
        assert_eq!(res.curves.len(), 29);
        assert!(res.curves.get(d0() + chrono::Days::new(3)).is_none());

        let daytime_dark = |i: usize| {
            (i == 3).then(|| (0..24).map(|h| if (7..19).contains(&h) { 0.0 } else { 3.0 }).collect())
        };
        let (s, c) = fixture(30, &[], daytime_dark);
        let plt = filter_days(&s, &c, CorruptionRule::AllDayZero, &small());
        assert_eq!(plt.curves.len(), 30);
        let all_zero = |i: usize| (i == 3).then(|| vec![0.0; 24]);
        let (s, c) = fixture(30, &[], all_zero);
        let plt = filter_days(&s, &c, CorruptionRule::AllDayZero, &small());
        assert_eq!(plt.curves.len(), 29);
    }

    #[test]
    fn minimum_days_boundary() {
        let t = FilterThresholds::default();
        let (s, c) = fixture(1095, &[], |_| None);
        assert!(filter_days(&s, &c, CorruptionRule::AnyZeroSample, &t).entity_kept());
        let (s, c) = fixture(1094, &[], |_| None);
        let out = filter_days(&s, &c, CorruptionRule::AnyZeroSample, &t);
        assert!(!out.entity_kept());
        assert_eq!(out.report.entries()[0].reason, DropReason::TooFewDays);
    }

    #[test]
    fn idempotent() {
        let (s, c) = fixture(200, &[4, 50, 51], |i| (i % 40 == 7).then(|| vec![0.0; 24]));
        let t = small();
        let first = filter_days(&s, &c, CorruptionRule::AnyZeroSample, &t);
        let second = filter_days(&first.curves, &c, CorruptionRule::AnyZeroSample, &t);
        assert_eq!(first.curves, second.curves);
        assert_eq!(second.report.count(DropReason::CorruptedDay), 0);
    }
}
