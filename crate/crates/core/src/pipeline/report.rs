//! Machine-readable record of everything the pipeline discards.

use std::fmt;

use chrono::NaiveDate;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DropReason {
    /// Reading in the spring-forward gap of the local time zone.
    NonexistentLocalTime,
    /// Repeated civil timestamp that DST cannot explain.
    AmbiguousTimestamp,
    /// Reading before the first grid point.
    OffGrid,
    /// Day with fewer filled slots than grid points.
    IncompleteDay,
    /// Day matching the population's corruption rule.
    CorruptedDay,
    /// Entity with more than the allowed share of incomplete days.
    TooManyIncompleteDays,
    /// Entity with more than the allowed share of corrupted days.
    TooManyCorruptedDays,
    /// Entity left with fewer than the minimum number of days.
    TooFewDays,
    /// Entity whose contractual characteristics are not stable.
    UnstableContract,
    /// Entity matching no population rule.
    Unclassified,
}

impl DropReason {
    pub fn code(self) -> &'static str {
        match self {
            DropReason::NonexistentLocalTime => "nonexistent_local_time",
            DropReason::AmbiguousTimestamp => "ambiguous_timestamp",
            DropReason::OffGrid => "off_grid",
            DropReason::IncompleteDay => "incomplete_day",
            DropReason::CorruptedDay => "corrupted_day",
            DropReason::TooManyIncompleteDays => "too_many_incomplete_days",
            DropReason::TooManyCorruptedDays => "too_many_corrupted_days",
            DropReason::TooFewDays => "too_few_days",
            DropReason::UnstableContract => "unstable_contract",
            DropReason::Unclassified => "unclassified",
        }
    }
}

impl fmt::Display for DropReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// One dropped record, day (`date` set) or entity (`date` unset).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DropEntry {
    pub entity_id: String,
    pub date: Option<NaiveDate>,
    pub reason: DropReason,
    pub detail: String,
}

/// Drop entries sorted by entity, then date (entity-level entries first).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DropReport {
    entries: Vec<DropEntry>,
}

impl DropReport {
    pub fn new(mut entries: Vec<DropEntry>) -> Self {
        Self::sort(&mut entries);
        Self { entries }
    }

    fn sort(entries: &mut [DropEntry]) {
        entries.sort_by(|a, b| {
            (&a.entity_id, a.date, a.reason, &a.detail).cmp(&(&b.entity_id, b.date, b.reason, &b.detail))
        });
    }

    pub fn push(&mut self, entry: DropEntry) {
        self.entries.push(entry);
        Self::sort(&mut self.entries);
    }

    pub fn merge(&mut self, other: DropReport) {
        self.entries.extend(other.entries);
        Self::sort(&mut self.entries);
    }

    pub fn entries(&self) -> &[DropEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn count(&self, reason: DropReason) -> usize {
        self.entries.iter().filter(|e| e.reason == reason).count()
    }

    /// Whether the entity itself (not just some of its days) was dropped.
    pub fn entity_dropped(&self, entity_id: &str) -> bool {
        self.entries
            .iter()
            .any(|e| e.entity_id == entity_id && e.date.is_none())
    }
}
