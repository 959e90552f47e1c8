//! Resampling raw readings onto the analysis grid.

use std::collections::{BTreeMap, HashMap};

use chrono::{LocalResult, NaiveDate, TimeZone, Timelike};
use chrono_tz::Tz;

use super::records::{LocalStamp, MeasurementRecord};
use super::report::{DropEntry, DropReason};
use crate::curves::{CurveSet, DailyCurve, TimeGrid};
use crate::error::Result;

/// Slot coverage of one calendar day.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DayCompleteness {
    pub date: NaiveDate,
    /// Grid slots holding at least one reading.
    pub filled_slots: usize,
    /// Raw readings accepted for the day.
    pub readings: usize,
}

impl DayCompleteness {
    pub fn is_complete(&self, grid_points: usize) -> bool {
        self.filled_slots >= grid_points
    }
}

/// Output of [`resample_to_grid`].
#[derive(Debug, Clone)]
pub struct Resampled {
    /// Complete days only.
    pub curves: CurveSet,
    /// One entry per calendar day from the first to the last observation.
    pub completeness: Vec<DayCompleteness>,
    /// Records that were rejected, with their reason.
    pub dropped: Vec<DropEntry>,
}

fn hour_of_day(stamp: &LocalStamp) -> f64 {
    let t = stamp.civil.time();
    t.hour() as f64 + t.minute() as f64 / 60.0 + t.second() as f64 / 3600.0
}

/// Averages one entity's readings into grid slots `[t_j, t_{j+1})` of local civil time.
///
/// Timestamps without an offset are checked against `tz`: readings in a
/// spring-forward gap are rejected, and each civil instant may occur at most
/// once (twice inside the repeated fall-back hour). Surplus duplicates are
/// rejected as ambiguous. Readings carrying an explicit offset are unique per
/// (civil time, offset). A day is complete when every slot holds a reading;
/// incomplete days appear in `completeness` but not in `curves`.
pub fn resample_to_grid(
    entity_id: &str,
    records: &[MeasurementRecord],
    grid: &TimeGrid,
    tz: Tz,
) -> Result<Resampled> {
    let mut sorted: Vec<&MeasurementRecord> = records.iter().collect();
    sorted.sort_by_key(|r| r.timestamp);

    let mut seen: HashMap<LocalStamp, usize> = HashMap::new();
    let mut slots: BTreeMap<NaiveDate, Vec<(f64, usize)>> = BTreeMap::new();
    let mut readings: BTreeMap<NaiveDate, usize> = BTreeMap::new();
    let mut dropped = Vec::new();
    let m = grid.len();

    for r in sorted {
        let date = r.timestamp.civil.date();
        let reject = |reason, detail: String| DropEntry {
            entity_id: entity_id.to_string(),
            date: Some(date),
            reason,
            detail,
        };
        let allowed = match r.timestamp.offset_secs {
            Some(_) => 1,
            None => match tz.from_local_datetime(&r.timestamp.civil) {
                LocalResult::None => {
                    dropped.push(reject(
                        DropReason::NonexistentLocalTime,
                        r.timestamp.civil.to_string(),
                    ));
                    continue;
                }
                LocalResult::Single(_) => 1,
                LocalResult::Ambiguous(_, _) => 2,
            },
        };
        let count = seen.entry(r.timestamp).or_insert(0);
        *count += 1;
        if *count > allowed {
            dropped.push(reject(
                DropReason::AmbiguousTimestamp,
                r.timestamp.civil.to_string(),
            ));
            continue;
        }
        let Some(slot) = grid.slot_of(hour_of_day(&r.timestamp)) else {
            dropped.push(reject(DropReason::OffGrid, r.timestamp.civil.to_string()));
            continue;
        };
        let day = slots.entry(date).or_insert_with(|| vec![(0.0, 0); m]);
        day[slot].0 += r.power_kw;
        day[slot].1 += 1;
        *readings.entry(date).or_insert(0) += 1;
    }

    let mut completeness = Vec::new();
    let mut curves = Vec::new();
    if let (Some(first), Some(last)) = (
        slots.keys().next().copied(),
        slots.keys().next_back().copied(),
    ) {
        for date in first.iter_days().take_while(|d| *d <= last) {
            match slots.get(&date) {
                Some(day) => {
                    let filled = day.iter().filter(|(_, c)| *c > 0).count();
                    completeness.push(DayCompleteness {
                        date,
                        filled_slots: filled,
                        readings: readings[&date],
                    });
                    if filled == m {
                        let values = day.iter().map(|(s, c)| s / *c as f64).collect();
                        curves.push(DailyCurve::new(entity_id, date, values));
                    }
                }
                None => completeness.push(DayCompleteness {
                    date,
                    filled_slots: 0,
                    readings: 0,
                }),
            }
        }
    }
    Ok(Resampled {
        curves: CurveSet::new(grid.clone(), entity_id, curves)?,
        completeness,
        dropped,
    })
}
