use chrono::NaiveDate;

use super::records::EventRange;
use crate::regress::DayDescriptor;

/// Calendar descriptors for `dates`, with `calendar_time` counted from `origin`.
pub fn build_day_descriptors(
    dates: &[NaiveDate],
    events: &[EventRange],
    origin: NaiveDate,
) -> Vec<DayDescriptor> {
    dates
        .iter()
        .map(|d| {
            let mut flags = [false; 3];
            for e in events.iter().filter(|e| e.contains(*d)) {
                flags[e.kind.index()] = true;
            }
            DayDescriptor::new(*d, origin, flags)
        })
        .collect()
}
