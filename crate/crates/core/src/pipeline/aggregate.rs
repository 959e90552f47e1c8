//! Spatial aggregation of entity curves into regions.

use std::collections::{BTreeMap, BTreeSet};

use chrono::NaiveDate;

use crate::curves::{CurveSet, DailyCurve};
use crate::error::{Error, Result};

/// Sums member curves per region over the dates every member has.
///
/// Entities absent from `mapping` are ignored; regions are returned sorted by
/// name. Inputs must be in physical units (not normalized).
pub fn aggregate_spatial(
    sets: &[CurveSet],
    mapping: &BTreeMap<String, String>,
) -> Result<Vec<CurveSet>> {
    let mut members: BTreeMap<&str, Vec<&CurveSet>> = BTreeMap::new();
    for s in sets {
        if let Some(region) = mapping.get(s.entity_id()) {
            members.entry(region.as_str()).or_default().push(s);
        }
    }
    let mut out = Vec::new();
    for (region, group) in members {
        let grid = group[0].grid();
        for s in &group {
            if s.grid() != grid {
                return Err(Error::GridMismatch {
                    expected: grid.len(),
                    got: s.grid().len(),
                });
            }
            if s.scale().is_some() {
                return Err(Error::InvalidCurve(format!(
                    "entity {} is normalized; aggregate raw curves",
                    s.entity_id()
                )));
            }
        }
        let mut common: BTreeSet<NaiveDate> = group[0].dates().into_iter().collect();
        for s in &group[1..] {
            let dates: BTreeSet<NaiveDate> = s.dates().into_iter().collect();
            common = common.intersection(&dates).copied().collect();
        }
        let curves = common
            .iter()
            .map(|date| {
                let mut values = vec![0.0; grid.len()];
                for s in &group {
                    let c = s.get(*date).expect("date in intersection");
                    for (acc, v) in values.iter_mut().zip(&c.values) {
                        *acc += v;
                    }
                }
                DailyCurve::new(region, *date, values)
            })
            .collect();
        out.push(CurveSet::new(grid.clone(), region, curves)?);
    }
    Ok(out)
}
