//! Contract stability: a characteristic is stable when its range stays below
//! a tenth of its average.

use chrono::NaiveDate;

use super::records::ContractSnapshot;
use crate::error::{Error, Result};

/// `max(x) - min(x) < 0.1 * avg(x)`.
pub fn stability_check(series: &[f64]) -> Result<bool> {
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    let avg = series.iter().sum::<f64>() / series.len() as f64;
    if avg == 0.0 {
        return Err(Error::ZeroAverage);
    }
    let (lo, hi) = series
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)));
    Ok(hi - lo < 0.1 * avg)
}

/// Names of the five characteristics checked by [`entity_stability`].
pub const CHARACTERISTICS: [&str; 5] = [
    "contract_kw",
    "frac_res",
    "frac_plt",
    "gen_kw",
    "frac_pv",
];

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityOutcome {
    pub stable: bool,
    /// Characteristics that failed the check.
    pub unstable: Vec<&'static str>,
}

/// Checks all five contractual characteristics over the snapshots overlapping
/// `[from, to]`. A characteristic that is identically zero (no generation, for
/// instance) is constant and therefore stable.
pub fn entity_stability(
    snapshots: &[ContractSnapshot],
    from: NaiveDate,
    to: NaiveDate,
) -> Result<StabilityOutcome> {
    let window: Vec<&ContractSnapshot> = snapshots
        .iter()
        .filter(|s| s.start <= to && s.end >= from)
        .collect();
    if window.is_empty() {
        return Err(Error::EmptySeries);
    }
    let getters: [fn(&ContractSnapshot) -> f64; 5] = [
        |s| s.contract_kw,
        |s| s.frac_residential,
        |s| s.frac_public_lighting,
        |s| s.generation_kw,
        |s| s.frac_pv,
    ];
    let mut unstable = Vec::new();
    for (name, get) in CHARACTERISTICS.iter().zip(getters) {
        let series: Vec<f64> = window.iter().map(|s| get(s)).collect();
        let ok = if series.iter().all(|v| *v == 0.0) {
            true
        } else {
            stability_check(&series)?
        };
        if !ok {
            unstable.push(*name);
        }
    }
    Ok(StabilityOutcome {
        stable: unstable.is_empty(),
        unstable,
    })
}
