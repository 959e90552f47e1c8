//! City-level weather from station readings.

use std::collections::BTreeMap;

use chrono::{NaiveDate, NaiveDateTime};

use super::records::WeatherReading;

/// Station id given to averaged readings.
pub const CITY_STATION: &str = "CITY";

#[derive(Debug, Clone, PartialEq)]
pub struct AveragedWeather {
    pub series: Vec<WeatherReading>,
    /// Timestamps at which no station reported any variable.
    pub gaps: Vec<NaiveDateTime>,
}

/// Unweighted per-variable mean over the stations reporting each variable.
pub fn average_weather(readings: &[WeatherReading]) -> AveragedWeather {
    let mut by_time: BTreeMap<NaiveDateTime, [(f64, usize); 5]> = BTreeMap::new();
    for r in readings {
        let acc = by_time.entry(r.timestamp).or_insert([(0.0, 0); 5]);
        for (slot, v) in acc.iter_mut().zip(r.values()) {
            if let Some(v) = v {
                slot.0 += v;
                slot.1 += 1;
            }
        }
    }
    let mut series = Vec::new();
    let mut gaps = Vec::new();
    for (ts, acc) in by_time {
        if acc.iter().all(|(_, n)| *n == 0) {
            gaps.push(ts);
            continue;
        }
        let values = acc.map(|(s, n)| (n > 0).then(|| s / n as f64));
        series.push(WeatherReading::from_values(CITY_STATION, ts, values));
    }
    AveragedWeather { series, gaps }
}

/// Daily mean temperature and relative humidity.
pub fn daily_temperature_humidity(
    series: &[WeatherReading],
) -> BTreeMap<NaiveDate, (Option<f64>, Option<f64>)> {
    let mut acc: BTreeMap<NaiveDate, [(f64, usize); 2]> = BTreeMap::new();
    for r in series {
        let e = acc.entry(r.timestamp.date()).or_insert([(0.0, 0); 2]);
        for (slot, v) in e.iter_mut().zip([r.temperature_c, r.relative_humidity]) {
            if let Some(v) = v {
                slot.0 += v;
                slot.1 += 1;
            }
        }
    }
    acc.into_iter()
        .map(|(d, [t, h])| {
            let mean = |(s, n): (f64, usize)| (n > 0).then(|| s / n as f64);
            (d, (mean(t), mean(h)))
        })
        .collect()
}
