//! Synthetic substations with planted weekly and seasonal structure.

#![allow(dead_code)]

use std::fmt::Write as _;
use std::path::Path;

use chrono::{Datelike, Duration, LocalResult, NaiveDate, TimeZone};
use chrono_tz::Europe::Rome;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub struct Substation {
    pub id: &'static str,
    pub base_kw: f64,
    /// Relative winter peak.
    pub winter: f64,
    /// Relative summer (cooling) peak.
    pub summer: f64,
    /// Weekend level relative to weekdays.
    pub weekend: f64,
}

pub const SUBSTATIONS: [Substation; 3] = [
    Substation { id: "S1", base_kw: 820.0, winter: 0.25, summer: 0.10, weekend: 0.80 },
    Substation { id: "S2", base_kw: 450.0, winter: 0.15, summer: 0.30, weekend: 0.65 },
    Substation { id: "S3", base_kw: 1300.0, winter: 0.30, summer: 0.05, weekend: 0.90 },
];

/// Daily shape in [0.5, 1.3]: night trough, morning ramp, evening peak.
fn shape(hour: f64, weekend: bool) -> f64 {
    let g = |c: f64, w: f64| (-(hour - c).powi(2) / (2.0 * w * w)).exp();
    let (m, e) = if weekend { (0.25, 0.45) } else { (0.55, 0.5) };
    0.55 + m * g(10.5, 2.5) + e * g(19.5, 2.0) + 0.1 * g(14.0, 3.0)
}

pub fn load_kw(s: &Substation, date: NaiveDate, hour: f64) -> f64 {
    let doy = date.ordinal0() as f64 / 365.25 * std::f64::consts::TAU;
    let season = 1.0 + s.winter * doy.cos().max(0.0) + s.summer * (-(doy - std::f64::consts::PI).cos()).max(0.0).powi(2);
    let weekend = date.weekday().number_from_monday() >= 6;
    let level = if weekend { s.weekend } else { 1.0 };
    s.base_kw * season * level * shape(hour, weekend)
}

/// Writes a measurements CSV of 15-minute local-time readings for `days`
/// days from `start`, with multiplicative noise and a handful of missing days.
pub fn write_measurements(path: &Path, start: NaiveDate, days: i64, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::from("entity_id,timestamp,power_kw\n");
    for s in &SUBSTATIONS {
        let gaps: Vec<i64> = (0..4).map(|_| rng.gen_range(0..days)).collect();
        for k in 0..days {
            if gaps.contains(&k) {
                continue;
            }
            let date = start + Duration::days(k);
            let day_noise = 1.0 + rng.gen_range(-0.03..0.03);
            for q in 0..96 {
                let civil = date.and_hms_opt(0, 0, 0).unwrap() + Duration::minutes(15 * q);
                let copies = match Rome.from_local_datetime(&civil) {
                    LocalResult::None => 0,
                    LocalResult::Single(_) => 1,
                    LocalResult::Ambiguous(..) => 2,
                };
                for _ in 0..copies {
                    let v = load_kw(s, date, q as f64 / 4.0 + 0.125)
                        * day_noise
                        * (1.0 + rng.gen_range(-0.02..0.02));
                    writeln!(out, "{},{},{:.3}", s.id, civil.format("%Y-%m-%dT%H:%M:%S"), v).unwrap();
                }
            }
        }
    }
    std::fs::write(path, out).unwrap();
}

/// Writes a run configuration pointing at `measurements`.
pub fn write_config(path: &Path, measurements: &Path, output: &Path) {
    let text = format!(
        "grid = 24\n\
         timezone = \"Europe/Rome\"\n\
         train_range = \"2014-01-01..2015-12-31\"\n\
         test_range = \"2016-01-01..2016-12-31\"\n\
         components = 4\n\
         fit_components = 6\n\
         output = \"{}\"\n\
         \n\
         [input]\n\
         measurements = \"{}\"\n",
        output.display(),
        measurements.display()
    );
    std::fs::write(path, text).unwrap();
}
