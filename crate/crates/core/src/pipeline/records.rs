//! Raw input records and their CSV readers.
//!
//! Every reader takes a `label` (usually the file path) that is echoed in
//! parse errors together with the 1-based line number.

use std::io::Read;

use chrono::{DateTime, NaiveDate, NaiveDateTime};

use crate::error::{Error, Result};
use crate::regress::EventKind;

/// A measurement timestamp in local civil time, with the UTC offset when the
/// source provided one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalStamp {
    pub civil: NaiveDateTime,
    /// Offset east of UTC in seconds.
    pub offset_secs: Option<i32>,
}

impl LocalStamp {
    pub fn naive(civil: NaiveDateTime) -> Self {
        Self {
            civil,
            offset_secs: None,
        }
    }

    /// Parses ISO-8601 local time, with or without a UTC offset.
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
            return Some(Self {
                civil: dt.naive_local(),
                offset_secs: Some(dt.offset().local_minus_utc()),
            });
        }
        if let Ok(dt) = DateTime::parse_from_str(s, "%Y-%m-%d %H:%M:%S%:z") {
            return Some(Self {
                civil: dt.naive_local(),
                offset_secs: Some(dt.offset().local_minus_utc()),
            });
        }
        const FORMATS: [&str; 4] = [
            "%Y-%m-%dT%H:%M:%S",
            "%Y-%m-%d %H:%M:%S",
            "%Y-%m-%dT%H:%M",
            "%Y-%m-%d %H:%M",
        ];
        FORMATS
            .iter()
            .find_map(|f| NaiveDateTime::parse_from_str(s, f).ok())
            .map(Self::naive)
    }
}

/// One average-power reading of one entity.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    pub entity_id: String,
    pub timestamp: LocalStamp,
    pub power_kw: f64,
}

/// Aggregated contractual characteristics of an entity over a date range.
#[derive(Debug, Clone, PartialEq)]
pub struct ContractSnapshot {
    pub entity_id: String,
    pub start: NaiveDate,
    pub end: NaiveDate,
    pub contract_kw: f64,
    pub frac_residential: f64,
    pub frac_public_lighting: f64,
    pub generation_kw: f64,
    pub frac_pv: f64,
}

/// One station's hourly weather observation; every variable is optional.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WeatherReading {
    pub station_id: String,
    pub timestamp: NaiveDateTime,
    pub temperature_c: Option<f64>,
    pub relative_humidity: Option<f64>,
    pub radiation: Option<f64>,
    pub rainfall: Option<f64>,
    pub wind_speed: Option<f64>,
}

impl WeatherReading {
    pub fn values(&self) -> [Option<f64>; 5] {
        [
            self.temperature_c,
            self.relative_humidity,
            self.radiation,
            self.rainfall,
            self.wind_speed,
        ]
    }

    pub fn from_values(station_id: &str, timestamp: NaiveDateTime, v: [Option<f64>; 5]) -> Self {
        Self {
            station_id: station_id.to_string(),
            timestamp,
            temperature_c: v[0],
            relative_humidity: v[1],
            radiation: v[2],
            rainfall: v[3],
            wind_speed: v[4],
        }
    }
}

/// An inclusive date range during which an event is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EventRange {
    pub kind: EventKind,
    pub start: NaiveDate,
    pub end: NaiveDate,
}

impl EventRange {
    pub fn contains(&self, date: NaiveDate) -> bool {
        self.start <= date && date <= self.end
    }
}

struct Rows<'a> {
    label: &'a str,
    reader: csv::Reader<Box<dyn Read + 'a>>,
}

impl<'a> Rows<'a> {
    fn open(label: &'a str, input: impl Read + 'a, expected: &[&str]) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(Box::new(input) as Box<dyn Read + 'a>);
        let headers = reader.headers().map_err(|e| Error::Parse {
            file: label.to_string(),
            line: 1,
            message: e.to_string(),
        })?;
        let got: Vec<&str> = headers.iter().collect();
        if got.is_empty() || (got.len() == 1 && got[0].is_empty()) {
            // empty file
        } else if got != expected {
            return Err(Error::Parse {
                file: label.to_string(),
                line: 1,
                message: format!("expected header `{}`, got `{}`", expected.join(","), got.join(",")),
            });
        }
        Ok(Self { label, reader })
    }

    fn for_each(mut self, width: usize, mut f: impl FnMut(&Fields) -> Result<()>) -> Result<()> {
        let mut record = csv::StringRecord::new();
        loop {
            let line = self.reader.position().line() as usize;
            let more = self.reader.read_record(&mut record).map_err(|e| Error::Parse {
                file: self.label.to_string(),
                line: e.position().map_or(line, |p| p.line() as usize),
                message: e.to_string(),
            })?;
            if !more {
                return Ok(());
            }
            let line = record.position().map_or(line, |p| p.line() as usize);
            if record.len() == 1 && record[0].is_empty() {
                continue;
            }
            if record.len() != width {
                return Err(Error::Parse {
                    file: self.label.to_string(),
                    line,
                    message: format!("expected {width} fields, got {}", record.len()),
                });
            }
            f(&Fields {
                label: self.label,
                line,
                record: &record,
            })?;
        }
    }
}

struct Fields<'a> {
    label: &'a str,
    line: usize,
    record: &'a csv::StringRecord,
}

impl Fields<'_> {
    fn err(&self, message: String) -> Error {
        Error::Parse {
            file: self.label.to_string(),
            line: self.line,
            message,
        }
    }

    fn str(&self, i: usize) -> &str {
        &self.record[i]
    }

    fn f64(&self, i: usize, name: &str) -> Result<f64> {
        let v: f64 = self
            .str(i)
            .parse()
            .map_err(|_| self.err(format!("invalid {name} `{}`", self.str(i))))?;
        if !v.is_finite() {
            return Err(self.err(format!("non-finite {name}")));
        }
        Ok(v)
    }

    fn opt_f64(&self, i: usize, name: &str) -> Result<Option<f64>> {
        let s = self.str(i);
        if s.is_empty() || s.eq_ignore_ascii_case("na") || s.eq_ignore_ascii_case("nan") {
            Ok(None)
        } else {
            self.f64(i, name).map(Some)
        }
    }

    fn fraction(&self, i: usize, name: &str) -> Result<f64> {
        let v = self.f64(i, name)?;
        if !(0.0..=1.0).contains(&v) {
            return Err(self.err(format!("{name} {v} outside [0, 1]")));
        }
        Ok(v)
    }

    fn date(&self, i: usize, name: &str) -> Result<NaiveDate> {
        NaiveDate::parse_from_str(self.str(i), "%Y-%m-%d")
            .map_err(|_| self.err(format!("invalid {name} `{}`", self.str(i))))
    }

    fn stamp(&self, i: usize) -> Result<LocalStamp> {
        LocalStamp::parse(self.str(i))
            .ok_or_else(|| self.err(format!("invalid timestamp `{}`", self.str(i))))
    }

    fn nonempty(&self, i: usize, name: &str) -> Result<String> {
        let s = self.str(i);
        if s.is_empty() {
            return Err(self.err(format!("empty {name}")));
        }
        Ok(s.to_string())
    }
}

pub const MEASUREMENT_HEADER: [&str; 3] = ["entity_id", "timestamp", "power_kw"];
pub const CONTRACT_HEADER: [&str; 8] = [
    "entity_id",
    "start_date",
    "end_date",
    "contract_kw",
    "frac_res",
    "frac_plt",
    "gen_kw",
    "frac_pv",
];
pub const WEATHER_HEADER: [&str; 7] = [
    "station_id",
    "timestamp",
    "temp_c",
    "rh_pct",
    "radiation",
    "rainfall",
    "wind",
];
pub const EVENT_HEADER: [&str; 3] = ["event_name", "start_date", "end_date"];

/// Reads `entity_id,timestamp,power_kw` rows.
pub fn read_measurements(label: &str, input: impl Read) -> Result<Vec<MeasurementRecord>> {
    let mut out = Vec::new();
    Rows::open(label, input, &MEASUREMENT_HEADER)?.for_each(3, |f| {
        out.push(MeasurementRecord {
            entity_id: f.nonempty(0, "entity_id")?,
            timestamp: f.stamp(1)?,
            power_kw: f.f64(2, "power_kw")?,
        });
        Ok(())
    })?;
    Ok(out)
}

/// Reads `entity_id,start_date,end_date,contract_kw,frac_res,frac_plt,gen_kw,frac_pv` rows.
pub fn read_contracts(label: &str, input: impl Read) -> Result<Vec<ContractSnapshot>> {
    let mut out = Vec::new();
    Rows::open(label, input, &CONTRACT_HEADER)?.for_each(8, |f| {
        let start = f.date(1, "start_date")?;
        let end = f.date(2, "end_date")?;
        if end < start {
            return Err(f.err(format!("end_date {end} before start_date {start}")));
        }
        out.push(ContractSnapshot {
            entity_id: f.nonempty(0, "entity_id")?,
            start,
            end,
            contract_kw: f.f64(3, "contract_kw")?,
            frac_residential: f.fraction(4, "frac_res")?,
            frac_public_lighting: f.fraction(5, "frac_plt")?,
            generation_kw: f.f64(6, "gen_kw")?,
            frac_pv: f.fraction(7, "frac_pv")?,
        });
        Ok(())
    })?;
    Ok(out)
}

/// Reads `station_id,timestamp,temp_c,rh_pct,radiation,rainfall,wind` rows.
/// Empty or `NA` fields are missing values.
pub fn read_weather(label: &str, input: impl Read) -> Result<Vec<WeatherReading>> {
    let mut out = Vec::new();
    Rows::open(label, input, &WEATHER_HEADER)?.for_each(7, |f| {
        let rh = f.opt_f64(3, "rh_pct")?;
        if let Some(h) = rh {
            if !(0.0..=100.0).contains(&h) {
                return Err(f.err(format!("rh_pct {h} outside [0, 100]")));
            }
        }
        out.push(WeatherReading {
            station_id: f.nonempty(0, "station_id")?,
            timestamp: f.stamp(1)?.civil,
            temperature_c: f.opt_f64(2, "temp_c")?,
            relative_humidity: rh,
            radiation: f.opt_f64(4, "radiation")?,
            rainfall: f.opt_f64(5, "rainfall")?,
            wind_speed: f.opt_f64(6, "wind")?,
        });
        Ok(())
    })?;
    Ok(out)
}

/// Reads `event_name,start_date,end_date` rows (dates inclusive).
pub fn read_events(label: &str, input: impl Read) -> Result<Vec<EventRange>> {
    let mut out = Vec::new();
    Rows::open(label, input, &EVENT_HEADER)?.for_each(3, |f| {
        let kind = EventKind::parse(f.str(0))
            .ok_or_else(|| f.err(format!("unknown event `{}`", f.str(0))))?;
        let start = f.date(1, "start_date")?;
        let end = f.date(2, "end_date")?;
        if end < start {
            return Err(f.err(format!("end_date {end} before start_date {start}")));
        }
        out.push(EventRange { kind, start, end });
        Ok(())
    })?;
    Ok(out)
}
