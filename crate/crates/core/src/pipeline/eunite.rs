//! Reader for the load-competition file layout: one row per day, a date
//! (either `Y,M,D` columns or a single ISO or `M/D/Y` date) followed by 48
//! half-hourly values, or 24 or 12 already-aggregated ones.
//!
//! Fields may be separated by commas, semicolons, tabs or spaces. Lines whose
//! first field is not a number or a date are treated as headers and skipped.

use std::io::{BufRead, BufReader, Read};

use chrono::NaiveDate;

use crate::curves::{CurveSet, DailyCurve, TimeGrid};
use crate::error::{Error, Result};

pub const EUNITE_ENTITY: &str = "EUNITE";

fn parse_date(s: &str) -> Option<NaiveDate> {
    ["%Y-%m-%d", "%m/%d/%Y", "%d.%m.%Y", "%Y%m%d"]
        .iter()
        .find_map(|f| NaiveDate::parse_from_str(s, f).ok())
}

/// Reads daily rows and block-averages them onto `grid_points` equal slots
/// (which must divide the number of values per row).
pub fn read_eunite(label: &str, input: impl Read, grid_points: usize) -> Result<CurveSet> {
    let grid = TimeGrid::uniform(grid_points)?;
    let mut curves = Vec::new();
    for (i, line) in BufReader::new(input).lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let err = |message: String| Error::Parse {
            file: label.to_string(),
            line: lineno,
            message,
        };
        let fields: Vec<&str> = line
            .split([',', ';', '\t', ' '])
            .map(str::trim)
            .filter(|f| !f.is_empty())
            .collect();
        if fields.is_empty() {
            continue;
        }
        let (date, values) = if let Some(d) = parse_date(fields[0]) {
            (d, &fields[1..])
        } else if fields[0].parse::<f64>().is_ok() {
            if fields.len() < 3 {
                return Err(err("expected year, month, day".into()));
            }
            let num = |s: &str| s.parse::<f64>().ok().filter(|v| v.fract() == 0.0);
            let (y, m, d) = match (num(fields[0]), num(fields[1]), num(fields[2])) {
                (Some(y), Some(m), Some(d)) => (y as i32, m as u32, d as u32),
                _ => return Err(err("invalid year, month, day".into())),
            };
            let date = NaiveDate::from_ymd_opt(y, m, d)
                .ok_or_else(|| err(format!("invalid date {y}-{m}-{d}")))?;
            (date, &fields[3..])
        } else {
            continue;
        };
        let values: Vec<f64> = values
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| err(format!("invalid load value `{s}`")))
            })
            .collect::<Result<_>>()?;
        if values.is_empty() || values.len() % grid_points != 0 {
            return Err(err(format!(
                "{} values do not fit a {grid_points}-point grid",
                values.len()
            )));
        }
        let block = values.len() / grid_points;
        let averaged = values
            .chunks(block)
            .map(|c| c.iter().sum::<f64>() / block as f64)
            .collect();
        curves.push(DailyCurve::new(EUNITE_ENTITY, date, averaged));
    }
    CurveSet::new(grid, EUNITE_ENTITY, curves)
}
