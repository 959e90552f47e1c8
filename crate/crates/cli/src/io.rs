//! CSV table helpers shared by the commands.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use chrono::NaiveDate;
use loadfpca::curves::{CurveSet, DailyCurve, TimeGrid};

use crate::error::{CliError, CliResult};

/// Formats `v` rounded to 12 significant digits, in the shortest decimal form.
pub fn fmt_f64(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() { "NaN".into() } else if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        return "0".into();
    }
    format!("{rounded}")
}

pub struct Table {
    writer: csv::Writer<BufWriter<File>>,
    path: String,
}

impl Table {
    pub fn create(path: &Path, header: &[&str]) -> CliResult<Self> {
        if let Some(dir) = path.parent() {
            std::fs::create_dir_all(dir).map_err(|e| CliError::data(format!("{}: {e}", dir.display())))?;
        }
        let file = File::create(path).map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
        let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(BufWriter::new(file));
        writer.write_record(header)?;
        Ok(Self { writer, path: path.display().to_string() })
    }

    pub fn row<I, S>(&mut self, fields: I) -> CliResult<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields).map_err(|e| CliError::data(format!("{}: {e}", self.path)))
    }

    pub fn finish(mut self) -> CliResult<()> {
        self.writer.flush().map_err(|e| CliError::data(format!("{}: {e}", self.path)))
    }
}

pub const CURVE_HEADER: [&str; 4] = ["entity_id", "date", "time", "power_kw"];

/// Writes curves in long format, one row per (entity, date, grid point).
pub fn write_curves(path: &Path, sets: &[CurveSet]) -> CliResult<()> {
    let mut t = Table::create(path, &CURVE_HEADER)?;
    for set in sets {
        let labels: Vec<String> = (0..set.grid().len()).map(|j| set.grid().label(j)).collect();
        for c in set.curves() {
            let date = c.date.to_string();
            for (label, v) in labels.iter().zip(&c.values) {
                t.row([set.entity_id(), date.as_str(), label.as_str(), fmt_f64(*v).as_str()])?;
            }
        }
    }
    t.finish()
}

fn parse_time(s: &str) -> Option<f64> {
    let (h, m) = s.split_once(':')?;
    let h: u32 = h.parse().ok()?;
    let m: u32 = m.parse().ok()?;
    (h < 24 && m < 60).then(|| h as f64 + m as f64 / 60.0)
}

/// Reads a long-format curve file back into one set per entity.
pub fn read_curves(path: &Path) -> CliResult<BTreeMap<String, CurveSet>> {
    let label = path.display().to_string();
    let file = File::open(path).map_err(|e| CliError::data(format!("{label}: {e}")))?;
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file);
    let headers = reader.headers().map_err(|e| CliError::data(format!("{label}: {e}")))?.clone();
    if !headers.is_empty() && headers.iter().collect::<Vec<_>>() != CURVE_HEADER {
        return Err(CliError::data(format!("{label}:1: expected header `{}`", CURVE_HEADER.join(","))));
    }
    type Days = BTreeMap<NaiveDate, Vec<(f64, f64)>>;
    let mut by_entity: BTreeMap<String, Days> = BTreeMap::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| CliError::data(format!("{label}: {e}")))?;
        let line = rec.position().map_or(0, |p| p.line());
        let bad = |what: &str| CliError::data(format!("{label}:{line}: invalid {what}"));
        if rec.len() != 4 {
            return Err(bad("field count"));
        }
        let date = NaiveDate::parse_from_str(&rec[1], "%Y-%m-%d").map_err(|_| bad("date"))?;
        let time = parse_time(&rec[2]).ok_or_else(|| bad("time"))?;
        let v: f64 = rec[3].parse().map_err(|_| bad("power_kw"))?;
        by_entity.entry(rec[0].to_string()).or_default().entry(date).or_default().push((time, v));
    }
    let mut out = BTreeMap::new();
    for (entity, days) in by_entity {
        let mut grid_points: Option<Vec<f64>> = None;
        let mut curves = Vec::new();
        for (date, mut slots) in days {
            slots.sort_by(|a, b| a.0.total_cmp(&b.0));
            let times: Vec<f64> = slots.iter().map(|s| s.0).collect();
            match &grid_points {
                None => grid_points = Some(times),
                Some(g) if *g != times => {
                    return Err(CliError::data(format!("{label}: entity {entity} changes grid on {date}")))
                }
                _ => {}
            }
            curves.push(DailyCurve::new(entity.as_str(), date, slots.iter().map(|s| s.1).collect()));
        }
        let grid = TimeGrid::new(grid_points.unwrap_or_default()).map_err(|e| CliError::data(format!("{label}: {e}")))?;
        out.insert(entity.clone(), CurveSet::new(grid, entity, curves)?);
    }
    Ok(out)
}

/// Type-7 (linear interpolation) sample quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}
