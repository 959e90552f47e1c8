use std::collections::BTreeMap;
use std::path::Path;

use chrono::{Datelike, NaiveDate};

use super::{open, Calendar, Outputs, HUMIDITY, TEMPERATURE};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::io::{fmt_f64, quantile, Table};
use crate::model::ModelFile;

const WEEKDAYS: [&str; 7] = ["mon", "tue", "wed", "thu", "fri", "sat", "sun"];
const QUANTILE_HEADER: [&str; 9] = ["entity_id", "component", "group", "count", "min", "q1", "median", "q3", "max"];

type Scores = BTreeMap<String, BTreeMap<usize, Vec<(NaiveDate, f64)>>>;

fn read_scores(path: &Path) -> CliResult<Scores> {
    let label = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(open(path)?);
    let mut out: Scores = BTreeMap::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| CliError::data(format!("{label}: {e}")))?;
        let line = rec.position().map_or(0, |p| p.line());
        let bad = |what: &str| CliError::data(format!("{label}:{line}: invalid {what}"));
        if rec.len() != 4 {
            return Err(bad("field count"));
        }
        let date = NaiveDate::parse_from_str(&rec[1], "%Y-%m-%d").map_err(|_| bad("date"))?;
        let k: usize = rec[2].parse().map_err(|_| bad("component"))?;
        let s: f64 = rec[3].parse().map_err(|_| bad("score"))?;
        out.entry(rec[0].to_string()).or_default().entry(k).or_default().push((date, s));
    }
    Ok(out)
}

fn quantile_row(t: &mut Table, entity: &str, k: usize, group: &str, mut v: Vec<f64>) -> CliResult<()> {
    if v.is_empty() {
        return Ok(());
    }
    v.sort_by(f64::total_cmp);
    let mut row = vec![entity.to_string(), k.to_string(), group.to_string(), v.len().to_string()];
    row.extend([0.0, 0.25, 0.5, 0.75, 1.0].map(|q| fmt_f64(quantile(&v, q))));
    t.row(row)
}

/// Bin edges `[lo, lo + w, ...]` covering `[min, max]`, starting at a multiple of `w`.
fn bins(values: impl Iterator<Item = f64>, w: f64) -> Option<(f64, usize)> {
    let (min, max) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if !min.is_finite() {
        return None;
    }
    let lo = (min / w).floor() * w;
    let n = ((max - lo) / w).floor() as usize + 1;
    Some((lo, n))
}

fn bin_of(v: f64, lo: f64, w: f64, n: usize) -> usize {
    (((v - lo) / w).floor() as usize).min(n - 1)
}

/// Score distributions by weekday, by month, and over a temperature by
/// humidity grid.
pub fn cmd_scores_report(cfg: &RunConfig, model_path: Option<&Path>) -> CliResult<()> {
    let out = Outputs::new(cfg);
    let model = ModelFile::load(model_path.unwrap_or(&out.model()))?;
    let scores = read_scores(&out.scores())?;
    let calendar = Calendar::load(cfg)?;
    let (tw, hw) = (cfg.report.temperature_bin_c, cfg.report.humidity_bin_pct);

    let mut by_weekday = Table::create(&out.file("scores_by_weekday.csv"), &QUANTILE_HEADER)?;
    let mut by_month = Table::create(&out.file("scores_by_month.csv"), &QUANTILE_HEADER)?;
    let mut weather = Table::create(
        &out.file("scores_by_weather.csv"),
        &["entity_id", "component", "temp_lo", "temp_hi", "rh_lo", "rh_hi", "count", "mean_score"],
    )?;
    for em in &model.entities {
        let Some(components) = scores.get(&em.entity_id) else {
            return Err(CliError::data(format!("{}: no scores", em.entity_id)));
        };
        for (k, rows) in components {
            let dates: Vec<NaiveDate> = rows.iter().map(|r| r.0).collect();
            let days = calendar.describe(&dates, em.calendar_origin);
            let mut wd: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
            let mut mo: BTreeMap<u32, Vec<f64>> = BTreeMap::new();
            for ((date, s), d) in rows.iter().zip(&days) {
                wd.entry(d.day_of_week).or_default().push(*s);
                mo.entry(date.month()).or_default().push(*s);
            }
            for (w, v) in wd {
                quantile_row(&mut by_weekday, &em.entity_id, *k, WEEKDAYS[w as usize - 1], v)?;
            }
            for (m, v) in mo {
                quantile_row(&mut by_month, &em.entity_id, *k, &format!("{m:02}"), v)?;
            }

            let observed: Vec<(f64, f64, f64)> = rows
                .iter()
                .zip(&days)
                .filter_map(|((_, s), d)| Some((*d.covariates.get(TEMPERATURE)?, *d.covariates.get(HUMIDITY)?, *s)))
                .collect();
            let (Some((tlo, tn)), Some((hlo, hn))) = (
                bins(observed.iter().map(|o| o.0), tw),
                bins(observed.iter().map(|o| o.1), hw),
            ) else {
                continue;
            };
            let mut cells = vec![(0usize, 0.0f64); tn * hn];
            for (t, h, s) in &observed {
                let c = &mut cells[bin_of(*t, tlo, tw, tn) * hn + bin_of(*h, hlo, hw, hn)];
                c.0 += 1;
                c.1 += s;
            }
            for i in 0..tn {
                for j in 0..hn {
                    let (count, sum) = cells[i * hn + j];
                    let t0 = tlo + i as f64 * tw;
                    let h0 = hlo + j as f64 * hw;
                    weather.row([
                        em.entity_id.clone(),
                        k.to_string(),
                        fmt_f64(t0),
                        fmt_f64(t0 + tw),
                        fmt_f64(h0),
                        fmt_f64(h0 + hw),
                        count.to_string(),
                        if count > 0 { fmt_f64(sum / count as f64) } else { String::new() },
                    ])?;
                }
            }
        }
    }
    by_weekday.finish()?;
    by_month.finish()?;
    weather.finish()
}
