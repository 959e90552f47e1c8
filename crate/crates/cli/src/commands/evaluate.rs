use std::collections::BTreeMap;
use std::path::PathBuf;

use chrono::{Datelike, NaiveDate};
use loadfpca::metrics::{
    energy_percent_error, energy_percent_error_total, mape, BenchmarkIndices, PairedSeries,
};

use super::Outputs;
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::io::{fmt_f64, read_curves, Table};

#[derive(Debug, Clone, Default)]
pub struct EvaluatePaths {
    pub forecast: Option<PathBuf>,
    pub actual: Option<PathBuf>,
}

/// Compares forecast curves with actual curves over the days both describe.
///
/// Every actual day inside the evaluation window must have a forecast; days
/// forecast but absent from the cleaned actuals are skipped.
pub fn cmd_evaluate(cfg: &RunConfig, paths: &EvaluatePaths) -> CliResult<()> {
    let out = Outputs::new(cfg);
    let forecasts = read_curves(paths.forecast.as_ref().unwrap_or(&out.forecast()))?;
    let actuals = read_curves(paths.actual.as_ref().unwrap_or(&out.curves()))?;

    let mut daily = Table::create(&out.file("daily_mape.csv"), &["entity_id", "date", "mape"])?;
    let mut monthly = Table::create(
        &out.file("monthly_energy_error.csv"),
        &["entity_id", "month", "energy_error_pct", "energy_error_total_pct"],
    )?;
    let mut summary = Table::create(&out.file("summary.csv"), &["entity_id", "metric", "value"])?;

    for (entity, forecast) in &forecasts {
        let Some(actual) = actuals.get(entity) else {
            return Err(CliError::data(format!("{entity}: no actual curves")));
        };
        if actual.grid() != forecast.grid() {
            return Err(CliError::data(format!("{entity}: forecast and actual grids differ")));
        }
        let (first, last) = match cfg.test_range {
            Some(r) => (r.start, r.end),
            None => match (forecast.dates().first(), forecast.dates().last()) {
                (Some(a), Some(b)) => (*a, *b),
                _ => continue,
            },
        };
        let window = actual.filter_dates(|d| first <= d && d <= last);
        let missing: Vec<String> = window
            .dates()
            .into_iter()
            .filter(|d| forecast.get(*d).is_none())
            .map(|d| d.to_string())
            .collect();
        if !missing.is_empty() {
            return Err(CliError::data(format!("{entity}: no forecast for {}", missing.join(","))));
        }
        if window.is_empty() {
            eprintln!("warning: {entity}: no actual days in {first}..{last}");
            continue;
        }

        let mut all_x = Vec::new();
        let mut all_y = Vec::new();
        let mut by_year: BTreeMap<i32, Vec<f64>> = BTreeMap::new();
        let mut by_month: BTreeMap<(i32, u32), (Vec<f64>, Vec<f64>)> = BTreeMap::new();
        let mut best: Option<(NaiveDate, f64)> = None;
        for a in window.curves() {
            let f = forecast.get(a.date).expect("checked above");
            let s = PairedSeries::new(&a.values, &f.values)?;
            let m = mape(&s).map_err(|e| CliError::from(e).context(format!("{entity} {}", a.date)))?;
            daily.row([entity.clone(), a.date.to_string(), fmt_f64(m)])?;
            by_year.entry(a.date.year()).or_default().push(m);
            if best.map_or(true, |(_, b)| m < b) {
                best = Some((a.date, m));
            }
            let e = by_month.entry((a.date.year(), a.date.month())).or_default();
            e.0.extend(&a.values);
            e.1.extend(&f.values);
            all_x.extend(&a.values);
            all_y.extend(&f.values);
        }
        for ((y, m), (x, p)) in &by_month {
            let s = PairedSeries::new(x, p)?;
            monthly.row([
                entity.clone(),
                format!("{y:04}-{m:02}"),
                fmt_f64(energy_percent_error(&s)?),
                fmt_f64(energy_percent_error_total(&s)?),
            ])?;
        }
        let n_days = window.len();
        let mean_mape = by_year.values().flatten().sum::<f64>() / n_days as f64;
        let mut put = |metric: String, value: String| summary.row([entity.clone(), metric, value]);
        put("days".into(), n_days.to_string())?;
        put("mape".into(), fmt_f64(mean_mape))?;
        for (y, v) in &by_year {
            put(format!("yearly_mape_{y}"), fmt_f64(v.iter().sum::<f64>() / v.len() as f64))?;
        }
        let s = PairedSeries::new(&all_x, &all_y)?;
        match BenchmarkIndices::compute(&s) {
            Ok(b) => {
                put("mae".into(), fmt_f64(b.mae))?;
                put("nmse".into(), fmt_f64(b.nmse))?;
                put("rep".into(), fmt_f64(b.rep))?;
                put("ppmcc".into(), fmt_f64(b.ppmcc))?;
            }
            Err(e) => eprintln!("warning: {entity}: benchmark indices undefined: {e}"),
        }
        if let Some((d, m)) = best {
            put("best_day".into(), d.to_string())?;
            put("best_day_mape".into(), fmt_f64(m))?;
        }
    }
    daily.finish()?;
    monthly.finish()?;
    summary.finish()
}
