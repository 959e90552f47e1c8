use std::collections::BTreeMap;

use chrono::NaiveDate;
use loadfpca::curves::CurveSet;
use loadfpca::pipeline::{
    aggregate_spatial, classify_population, entity_stability, filter_days, read_contracts,
    read_eunite, read_measurements, resample_to_grid, ContractAggregate, CorruptionRule,
    DayCompleteness, DropEntry, DropReason, DropReport, PopulationRules,
};
use loadfpca::curves::TimeGrid;
use loadfpca::regress::EventKind;

use super::{open, Calendar, Outputs, HUMIDITY, TEMPERATURE};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::io::{fmt_f64, write_curves, Table};

struct Ingested {
    set: CurveSet,
    completeness: Vec<DayCompleteness>,
}

fn load_measurements(cfg: &RunConfig, report: &mut DropReport) -> CliResult<Vec<Ingested>> {
    let grid = TimeGrid::uniform(cfg.grid)?;
    if !cfg.input.eunite.is_empty() {
        let mut curves = Vec::new();
        for p in &cfg.input.eunite {
            let set = read_eunite(&p.display().to_string(), open(p)?, cfg.grid)?;
            curves.extend(set.into_curves());
        }
        let set = CurveSet::new(grid, loadfpca::pipeline::EUNITE_ENTITY, curves)?;
        let completeness = span_completeness(&set);
        return Ok(if set.is_empty() { vec![] } else { vec![Ingested { set, completeness }] });
    }
    let path = cfg
        .input
        .measurements
        .as_ref()
        .ok_or_else(|| CliError::usage("no measurement input configured"))?;
    let records = read_measurements(&path.display().to_string(), open(path)?)?;
    let mut by_entity: BTreeMap<&str, Vec<_>> = BTreeMap::new();
    for r in &records {
        by_entity.entry(r.entity_id.as_str()).or_default().push(r.clone());
    }
    let tz = cfg.tz()?;
    let mut out = Vec::new();
    for (entity, recs) in by_entity {
        let r = resample_to_grid(entity, &recs, &grid, tz)?;
        for e in r.dropped {
            report.push(e);
        }
        out.push(Ingested { set: r.curves, completeness: r.completeness });
    }
    Ok(out)
}

fn span_completeness(set: &CurveSet) -> Vec<DayCompleteness> {
    let dates = set.dates();
    let (Some(first), Some(last)) = (dates.first(), dates.last()) else {
        return Vec::new();
    };
    let m = set.grid().len();
    first
        .iter_days()
        .take_while(|d| d <= last)
        .map(|date| {
            let present = set.get(date).is_some();
            DayCompleteness { date, filled_slots: if present { m } else { 0 }, readings: if present { m } else { 0 } }
        })
        .collect()
}

fn read_regions(path: &std::path::Path) -> CliResult<BTreeMap<String, String>> {
    let label = path.display().to_string();
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(open(path)?);
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["entity_id", "region"] {
        return Err(CliError::data(format!("{label}:1: expected header `entity_id,region`")));
    }
    let mut map = BTreeMap::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| CliError::data(format!("{label}: {e}")))?;
        if rec.len() != 2 {
            let line = rec.position().map_or(0, |p| p.line());
            return Err(CliError::data(format!("{label}:{line}: expected 2 fields")));
        }
        map.insert(rec[0].to_string(), rec[1].to_string());
    }
    Ok(map)
}

/// Resamples, classifies, filters and aggregates the raw inputs.
pub fn cmd_ingest(cfg: &RunConfig) -> CliResult<()> {
    let out = Outputs::new(cfg);
    let mut report = DropReport::default();
    let entities = load_measurements(cfg, &mut report)?;

    let rules = match &cfg.input.population_rules {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::usage(format!("{}: {e}", p.display())))?;
            PopulationRules::from_toml(&text)?
        }
        None => PopulationRules::default(),
    };
    let contracts = match &cfg.input.contracts {
        Some(p) => read_contracts(&p.display().to_string(), open(p)?)?,
        None => Vec::new(),
    };

    let mut kept: Vec<CurveSet> = Vec::new();
    let mut populations = Vec::new();
    for Ingested { set, completeness } in entities {
        let entity = set.entity_id().to_string();
        let span = match (completeness.first(), completeness.last()) {
            (Some(a), Some(b)) => (a.date, b.date),
            _ => continue,
        };
        let mut rule = CorruptionRule::default();
        let mut population = String::new();
        if cfg.input.contracts.is_some() {
            let snaps: Vec<_> = contracts.iter().filter(|c| c.entity_id == entity).cloned().collect();
            let entity_drop = |reason, detail: String| DropEntry { entity_id: entity.clone(), date: None, reason, detail };
            let Some(agg) = ContractAggregate::over(&snaps, span.0, span.1) else {
                report.push(entity_drop(DropReason::Unclassified, "no contract covers the data span".into()));
                continue;
            };
            let stability = entity_stability(&snaps, span.0, span.1)?;
            if !stability.stable {
                report.push(entity_drop(DropReason::UnstableContract, stability.unstable.join(";")));
                continue;
            }
            match classify_population(&agg, &rules) {
                Some(p) => {
                    rule = rules.corruption_rule(p);
                    population = p.to_string();
                }
                None => {
                    report.push(entity_drop(DropReason::Unclassified, "no population rule matches".into()));
                    continue;
                }
            }
        }
        let f = filter_days(&set, &completeness, rule, &cfg.filter);
        let keep = f.entity_kept();
        populations.push((entity.clone(), population, f.available_days, f.incomplete_days, f.corrupted_days, f.curves.len(), keep));
        report.merge(f.report);
        if keep {
            kept.push(f.curves);
        }
    }

    if let Some(p) = &cfg.input.regions {
        let mapping = read_regions(p)?;
        let regions = aggregate_spatial(&kept, &mapping)?;
        kept.extend(regions);
    }

    if kept.is_empty() {
        eprintln!("warning: no curves survived ingestion; writing empty outputs");
    }
    std::fs::create_dir_all(&out.dir).map_err(|e| CliError::data(format!("{}: {e}", out.dir.display())))?;
    write_curves(&out.curves(), &kept)?;

    let mut t = Table::create(
        &out.file("populations.csv"),
        &["entity_id", "population", "available_days", "incomplete_days", "corrupted_days", "kept_days", "kept"],
    )?;
    for (e, p, a, i, c, k, keep) in &populations {
        t.row([e.clone(), p.clone(), a.to_string(), i.to_string(), c.to_string(), k.to_string(), keep.to_string()])?;
    }
    t.finish()?;

    let mut t = Table::create(&out.file("drop_report.csv"), &["entity_id", "date", "reason", "detail"])?;
    for e in report.entries() {
        t.row([
            e.entity_id.clone(),
            e.date.map_or(String::new(), |d| d.to_string()),
            e.reason.code().to_string(),
            e.detail.clone(),
        ])?;
    }
    t.finish()?;

    let mut dates: Vec<NaiveDate> = kept.iter().flat_map(|s| s.dates()).collect();
    dates.sort();
    dates.dedup();
    let origin = cfg.train_range.map(|r| r.start).or(dates.first().copied());
    let calendar = Calendar::load(cfg)?;
    let mut header = vec!["date", "calendar_time", "month", "day_of_month", "day_of_week"];
    let event_cols: Vec<String> = EventKind::ALL.iter().map(|e| format!("event_{}", e.key())).collect();
    header.extend(event_cols.iter().map(String::as_str));
    header.extend([TEMPERATURE, HUMIDITY]);
    let mut t = Table::create(&out.file("descriptors.csv"), &header)?;
    if let Some(origin) = origin {
        for d in calendar.describe(&dates, origin) {
            let mut row = vec![
                d.date.to_string(),
                d.calendar_time.to_string(),
                d.month.to_string(),
                d.day_of_month.to_string(),
                d.day_of_week.to_string(),
            ];
            row.extend(EventKind::ALL.iter().map(|e| u8::from(d.event(*e)).to_string()));
            for name in [TEMPERATURE, HUMIDITY] {
                row.push(d.covariates.get(name).map_or(String::new(), |v| fmt_f64(*v)));
            }
            t.row(row)?;
        }
    }
    t.finish()?;
    eprintln!(
        "ingest: {} curve sets, {} days, {} drop entries",
        kept.len(),
        kept.iter().map(CurveSet::len).sum::<usize>(),
        report.len()
    );
    Ok(())
}
