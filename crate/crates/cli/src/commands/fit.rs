use loadfpca::curves::normalize_by_max;
use loadfpca::fpca::{explained_variability_table, fit};
use loadfpca::regress::{fit_score_models, DayDescriptor, Term};
use loadfpca::Error;

use super::{Calendar, Outputs};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::io::{fmt_f64, read_curves, Table};
use crate::model::{EntityModel, ModelFile};

fn has_covariates(day: &DayDescriptor, names: &[&String]) -> bool {
    names.iter().all(|n| day.covariates.contains_key(*n))
}

/// Fits the component model and one score regression per component for
/// every entity with training days.
pub fn cmd_fit(cfg: &RunConfig) -> CliResult<()> {
    let out = Outputs::new(cfg);
    let train = cfg.require_train()?;
    let pool = cfg.model.pool()?;
    let covariates: Vec<&String> = pool
        .terms()
        .iter()
        .filter_map(|t| match t {
            Term::Covariate(n) => Some(n),
            _ => None,
        })
        .collect();
    let calendar = Calendar::load(cfg)?;
    let sets = read_curves(&out.curves())?;

    let mut entities = Vec::new();
    let mut theta = Table::create(&out.file("theta.csv"), &["entity_id", "p", "theta"])?;
    let mut scores_out = Table::create(&out.scores(), &["entity_id", "date", "component", "score"])?;
    for (entity, set) in &sets {
        let described = calendar.describe(&set.dates(), train.start);
        let usable: Vec<_> = described
            .iter()
            .filter(|d| train.contains(d.date) && has_covariates(d, &covariates))
            .map(|d| d.date)
            .collect();
        let skipped = described.iter().filter(|d| train.contains(d.date)).count() - usable.len();
        if skipped > 0 {
            eprintln!("warning: {entity}: {skipped} training days lack covariates and are left out");
        }
        let training = set.filter_dates(|d| usable.binary_search(&d).is_ok());
        if training.is_empty() {
            eprintln!("warning: {entity}: no curves in training range {train}; skipped");
            continue;
        }
        let ctx = |e: Error| CliError::from(e).context(entity);
        let normalized = normalize_by_max(&training).map_err(ctx)?;
        let scale = normalized.scale().expect("normalized set has a scale");
        let (fpca, scores) = fit(&normalized, cfg.fit_components).map_err(ctx)?;
        let days = calendar.describe(&normalized.dates(), train.start);
        let score_models =
            fit_score_models(&days, &scores, fpca.n_components(), &pool).map_err(ctx)?;

        match explained_variability_table(&fpca) {
            Ok(table) => {
                for (p, th) in table.iter().enumerate() {
                    theta.row([entity.clone(), (p + 1).to_string(), fmt_f64(*th)])?;
                }
            }
            Err(Error::DegenerateVariance) => eprintln!("warning: {entity}: training curves have zero variance"),
            Err(e) => return Err(ctx(e)),
        }
        for (date, row) in scores.dates.iter().zip(&scores.rows) {
            for (k, s) in row.iter().enumerate() {
                scores_out.row([entity.clone(), date.to_string(), (k + 1).to_string(), fmt_f64(*s)])?;
            }
        }
        entities.push(EntityModel {
            entity_id: entity.clone(),
            scale,
            calendar_origin: train.start,
            train_range: train,
            fpca,
            score_models,
        });
    }
    theta.finish()?;
    scores_out.finish()?;
    if entities.is_empty() {
        return Err(CliError::numerical(format!("no entity has curves in training range {train}")));
    }
    ModelFile::new(entities).save(&out.model())?;
    Ok(())
}
