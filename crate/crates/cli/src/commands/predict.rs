use std::path::Path;

use loadfpca::curves::denormalize;
use loadfpca::regress::{forecast_curves, Term};

use super::{Calendar, Outputs};
use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::io::write_curves;
use crate::model::ModelFile;

/// Forecasts every day of the test range from the first K components.
pub fn cmd_predict(cfg: &RunConfig, model_path: Option<&Path>) -> CliResult<()> {
    let out = Outputs::new(cfg);
    let test = cfg.require_test()?;
    let model = ModelFile::load(model_path.unwrap_or(&out.model()))?;
    let calendar = Calendar::load(cfg)?;
    let k = cfg.components;
    let dates = test.days();
    let mut forecasts = Vec::new();
    for em in &model.entities {
        let days = calendar.describe(&dates, em.calendar_origin);
        let needed: Vec<&String> = em
            .score_models
            .iter()
            .filter(|m| m.component < k)
            .flat_map(|m| &m.terms)
            .filter_map(|t| match t {
                Term::Covariate(n) => Some(n),
                _ => None,
            })
            .collect();
        let missing: Vec<String> = days
            .iter()
            .filter(|d| needed.iter().any(|n| !d.covariates.contains_key(*n)))
            .map(|d| d.date.to_string())
            .collect();
        if !missing.is_empty() {
            return Err(CliError::data(format!(
                "{}: covariates missing for test days {}",
                em.entity_id,
                missing.join(",")
            )));
        }
        let set = forecast_curves(&em.fpca, &em.score_models, &days, k, &em.entity_id, Some(em.scale))
            .map_err(|e| CliError::from(e).context(&em.entity_id))?;
        forecasts.push(denormalize(&set)?);
    }
    write_curves(&out.forecast(), &forecasts)
}
