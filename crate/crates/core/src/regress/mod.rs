//! Linear models of FPC scores on calendar predictors, and curve forecasts.

mod design;
mod ols;
mod stepwise;

pub use design::{encode_design, DayDescriptor, DesignSpec, EventKind, Term};
pub use ols::{aic, ols_fit, OlsFit, RANK_TOLERANCE, RSS_FLOOR, RSS_ROUNDOFF};
pub use stepwise::{
    fit_terms, predict_scores, stepwise_select, stepwise_select_traced, ScoreRegressionModel,
    Selection, Step,
};

use crate::curves::{CurveSet, DailyCurve};
use crate::error::{Error, Result};
use crate::fpca::{reconstruct, FpcaModel, ScoreMatrix};

/// Runs [`stepwise_select`] independently for each of the first `k` score columns.
pub fn fit_score_models(
    days: &[DayDescriptor],
    scores: &ScoreMatrix,
    k: usize,
    pool: &DesignSpec,
) -> Result<Vec<ScoreRegressionModel>> {
    if k > scores.n_components() {
        return Err(Error::TruncationTooLarge {
            requested: k,
            available: scores.n_components(),
        });
    }
    (0..k)
        .map(|c| {
            let mut m = stepwise_select(days, &scores.column(c), pool)?;
            m.component = c;
            Ok(m)
        })
        .collect()
}

/// Forecast curves for `future` days from the first `truncation` components.
///
/// Values are in the units of the FPCA model; `scale`, when given, is attached
/// to the returned set so it can be denormalized.
pub fn forecast_curves(
    fpca: &FpcaModel,
    score_models: &[ScoreRegressionModel],
    future: &[DayDescriptor],
    truncation: usize,
    entity_id: &str,
    scale: Option<f64>,
) -> Result<CurveSet> {
    let available = score_models.len().min(fpca.n_components());
    if truncation > available {
        return Err(Error::TruncationTooLarge {
            requested: truncation,
            available,
        });
    }
    let mut predicted = vec![vec![0.0; truncation]; future.len()];
    for k in 0..truncation {
        let model = score_models
            .iter()
            .find(|m| m.component == k)
            .ok_or(Error::TruncationTooLarge {
                requested: truncation,
                available: k,
            })?;
        for (row, s) in predicted.iter_mut().zip(predict_scores(model, future)) {
            row[k] = s;
        }
    }
    let curves = future
        .iter()
        .zip(&predicted)
        .map(|(day, scores)| {
            Ok(DailyCurve::new(
                entity_id,
                day.date,
                reconstruct(fpca, scores, truncation)?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let set = CurveSet::new(fpca.grid.clone(), entity_id, curves)?;
    match scale {
        Some(s) => set.with_scale(s),
        None => Ok(set),
    }
}
