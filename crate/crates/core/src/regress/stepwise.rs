//! Bidirectional stepwise term selection by AIC.

use serde::{Deserialize, Serialize};

use super::design::{encode_terms, DayDescriptor, DesignSpec, Term};
use super::ols::{aic, ols_fit};
use crate::error::{Error, Result};

/// Fitted linear model for one component's score series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreRegressionModel {
    /// Zero-based component index.
    pub component: usize,
    /// Selected terms in canonical order, intercept first.
    pub terms: Vec<Term>,
    /// Columns of the selected terms that were constant on the training days
    /// and therefore left out of the fit.
    pub dropped_columns: Vec<String>,
    /// Names of the fitted columns, aligned with `coefficients`.
    pub columns: Vec<String>,
    pub coefficients: Vec<f64>,
    pub rss: f64,
    pub n_train: usize,
    pub aic: f64,
}

impl ScoreRegressionModel {
    /// Design matrix of `days` restricted to this model's fitted columns.
    pub(crate) fn design(&self, days: &[DayDescriptor]) -> nalgebra::DMatrix<f64> {
        let full = encode_terms(days, &self.terms);
        let names: Vec<String> = self.terms.iter().flat_map(Term::column_names).collect();
        let keep: Vec<usize> = names
            .iter()
            .enumerate()
            .filter(|(_, n)| !self.dropped_columns.contains(n))
            .map(|(i, _)| i)
            .collect();
        full.select_columns(&keep)
    }
}

/// One accepted stepwise move.
#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    Add(Term),
    Remove(Term),
}

/// Selected model plus the sequence of moves that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub model: ScoreRegressionModel,
    pub path: Vec<(Step, f64)>,
}

/// Training columns whose values never vary, excluding the intercept.
fn constant_columns(days: &[DayDescriptor], pool: &DesignSpec) -> Vec<String> {
    let x = encode_terms(days, pool.terms());
    pool.column_names()
        .into_iter()
        .enumerate()
        .filter(|(j, name)| {
            name != "intercept" && {
                let col = x.column(*j);
                let first = col[0];
                col.iter().all(|v| *v == first)
            }
        })
        .map(|(_, n)| n)
        .collect()
}

/// Fits `y` on `terms`, leaving out `constant` columns.
pub fn fit_terms(
    days: &[DayDescriptor],
    y: &[f64],
    terms: &[Term],
    constant: &[String],
) -> Result<ScoreRegressionModel> {
    let mut terms = terms.to_vec();
    terms.sort();
    terms.dedup();
    let names: Vec<String> = terms.iter().flat_map(Term::column_names).collect();
    let dropped: Vec<String> = names.iter().filter(|n| constant.contains(n)).cloned().collect();
    let mut model = ScoreRegressionModel {
        component: 0,
        terms,
        columns: names.into_iter().filter(|n| !dropped.contains(n)).collect(),
        dropped_columns: dropped,
        coefficients: Vec::new(),
        rss: 0.0,
        n_train: days.len(),
        aic: 0.0,
    };
    let x = model.design(days);
    let fit = ols_fit(&x, y)?;
    model.aic = aic(fit.rss, days.len(), fit.coefficients.len());
    model.coefficients = fit.coefficients;
    model.rss = fit.rss;
    Ok(model)
}

fn hierarchy_ok(terms: &[Term]) -> bool {
    terms
        .iter()
        .all(|t| t.parents().iter().all(|p| terms.contains(p)))
}

/// Greedy bidirectional stepwise selection starting from the intercept-only model.
///
/// Every step evaluates all single-term additions (in pool order) followed by
/// all single-term removals, and applies the move with the lowest AIC if it
/// improves on the current model; earlier candidates win exact ties. Moves that
/// break the interaction hierarchy or produce a rank-deficient design are
/// skipped.
pub fn stepwise_select(
    days: &[DayDescriptor],
    y: &[f64],
    pool: &DesignSpec,
) -> Result<ScoreRegressionModel> {
    stepwise_select_traced(days, y, pool).map(|s| s.model)
}

/// [`stepwise_select`] that also returns the accepted moves with their AIC.
pub fn stepwise_select_traced(
    days: &[DayDescriptor],
    y: &[f64],
    pool: &DesignSpec,
) -> Result<Selection> {
    let needed = 2 + pool.max_width();
    if days.len() < needed {
        return Err(Error::InsufficientData {
            needed,
            got: days.len(),
        });
    }
    if y.len() != days.len() {
        return Err(Error::ShapeMismatch(format!(
            "{} days but {} responses",
            days.len(),
            y.len()
        )));
    }
    let constant = constant_columns(days, pool);
    let eligible: Vec<&Term> = pool
        .terms()
        .iter()
        .filter(|t| **t != Term::Intercept)
        .filter(|t| t.column_names().iter().any(|n| !constant.contains(n)))
        .collect();

    let mut current = fit_terms(days, y, &[Term::Intercept], &constant)?;
    let mut path = Vec::new();
    let max_steps = pool.terms().len().pow(2);
    for _ in 0..max_steps {
        let mut best: Option<(Step, ScoreRegressionModel)> = None;
        let mut consider = |step: Step, terms: Vec<Term>| {
            if !hierarchy_ok(&terms) {
                return;
            }
            if let Ok(m) = fit_terms(days, y, &terms, &constant) {
                if best.as_ref().map_or(true, |(_, b)| m.aic < b.aic) {
                    best = Some((step, m));
                }
            }
        };
        for t in &eligible {
            if !current.terms.contains(t) {
                let mut terms = current.terms.clone();
                terms.push((*t).clone());
                consider(Step::Add((*t).clone()), terms);
            }
        }
        for t in current.terms.iter().filter(|t| **t != Term::Intercept) {
            let terms: Vec<Term> = current.terms.iter().filter(|u| *u != t).cloned().collect();
            consider(Step::Remove(t.clone()), terms);
        }
        match best {
            Some((step, m)) if m.aic < current.aic => {
                path.push((step, m.aic));
                current = m;
            }
            _ => break,
        }
    }
    Ok(Selection {
        model: current,
        path,
    })
}

/// Predicted scores `X_future * beta`.
pub fn predict_scores(model: &ScoreRegressionModel, future: &[DayDescriptor]) -> Vec<f64> {
    if future.is_empty() {
        return Vec::new();
    }
    let x = model.design(future);
    let beta = nalgebra::DVector::from_column_slice(&model.coefficients);
    (x * beta).iter().copied().collect()
}
