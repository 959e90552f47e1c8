//! Forecast accuracy indices.
//!
//! All functions compare an actual series `x` with a predicted series `y` of
//! the same length.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Actual and predicted values of equal length, all finite.
#[derive(Debug, Clone, Copy)]
pub struct PairedSeries<'a> {
    actual: &'a [f64],
    predicted: &'a [f64],
}

impl<'a> PairedSeries<'a> {
    pub fn new(actual: &'a [f64], predicted: &'a [f64]) -> Result<Self> {
        if actual.len() != predicted.len() {
            return Err(Error::LengthMismatch {
                actual: actual.len(),
                predicted: predicted.len(),
            });
        }
        if actual.is_empty() {
            return Err(Error::EmptySeries);
        }
        if actual.iter().chain(predicted).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { actual, predicted })
    }

    pub fn actual(&self) -> &[f64] {
        self.actual
    }

    pub fn predicted(&self) -> &[f64] {
        self.predicted
    }

    pub fn len(&self) -> usize {
        self.actual.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actual.is_empty()
    }

    fn pairs(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.actual.iter().copied().zip(self.predicted.iter().copied())
    }
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

/// Mean absolute percentage error, in percent.
pub fn mape(s: &PairedSeries) -> Result<f64> {
    let zeros: Vec<usize> = s
        .actual
        .iter()
        .enumerate()
        .filter(|(_, x)| **x == 0.0)
        .map(|(i, _)| i)
        .collect();
    if !zeros.is_empty() {
        return Err(Error::DivisionByZeroActual { indices: zeros });
    }
    let sum: f64 = s.pairs().map(|(x, y)| ((x - y) / x).abs()).sum();
    Ok(sum / s.len() as f64 * 100.0)
}

/// Energy percentage error, `(1/m) |sum x - sum y| / sum x * 100`.
///
/// The leading `1/m` makes the value shrink with the number of samples; see
/// [`energy_percent_error_total`] for the form without it.
pub fn energy_percent_error(s: &PairedSeries) -> Result<f64> {
    Ok(energy_percent_error_total(s)? / s.len() as f64)
}

/// `|sum x - sum y| / sum x * 100`.
pub fn energy_percent_error_total(s: &PairedSeries) -> Result<f64> {
    let sx: f64 = s.actual.iter().sum();
    if sx == 0.0 {
        return Err(Error::ZeroTotalEnergy);
    }
    let sy: f64 = s.predicted.iter().sum();
    Ok((sx - sy).abs() / sx * 100.0)
}

/// Mean absolute error.
pub fn mae(s: &PairedSeries) -> f64 {
    s.pairs().map(|(x, y)| (x - y).abs()).sum::<f64>() / s.len() as f64
}

/// Normalization used by [`nmse_with`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NmseForm {
    /// Mean squared error over the population variance of the actual series.
    #[default]
    ActualVariance,
    /// Mean squared error over the product of the two series' means.
    MeanProduct,
}

/// Normalized mean square error, normalized by the variance of the actual series.
pub fn nmse(s: &PairedSeries) -> Result<f64> {
    nmse_with(s, NmseForm::ActualVariance)
}

pub fn nmse_with(s: &PairedSeries, form: NmseForm) -> Result<f64> {
    let m = s.len() as f64;
    let mse = s.pairs().map(|(x, y)| (x - y).powi(2)).sum::<f64>() / m;
    let denom = match form {
        NmseForm::ActualVariance => {
            let xm = mean(s.actual);
            s.actual.iter().map(|x| (x - xm).powi(2)).sum::<f64>() / m
        }
        NmseForm::MeanProduct => mean(s.actual) * mean(s.predicted),
    };
    if denom == 0.0 {
        return Err(Error::ZeroVarianceActual);
    }
    Ok(mse / denom)
}

/// Relative error percentage, `100 sqrt(sum (x-y)^2 / sum x^2)`.
pub fn rep(s: &PairedSeries) -> Result<f64> {
    let norm: f64 = s.actual.iter().map(|x| x * x).sum();
    if norm == 0.0 {
        return Err(Error::ZeroActualNorm);
    }
    let sse: f64 = s.pairs().map(|(x, y)| (x - y).powi(2)).sum();
    Ok(100.0 * (sse / norm).sqrt())
}

/// Pearson product-moment correlation coefficient.
pub fn ppmcc(s: &PairedSeries) -> Result<f64> {
    let xm = mean(s.actual);
    let ym = mean(s.predicted);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in s.pairs() {
        let (dx, dy) = (x - xm, y - ym);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// The five comparison indices computed over one series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkIndices {
    pub mae: f64,
    pub mape: f64,
    pub nmse: f64,
    pub rep: f64,
    pub ppmcc: f64,
}

impl BenchmarkIndices {
    pub fn compute(s: &PairedSeries) -> Result<Self> {
        Ok(Self {
            mae: mae(s),
            mape: mape(s)?,
            nmse: nmse(s)?,
            rep: rep(s)?,
            ppmcc: ppmcc(s)?,
        })
    }
}
