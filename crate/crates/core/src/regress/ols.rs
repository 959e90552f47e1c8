//! Ordinary least squares and the Gaussian AIC.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Squared pivot (on the unit-column-norm scale) below which X'X counts as singular.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Residual sums of squares below this fraction of `sum(y^2)` are round-off
/// and reported as exactly zero.
pub const RSS_ROUNDOFF: f64 = 1e-20;

/// Floor applied to `RSS / n` inside [`aic`].
pub const RSS_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq)]
pub struct OlsFit {
    pub coefficients: Vec<f64>,
    pub rss: f64,
}

/// Least-squares fit of `y` on the columns of `x`.
///
/// Columns are scaled to unit norm and factored by Householder QR. The design
/// is rejected as rank deficient when any squared diagonal entry of R on that
/// scale falls below [`RANK_TOLERANCE`]; that quantity is the Cholesky pivot
/// of the unit-diagonal X'X.
pub fn ols_fit(x: &DMatrix<f64>, y: &[f64]) -> Result<OlsFit> {
    let (n, q) = x.shape();
    if y.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "design has {n} rows, response has {}",
            y.len()
        )));
    }
    if q == 0 {
        return Err(Error::ShapeMismatch("design has no columns".into()));
    }
    if n < q || x.iter().any(|v| !v.is_finite()) {
        return Err(Error::RankDeficientDesign);
    }

    let norms: Vec<f64> = x.column_iter().map(|c| c.norm()).collect();
    if norms.iter().any(|s| *s == 0.0) {
        return Err(Error::RankDeficientDesign);
    }
    let mut scaled = x.clone();
    for (j, s) in norms.iter().enumerate() {
        scaled.column_mut(j).unscale_mut(*s);
    }

    let qr = scaled.qr();
    let r = qr.r();
    if (0..q).any(|j| r[(j, j)] * r[(j, j)] < RANK_TOLERANCE) {
        return Err(Error::RankDeficientDesign);
    }
    let yv = DVector::from_column_slice(y);
    let qty = qr.q().transpose() * &yv;
    let z = r
        .solve_upper_triangular(&qty)
        .ok_or(Error::RankDeficientDesign)?;
    let coefficients: Vec<f64> = z.iter().zip(&norms).map(|(v, s)| v / s).collect();

    let beta = DVector::from_column_slice(&coefficients);
    let resid = &yv - x * beta;
    let mut rss = resid.norm_squared();
    if rss <= RSS_ROUNDOFF * yv.norm_squared() {
        rss = 0.0;
    }
    Ok(OlsFit { coefficients, rss })
}

/// `n ln(RSS / n) + 2q`, with `RSS / n` floored at [`RSS_FLOOR`].
pub fn aic(rss: f64, n: usize, q: usize) -> f64 {
    let n = n as f64;
    n * (rss / n).max(RSS_FLOOR).ln() + 2.0 * q as f64
}
