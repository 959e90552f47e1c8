//! Functional principal component analysis of discretely sampled curves.
//!
//! Curves are treated as vectors on their grid and the inner product is the
//! plain dot product. The fitted basis consists of the leading eigenvectors of
//! the sample covariance matrix, so each curve decomposes as
//! `f_i = mean + sum_k c_ki * phi_k`.

use chrono::NaiveDate;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::curves::{CurveSet, TimeGrid};
use crate::error::{Error, Result};
use crate::symeig::symmetric_eigen;

/// Eigenvalues below this fraction of the leading one are treated as zero.
pub const RELATIVE_EIGEN_FLOOR: f64 = 1e-12;

/// Two entries whose magnitudes agree to this relative tolerance count as a
/// tie when choosing the sign of an eigenvector.
const SIGN_TIE_TOLERANCE: f64 = 1e-9;

/// A fitted functional principal component basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FpcaModel {
    pub grid: TimeGrid,
    pub mean: Vec<f64>,
    /// `p` orthonormal vectors of length `m`, ordered by eigenvalue.
    pub components: Vec<Vec<f64>>,
    /// Full eigenvalue spectrum (length `m`), clamped and non-increasing.
    pub spectrum: Vec<f64>,
    pub n_train: usize,
    /// Set when more components were requested than the covariance has
    /// numerically nonzero eigenvalues.
    pub rank_deficient: bool,
}

impl FpcaModel {
    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    /// Eigenvalues of the retained components.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum[..self.components.len()]
    }

    /// Copy of the model keeping only the first `k` components.
    pub fn truncated(&self, k: usize) -> Result<Self> {
        if k > self.components.len() {
            return Err(Error::TruncationTooLarge {
                requested: k,
                available: self.components.len(),
            });
        }
        let mut out = self.clone();
        out.components.truncate(k);
        Ok(out)
    }
}

/// Per-day scores on each retained component.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    pub dates: Vec<NaiveDate>,
    /// One row per day, `p` scores per row.
    pub rows: Vec<Vec<f64>>,
}

impl ScoreMatrix {
    pub fn n_components(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    /// Score series of component `k` (zero-based).
    pub fn column(&self, k: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[k]).collect()
    }
}

/// Pointwise mean over the curves of a set.
pub fn mean_curve(set: &CurveSet) -> Result<Vec<f64>> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    // Accumulate deviations from the first curve so identical curves give
    // their common value exactly.
    let base = &set.curves()[0].values;
    let mut shift = vec![0.0; base.len()];
    for c in set.curves() {
        for ((acc, v), b) in shift.iter_mut().zip(&c.values).zip(base) {
            *acc += v - b;
        }
    }
    let n = set.len() as f64;
    Ok(base.iter().zip(&shift).map(|(b, d)| b + d / n).collect())
}

/// Unbiased sample covariance matrix of the curves (m x m).
pub fn covariance(set: &CurveSet) -> Result<DMatrix<f64>> {
    if set.len() < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: set.len(),
        });
    }
    let mean = mean_curve(set)?;
    Ok(centered_covariance(set, &mean))
}

fn centered_covariance(set: &CurveSet, mean: &[f64]) -> DMatrix<f64> {
    let m = mean.len();
    let n = set.len();
    let mut s = DMatrix::zeros(m, m);
    if n < 2 {
        return s;
    }
    let mut centered = vec![0.0; m];
    for c in set.curves() {
        for (j, (v, mu)) in c.values.iter().zip(mean).enumerate() {
            centered[j] = v - mu;
        }
        for a in 0..m {
            let ca = centered[a];
            for b in a..m {
                s[(a, b)] += ca * centered[b];
            }
        }
    }
    let denom = (n - 1) as f64;
    for a in 0..m {
        for b in a..m {
            let v = s[(a, b)] / denom;
            s[(a, b)] = v;
            s[(b, a)] = v;
        }
    }
    s
}

/// Flips `v` so its largest-magnitude entry is positive; near-ties go to the
/// earliest index.
fn orient(v: &mut [f64]) {
    let max = v.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    if max == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .position(|x| x.abs() >= max * (1.0 - SIGN_TIE_TOLERANCE))
        .expect("max is attained");
    if v[pivot] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Sorted eigenpairs of a symmetric matrix: eigenvalues non-increasing and
/// clamped at zero, eigenvectors oriented.
pub(crate) fn sorted_eigenpairs(s: &DMatrix<f64>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let m = s.nrows();
    let (eigenvalues, eigenvectors) = symmetric_eigen(s);
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eigenvalues[b].total_cmp(&eigenvalues[a]));
    let leading = eigenvalues[order[0]].max(0.0);
    let floor = leading * RELATIVE_EIGEN_FLOOR;
    let values = order
        .iter()
        .map(|&i| {
            let l = eigenvalues[i];
            if l <= floor || leading == 0.0 {
                0.0
            } else {
                l
            }
        })
        .collect();
    let vectors = order
        .iter()
        .map(|&i| {
            let mut v: Vec<f64> = eigenvectors.column(i).iter().copied().collect();
            orient(&mut v);
            v
        })
        .collect();
    (values, vectors)
}

/// Fits `p` components and returns the model together with the training scores.
///
/// A single curve, or a set of identical curves, yields a valid model with
/// zero eigenvalues. Requesting more components than the covariance rank sets
/// [`FpcaModel::rank_deficient`].
pub fn fit(set: &CurveSet, p: usize) -> Result<(FpcaModel, ScoreMatrix)> {
    let m = set.grid().len();
    if set.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    if p == 0 || p > m {
        return Err(Error::InvalidComponentCount {
            requested: p,
            grid_points: m,
        });
    }
    let mean = mean_curve(set)?;
    let s = centered_covariance(set, &mean);
    let (spectrum, mut vectors) = sorted_eigenpairs(&s);
    vectors.truncate(p);
    let rank = spectrum.iter().filter(|l| **l > 0.0).count();

    let model = FpcaModel {
        grid: set.grid().clone(),
        mean,
        components: vectors,
        spectrum,
        n_train: set.len(),
        rank_deficient: p > rank,
    };
    let rows = set
        .curves()
        .iter()
        .map(|c| project_values(&model, &c.values))
        .collect();
    let scores = ScoreMatrix {
        dates: set.dates(),
        rows,
    };
    Ok((model, scores))
}

fn project_values(model: &FpcaModel, values: &[f64]) -> Vec<f64> {
    model
        .components
        .iter()
        .map(|phi| {
            values
                .iter()
                .zip(&model.mean)
                .zip(phi)
                .map(|((v, mu), w)| (v - mu) * w)
                .sum()
        })
        .collect()
}

/// Scores of one curve: `<values - mean, phi_k>` for every retained component.
pub fn project(model: &FpcaModel, values: &[f64]) -> Result<Vec<f64>> {
    if values.len() != model.mean.len() {
        return Err(Error::GridMismatch {
            expected: model.mean.len(),
            got: values.len(),
        });
    }
    Ok(project_values(model, values))
}

/// `mean + sum_{k < truncation} scores[k] * phi_k`.
pub fn reconstruct(model: &FpcaModel, scores: &[f64], truncation: usize) -> Result<Vec<f64>> {
    let available = model.components.len().min(scores.len());
    if truncation > available {
        return Err(Error::TruncationTooLarge {
            requested: truncation,
            available,
        });
    }
    let mut out = model.mean.clone();
    for (phi, c) in model.components.iter().zip(scores).take(truncation) {
        for (o, w) in out.iter_mut().zip(phi) {
            *o += c * w;
        }
    }
    Ok(out)
}

/// Cumulative share of total variance carried by the first `p` eigenvalues.
pub fn explained_variability(model: &FpcaModel, p: usize) -> Result<f64> {
    if p > model.spectrum.len() {
        return Err(Error::TruncationTooLarge {
            requested: p,
            available: model.spectrum.len(),
        });
    }
    let total: f64 = model.spectrum.iter().sum();
    if total <= 0.0 {
        return Err(Error::DegenerateVariance);
    }
    let part: f64 = model.spectrum[..p].iter().sum();
    Ok((part / total).min(1.0))
}

/// `theta(p)` for every `p` in `1..=m`.
pub fn explained_variability_table(model: &FpcaModel) -> Result<Vec<f64>> {
    (1..=model.spectrum.len())
        .map(|p| explained_variability(model, p))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::DailyCurve;

    fn set(values: &[&[f64]]) -> CurveSet {
        let grid = TimeGrid::uniform(values[0].len()).unwrap();
        let start = NaiveDate::from_ymd_opt(2020, 1, 1).unwrap();
        let curves = values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                DailyCurve::new("e", start + chrono::Days::new(i as u64), v.to_vec())
            })
            .collect();
        CurveSet::new(grid, "e", curves).unwrap()
    }

    #[test]
    fn mean_examples() {
        assert_eq!(mean_curve(&set(&[&[0.0, 2.0], &[2.0, 0.0]])).unwrap(), vec![1.0, 1.0]);
        let same = [0.3, 0.7, 0.1];
        assert_eq!(mean_curve(&set(&[&same, &same, &same])).unwrap(), same.to_vec());
        assert_eq!(
            mean_curve(&set(&[&[1.0, 2.0, 3.0], &[2.0, 3.0, 4.0], &[6.0, 1.0, 2.0]])).unwrap(),
            vec![3.0, 2.0, 3.0]
        );
    }

    #[test]
    fn covariance_examples() {
        let same = [1.0, 5.0];
        let z = covariance(&set(&[&same, &same])).unwrap();
        assert!(z.iter().all(|v| *v == 0.0));
        let s = covariance(&set(&[&[0.0, 0.0], &[2.0, 2.0]])).unwrap();
        assert!(s.iter().all(|v| *v == 2.0));
        assert_eq!(
            covariance(&set(&[&[1.0, 2.0]])),
            Err(Error::InsufficientData { needed: 2, got: 1 })
        );
    }

    #[test]
    fn fit_rank_one_two_point_grid() {
        let (model, scores) = fit(&set(&[&[1.0, 1.0], &[2.0, 2.0], &[3.0, 3.0]]), 2).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert!((model.components[0][0] - h).abs() < 1e-12);
        assert!((model.components[0][1] - h).abs() < 1e-12);
        assert!((model.spectrum[0] - 2.0).abs() < 1e-12);
        assert_eq!(model.spectrum[1], 0.0);
        assert!(model.rank_deficient);
        // Scores are +-sqrt(2) and 0 on the first component.
        assert!((scores.rows[0][0] + 2f64.sqrt()).abs() < 1e-12);
        assert!(scores.rows[1][0].abs() < 1e-12);
    }

    #[test]
    fn fit_identical_curves_is_degenerate_not_an_error() {
        let c = [0.2, 0.9, 0.4];
        let (model, scores) = fit(&set(&[&c, &c, &c]), 2).unwrap();
        assert!(model.spectrum.iter().all(|l| *l == 0.0));
        assert!(scores.rows.iter().flatten().all(|s| *s == 0.0));
        assert_eq!(model.mean, c.to_vec());
        assert!(model.rank_deficient);
        assert_eq!(explained_variability(&model, 1), Err(Error::DegenerateVariance));
    }

    #[test]
    fn fit_single_curve() {
        let (model, scores) = fit(&set(&[&[1.0, 2.0, 3.0]]), 1).unwrap();
        assert_eq!(model.mean, vec![1.0, 2.0, 3.0]);
        assert_eq!(scores.rows, vec![vec![0.0]]);
    }

    #[test]
    fn fit_rejects_bad_component_counts() {
        let s = set(&[&[1.0, 2.0], &[2.0, 1.0]]);
        assert!(matches!(fit(&s, 0), Err(Error::InvalidComponentCount { .. })));
        assert!(matches!(fit(&s, 3), Err(Error::InvalidComponentCount { .. })));
    }

    #[test]
    fn project_and_reconstruct() {
        let s = set(&[
            &[1.0, 2.0, 0.5],
            &[2.0, 1.0, 0.7],
            &[0.0, 3.0, 1.9],
            &[1.5, 1.5, 0.2],
        ]);
        let (model, _) = fit(&s, 3).unwrap();
        assert!(project(&model, &model.mean).unwrap().iter().all(|v| v.abs() < 1e-15));
        let curve: Vec<f64> = model
            .mean
            .iter()
            .zip(&model.components[0])
            .map(|(m, p)| m + 3.0 * p)
            .collect();
        let sc = project(&model, &curve).unwrap();
        assert!((sc[0] - 3.0).abs() < 1e-10);
        assert!(sc[1].abs() < 1e-10 && sc[2].abs() < 1e-10);
        assert_eq!(reconstruct(&model, &sc, 0).unwrap(), model.mean);
        assert!(matches!(
            reconstruct(&model, &sc, 4),
            Err(Error::TruncationTooLarge { .. })
        ));
        assert!(matches!(project(&model, &[1.0]), Err(Error::GridMismatch { .. })));
    }

    #[test]
    fn theta_examples() {
        let grid = TimeGrid::uniform(2).unwrap();
        let mut model = FpcaModel {
            grid,
            mean: vec![0.0, 0.0],
            components: vec![vec![1.0, 0.0], vec![0.0, 1.0]],
            spectrum: vec![3.0, 1.0],
            n_train: 10,
            rank_deficient: false,
        };
        assert_eq!(explained_variability(&model, 1).unwrap(), 0.75);
        assert_eq!(explained_variability(&model, 2).unwrap(), 1.0);
        model.spectrum = vec![5.0, 0.0];
        assert_eq!(explained_variability(&model, 1).unwrap(), 1.0);
        assert_eq!(explained_variability(&model, 0).unwrap(), 0.0);
    }

    #[test]
    fn sign_convention() {
        let mut v = vec![0.1, -0.9, 0.3];
        orient(&mut v);
        assert_eq!(v, vec![-0.1, 0.9, -0.3]);
        let mut tie = vec![-0.5, 0.5];
        orient(&mut tie);
        assert_eq!(tie, vec![0.5, -0.5]);
    }
}
