mod common;

use chrono::{Days, NaiveDate};
use common::oracle;
use loadfpca::curves::{CurveSet, DailyCurve, TimeGrid};
use loadfpca::fpca::{explained_variability, explained_variability_table, fit, project, reconstruct};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn curve_set(rows: &[Vec<f64>]) -> CurveSet {
    let start = NaiveDate::from_ymd_opt(2015, 3, 1).unwrap();
    let curves = rows
        .iter()
        .enumerate()
        .map(|(i, r)| DailyCurve::new("x", start + Days::new(i as u64), r.clone()))
        .collect();
    CurveSet::new(TimeGrid::uniform(rows[0].len()).unwrap(), "x", curves).unwrap()
}

/// A few smooth random shapes with random amplitudes plus small noise.
fn random_rows(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Vec<Vec<f64>> {
    let shapes: Vec<Vec<f64>> = (0..3)
        .map(|_| {
            let phase: f64 = rng.gen_range(0.0..6.3);
            let freq = rng.gen_range(1..=3) as f64;
            (0..m)
                .map(|j| (freq * j as f64 / m as f64 * 6.283 + phase).sin())
                .collect()
        })
        .collect();
    (0..n)
        .map(|_| {
            let amps: Vec<f64> = (0..3).map(|k| rng.gen_range(-1.0..1.0) / (k + 1) as f64).collect();
            (0..m)
                .map(|j| {
                    0.5 + amps.iter().zip(&shapes).map(|(a, s)| a * s[j]).sum::<f64>()
                        + rng.gen_range(-0.05..0.05)
                })
                .collect()
        })
        .collect()
}

fn instances() -> Vec<Vec<Vec<f64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
    (0..200)
        .map(|_| {
            let m = rng.gen_range(2..=8);
            let n = rng.gen_range(2..=20);
            random_rows(&mut rng, n, m)
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[test]
fn components_are_orthonormal() {
    for rows in instances() {
        let m = rows[0].len();
        let (model, _) = fit(&curve_set(&rows), m).unwrap();
        for a in 0..m {
            for b in 0..m {
                let expected = if a == b { 1.0 } else { 0.0 };
                let got = dot(&model.components[a], &model.components[b]);
                assert!((got - expected).abs() <= 1e-8, "<phi_{a}, phi_{b}> = {got}");
            }
        }
    }
}

#[test]
fn eigen_residual_is_small() {
    for rows in instances() {
        let m = rows[0].len();
        let s = oracle::sample_covariance(&rows);
        let (model, _) = fit(&curve_set(&rows), m).unwrap();
        for (phi, lambda) in model.components.iter().zip(&model.spectrum) {
            let residual: f64 = (0..m)
                .map(|i| (dot(&s[i], phi) - lambda * phi[i]).powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(residual <= 1e-6, "residual {residual}");
        }
    }
}

#[test]
fn score_variance_equals_eigenvalue() {
    for rows in instances() {
        let m = rows[0].len();
        let n = rows.len();
        let (model, scores) = fit(&curve_set(&rows), m).unwrap();
        let top = model.spectrum[0];
        for k in 0..m {
            let col = scores.column(k);
            let mean = col.iter().sum::<f64>() / n as f64;
            let var = col.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0);
            let lambda = model.spectrum[k];
            assert!(
                (var - lambda).abs() <= 1e-6 * lambda + 1e-12 * top,
                "k={k}: var {var} vs lambda {lambda}"
            );
        }
    }
}

#[test]
fn theta_is_monotone_and_ends_at_one() {
    for rows in instances() {
        let m = rows[0].len();
        let (model, _) = fit(&curve_set(&rows), m).unwrap();
        let table = explained_variability_table(&model).unwrap();
        assert_eq!(table.len(), m);
        assert!(table.windows(2).all(|w| w[1] >= w[0]));
        assert!((table[m - 1] - 1.0).abs() <= 1e-10);
        assert!(table.iter().all(|t| (0.0..=1.0 + 1e-12).contains(t)));
    }
}

#[test]
fn full_reconstruction_is_exact() {
    for rows in instances() {
        let m = rows[0].len();
        let (model, scores) = fit(&curve_set(&rows), m).unwrap();
        for (row, s) in rows.iter().zip(&scores.rows) {
            let back = reconstruct(&model, s, m).unwrap();
            let err = row.iter().zip(&back).fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
            assert!(err <= 1e-8, "reconstruction error {err}");
        }
    }
}

#[test]
fn truncated_residual_equals_discarded_eigenvalues() {
    for rows in instances() {
        let m = rows[0].len();
        let n = rows.len() as f64;
        let (model, scores) = fit(&curve_set(&rows), m).unwrap();
        let top = model.spectrum[0];
        for p in 1..m {
            let sse: f64 = rows
                .iter()
                .zip(&scores.rows)
                .map(|(row, s)| {
                    let back = reconstruct(&model, &s[..p], p).unwrap();
                    row.iter().zip(&back).map(|(x, y)| (x - y).powi(2)).sum::<f64>()
                })
                .sum();
            let tail: f64 = model.spectrum[p..].iter().sum();
            assert!(((sse / (n - 1.0)) - tail).abs() <= 1e-9 * (1.0 + top));
            let theta = explained_variability(&model, p).unwrap();
            let total: f64 = model.spectrum.iter().sum();
            assert!((theta - (1.0 - tail / total)).abs() <= 1e-10);
        }
    }
}

#[test]
fn matches_jacobi_oracle_on_small_grids() {
    let mut checked = 0;
    for rows in instances().into_iter().filter(|r| r[0].len() <= 4) {
        let m = rows[0].len();
        let s = oracle::sample_covariance(&rows);
        let (values, vectors) = oracle::jacobi_eigen(&s);
        let (model, _) = fit(&curve_set(&rows), m).unwrap();
        let top = values[0];
        for k in 0..m {
            assert!(
                (model.spectrum[k] - values[k].max(0.0)).abs() <= 1e-8,
                "lambda_{k}: {} vs {}",
                model.spectrum[k],
                values[k]
            );
            let separated = |j: usize| (values[k] - values[j]).abs() > 1e-4 * top;
            let isolated = values[k] > 1e-6 * top
                && (k == 0 || separated(k - 1))
                && (k + 1 == m || separated(k + 1));
            if isolated {
                let diff = model.components[k]
                    .iter()
                    .zip(&vectors[k])
                    .fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
                assert!(diff <= 1e-8, "phi_{k} differs by {diff}");
                checked += 1;
            }
        }
    }
    assert!(checked > 50, "only {checked} eigenvectors compared");
}

#[test]
fn projection_of_training_curve_matches_scores() {
    for rows in instances().into_iter().take(40) {
        let m = rows[0].len();
        let (model, scores) = fit(&curve_set(&rows), m.min(3)).unwrap();
        for (row, s) in rows.iter().zip(&scores.rows) {
            assert_eq!(&project(&model, row).unwrap(), s);
        }
    }
}
