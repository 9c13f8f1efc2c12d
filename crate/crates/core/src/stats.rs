//! Log-linear fits of decay and growth models.
//!
//! Two models, both fitted by unweighted ordinary least squares:
//!
//! * exponential fraction: `p(n) = a * r^n`, regress `ln p` on `n`;
//! * cubic-corrected count: `count(n) = c * A^n / n^3`, regress `ln count + 3 ln n` on `n`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinatorics::ExactCount;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionPoint {
    pub size: u32,
    pub fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountPoint {
    pub size: u32,
    pub count: ExactCount,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FitModel {
    ExponentialFraction,
    PowerCubeCount,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub model: FitModel,
    /// `a` for the exponential model, `c` for the cubic-corrected count.
    pub scale: f64,
    /// `r` for the exponential model, the base `A` for the count model.
    pub ratio: f64,
    #[serde(rename = "rss")]
    pub residual_sum_squares: f64,
    #[serde(rename = "points")]
    pub points_used: usize,
    /// Sizes dropped because their value was zero or negative.
    #[serde(skip)]
    pub excluded: Vec<u32>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("need at least 2 points with positive values, have {usable} (excluded sizes: {excluded:?})")]
    TooFewPoints { usable: usize, excluded: Vec<u32> },
    #[error("all usable points share the same size; slope is undefined")]
    DegenerateSizes,
}

struct Line {
    slope: f64,
    intercept: f64,
    rss: f64,
}

fn least_squares(xy: &[(f64, f64)]) -> Result<Line, FitError> {
    let k = xy.len() as f64;
    let mean_x = xy.iter().map(|p| p.0).sum::<f64>() / k;
    let mean_y = xy.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    if sxx == 0.0 {
        return Err(FitError::DegenerateSizes);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let rss = xy.iter().map(|&(x, y)| (y - intercept - slope * x).powi(2)).sum();
    Ok(Line { slope, intercept, rss })
}

fn fit_log_linear(model: FitModel, points: impl Iterator<Item = (u32, Option<f64>)>) -> Result<FitResult, FitError> {
    let mut xy = Vec::new();
    let mut excluded = Vec::new();
    for (size, y) in points {
        match y {
            Some(y) if y.is_finite() => xy.push((f64::from(size), y)),
            _ => excluded.push(size),
        }
    }
    if xy.len() < 2 {
        return Err(FitError::TooFewPoints {
            usable: xy.len(),
            excluded,
        });
    }
    // Sum in a fixed order so the result does not depend on input order.
    xy.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let line = least_squares(&xy)?;
    Ok(FitResult {
        model,
        scale: line.intercept.exp(),
        ratio: line.slope.exp(),
        residual_sum_squares: line.rss,
        points_used: xy.len(),
        excluded,
    })
}

/// Fits `p(n) = a * r^n`. Non-positive fractions are excluded and listed.
pub fn fit_exponential(points: &[FractionPoint]) -> Result<FitResult, FitError> {
    fit_log_linear(
        FitModel::ExponentialFraction,
        points
            .iter()
            .map(|p| (p.size, (p.fraction > 0.0).then(|| p.fraction.ln()))),
    )
}

/// Fits `count(n) = c * A^n / n^3`. Zero counts are excluded and listed.
pub fn fit_power_cube(points: &[CountPoint]) -> Result<FitResult, FitError> {
    fit_log_linear(
        FitModel::PowerCubeCount,
        points.iter().map(|p| {
            let usable = !p.count.is_zero() && p.size > 0;
            (p.size, usable.then(|| p.count.ln() + 3.0 * f64::from(p.size).ln()))
        }),
    )
}

/// Evaluates a fitted model at size `n`.
pub fn predict(fit: &FitResult, n: u32) -> f64 {
    let n = f64::from(n);
    match fit.model {
        FitModel::ExponentialFraction => fit.scale * fit.ratio.powf(n),
        FitModel::PowerCubeCount => fit.scale * fit.ratio.powf(n) / n.powi(3),
    }
}

/// The fitted line in plot coordinates: `ln p` (or `ln count + 3 ln n`) at `n`.
pub fn predict_log(fit: &FitResult, n: f64) -> f64 {
    fit.scale.ln() + n * fit.ratio.ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exp_model(a: f64, r: f64) -> FitResult {
        FitResult {
            model: FitModel::ExponentialFraction,
            scale: a,
            ratio: r,
            residual_sum_squares: 0.0,
            points_used: 2,
            excluded: vec![],
        }
    }

    #[test]
    fn exact_exponential_data() {
        let points: Vec<_> = (5..=20)
            .map(|n| FractionPoint {
                size: n,
                fraction: 0.5 * 0.9f64.powi(n as i32),
            })
            .collect();
        let fit = fit_exponential(&points).unwrap();
        assert!((fit.scale - 0.5).abs() < 1e-12);
        assert!((fit.ratio - 0.9).abs() < 1e-12);
        assert!(fit.residual_sum_squares < 1e-10);
        assert_eq!(fit.points_used, 16);

        let mut reversed = points.clone();
        reversed.reverse();
        assert_eq!(fit_exponential(&reversed).unwrap(), fit);
    }

    #[test]
    fn exact_power_cube_data() {
        // count(n) = 10^30 * 7^n / n^3, exact up to integer truncation.
        use num_bigint::BigUint;
        let scale = BigUint::from(10u32).pow(30);
        let points: Vec<_> = (2..=14u32)
            .map(|n| CountPoint {
                size: n,
                count: ExactCount::from(&scale * BigUint::from(7u32).pow(n) / BigUint::from(n.pow(3))),
            })
            .collect();
        let fit = fit_power_cube(&points).unwrap();
        assert!((fit.ratio - 7.0).abs() < 1e-9, "{}", fit.ratio);
        assert!((fit.scale / 1e30 - 1.0).abs() < 1e-9);
        assert!(fit.residual_sum_squares < 1e-10);
        assert!((predict(&fit, 10) - 1e30 * 7f64.powi(10) / 1000.0).abs() / predict(&fit, 10) < 1e-9);
    }

    #[test]
    fn zero_points_are_excluded() {
        let points = [
            FractionPoint { size: 3, fraction: 0.0 },
            FractionPoint {
                size: 4,
                fraction: 0.25,
            },
            FractionPoint {
                size: 5,
                fraction: 0.125,
            },
        ];
        let fit = fit_exponential(&points).unwrap();
        assert_eq!(fit.excluded, vec![3]);
        assert_eq!(fit.points_used, 2);
        assert!((fit.ratio - 0.5).abs() < 1e-12);

        let err = fit_exponential(&points[..2]).unwrap_err();
        assert_eq!(
            err,
            FitError::TooFewPoints {
                usable: 1,
                excluded: vec![3]
            }
        );
        let same = [
            FractionPoint {
                size: 4,
                fraction: 0.25,
            },
            FractionPoint { size: 4, fraction: 0.5 },
        ];
        assert_eq!(fit_exponential(&same), Err(FitError::DegenerateSizes));
    }

    #[test]
    fn prediction_examples() {
        assert!((predict(&exp_model(0.5, 0.9), 0) - 0.5).abs() < 1e-15);
        let hard = predict(&exp_model(0.09407, 0.7705), 100);
        assert!(hard > 1e-13 && hard < 1e-12, "{hard}");
        let p14 = predict(&exp_model(0.4644, 0.91641), 14);
        let table = 978_034_001_472f64 / 7_152_629_313_600f64;
        assert!((p14 - table).abs() / table < 0.02, "{p14} vs {table}");
    }

    #[test]
    fn json_schema() {
        let json = serde_json::to_value(exp_model(0.5, 0.9)).unwrap();
        let keys: Vec<&str> = json.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys.len(), 5);
        for k in ["model", "scale", "ratio", "rss", "points"] {
            assert!(keys.contains(&k));
        }
        assert_eq!(json["model"], "EXPONENTIAL_FRACTION");
    }
}
