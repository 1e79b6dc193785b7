//! Correlation, regression, power-law and agreement statistics.

mod kappa;
pub mod linalg;
mod regression;
pub mod special;

use alloc::vec::Vec;

use crate::math;
use crate::{Error, Result};

pub use kappa::{cohens_kappa, kappa_from_confusion, AgreementResult};
pub use regression::{
    compare_models, fit_logistic_curve, ols, Coefficient, LogisticCurveFit, ModelComparison, ModelForm,
    RegressionResult,
};

/// Sample Pearson correlation.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument(alloc::format!(
            "pearson needs equal lengths, got {} and {}",
            x.len(),
            y.len()
        )));
    }
    if x.len() < 3 {
        return Err(Error::InsufficientData("pearson needs at least three points"));
    }
    let mx = math::mean(x);
    let my = math::mean(y);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::UndefinedCorrelation);
    }
    Ok((sxy / math::sqrt(sxx * syy)).clamp(-1.0, 1.0))
}

/// Two-sided p-value of a Pearson correlation `r` over `n` points, from the
/// t statistic with `n - 2` degrees of freedom.
pub fn pearson_p_value(r: f64, n: usize) -> f64 {
    if n < 3 {
        return f64::NAN;
    }
    let df = n as f64 - 2.0;
    if r.abs() >= 1.0 {
        return 0.0;
    }
    let t = r * math::sqrt(df / (1.0 - r * r));
    special::student_t_two_sided(t, df)
}

/// Standardizes each column to mean 0 and sample standard deviation 1.
pub fn zscore(columns: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    columns
        .iter()
        .enumerate()
        .map(|(i, col)| {
            if col.len() < 2 {
                return Err(Error::InsufficientData("z-score needs at least two rows"));
            }
            let m = math::mean(col);
            let var = col.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (col.len() as f64 - 1.0);
            let sd = math::sqrt(var);
            if sd.is_nan() || sd <= f64::EPSILON * m.abs() {
                return Err(Error::DegenerateColumn(i));
            }
            Ok(col.iter().map(|x| (x - m) / sd).collect())
        })
        .collect()
}

/// Power-law exponent from least squares on `(ln x, ln y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub std_error: f64,
    /// `ln` of the prefactor.
    pub log_prefactor: f64,
    pub points: usize,
}

pub fn powerlaw_fit(x: &[f64], y: &[f64]) -> Result<PowerLawFit> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument("power-law fit needs equal lengths".into()));
    }
    if x.len() < 3 {
        return Err(Error::InsufficientData("power-law fit needs at least three points"));
    }
    for (what, xs) in [("power-law x", x), ("power-law y", y)] {
        if let Some((i, &v)) = xs.iter().enumerate().find(|(_, v)| !v.is_finite() || **v <= 0.0) {
            return Err(Error::Domain { what, index: i, value: v });
        }
    }
    let lx: Vec<f64> = x.iter().map(|&v| math::ln(v)).collect();
    let ly: Vec<f64> = y.iter().map(|&v| math::ln(v)).collect();
    let mx = math::mean(&lx);
    let my = math::mean(&ly);
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::UndefinedInput("power-law fit with constant x"));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(a, b)| {
            let r = b - intercept - slope * a;
            r * r
        })
        .sum();
    let n = lx.len() as f64;
    Ok(PowerLawFit {
        exponent: slope,
        std_error: math::sqrt(ssr / (n - 2.0) / sxx),
        log_prefactor: intercept,
        points: lx.len(),
    })
}
