use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use super::linalg::{least_squares, solve, Matrix};
use super::special::student_t_two_sided;
use crate::math;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelForm {
    Linear,
    LogisticCurve,
}

impl ModelForm {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelForm::Linear => "linear",
            ModelForm::LogisticCurve => "logistic_curve",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coefficient {
    pub estimate: f64,
    pub std_error: f64,
    pub t_value: f64,
    /// Two-sided, Student t with `n - k - 1` degrees of freedom.
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionResult {
    pub intercept: Coefficient,
    /// One entry per design column, in input order.
    pub coefficients: Vec<Coefficient>,
    pub r_squared: f64,
    /// Residual sum of squares over the number of rows.
    pub mse: f64,
    pub residual_df: usize,
    pub residuals: Vec<f64>,
    pub form: ModelForm,
}

fn check_design(design: &[Vec<f64>], target: &[f64]) -> Result<()> {
    if design.is_empty() {
        return Err(Error::InvalidArgument("design has no columns".to_string()));
    }
    if let Some(col) = design.iter().find(|c| c.len() != target.len()) {
        return Err(Error::InvalidArgument(alloc::format!(
            "design column has {} rows but the target has {}",
            col.len(),
            target.len()
        )));
    }
    if target.len() <= design.len() + 1 {
        return Err(Error::InsufficientData("regression needs more rows than parameters"));
    }
    Ok(())
}

/// Ordinary least squares with an intercept, classical standard errors and
/// t-test p-values. `design` is column-major.
pub fn ols(design: &[Vec<f64>], target: &[f64]) -> Result<RegressionResult> {
    check_design(design, target)?;
    let n = target.len();
    let k = design.len();
    let ones = vec![1.0; n];
    let mut cols: Vec<&[f64]> = vec![&ones];
    cols.extend(design.iter().map(|c| c.as_slice()));
    let x = Matrix::from_columns(&cols);
    let ls = least_squares(&x, target)?;
    let fitted = x.mul_vec(&ls.solution);
    let residuals: Vec<f64> = target.iter().zip(&fitted).map(|(y, f)| y - f).collect();
    let ssr: f64 = residuals.iter().map(|r| r * r).sum();
    let my = math::mean(target);
    let sst: f64 = target.iter().map(|y| (y - my) * (y - my)).sum();
    let df = n - k - 1;
    let sigma2 = ssr / df as f64;
    let p = k + 1;
    let coef = |j: usize| {
        let var: f64 = (0..p).map(|c| ls.r_inverse[(j, c)] * ls.r_inverse[(j, c)]).sum::<f64>() * sigma2;
        let se = math::sqrt(var);
        let est = ls.solution[j];
        let t = if se > 0.0 { est / se } else { f64::INFINITY * est.signum() };
        Coefficient {
            estimate: est,
            std_error: se,
            t_value: t,
            p_value: if se > 0.0 { student_t_two_sided(t, df as f64) } else { 0.0 },
        }
    };
    Ok(RegressionResult {
        intercept: coef(0),
        coefficients: (1..p).map(coef).collect(),
        r_squared: if sst > 0.0 { 1.0 - ssr / sst } else { 1.0 },
        mse: ssr / n as f64,
        residual_df: df,
        residuals,
        form: ModelForm::Linear,
    })
}

/// `y = offset + scale * sigmoid(b0 + sum_j b_j x_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticCurveFit {
    pub offset: f64,
    pub scale: f64,
    pub bias: f64,
    pub weights: Vec<f64>,
    pub mse: f64,
    pub iterations: usize,
}

impl LogisticCurveFit {
    pub fn predict_row(&self, row: impl Iterator<Item = f64>) -> f64 {
        let z = self.bias + row.zip(&self.weights).map(|(x, w)| x * w).sum::<f64>();
        self.offset + self.scale * sigmoid(z)
    }
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + math::exp(-z))
    } else {
        let e = math::exp(z);
        e / (1.0 + e)
    }
}

const LOGISTIC_MAX_ITER: usize = 500;

/// Fits a logistic-curve response by damped Gauss-Newton
/// (Levenberg-Marquardt), starting from a least-squares fit on the logit of
/// the rescaled target.
pub fn fit_logistic_curve(design: &[Vec<f64>], target: &[f64]) -> Result<LogisticCurveFit> {
    check_design(design, target)?;
    let n = target.len();
    let k = design.len();
    let lo = target.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = target.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let range = hi - lo;
    if range.is_nan() || range <= 0.0 {
        return Err(Error::UndefinedInput("logistic fit of a constant target"));
    }
    let offset = lo - 0.05 * range;
    let scale = 1.1 * range;
    let logit: Vec<f64> = target
        .iter()
        .map(|y| {
            let u = ((y - offset) / scale).clamp(1e-6, 1.0 - 1e-6);
            math::ln(u / (1.0 - u))
        })
        .collect();
    let init = super::ols(design, &logit)?;
    let mut theta = vec![offset, scale, init.intercept.estimate];
    theta.extend(init.coefficients.iter().map(|c| c.estimate));
    let np = theta.len();

    let sse = |th: &[f64]| -> f64 {
        (0..n)
            .map(|i| {
                let z = th[2] + (0..k).map(|j| th[3 + j] * design[j][i]).sum::<f64>();
                let r = target[i] - th[0] - th[1] * sigmoid(z);
                r * r
            })
            .sum()
    };
    let mut current = sse(&theta);
    let mut lambda = 1e-3;
    for iter in 1..=LOGISTIC_MAX_ITER {
        let mut jtj = Matrix::zeros(np, np);
        let mut jtr = vec![0.0; np];
        let mut row = vec![0.0; np];
        for i in 0..n {
            let z = theta[2] + (0..k).map(|j| theta[3 + j] * design[j][i]).sum::<f64>();
            let s = sigmoid(z);
            let ds = theta[1] * s * (1.0 - s);
            row[0] = 1.0;
            row[1] = s;
            row[2] = ds;
            for j in 0..k {
                row[3 + j] = ds * design[j][i];
            }
            let r = target[i] - theta[0] - theta[1] * s;
            for a in 0..np {
                jtr[a] += row[a] * r;
                for b in 0..np {
                    jtj[(a, b)] += row[a] * row[b];
                }
            }
        }
        let mut improved = false;
        while lambda < 1e16 {
            let mut damped = jtj.clone();
            for a in 0..np {
                damped[(a, a)] += lambda * jtj[(a, a)].max(1e-12);
            }
            if let Ok(step) = solve(&damped, &jtr) {
                let trial: Vec<f64> = theta.iter().zip(&step).map(|(t, d)| t + d).collect();
                let trial_sse = sse(&trial);
                if trial_sse.is_finite() && trial_sse < current {
                    let rel = (current - trial_sse) / current.max(f64::MIN_POSITIVE);
                    theta = trial;
                    current = trial_sse;
                    lambda = (lambda / 10.0).max(1e-12);
                    improved = true;
                    if rel < 1e-12 {
                        return Ok(finish(theta, current, n, iter));
                    }
                    break;
                }
            }
            lambda *= 10.0;
        }
        if !improved {
            // no descent direction left: a stationary point
            return Ok(finish(theta, current, n, iter));
        }
    }
    Err(Error::NotConverged {
        iterations: LOGISTIC_MAX_ITER,
        residual: current / n as f64,
    })
}

fn finish(theta: Vec<f64>, sse: f64, n: usize, iterations: usize) -> LogisticCurveFit {
    LogisticCurveFit {
        offset: theta[0],
        scale: theta[1],
        bias: theta[2],
        weights: theta[3..].to_vec(),
        mse: sse / n as f64,
        iterations,
    }
}

/// Mean-squared errors of the linear and logistic-curve fits. A model that
/// fails to fit is reported through its error string.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelComparison {
    pub linear_mse: core::result::Result<f64, String>,
    pub logistic_mse: core::result::Result<f64, String>,
    /// Lower MSE wins; ties go to the linear model.
    pub winner: ModelForm,
}

pub fn compare_models(design: &[Vec<f64>], target: &[f64]) -> Result<ModelComparison> {
    check_design(design, target)?;
    let linear = ols(design, target).map(|r| r.mse);
    let logistic = fit_logistic_curve(design, target).map(|f| f.mse);
    let winner = match (&linear, &logistic) {
        (Ok(a), Ok(b)) => {
            if b < a {
                ModelForm::LogisticCurve
            } else {
                ModelForm::Linear
            }
        }
        (Ok(_), Err(_)) => ModelForm::Linear,
        (Err(_), Ok(_)) => ModelForm::LogisticCurve,
        (Err(e), Err(_)) => return Err(e.clone()),
    };
    Ok(ModelComparison {
        linear_mse: linear.map_err(|e| e.to_string()),
        logistic_mse: logistic.map_err(|e| e.to_string()),
        winner,
    })
}
