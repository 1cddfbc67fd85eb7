use serde::Serialize;

use crate::error::{Error, Result};

/// Sample sizes below this are left out of rate fits.
pub const MIN_FIT_N: f64 = 128.0;

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Unbiased sample variance; needs at least two values.
pub fn sample_variance(x: &[f64]) -> Result<f64> {
    if x.len() < 2 {
        return Err(Error::InsufficientData(format!("variance needs 2 values, got {}", x.len())));
    }
    let m = mean(x);
    Ok(x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() - 1) as f64)
}

/// `mean((x - exact)^2)`.
pub fn mse(x: &[f64], exact: f64) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::InsufficientData("MSE of an empty sample".into()));
    }
    Ok(x.iter().map(|v| (v - exact).powi(2)).sum::<f64>() / x.len() as f64)
}

/// Standard error of the mean.
pub fn standard_error(x: &[f64]) -> Result<f64> {
    Ok((sample_variance(x)? / x.len() as f64).sqrt())
}

/// Replicate statistics of one `(method, n)` cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicateSummary {
    pub replicates: usize,
    pub mean: f64,
    pub variance: f64,
    pub mse: Option<f64>,
    /// Standard error of the variance (or MSE when available) estimate.
    pub spread_se: f64,
}

impl ReplicateSummary {
    pub fn new(x: &[f64], exact: Option<f64>) -> Result<Self> {
        let variance = sample_variance(x)?;
        let mse = exact.map(|u| mse(x, u)).transpose()?;
        let spread_se = match exact {
            Some(u) => error_moment_se(x, u),
            None => variance_se(x, variance),
        };
        Ok(Self { replicates: x.len(), mean: mean(x), variance, mse, spread_se })
    }

    /// MSE when the exact value is known, otherwise the variance.
    pub fn spread(&self) -> f64 {
        self.mse.unwrap_or(self.variance)
    }
}

/// Large-sample SE of the unbiased variance: `sqrt((m4 - s^4 (R-3)/(R-1)) / R)`.
fn variance_se(x: &[f64], s2: f64) -> f64 {
    let r = x.len() as f64;
    let m = mean(x);
    let m4 = x.iter().map(|v| (v - m).powi(4)).sum::<f64>() / r;
    ((m4 - s2 * s2 * (r - 3.0) / (r - 1.0)).max(0.0) / r).sqrt()
}

fn error_moment_se(x: &[f64], exact: f64) -> f64 {
    let sq: Vec<f64> = x.iter().map(|v| (v - exact).powi(2)).collect();
    standard_error(&sq).unwrap_or(0.0)
}

/// Least-squares line through `(ln n, ln value)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    /// Pairs with `n >= 128` that entered the fit.
    pub points: usize,
}

impl LogLogFit {
    pub fn predict(&self, n: f64) -> f64 {
        (self.intercept + self.slope * n.ln()).exp()
    }
}

/// Fit `ln value = intercept + slope ln n` over the pairs with `n >= 128`.
pub fn fit_loglog(points: &[(f64, f64)]) -> Result<LogLogFit> {
    let used: Vec<(f64, f64)> = points
        .iter()
        .filter(|(n, _)| *n >= MIN_FIT_N)
        .map(|&(n, v)| (n.ln(), v.ln()))
        .collect();
    if used.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "log-log fit needs 2 pairs with n >= {MIN_FIT_N}, got {}",
            used.len()
        )));
    }
    if used.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
        return Err(Error::NonFinite);
    }
    let k = used.len() as f64;
    let mx = used.iter().map(|p| p.0).sum::<f64>() / k;
    let my = used.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = used.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientData("log-log fit needs two distinct n".into()));
    }
    let sxy: f64 = used.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    Ok(LogLogFit { slope, intercept: my - slope * mx, points: used.len() })
}

/// A ratio of two spread estimates with its delta-method standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ratio {
    pub value: f64,
    pub se: f64,
}

/// `spread(MC) / spread(method)` at one `n`: MSE ratio when `exact` is
/// given, variance ratio otherwise.
pub fn reduction_factor(method: &[f64], mc: &[f64], exact: Option<f64>) -> Result<Ratio> {
    let a = ReplicateSummary::new(mc, exact)?;
    let b = ReplicateSummary::new(method, exact)?;
    if b.spread() == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let value = a.spread() / b.spread();
    let rel = if method == mc {
        0.0
    } else {
        ((a.spread_se / a.spread()).powi(2) + (b.spread_se / b.spread()).powi(2)).sqrt()
    };
    Ok(Ratio { value, se: value * rel })
}
