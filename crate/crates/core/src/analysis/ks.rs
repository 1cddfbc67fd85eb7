use serde::Serialize;

use super::poisson::poisson_cdf;
use crate::error::{Error, Result};

/// `sup_x |ECDF(x) - F(x)|` of a sample against a continuous CDF.
pub fn ks_statistic(sample: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::InsufficientData("KS distance of an empty sample".into()));
    }
    let mut x = sample.to_vec();
    x.sort_by(f64::total_cmp);
    let n = x.len() as f64;
    Ok(x.iter().enumerate().fold(0.0f64, |d, (i, &v)| {
        let f = cdf(v);
        d.max((i + 1) as f64 / n - f).max(f - i as f64 / n)
    }))
}

/// KS distance of exit angles (in turns) from walks started at `z` on the unit
/// disk, against the Poisson-kernel law.
pub fn ks_distance(angles: &[f64], z: [f64; 2]) -> Result<f64> {
    poisson_cdf(z, 0.0)?;
    ks_statistic(angles, |x| poisson_cdf(z, x).expect("start checked"))
}

/// Mean KS of IID samples of size `n`, to leading order.
pub fn ks_reference_mc(n: usize) -> f64 {
    (std::f64::consts::PI / 2.0).sqrt() * std::f64::consts::LN_2 / (n as f64).sqrt()
}

/// Smallest KS distance any `n` points can reach.
pub fn ks_reference_opt(n: usize) -> f64 {
    0.5 / n as f64
}

/// Two-sample Kolmogorov–Smirnov test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoSampleKs {
    pub statistic: f64,
    /// Asymptotic p-value from the Kolmogorov distribution.
    pub p_value: f64,
}

pub fn two_sample_ks(a: &[f64], b: &[f64]) -> Result<TwoSampleKs> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InsufficientData("two-sample KS needs two nonempty samples".into()));
    }
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    let ne = n * m / (n + m);
    let lambda = (ne.sqrt() + 0.12 + 0.11 / ne.sqrt()) * d;
    Ok(TwoSampleKs { statistic: d, p_value: kolmogorov_survival(lambda) })
}

/// `P(K > lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2)`.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = f64::from(k);
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Mean KS distance and its standard error over replicates, with the two
/// reference values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KsReport {
    pub t: f64,
    pub n: usize,
    pub mean_ks: f64,
    pub se_ks: f64,
    pub ref_mc: f64,
    pub ref_opt: f64,
}

impl KsReport {
    pub fn new(t: f64, n: usize, distances: &[f64]) -> Result<Self> {
        Ok(Self {
            t,
            n,
            mean_ks: super::stats::mean(distances),
            se_ks: super::stats::standard_error(distances)?,
            ref_mc: ks_reference_mc(n),
            ref_opt: ks_reference_opt(n),
        })
    }
}
