//! Vector-wise total Sobol' indices by the Jansen estimator, and the partial
//! mean dimension they add up to.

use serde::Serialize;

use super::stats::{mean, sample_variance};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::qmc::{derive_seed, mc_column};

/// Seed tag separating refreshed randomizations from the base schedule.
const REFRESH_TAG: u64 = 0x4a61_6e73_656e;

/// One replicate of the estimator: `F(X)` and `F(X_{-k} : X*_k)` for each
/// column `k = 1..=K'`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JansenSample {
    pub base: f64,
    pub refreshed: Vec<f64>,
}

/// What one refreshed "column" stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RefreshUnit {
    /// One scalar input column.
    ScalarColumn,
    /// The whole randomization of one walk step.
    StepBlock,
}

impl RefreshUnit {
    pub fn name(self) -> &'static str {
        match self {
            RefreshUnit::ScalarColumn => "scalar-column",
            RefreshUnit::StepBlock => "step-block",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnIndex {
    pub k: usize,
    /// `mean(0.5 (F - F_k)^2)`.
    pub tau2: f64,
    /// `tau2` truncated at zero.
    pub tau2_clamped: f64,
    pub tau2_se: f64,
    /// `tau2 / sigma2`.
    pub tau2_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SobolReport {
    pub unit: RefreshUnit,
    pub replicates: usize,
    pub sigma2: f64,
    pub columns: Vec<ColumnIndex>,
    /// `sum_k tau2_k / sigma2` from raw terms.
    pub nu: f64,
    /// The same sum from clamped terms.
    pub nu_clamped: f64,
    /// Delete-one jackknife standard error of `nu`.
    pub nu_se: f64,
}

/// Partial mean dimension `sum_k tau2_k / sigma2`.
pub fn mean_dimension(tau2: &[f64], sigma2: f64) -> Result<f64> {
    if !(sigma2 > 0.0) {
        return Err(Error::ZeroVariance);
    }
    Ok(tau2.iter().sum::<f64>() / sigma2)
}

fn nu_of(samples: &[&JansenSample]) -> Result<f64> {
    let base: Vec<f64> = samples.iter().map(|s| s.base).collect();
    let sigma2 = sample_variance(&base)?;
    let k = samples[0].refreshed.len();
    let tau2: Vec<f64> = (0..k)
        .map(|c| mean(&samples.iter().map(|s| 0.5 * (s.base - s.refreshed[c]).powi(2)).collect::<Vec<_>>()))
        .collect();
    mean_dimension(&tau2, sigma2)
}

impl SobolReport {
    pub fn from_samples(samples: &[JansenSample], unit: RefreshUnit) -> Result<Self> {
        if samples.len() < 3 {
            return Err(Error::InsufficientData("Jansen estimates need at least 3 replicates".into()));
        }
        let k = samples[0].refreshed.len();
        if k == 0 || samples.iter().any(|s| s.refreshed.len() != k) {
            return Err(Error::InsufficientData("replicates disagree on the column count".into()));
        }
        let base: Vec<f64> = samples.iter().map(|s| s.base).collect();
        let sigma2 = sample_variance(&base)?;
        if !(sigma2 > 0.0) {
            return Err(Error::ZeroVariance);
        }
        let r = samples.len() as f64;
        let columns: Vec<ColumnIndex> = (0..k)
            .map(|c| {
                let terms: Vec<f64> =
                    samples.iter().map(|s| 0.5 * (s.base - s.refreshed[c]).powi(2)).collect();
                let tau2 = mean(&terms);
                let tau2_se = (sample_variance(&terms).unwrap_or(0.0) / r).sqrt();
                ColumnIndex { k: c + 1, tau2, tau2_clamped: tau2.max(0.0), tau2_se, tau2_norm: tau2 / sigma2 }
            })
            .collect();
        let raw: Vec<f64> = columns.iter().map(|c| c.tau2).collect();
        let clamped: Vec<f64> = columns.iter().map(|c| c.tau2_clamped).collect();
        let nu = mean_dimension(&raw, sigma2)?;
        let nu_clamped = mean_dimension(&clamped, sigma2)?;
        let refs: Vec<&JansenSample> = samples.iter().collect();
        let leave_out: Vec<f64> = (0..refs.len())
            .map(|i| {
                let rest: Vec<&JansenSample> =
                    refs.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, s)| *s).collect();
                nu_of(&rest)
            })
            .collect::<Result<_>>()?;
        let jm = mean(&leave_out);
        let nu_se = ((r - 1.0) / r * leave_out.iter().map(|v| (v - jm).powi(2)).sum::<f64>()).sqrt();
        Ok(Self { unit, replicates: samples.len(), sigma2, columns, nu, nu_clamped, nu_se })
    }
}

/// Refresh convention an engine uses: whole step blocks for array methods,
/// scalar columns otherwise.
pub fn refresh_unit_of(engine: &Engine) -> RefreshUnit {
    if engine.config().method.is_array() {
        RefreshUnit::StepBlock
    } else {
        RefreshUnit::ScalarColumn
    }
}

/// One Jansen replicate of an engine: the base estimate under the replicate's
/// schedule and `columns` re-runs, each with one refresh unit redrawn.
pub fn jansen_sample(engine: &Engine, replicate: u64, columns: usize) -> Result<JansenSample> {
    let total = engine.refresh_units();
    if columns == 0 || columns > total {
        return Err(Error::ColumnOutOfRange { k: columns, columns: total });
    }
    let schedule = engine.schedule(replicate);
    let fresh_root = derive_seed(engine.config().seed ^ REFRESH_TAG, &[replicate]);
    let refreshed: Vec<_> = (0..columns)
        .map(|u| engine.refresh_unit(&schedule, u, derive_seed(fresh_root, &[u as u64])))
        .collect();
    let upto = refreshed.iter().map(|(_, k)| *k).max().unwrap_or(1);
    let (base, saved) = engine.run_with_checkpoints(&schedule, upto)?;
    let values = refreshed
        .iter()
        .map(|(sched, k)| Ok(engine.resume(&saved[k - 1], sched)?.estimate))
        .collect::<Result<Vec<f64>>>()?;
    Ok(JansenSample { base: base.estimate, refreshed: values })
}

/// Synthetic functionals of an `n x K'` matrix of IID uniforms with known
/// mean dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SyntheticFunctional {
    /// `sum_k sqrt(12 n) (mean_k - 1/2)`: every column adds unit variance and
    /// the mean dimension is 1.
    Additive,
    /// `12 n (mean_1 - 1/2)(mean_2 - 1/2)`: a pure two-column interaction with
    /// mean dimension 2.
    Product,
}

impl SyntheticFunctional {
    pub fn exact_mean_dimension(self) -> f64 {
        match self {
            SyntheticFunctional::Additive => 1.0,
            SyntheticFunctional::Product => 2.0,
        }
    }

    fn eval(self, centered_means: &[f64], n: usize) -> f64 {
        let scale = 12.0 * n as f64;
        match self {
            SyntheticFunctional::Additive => centered_means.iter().sum::<f64>() * scale.sqrt(),
            SyntheticFunctional::Product => scale * centered_means[0] * centered_means[1],
        }
    }

    /// Jansen replicate of the functional over `columns` columns of `n` rows.
    pub fn sample(self, n: usize, columns: usize, seed: u64, replicate: u64) -> Result<JansenSample> {
        let min = if self == SyntheticFunctional::Product { 2 } else { 1 };
        if columns < min {
            return Err(Error::ColumnOutOfRange { k: columns, columns: min });
        }
        let centered = |s: u64| mean(&mc_column(n, s)) - 0.5;
        let means: Vec<f64> =
            (0..columns).map(|k| centered(derive_seed(seed, &[replicate, k as u64]))).collect();
        let base = self.eval(&means, n);
        let refreshed = (0..columns)
            .map(|k| {
                let mut m = means.clone();
                m[k] = centered(derive_seed(seed ^ REFRESH_TAG, &[replicate, k as u64]));
                self.eval(&m, n)
            })
            .collect();
        Ok(JansenSample { base, refreshed })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{Method, PointKind, RunConfig};
    use crate::geometry::Scene;

    fn synthetic_report(f: SyntheticFunctional, columns: usize, reps: u64) -> SobolReport {
        let samples: Vec<_> = (0..reps).map(|r| f.sample(64, columns, 3, r).unwrap()).collect();
        SobolReport::from_samples(&samples, RefreshUnit::ScalarColumn).unwrap()
    }

    #[test]
    fn synthetic_functionals_recover_their_mean_dimension() {
        for f in [SyntheticFunctional::Additive, SyntheticFunctional::Product] {
            let rep = synthetic_report(f, 5, 2000);
            let target = f.exact_mean_dimension();
            assert!((rep.nu - target).abs() < 3.0 * rep.nu_se, "{f:?}: {} +- {}", rep.nu, rep.nu_se);
            assert!(rep.nu_se < 0.2);
        }
    }

    #[test]
    fn unused_columns_have_zero_index() {
        let rep = synthetic_report(SyntheticFunctional::Product, 6, 300);
        for c in &rep.columns[2..] {
            assert_eq!(c.tau2, 0.0);
        }
        let add = synthetic_report(SyntheticFunctional::Additive, 4, 2000);
        for c in &add.columns {
            assert!((c.tau2 - 1.0).abs() < 3.0 * c.tau2_se, "{c:?}");
        }
    }

    #[test]
    fn constant_functional_is_rejected() {
        let flat = vec![JansenSample { base: 1.0, refreshed: vec![1.0, 1.0] }; 5];
        assert!(matches!(SobolReport::from_samples(&flat, RefreshUnit::StepBlock), Err(Error::ZeroVariance)));
        assert!(mean_dimension(&[0.1], 0.0).is_err());
    }

    #[test]
    fn single_column_truncation_is_at_most_one_in_expectation() {
        let rep = synthetic_report(SyntheticFunctional::Additive, 1, 500);
        assert!((rep.nu - 1.0).abs() < 3.0 * rep.nu_se);
    }

    #[test]
    fn engine_samples_refresh_the_requested_units() {
        let g = Scene::gasket();
        let eng = Engine::new(&g, &RunConfig::new(Method::ArrayRqmc, PointKind::Sobol, 256)).unwrap();
        let s = jansen_sample(&eng, 0, 20).unwrap();
        assert_eq!(s.base, eng.run(0).unwrap().estimate);
        assert_eq!(s.refreshed.len(), 20);
        assert!(s.refreshed[0] != s.base);
        assert!(jansen_sample(&eng, 0, 61).is_err());
        assert_eq!(refresh_unit_of(&eng), RefreshUnit::StepBlock);
    }
}
