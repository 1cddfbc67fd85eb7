use std::collections::BTreeMap;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use wos_core::analysis::{
    fit_loglog, jansen_sample, ks_distance, reduction_factor, refresh_unit_of, terminal_angle,
    KsReport, RefreshUnit, ReplicateSummary, SobolReport, SyntheticFunctional,
};
use wos_core::engine::{Engine, Method, PointKind, Variant};
use wos_core::geometry::Scene;

use crate::config::{cell_seed, ExperimentConfig};

/// Run `f` on a pool of `threads` workers (all cores when `None`).
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t);
    }
    Ok(builder.build().context("building the worker pool")?.install(f))
}

fn method_label(method: Method, variant: Variant) -> String {
    if method.is_array() && variant != Variant::MoveToEnd {
        format!("{}+{}", method.name(), variant.name())
    } else {
        method.name().to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub scene: String,
    pub method: String,
    pub points: String,
    pub variant: String,
    pub n: usize,
    pub replicate: u64,
    pub seed: u64,
    pub estimate: f64,
    pub mean_steps: f64,
    pub max_steps: u32,
    pub wall_ms: f64,
}

/// One row per `(method, construction, n, replicate)`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let scene = cfg.load_scene()?;
    let mut rows = Vec::new();
    for (method, points) in cfg.combos() {
        for &n in &cfg.n {
            let rc = cfg.run_config(method, points, n, 0);
            let engine = Engine::new(&scene, &rc)
                .with_context(|| format!("{} with {} points at n = {n}", method.name(), points.name()))?;
            let cell: Vec<ResultRow> = (0..cfg.reps as u64)
                .into_par_iter()
                .map(|r| {
                    let start = Instant::now();
                    let rec = engine.run(r)?;
                    Ok(ResultRow {
                        scene: scene.name().to_string(),
                        method: method.name().to_string(),
                        points: points.name().to_string(),
                        variant: engine.config().variant.name().to_string(),
                        n,
                        replicate: r,
                        seed: rc.seed,
                        estimate: rec.estimate,
                        mean_steps: rec.mean_steps(),
                        max_steps: rec.max_steps(),
                        wall_ms: start.elapsed().as_secs_f64() * 1e3,
                    })
                })
                .collect::<Result<_>>()?;
            rows.extend(cell);
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRow {
    pub scene: String,
    pub method: String,
    pub points: String,
    pub n: usize,
    pub variance: f64,
    pub mse: Option<f64>,
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub vrf_vs_mc: Option<f64>,
}

/// Estimates grouped by `(scene, method label, points)` then by `n`.
type Groups = Vec<((String, String, String), BTreeMap<usize, Vec<f64>>)>;

fn group_results(rows: &[ResultRow]) -> Groups {
    let mut groups: Groups = Vec::new();
    for r in rows {
        let label = match Method::parse(&r.method).ok().zip(Variant::parse(&r.variant).ok()) {
            Some((m, v)) => method_label(m, v),
            None => r.method.clone(),
        };
        let key = (r.scene.clone(), label, r.points.clone());
        let idx = match groups.iter().position(|(k, _)| *k == key) {
            Some(i) => i,
            None => {
                groups.push((key, BTreeMap::new()));
                groups.len() - 1
            }
        };
        groups[idx].1.entry(r.n).or_default().push(r.estimate);
    }
    groups
}

/// `n -> (variance, spread)`, one pair per construction.
type Spreads = BTreeMap<usize, Vec<(f64, f64)>>;

/// Variance (and MSE when `exact` is given) per cell, log-log fits over
/// `n >= 128`, and reduction factors against MC at equal `n`. Methods with
/// both Sobol' and lattice data also get a pooled fit.
pub fn rates(rows: &[ResultRow], exact: Option<f64>) -> Result<Vec<RateRow>> {
    let groups = group_results(rows);
    if groups.is_empty() {
        bail!("no results to analyse");
    }
    let mc = |scene: &str| {
        groups
            .iter()
            .find(|((s, m, _), _)| s == scene && m == Method::Mc.name())
            .map(|(_, cells)| cells)
    };
    let mut out = Vec::new();
    let mut spreads: BTreeMap<(String, String), Spreads> = BTreeMap::new();
    for ((scene, method, points), cells) in &groups {
        let summaries: Vec<(usize, ReplicateSummary)> = cells
            .iter()
            .map(|(&n, x)| Ok((n, ReplicateSummary::new(x, exact)?)))
            .collect::<Result<_>>()?;
        let pairs: Vec<(f64, f64)> = summaries.iter().map(|(n, s)| (*n as f64, s.spread())).collect();
        let fit = fit_loglog(&pairs).ok();
        for (n, s) in &summaries {
            let vrf = match mc(scene).and_then(|m| m.get(n)) {
                Some(base) => Some(reduction_factor(&cells[n], base, exact)?.value),
                None => None,
            };
            if matches!(points.as_str(), "sobol" | "lattice") {
                spreads.entry((scene.clone(), method.clone())).or_default().entry(*n).or_default().push((s.variance, s.spread()));
            }
            out.push(RateRow {
                scene: scene.clone(),
                method: method.clone(),
                points: points.clone(),
                n: *n,
                variance: s.variance,
                mse: s.mse,
                slope: fit.map(|f| f.slope),
                intercept: fit.map(|f| f.intercept),
                vrf_vs_mc: vrf,
            });
        }
    }
    for ((scene, method), cells) in spreads {
        if cells.values().any(|v| v.len() < 2) {
            continue;
        }
        let mut pairs = Vec::new();
        for (&n, v) in &cells {
            pairs.extend(v.iter().map(|&(_, s)| (n as f64, s)));
        }
        let fit = fit_loglog(&pairs).ok();
        for (&n, v) in &cells {
            let geo = |f: fn(&(f64, f64)) -> f64| (v.iter().map(|x| f(x).ln()).sum::<f64>() / v.len() as f64).exp();
            let spread = geo(|x| x.1);
            let base = match mc(&scene).and_then(|m| m.get(&n)) {
                Some(b) => Some(ReplicateSummary::new(b, exact)?.spread()),
                None => None,
            };
            out.push(RateRow {
                scene: scene.clone(),
                method: method.clone(),
                points: "pooled".into(),
                n,
                variance: geo(|x| x.0),
                mse: exact.map(|_| spread),
                slope: fit.map(|f| f.slope),
                intercept: fit.map(|f| f.intercept),
                vrf_vs_mc: base.map(|b| b / spread),
            });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsRow {
    pub t: f64,
    pub method: String,
    pub points: String,
    pub n: usize,
    pub mean_ks: f64,
    pub se_ks: f64,
    pub ref_mc: f64,
    pub ref_opt: f64,
}

/// Mean KS distance of exit angles from `(t, 0)` on the unit disk per
/// `(t, method, construction, n)`.
pub fn ks_study(cfg: &ExperimentConfig) -> Result<Vec<KsRow>> {
    cfg.validate()?;
    let scene = cfg.load_scene()?;
    if scene.name() != "unit_disk" {
        bail!("the discrepancy study runs on the unit disk, not '{}'", scene.name());
    }
    if cfg.t.iter().any(|&t| !(0.0..1.0).contains(&t)) {
        bail!("start abscissae must lie in [0, 1)");
    }
    let mut out = Vec::new();
    for (ti, &t) in cfg.t.iter().enumerate() {
        let mut local = cfg.clone();
        local.z0 = Some(vec![t, 0.0]);
        for (method, points) in cfg.combos() {
            for &n in &cfg.n {
                let rc = local.run_config(method, points, n, ti as u64 + 1);
                let engine = Engine::new(&scene, &rc)?;
                let d: Vec<f64> = (0..cfg.reps as u64)
                    .into_par_iter()
                    .map(|r| {
                        let rec = engine.run(r)?;
                        let angles: Vec<f64> = rec.terminal_points.iter().map(|p| terminal_angle(p)).collect();
                        Ok(ks_distance(&angles, [t, 0.0])?)
                    })
                    .collect::<Result<_>>()?;
                let rep = KsReport::new(t, n, &d)?;
                out.push(KsRow {
                    t,
                    method: method_label(method, rc.variant),
                    points: points.name().into(),
                    n,
                    mean_ks: rep.mean_ks,
                    se_ks: rep.se_ks,
                    ref_mc: rep.ref_mc,
                    ref_opt: rep.ref_opt,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SobolRow {
    pub scene: String,
    pub method: String,
    pub points: String,
    pub k: usize,
    pub tau2: f64,
    pub tau2_norm: f64,
    pub sigma2: f64,
    /// Sum of normalized indices over columns `1..=k`.
    pub nu_partial: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SobolSummary {
    pub scene: String,
    pub method: String,
    pub points: String,
    pub unit: String,
    pub n: usize,
    pub replicates: usize,
    pub sigma2: f64,
    pub nu: f64,
    pub nu_clamped: f64,
    pub nu_se: f64,
}

fn sobol_rows(scene: &str, method: &str, points: &str, n: usize, rep: &SobolReport) -> (Vec<SobolRow>, SobolSummary) {
    let mut acc = 0.0;
    let rows = rep
        .columns
        .iter()
        .map(|c| {
            acc += c.tau2_norm;
            SobolRow {
                scene: scene.into(),
                method: method.into(),
                points: points.into(),
                k: c.k,
                tau2: c.tau2,
                tau2_norm: c.tau2_norm,
                sigma2: rep.sigma2,
                nu_partial: acc,
            }
        })
        .collect();
    let summary = SobolSummary {
        scene: scene.into(),
        method: method.into(),
        points: points.into(),
        unit: rep.unit.name().into(),
        n,
        replicates: rep.replicates,
        sigma2: rep.sigma2,
        nu: rep.nu,
        nu_clamped: rep.nu_clamped,
        nu_se: rep.nu_se,
    };
    (rows, summary)
}

/// Jansen total indices of the first `k_prime` refresh units and the partial
/// mean dimension, per `(method, construction, n)`. With `synthetic`, the
/// walk is replaced by a functional of known mean dimension.
pub fn sobol_study(
    cfg: &ExperimentConfig,
    synthetic: Option<SyntheticFunctional>,
) -> Result<(Vec<SobolRow>, Vec<SobolSummary>)> {
    cfg.validate()?;
    let mut rows = Vec::new();
    let mut summaries = Vec::new();
    if let Some(f) = synthetic {
        for &n in &cfg.n {
            let seed = cell_seed(cfg.seed, Method::Mc, PointKind::Mc, n, u64::MAX);
            let samples: Vec<_> = (0..cfg.reps as u64)
                .into_par_iter()
                .map(|r| f.sample(n, cfg.k_prime, seed, r))
                .collect::<wos_core::Result<_>>()?;
            let rep = SobolReport::from_samples(&samples, RefreshUnit::ScalarColumn)?;
            let label = match f {
                SyntheticFunctional::Additive => "synthetic-additive",
                SyntheticFunctional::Product => "synthetic-product",
            };
            let (r, s) = sobol_rows("synthetic", label, "mc", n, &rep);
            rows.extend(r);
            summaries.push(s);
        }
        return Ok((rows, summaries));
    }
    let scene: Scene = cfg.load_scene()?;
    for (method, points) in cfg.combos() {
        for &n in &cfg.n {
            let rc = cfg.run_config(method, points, n, 0);
            let engine = Engine::new(&scene, &rc)?;
            let samples: Vec<_> = (0..cfg.reps as u64)
                .into_par_iter()
                .map(|r| jansen_sample(&engine, r, cfg.k_prime))
                .collect::<wos_core::Result<_>>()?;
            let rep = SobolReport::from_samples(&samples, refresh_unit_of(&engine))?;
            let (r, s) = sobol_rows(scene.name(), &method_label(method, rc.variant), points.name(), n, &rep);
            rows.extend(r);
            summaries.push(s);
        }
    }
    Ok((rows, summaries))
}

/// Mean dimensions in a (base construction x plain/array) table.
pub fn sobol_table(summaries: &[SobolSummary]) -> String {
    let mut out = String::new();
    let mut sizes: Vec<usize> = summaries.iter().map(|s| s.n).collect();
    sizes.dedup();
    for n in sizes {
        out.push_str(&format!("# n = {n}: partial mean dimension (jackknife SE)\n"));
        out.push_str(&format!("{:<10} {:>18} {:>18}\n", "base", "plain", "array"));
        const GRID: [(&str, (&str, &str), (&str, &str)); 3] = [
            ("mc", ("mc", "mc"), ("array-mc", "mc")),
            ("sobol", ("rqmc", "sobol"), ("array-rqmc", "sobol")),
            ("lattice", ("rqmc", "lattice"), ("array-rqmc", "lattice")),
        ];
        for (base, plain, array) in GRID {
            let cell = |(m, p): (&str, &str)| {
                summaries
                    .iter()
                    .find(|s| s.n == n && s.method == m && s.points == p)
                    .map_or("-".to_string(), |s| format!("{:.2} ({:.2})", s.nu, s.nu_se))
            };
            out.push_str(&format!("{:<10} {:>18} {:>18}\n", base, cell(plain), cell(array)));
        }
        let in_grid = |m: &str, p: &str| GRID.iter().any(|(_, a, b)| *a == (m, p) || *b == (m, p));
        for s in summaries.iter().filter(|s| s.n == n && !in_grid(&s.method, &s.points)) {
            out.push_str(&format!("{:<29} {:>18}\n", format!("{} ({})", s.method, s.points), format!("{:.2} ({:.2})", s.nu, s.nu_se)));
        }
        out.push('\n');
    }
    out
}

/// Reduction factors against MC: one line per `(scene, method, points)`, one
/// column per `n`, plus the fitted slope.
pub fn rates_table(rows: &[RateRow]) -> String {
    let mut sizes: Vec<usize> = rows.iter().map(|r| r.n).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let mut out = format!("{:<12} {:<28} {:<8} {:>8}", "scene", "method", "points", "slope");
    for n in &sizes {
        out.push_str(&format!(" {:>10}", format!("n={n}")));
    }
    out.push('\n');
    let mut seen: Vec<(&str, &str, &str)> = Vec::new();
    for r in rows {
        let key = (r.scene.as_str(), r.method.as_str(), r.points.as_str());
        if seen.contains(&key) {
            continue;
        }
        seen.push(key);
        let slope = r.slope.map_or("-".to_string(), |s| format!("{s:.3}"));
        out.push_str(&format!("{:<12} {:<28} {:<8} {:>8}", key.0, key.1, key.2, slope));
        for n in &sizes {
            let v = rows
                .iter()
                .find(|x| (x.scene.as_str(), x.method.as_str(), x.points.as_str()) == key && x.n == *n)
                .and_then(|x| x.vrf_vs_mc);
            out.push_str(&format!(" {:>10}", v.map_or("-".to_string(), |v| format!("{v:.2}"))));
        }
        out.push('\n');
    }
    out
}
