use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use wos_core::engine::{Method, PointKind, RunConfig, Scope, Stopping, Variant};
use wos_core::geometry::Scene;
use wos_core::qmc::derive_seed;

/// Everything an experiment command needs. Loaded from JSON, then overridden
/// by command-line flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Built-in scene name or path to a scene JSON file.
    pub scene: String,
    pub z0: Option<Vec<f64>>,
    pub methods: Vec<Method>,
    /// Constructions for the RQMC methods; MC methods always use MC points.
    pub points: Vec<PointKind>,
    pub n: Vec<usize>,
    pub reps: usize,
    pub eps: Option<f64>,
    pub variant: Variant,
    /// Run exactly this many steps per walk instead of stopping at `eps`.
    pub fixed_k: Option<usize>,
    pub max_steps: Option<usize>,
    pub one_large_set: bool,
    pub seed: u64,
    pub out: PathBuf,
    /// Worker threads; all cores when unset.
    pub threads: Option<usize>,
    /// Start abscissae `(t, 0)` of the discrepancy study.
    pub t: Vec<f64>,
    /// Columns analysed by the mean-dimension study.
    pub k_prime: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scene: "unit_disk".into(),
            z0: None,
            methods: vec![Method::Mc, Method::Rqmc, Method::ArrayRqmc],
            points: vec![PointKind::Sobol, PointKind::Lattice],
            n: (7..=13).map(|e| 1usize << e).collect(),
            reps: 30,
            eps: None,
            variant: Variant::MoveToEnd,
            fixed_k: None,
            max_steps: None,
            one_large_set: false,
            seed: 0,
            out: PathBuf::from("out"),
            threads: None,
            t: vec![1.0 / 3.0, 0.5],
            k_prime: 20,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.n.is_empty() {
            bail!("no sample sizes given");
        }
        if let Some(&bad) = self.n.iter().find(|n| !n.is_power_of_two()) {
            bail!("sample size {bad} is not a power of two");
        }
        if self.reps < 2 {
            bail!("at least 2 replicates are needed for variance output");
        }
        if self.methods.is_empty() {
            bail!("no methods given");
        }
        if self.threads == Some(0) {
            bail!("--threads must be at least 1");
        }
        Ok(())
    }

    pub fn load_scene(&self) -> Result<Scene> {
        Ok(Scene::resolve(&self.scene)?)
    }

    /// `(method, construction)` pairs: MC methods once with MC points, RQMC
    /// methods once per listed non-MC construction. An on-the-fly variant
    /// fixes the construction.
    pub fn combos(&self) -> Vec<(Method, PointKind)> {
        let mut out = Vec::new();
        for &m in &self.methods {
            if matches!(m, Method::Mc | Method::ArrayMc) {
                out.push((m, PointKind::Mc));
            } else if let Some(p) = self.variant.implied_points().filter(|_| m == Method::ArrayRqmc) {
                out.push((m, p));
            } else {
                out.extend(self.points.iter().filter(|&&p| p != PointKind::Mc).map(|&p| (m, p)));
            }
        }
        out.dedup();
        out
    }

    /// Engine configuration of one cell. The cell seed mixes the master seed
    /// with the cell's coordinates, so distinct cells never share streams.
    pub fn run_config(&self, method: Method, points: PointKind, n: usize, extra: u64) -> RunConfig {
        let variant = if method.is_array() { self.variant } else { Variant::MoveToEnd };
        RunConfig {
            method,
            points,
            n,
            z0: self.z0.clone(),
            eps: self.eps,
            max_steps: self.fixed_k.or(self.max_steps),
            variant,
            stopping: if self.fixed_k.is_some() { Stopping::FixedK } else { Stopping::Epsilon },
            scope: if self.one_large_set && method == Method::ArrayRqmc {
                Scope::OneLargeSet
            } else {
                Scope::FreshPerStep
            },
            seed: cell_seed(self.seed, method, points, n, extra),
            hilbert_bits: None,
        }
    }
}

pub fn cell_seed(master: u64, method: Method, points: PointKind, n: usize, extra: u64) -> u64 {
    let mi = Method::ALL.iter().position(|&m| m == method).expect("listed") as u64;
    let pi = PointKind::ALL.iter().position(|&p| p == points).expect("listed") as u64;
    derive_seed(master, &[mi, pi, n as u64, extra])
}

/// Parse a comma-separated list with `parse`.
pub fn parse_list<T>(s: &str, parse: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    s.split(',').map(str::trim).filter(|p| !p.is_empty()).map(parse).collect()
}

/// A number, or `a/b`.
pub fn parse_fraction(s: &str) -> Result<f64> {
    match s.split_once('/') {
        Some((a, b)) => Ok(a.trim().parse::<f64>()? / b.trim().parse::<f64>()?),
        None => Ok(s.parse()?),
    }
}
