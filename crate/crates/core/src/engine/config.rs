use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, Scene, SourceMode};
use crate::samplers::StepInputLayout;

/// Walk driver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Independent walks with IID uniforms.
    Mc,
    /// One `n x sK` randomized point set; row `i` drives walk `i`.
    Rqmc,
    /// Hilbert-sorted ensemble with a fresh randomized set per step.
    ArrayRqmc,
    /// Hilbert-sorted ensemble with IID rows.
    ArrayMc,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Mc, Method::Rqmc, Method::ArrayRqmc, Method::ArrayMc];

    pub fn is_array(self) -> bool {
        matches!(self, Method::ArrayRqmc | Method::ArrayMc)
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Mc => "mc",
            Method::Rqmc => "rqmc",
            Method::ArrayRqmc => "array-rqmc",
            Method::ArrayMc => "array-mc",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown method '{s}'")))
    }
}

/// Point construction feeding the walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointKind {
    Mc,
    Sobol,
    Lattice,
    Fibonacci,
    Stratified,
    Hammersley,
}

impl PointKind {
    pub const ALL: [PointKind; 6] = [
        PointKind::Mc,
        PointKind::Sobol,
        PointKind::Lattice,
        PointKind::Fibonacci,
        PointKind::Stratified,
        PointKind::Hammersley,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PointKind::Mc => "mc",
            PointKind::Sobol => "sobol",
            PointKind::Lattice => "lattice",
            PointKind::Fibonacci => "fibonacci",
            PointKind::Stratified => "stratified",
            PointKind::Hammersley => "hammersley",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown point construction '{s}'")))
    }
}

/// Treatment of walkers that have already stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Stopped walkers get key `+inf`; active walkers use the first `m_k` rows.
    MoveToEnd,
    /// Stopped walkers keep their key, take a row and do not move.
    Interleave,
    /// A fresh `m_k`-point Hammersley set per step.
    HammersleyOnFly,
    /// The first `m_k` points of the smallest Fibonacci lattice with at least
    /// `m_k` points.
    FibonacciOnFly,
    /// A fresh `m_k`-point stratified shifted set per step.
    StratifiedOnFly,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::MoveToEnd,
        Variant::Interleave,
        Variant::HammersleyOnFly,
        Variant::FibonacciOnFly,
        Variant::StratifiedOnFly,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::MoveToEnd => "move-to-end",
            Variant::Interleave => "interleave",
            Variant::HammersleyOnFly => "hammersley-on-fly",
            Variant::FibonacciOnFly => "fibonacci-on-fly",
            Variant::StratifiedOnFly => "stratified-on-fly",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown variant '{s}'")))
    }

    /// Construction implied by an on-the-fly variant.
    pub fn implied_points(self) -> Option<PointKind> {
        match self {
            Variant::HammersleyOnFly => Some(PointKind::Hammersley),
            Variant::FibonacciOnFly => Some(PointKind::Fibonacci),
            Variant::StratifiedOnFly => Some(PointKind::Stratified),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stopping {
    /// Stop on entering the `eps`-shell, project at the step cap.
    Epsilon,
    /// Take exactly `K` steps, then project.
    FixedK,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    FreshPerStep,
    /// Step `k` of an array run uses columns `(k-1)s+1..ks` of a single
    /// `1 + sK`-column randomized set.
    OneLargeSet,
}

/// User-facing run parameters; unset fields take scene defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub method: Method,
    pub points: PointKind,
    pub n: usize,
    #[serde(default)]
    pub z0: Option<Vec<f64>>,
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(default)]
    pub max_steps: Option<usize>,
    pub variant: Variant,
    pub stopping: Stopping,
    pub scope: Scope,
    pub seed: u64,
    /// Hilbert resolution per axis; defaults to 16 (2-D) or 10 (3-D).
    #[serde(default)]
    pub hilbert_bits: Option<u32>,
}

/// Default step cap `20 ceil(log10(1/eps))` in epsilon mode.
pub fn default_max_steps(eps: f64) -> usize {
    20 * ((1.0 / eps).log10().ceil().max(1.0) as usize)
}

/// Step count of fixed-K runs when not given.
pub const DEFAULT_FIXED_K: usize = 20;

/// Stopping distance when neither the config nor the scene gives one.
pub const DEFAULT_EPS: f64 = 1e-4;

impl RunConfig {
    pub fn new(method: Method, points: PointKind, n: usize) -> Self {
        Self {
            method,
            points,
            n,
            z0: None,
            eps: None,
            max_steps: None,
            variant: Variant::MoveToEnd,
            stopping: Stopping::Epsilon,
            scope: Scope::FreshPerStep,
            seed: 0,
            hilbert_bits: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = Some(eps);
        self
    }

    pub fn with_z0(mut self, z0: &[f64]) -> Self {
        self.z0 = Some(z0.to_vec());
        self
    }

    pub fn with_fixed_k(mut self, k: usize) -> Self {
        self.stopping = Stopping::FixedK;
        self.max_steps = Some(k);
        self
    }

    pub fn with_max_steps(mut self, k: usize) -> Self {
        self.max_steps = Some(k);
        self
    }

    pub fn with_scope(mut self, scope: Scope) -> Self {
        self.scope = scope;
        self
    }
}

/// A configuration checked against its scene, with every default filled in.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedConfig {
    pub method: Method,
    pub points: PointKind,
    pub n: usize,
    pub z0: Point,
    pub eps: f64,
    pub max_steps: usize,
    pub variant: Variant,
    pub stopping: Stopping,
    pub scope: Scope,
    pub seed: u64,
    pub hilbert_bits: u32,
    pub layout: StepInputLayout,
}

impl ResolvedConfig {
    /// `s`, cube coordinates per step.
    pub fn step_dims(&self) -> usize {
        self.layout.total()
    }

    /// Seeds per schedule step: one sort column plus `s` data columns.
    pub fn schedule_width(&self) -> usize {
        self.step_dims() + 1
    }
}

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidConfig(msg.into()))
}

impl RunConfig {
    pub fn resolve(&self, scene: &Scene) -> Result<ResolvedConfig> {
        let d = scene.dim();
        let layout = StepInputLayout::for_scene(scene);
        let s = layout.total();
        if self.n == 0 {
            return invalid("n must be at least 1");
        }
        if d == 3 && scene.source_mode() == SourceMode::General {
            return invalid("ball sampling for a general source is only available in 2-D");
        }
        let eps = self.eps.or(scene.default_epsilon()).unwrap_or(DEFAULT_EPS);
        if !(eps > 0.0 && eps.is_finite()) {
            return invalid("eps must be positive and finite");
        }
        let max_steps = self.max_steps.unwrap_or(match self.stopping {
            Stopping::Epsilon => default_max_steps(eps),
            Stopping::FixedK => DEFAULT_FIXED_K,
        });
        if max_steps == 0 {
            return invalid("the step cap K must be at least 1");
        }
        let z0 = match &self.z0 {
            Some(v) => {
                if v.len() != d {
                    return invalid(format!("z0 has {} coordinates, scene is {d}-D", v.len()));
                }
                scene.point(v)
            }
            None => scene.evaluation_point().ok_or_else(|| {
                Error::InvalidConfig("scene has no default evaluation point".into())
            })?,
        };
        if !scene.contains(&z0) {
            return Err(Error::OutsideDomain);
        }

        let points = self.points;
        match (self.method, points) {
            (Method::Mc | Method::ArrayMc, PointKind::Mc) => {}
            (Method::Mc | Method::ArrayMc, _) => return invalid("MC methods use MC points"),
            (Method::Rqmc | Method::ArrayRqmc, PointKind::Mc) => {
                return invalid("RQMC methods need a low-discrepancy construction")
            }
            (Method::Rqmc, PointKind::Sobol | PointKind::Lattice) => {}
            (Method::Rqmc, _) => return invalid("RQMC-WOS supports Sobol' and lattice points"),
            (Method::ArrayRqmc, _) => {}
        }
        if self.variant != Variant::MoveToEnd && !self.method.is_array() {
            return invalid("inactive-walker variants apply to array methods only");
        }
        if let Some(implied) = self.variant.implied_points() {
            if points != implied {
                return invalid(format!(
                    "variant {} requires points {}",
                    self.variant.name(),
                    implied.name()
                ));
            }
        }
        if matches!(points, PointKind::Stratified | PointKind::Hammersley)
            && self.variant.implied_points() != Some(points)
        {
            return invalid(format!(
                "points {} are built per step by their on-the-fly variant",
                points.name()
            ));
        }
        let needs_planar = matches!(points, PointKind::Fibonacci | PointKind::Stratified);
        if needs_planar && !(d == 2 && s == 1) {
            return invalid("Fibonacci and stratified points need d = 2 without a sampled source");
        }
        if points == PointKind::Hammersley && s + 1 > 4 {
            return invalid("Hammersley sets support at most 3 coordinates per step");
        }
        if points == PointKind::Sobol && !self.n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(self.n));
        }
        if self.scope == Scope::OneLargeSet
            && !(self.method == Method::ArrayRqmc
                && matches!(points, PointKind::Sobol | PointKind::Lattice)
                && self.variant == Variant::MoveToEnd)
        {
            return invalid(
                "one-large-set mode needs array-rqmc with Sobol' or lattice points and move-to-end",
            );
        }
        let hilbert_bits = self.hilbert_bits.unwrap_or(if d == 2 { 16 } else { 10 });
        crate::hilbert::HilbertConfig::new(d, hilbert_bits)?;

        Ok(ResolvedConfig {
            method: self.method,
            points,
            n: self.n,
            z0,
            eps,
            max_steps,
            variant: self.variant,
            stopping: self.stopping,
            scope: self.scope,
            seed: self.seed,
            hilbert_bits,
            layout,
        })
    }
}
