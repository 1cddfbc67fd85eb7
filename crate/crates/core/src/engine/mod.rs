//! Walk-on-spheres ensembles driven by MC, RQMC, Array-RQMC and Array-MC
//! inputs.
//!
//! All methods share one loop. At iteration `k` each active walker computes
//! its distance `r` to the boundary; if `r >= eps` it moves to a point on the
//! sphere of radius `r`. A walker with `r < eps`, or any walker at the step
//! cap, is projected to the boundary and scored. Array methods then sort the
//! ensemble by `(Hilbert key, walker id)` so that row `i` of the next point
//! set drives the walker at sorted position `i`.

mod config;
mod points;
mod schedule;

pub use config::{
    default_max_steps, Method, PointKind, ResolvedConfig, RunConfig, Scope, Stopping, Variant,
    DEFAULT_EPS, DEFAULT_FIXED_K,
};
pub use schedule::Schedule;

use crate::error::Result;
use crate::geometry::{Point, Scene, SourceMode};
use crate::hilbert::HilbertConfig;
use crate::samplers::{
    constant_source_increment, psi12, source_increment, sphere_direction, StepInputLayout,
};
use points::{PointSource, StepRows};

/// One walk step from `z` with step radius `r` and cube inputs `x`: the new
/// position and the source term of the step.
#[inline]
pub fn wos_step(
    scene: &Scene,
    layout: &StepInputLayout,
    z: &Point,
    r: f64,
    x: &[f64],
) -> (Point, f64) {
    let d = scene.dim();
    let dir = sphere_direction(d, &x[..layout.sphere_dims]);
    let next = [z[0] + r * dir[0], z[1] + r * dir[1], z[2] + r * dir[2]];
    let inc = match scene.source_mode() {
        SourceMode::None => 0.0,
        SourceMode::ConstantShortcut => {
            constant_source_increment(d, r, scene.constant_source().expect("constant source"))
        }
        SourceMode::General => {
            let b = &x[layout.sphere_dims..];
            let q = psi12(b[0], b[1]);
            let w = [z[0] + r * q[0], z[1] + r * q[1], 0.0];
            source_increment(scene, r, z, &w)
        }
    };
    (next, inc)
}

/// Outcome of one replicate.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateRecord {
    /// Mean payoff over the `n` walkers.
    pub estimate: f64,
    /// Payoff of each walker, by walker id.
    pub payoffs: Vec<f64>,
    /// Projected stopping point of each walker, by walker id.
    pub terminal_points: Vec<Point>,
    /// Moves made by each walker, by walker id.
    pub steps: Vec<u32>,
    /// Walkers still active at the start of each executed iteration.
    pub active_counts: Vec<usize>,
}

impl EstimateRecord {
    pub fn total_steps(&self) -> u64 {
        self.steps.iter().map(|&s| u64::from(s)).sum()
    }

    pub fn mean_steps(&self) -> f64 {
        self.total_steps() as f64 / self.steps.len() as f64
    }

    pub fn max_steps(&self) -> u32 {
        self.steps.iter().copied().max().unwrap_or(0)
    }
}

/// Walker state, stored in current sorted order.
#[derive(Debug, Clone, PartialEq)]
struct Ensemble {
    pos: Vec<Point>,
    active: Vec<bool>,
    acc: Vec<f64>,
    payoff: Vec<f64>,
    keys: Vec<f64>,
    ids: Vec<u32>,
    steps: Vec<u32>,
    active_counts: Vec<usize>,
}

impl Ensemble {
    fn start(n: usize, z0: Point, key: f64) -> Self {
        Self {
            pos: vec![z0; n],
            active: vec![true; n],
            acc: vec![0.0; n],
            payoff: vec![0.0; n],
            keys: vec![key; n],
            ids: (0..n as u32).collect(),
            steps: vec![0; n],
            active_counts: Vec::new(),
        }
    }

    /// Sort positions `0..span` by `(key, id)`. Walkers past `span` are
    /// stopped and never take a row again, so their order is irrelevant.
    fn sort_by_key(&mut self, span: usize) {
        let mut order: Vec<usize> = (0..span).collect();
        order.sort_unstable_by(|&a, &b| {
            self.keys[a]
                .total_cmp(&self.keys[b])
                .then(self.ids[a].cmp(&self.ids[b]))
        });
        if order.iter().enumerate().all(|(i, &o)| i == o) {
            return;
        }
        fn gather<T: Copy>(v: &mut [T], order: &[usize]) {
            let sorted: Vec<T> = order.iter().map(|&i| v[i]).collect();
            v[..sorted.len()].copy_from_slice(&sorted);
        }
        gather(&mut self.pos, &order);
        gather(&mut self.active, &order);
        gather(&mut self.acc, &order);
        gather(&mut self.payoff, &order);
        gather(&mut self.keys, &order);
        gather(&mut self.ids, &order);
        gather(&mut self.steps, &order);
    }

    fn into_record(self) -> EstimateRecord {
        let n = self.ids.len();
        let mut payoffs = vec![0.0; n];
        let mut terminal_points = vec![[0.0; 3]; n];
        let mut steps = vec![0; n];
        for i in 0..n {
            let id = self.ids[i] as usize;
            payoffs[id] = self.payoff[i];
            terminal_points[id] = self.pos[i];
            steps[id] = self.steps[i];
        }
        let estimate = payoffs.iter().sum::<f64>() / n as f64;
        EstimateRecord {
            estimate,
            payoffs,
            terminal_points,
            steps,
            active_counts: self.active_counts,
        }
    }
}

/// Walker state at the start of an iteration, for replaying a run with a
/// modified schedule from that iteration on.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    next_step: usize,
    ensemble: Ensemble,
}

impl Checkpoint {
    pub fn next_step(&self) -> usize {
        self.next_step
    }
}

/// A configuration bound to a scene, with the point structures its replicates
/// share.
#[derive(Debug)]
pub struct Engine<'a> {
    scene: &'a Scene,
    cfg: ResolvedConfig,
    hilbert: HilbertConfig,
    points: PointSource,
}

impl<'a> Engine<'a> {
    pub fn new(scene: &'a Scene, config: &RunConfig) -> Result<Self> {
        let cfg = config.resolve(scene)?;
        let hilbert = HilbertConfig::new(scene.dim(), cfg.hilbert_bits)?;
        let points = PointSource::new(&cfg)?;
        Ok(Self {
            scene,
            cfg,
            hilbert,
            points,
        })
    }

    pub fn config(&self) -> &ResolvedConfig {
        &self.cfg
    }

    pub fn scene(&self) -> &Scene {
        self.scene
    }

    /// Seed schedule of replicate `replicate`.
    pub fn schedule(&self, replicate: u64) -> Schedule {
        Schedule::derive(
            self.cfg.seed,
            replicate,
            self.cfg.max_steps,
            self.cfg.schedule_width(),
        )
    }

    pub fn run(&self, replicate: u64) -> Result<EstimateRecord> {
        self.run_with_schedule(&self.schedule(replicate))
    }

    pub fn run_with_schedule(&self, schedule: &Schedule) -> Result<EstimateRecord> {
        let mut ens = self.initial()?;
        self.advance(&mut ens, schedule, 1, None)?;
        Ok(ens.into_record())
    }

    /// Run and keep the state at the start of iterations `1..=upto`.
    pub fn run_with_checkpoints(
        &self,
        schedule: &Schedule,
        upto: usize,
    ) -> Result<(EstimateRecord, Vec<Checkpoint>)> {
        let mut ens = self.initial()?;
        let mut saved = Vec::with_capacity(upto);
        self.advance(&mut ens, schedule, 1, Some((&mut saved, upto)))?;
        let last = ens.clone();
        while saved.len() < upto {
            saved.push(Checkpoint {
                next_step: saved.len() + 1,
                ensemble: last.clone(),
            });
        }
        Ok((ens.into_record(), saved))
    }

    /// Continue from a checkpoint under `schedule`.
    pub fn resume(&self, checkpoint: &Checkpoint, schedule: &Schedule) -> Result<EstimateRecord> {
        let mut ens = checkpoint.ensemble.clone();
        self.advance(&mut ens, schedule, checkpoint.next_step, None)?;
        Ok(ens.into_record())
    }

    /// Number of independently refreshable input blocks: whole steps for array
    /// methods, single columns otherwise.
    pub fn refresh_units(&self) -> usize {
        if self.cfg.method.is_array() {
            self.cfg.max_steps
        } else {
            self.cfg.max_steps * self.cfg.step_dims()
        }
    }

    /// Schedule with unit `unit` (0-based) redrawn from `fresh`, and the first
    /// iteration it affects.
    pub fn refresh_unit(&self, schedule: &Schedule, unit: usize, fresh: u64) -> (Schedule, usize) {
        let w = self.cfg.schedule_width();
        if self.cfg.method.is_array() {
            let k = unit + 1;
            // The one-large-set sort column belongs to every step; keep it.
            let first = if self.cfg.scope == Scope::OneLargeSet {
                1
            } else {
                0
            };
            (schedule.refreshed(k, first..w, fresh), k)
        } else {
            let s = self.cfg.step_dims();
            let k = unit / s + 1;
            let j = unit % s + 1;
            (schedule.refreshed(k, j..j + 1, fresh), k)
        }
    }

    fn initial(&self) -> Result<Ensemble> {
        let key = self.key_of(&self.cfg.z0)?;
        Ok(Ensemble::start(self.cfg.n, self.cfg.z0, key))
    }

    #[inline]
    fn key_of(&self, z: &Point) -> Result<f64> {
        let u = self.scene.to_unit_cube(z);
        self.hilbert.sort_key(&u[..self.scene.dim()])
    }

    fn advance(
        &self,
        ens: &mut Ensemble,
        schedule: &Schedule,
        from: usize,
        mut checkpoints: Option<(&mut Vec<Checkpoint>, usize)>,
    ) -> Result<()> {
        let cfg = &self.cfg;
        let cap = cfg.max_steps;
        let array = cfg.method.is_array();
        let interleave = cfg.variant == Variant::Interleave;
        let fixed = cfg.stopping == Stopping::FixedK;
        let layout = cfg.layout;
        let mut rows = StepRows::default();
        for k in from..=cap {
            let m = ens.active.iter().filter(|&&a| a).count();
            if let Some((saved, upto)) = checkpoints.as_mut() {
                if k <= *upto {
                    saved.push(Checkpoint {
                        next_step: k,
                        ensemble: ens.clone(),
                    });
                }
            }
            if m == 0 {
                break;
            }
            ens.active_counts.push(m);
            self.points.prepare(schedule, k, m, &mut rows);
            // Move-to-end keeps active walkers in front after each sort.
            let span = if array && !interleave {
                m
            } else {
                ens.ids.len()
            };
            for i in 0..span {
                if !ens.active[i] {
                    continue;
                }
                let row = if array { i } else { ens.ids[i] as usize };
                let z = ens.pos[i];
                let c = self.scene.closest(&z);
                let (mut end, mut hit) = (c.point, c.primitive);
                let stop_now = !fixed && c.distance < cfg.eps;
                if !stop_now {
                    let (next, inc) = wos_step(self.scene, &layout, &z, c.distance, rows.row(row));
                    ens.pos[i] = next;
                    ens.acc[i] += inc;
                    ens.steps[i] += 1;
                    if k == cap {
                        let c2 = self.scene.closest(&next);
                        end = c2.point;
                        hit = c2.primitive;
                    }
                }
                if stop_now || k == cap {
                    ens.payoff[i] = self.scene.boundary_value_on(hit, &end) + ens.acc[i];
                    ens.pos[i] = end;
                    ens.active[i] = false;
                    if array {
                        ens.keys[i] = if interleave {
                            self.key_of(&end)?
                        } else {
                            f64::INFINITY
                        };
                    }
                } else if array {
                    ens.keys[i] = self.key_of(&ens.pos[i])?;
                }
            }
            if array {
                ens.sort_by_key(span);
            }
        }
        Ok(())
    }
}

/// Run replicate `replicate` of `config` on `scene`.
pub fn estimate(scene: &Scene, config: &RunConfig, replicate: u64) -> Result<EstimateRecord> {
    Engine::new(scene, config)?.run(replicate)
}
