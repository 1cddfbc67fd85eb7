//! Per-step cube inputs for each method and variant.

use crate::error::{Error, Result};
use crate::qmc::{
    fibonacci, fibonacci_at_least, generate_sobol, hammersley, mc_column, shifted_lattice_column,
    stratified_shifted_1d, DigitalNet, DirectionNumberTable, GeneratingVector,
};

use super::config::{Method, PointKind, ResolvedConfig, Scope, Variant};
use super::schedule::Schedule;

/// Row-major `rows x width` block of step inputs. Row `i` drives walker `i`
/// (non-array methods) or the walker at sorted position `i` (array methods).
#[derive(Debug, Clone, Default)]
pub(crate) struct StepRows {
    pub width: usize,
    pub values: Vec<f64>,
}

impl StepRows {
    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.width..(i + 1) * self.width]
    }

    #[cfg(test)]
    pub fn rows(&self) -> usize {
        self.values.len().checked_div(self.width).unwrap_or(0)
    }

    fn fill_columns(&mut self, cols: &[Vec<f64>]) {
        let rows = cols.first().map_or(0, Vec::len);
        self.width = cols.len();
        self.values.clear();
        self.values.reserve(rows * self.width);
        for i in 0..rows {
            self.values.extend(cols.iter().map(|c| c[i]));
        }
    }

    /// Order rows by the sort column (ties by row index), keep the first
    /// `take`, and drop the sort column.
    fn fill_sorted_columns(&mut self, sort: &[f64], data: &[Vec<f64>], take: usize) {
        let by_sort = |a: &usize, b: &usize| sort[*a].total_cmp(&sort[*b]).then(a.cmp(b));
        let mut order: Vec<usize> = (0..sort.len()).collect();
        let take = take.min(order.len());
        if take < order.len() && take > 0 {
            order.select_nth_unstable_by(take - 1, by_sort);
        }
        order.truncate(take);
        order.sort_unstable_by(by_sort);
        self.width = data.len();
        self.values.clear();
        self.values.reserve(take * self.width);
        for &i in &order {
            self.values.extend(data.iter().map(|c| c[i]));
        }
    }
}

/// Immutable point structures shared by every replicate of a configuration.
#[derive(Debug)]
pub(crate) struct PointSource {
    cfg: ResolvedConfig,
    net: Option<DigitalNet>,
    lattice: &'static GeneratingVector,
}

impl PointSource {
    pub fn new(cfg: &ResolvedConfig) -> Result<Self> {
        let s = cfg.step_dims();
        let k = cfg.max_steps;
        let dims = match (cfg.method, cfg.scope) {
            (Method::Rqmc, _) => s * k,
            (Method::ArrayRqmc, Scope::OneLargeSet) => 1 + s * k,
            (Method::ArrayRqmc, Scope::FreshPerStep) => s + 1,
            _ => 0,
        };
        let lattice = GeneratingVector::kuo();
        let net = match cfg.points {
            PointKind::Sobol => Some(generate_sobol(
                cfg.n,
                dims,
                DirectionNumberTable::joe_kuo(),
            )?),
            PointKind::Lattice if dims > lattice.len() => {
                return Err(Error::PointSetCapacity {
                    have: lattice.len(),
                    need: dims,
                })
            }
            PointKind::Lattice => {
                lattice.check_coprime(cfg.n, dims)?;
                None
            }
            _ => None,
        };
        Ok(Self {
            cfg: cfg.clone(),
            net,
            lattice,
        })
    }

    /// Column `dim` of the `n`-point base set, randomized by `seed`.
    fn base_column(&self, dim: usize, seed: u64) -> Vec<f64> {
        let n = self.cfg.n;
        match self.cfg.points {
            PointKind::Sobol => self
                .net
                .as_ref()
                .expect("net built for Sobol")
                .scrambled_column(dim, seed),
            PointKind::Lattice => shifted_lattice_column(n, n, self.lattice.entries()[dim], seed),
            PointKind::Fibonacci => fibonacci_prefix_column(n, dim, seed),
            PointKind::Mc => mc_column(n, seed),
            PointKind::Stratified | PointKind::Hammersley => unreachable!("built per step"),
        }
    }

    /// Fill `out` with the inputs of step `k` (1-based) when `active` walkers
    /// remain.
    pub fn prepare(&self, schedule: &Schedule, k: usize, active: usize, out: &mut StepRows) {
        let s = self.cfg.step_dims();
        let seed = |j: usize| schedule.seed(k, j);
        match self.cfg.method {
            Method::Mc | Method::ArrayMc => {
                // Sorted walkers past the active ones take no row; an IID
                // stream's prefix is the same either way.
                let rows =
                    if self.cfg.method == Method::Mc || self.cfg.variant == Variant::Interleave {
                        self.cfg.n
                    } else {
                        active
                    };
                let cols: Vec<Vec<f64>> = (1..=s).map(|j| mc_column(rows, seed(j))).collect();
                out.fill_columns(&cols);
            }
            Method::Rqmc => {
                let cols: Vec<Vec<f64>> = (1..=s)
                    .map(|j| self.base_column((k - 1) * s + j - 1, seed(j)))
                    .collect();
                out.fill_columns(&cols);
            }
            Method::ArrayRqmc => {
                let take = if self.cfg.variant == Variant::Interleave {
                    self.cfg.n
                } else {
                    active
                };
                match (self.cfg.variant, self.cfg.scope) {
                    (Variant::HammersleyOnFly, _) => {
                        let set = hammersley(active, s + 1, seed(0));
                        out.width = s;
                        out.values.clear();
                        for row in set.rows() {
                            out.values.extend_from_slice(&row[1..]);
                        }
                    }
                    (Variant::StratifiedOnFly, _) => {
                        let set = stratified_shifted_1d(active, seed(1));
                        out.width = 1;
                        out.values.clear();
                        out.values.extend_from_slice(set.values());
                    }
                    (Variant::FibonacciOnFly, _) => {
                        let sort = fibonacci_prefix_column(active, 0, seed(0));
                        let data = vec![fibonacci_prefix_column(active, 1, seed(1))];
                        out.fill_sorted_columns(&sort, &data, active);
                    }
                    (_, Scope::OneLargeSet) => {
                        let sort = self.base_column(0, schedule.seed(1, 0));
                        let data: Vec<Vec<f64>> = (1..=s)
                            .map(|j| self.base_column(1 + (k - 1) * s + j - 1, seed(j)))
                            .collect();
                        out.fill_sorted_columns(&sort, &data, take);
                    }
                    (_, Scope::FreshPerStep) => {
                        let sort = self.base_column(0, seed(0));
                        let data: Vec<Vec<f64>> =
                            (1..=s).map(|j| self.base_column(j, seed(j))).collect();
                        out.fill_sorted_columns(&sort, &data, take);
                    }
                }
            }
        }
    }
}

/// Column `dim` (0 or 1) of the first `m` points of the smallest Fibonacci
/// lattice with at least `m` points, shifted by a uniform from `seed`.
fn fibonacci_prefix_column(m: usize, dim: usize, seed: u64) -> Vec<f64> {
    let r = fibonacci_at_least(m);
    let size = fibonacci(r).expect("index in range") as usize;
    let z = if dim == 0 {
        1
    } else {
        fibonacci(r - 1).expect("index in range")
    };
    shifted_lattice_column(size, m, z, seed)
}
