//! Point sets in the unit cube: plain Monte Carlo, scrambled Sobol' nets,
//! randomly shifted rank-1 lattices (Kuo and Fibonacci), Hammersley sets and
//! stratified shifted 1-D sets.
//!
//! All randomizations act column by column with one seed per column, which is
//! what lets the walk engine refresh a single column (or a single step block)
//! while leaving everything else untouched.

mod lattice;
mod onfly;
mod seed;
mod sobol;

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub use lattice::{
    fibonacci, fibonacci_at_least, fibonacci_lattice, generate_lattice, shift_columns,
    shifted_lattice_column, GeneratingVector,
};
pub use onfly::{golden_multiplier, hammersley, radical_inverse, stratified_shifted_1d};
pub use seed::{derive_seed, rng_from_seed, splitmix64};
pub use sobol::{generate_sobol, scramble_matousek, DigitalNet, DirectionNumberTable, OUTPUT_BITS};

use rand::Rng;
use serde::{Deserialize, Serialize};

/// Which construction produced a point set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Construction {
    Mc,
    Sobol,
    SobolLms,
    Lattice,
    ShiftedLattice,
    Fibonacci,
    Hammersley,
    Stratified1D,
}

/// An `n x s` row-major matrix of points in `[0,1)^s`.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomizedPointSet {
    n: usize,
    s: usize,
    values: Vec<f64>,
    pub construction: Construction,
    /// `None` for unrandomized (deterministic) sets.
    pub seed: Option<u64>,
}

impl RandomizedPointSet {
    pub fn from_rows(
        n: usize,
        s: usize,
        values: Vec<f64>,
        construction: Construction,
        seed: Option<u64>,
    ) -> Self {
        assert_eq!(values.len(), n * s, "point matrix shape mismatch");
        Self {
            n,
            s,
            values,
            construction,
            seed,
        }
    }

    /// Assemble from column vectors of equal length.
    pub fn from_columns(
        columns: &[Vec<f64>],
        construction: Construction,
        seed: Option<u64>,
    ) -> Self {
        let s = columns.len();
        let n = columns.first().map_or(0, Vec::len);
        let mut values = vec![0.0; n * s];
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), n, "ragged columns");
            for (i, &v) in col.iter().enumerate() {
                values[i * s + j] = v;
            }
        }
        Self {
            n,
            s,
            values,
            construction,
            seed,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.s
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.s..(i + 1) * self.s]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.s + j]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, j)).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.s.max(1)).take(self.n)
    }
}

/// Stratum counts of a column at granularity `1/bins`: entry `c` counts the
/// values in `[c/bins, (c+1)/bins)`.
pub fn stratum_counts(column: &[f64], bins: usize) -> Vec<usize> {
    let mut counts = vec![0usize; bins];
    let b = bins as f64;
    for &x in column {
        // `x * bins` can round across an edge; settle against `c / bins`.
        let mut c = ((x * b).floor() as usize).min(bins - 1);
        if c > 0 && x < c as f64 / b {
            c -= 1;
        } else if c + 1 < bins && x >= (c + 1) as f64 / b {
            c += 1;
        }
        counts[c] += 1;
    }
    counts
}

/// True when every interval `[c/n, (c+1)/n)` holds exactly one value.
pub fn has_latin_hypercube_property(column: &[f64]) -> bool {
    stratum_counts(column, column.len()).iter().all(|&c| c == 1)
}

/// IID uniform column of length `n` from one seed.
pub fn mc_column(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng_from_seed(seed);
    (0..n).map(|_| rng.gen::<f64>()).collect()
}

/// IID uniform `n x s` matrix. Column `j` is driven by `derive_seed(seed, [j])`.
pub fn mc_points(n: usize, s: usize, seed: u64) -> RandomizedPointSet {
    let cols: Vec<Vec<f64>> = (0..s)
        .map(|j| mc_column(n, derive_seed(seed, &[j as u64])))
        .collect();
    RandomizedPointSet::from_columns(&cols, Construction::Mc, Some(seed))
}

/// Add `shift` to `x` modulo 1, keeping the result in `[0,1)`.
#[inline]
pub fn shift_mod1(x: f64, shift: f64) -> f64 {
    let y = x + shift;
    if y >= 1.0 {
        y - 1.0
    } else {
        y
    }
}

/// Add one uniform vector to every point, componentwise mod 1.
pub fn random_shift(points: &RandomizedPointSet, seed: u64) -> RandomizedPointSet {
    let mut rng = rng_from_seed(seed);
    let shift: Vec<f64> = (0..points.dim()).map(|_| rng.gen::<f64>()).collect();
    apply_shift(points, &shift, seed)
}

/// Shift by an explicit vector; exposed for tests and deterministic callers.
pub fn apply_shift(points: &RandomizedPointSet, shift: &[f64], seed: u64) -> RandomizedPointSet {
    assert_eq!(shift.len(), points.dim());
    let s = points.dim();
    let values = points
        .values()
        .iter()
        .enumerate()
        .map(|(idx, &x)| shift_mod1(x, shift[idx % s]))
        .collect();
    let construction = match points.construction {
        Construction::Lattice => Construction::ShiftedLattice,
        other => other,
    };
    RandomizedPointSet::from_rows(points.n(), s, values, construction, Some(seed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mc_points_are_reproducible() {
        let a = mc_points(100, 3, 42);
        let b = mc_points(100, 3, 42);
        let c = mc_points(100, 3, 43);
        assert_eq!(a, b);
        assert_ne!(a.values(), c.values());
        assert!(a.values().iter().all(|&x| (0.0..1.0).contains(&x)));
    }

    #[test]
    fn mc_mean_is_near_half() {
        let p = mc_points(10_000, 1, 2024);
        let mean = p.values().iter().sum::<f64>() / 10_000.0;
        assert!((0.47..=0.53).contains(&mean), "mean {mean}");
    }

    #[test]
    fn shift_wraps_mod_one() {
        assert!((shift_mod1(0.9, 0.3) - 0.2).abs() < 1e-15);
        let p = RandomizedPointSet::from_rows(2, 1, vec![0.0, 0.5], Construction::Lattice, None);
        let q = apply_shift(&p, &[0.0], 1);
        assert_eq!(q.values(), p.values());
        assert_eq!(q.construction, Construction::ShiftedLattice);
    }

    #[test]
    fn latin_hypercube_detects_collisions() {
        assert!(has_latin_hypercube_property(&[0.1, 0.6]));
        assert!(!has_latin_hypercube_property(&[0.1, 0.2]));
        // 29.0 / 100.0 * 100.0 rounds below 29.
        let grid: Vec<f64> = (0..100).map(|i| i as f64 / 100.0).collect();
        assert!(has_latin_hypercube_property(&grid));
    }
}
