//! Rank-1 lattices `{ (i-1) z / n mod 1 }` and their random shifts.

use std::path::Path;
use std::sync::OnceLock;

use rand::Rng;

use super::seed::{derive_seed, rng_from_seed};
use super::{shift_mod1, Construction, RandomizedPointSet};
use crate::error::{Error, Result};

static KUO_TEXT: &str = include_str!("../../data/lattice-33002-1024-1048576.1024");

/// Generating vector of a rank-1 lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratingVector {
    z: Vec<u64>,
    /// Sample sizes the vector was designed for, as `(2^lo, 2^hi)`.
    pub design_range: Option<(usize, usize)>,
}

impl GeneratingVector {
    pub fn new(z: Vec<u64>) -> Result<Self> {
        if z.first() != Some(&1) {
            return Err(Error::InvalidConfig(
                "generating vector must start with 1".into(),
            ));
        }
        if z.contains(&0) {
            return Err(Error::InvalidConfig(
                "generating vector entries must be positive".into(),
            ));
        }
        Ok(Self {
            z,
            design_range: None,
        })
    }

    /// One integer per line, line `j` holding `z_j`.
    pub fn parse(text: &str) -> Result<Self> {
        let z = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                l.trim().parse::<u64>().map_err(|e| Error::Parse {
                    line: i + 1,
                    msg: e.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(z)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// First 1024 entries of Kuo's lattice-33002-1024-1048576.9125 (order-3
    /// weights, designed for `2^10 <= n <= 2^20`).
    pub fn kuo() -> &'static Self {
        static GV: OnceLock<GeneratingVector> = OnceLock::new();
        GV.get_or_init(|| {
            let mut gv = Self::parse(KUO_TEXT).expect("vendored generating vector parses");
            gv.design_range = Some((1 << 10, 1 << 20));
            gv
        })
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    /// Every one of the first `s` entries must be coprime with `n`, so that
    /// each column is a permutation of `{0, 1/n, ..., (n-1)/n}`.
    pub fn check_coprime(&self, n: usize, s: usize) -> Result<()> {
        match self.z[..s.min(self.z.len())].iter().position(|&z| super::gcd((z % n as u64) as usize, n) != 1) {
            Some(dim) if n > 1 => Err(Error::LatticeNotCoprime { n, dim, z: self.z[dim] }),
            _ => Ok(()),
        }
    }

    pub fn entries(&self) -> &[u64] {
        &self.z
    }
}

fn lattice_coordinate(i: usize, z: u64, n: usize) -> f64 {
    let num = (i as u128 * z as u128 % n as u128) as f64;
    num / n as f64
}

/// Unrandomized lattice: coordinate `j` of point `i` (0-based) is
/// `(i z_j mod n) / n`.
pub fn generate_lattice(n: usize, s: usize, gv: &GeneratingVector) -> Result<RandomizedPointSet> {
    if n == 0 {
        return Err(Error::InvalidConfig("lattice needs n >= 1".into()));
    }
    if s > gv.len() {
        return Err(Error::DimensionTooLarge {
            requested: s,
            capacity: gv.len(),
        });
    }
    gv.check_coprime(n, s)?;
    let mut values = Vec::with_capacity(n * s);
    for i in 0..n {
        values.extend(gv.z[..s].iter().map(|&z| lattice_coordinate(i, z, n)));
    }
    Ok(RandomizedPointSet::from_rows(
        n,
        s,
        values,
        Construction::Lattice,
        None,
    ))
}

/// Column `j` of the first `take` points of an `n`-point lattice, shifted by
/// one uniform drawn from `seed`.
pub fn shifted_lattice_column(n: usize, take: usize, z: u64, seed: u64) -> Vec<f64> {
    let shift: f64 = rng_from_seed(seed).gen();
    (0..take)
        .map(|i| shift_mod1(lattice_coordinate(i, z, n), shift))
        .collect()
}

/// `F_r` with `F_1 = F_2 = 1`. Exact up to `r = 93`.
pub fn fibonacci(r: u32) -> Result<u64> {
    if r == 0 || r > 93 {
        return Err(Error::FibonacciIndex(r));
    }
    let (mut a, mut b) = (1u64, 1u64);
    for _ in 2..r {
        (a, b) = (b, a + b);
    }
    Ok(if r <= 2 { 1 } else { b })
}

/// Smallest index `r >= 3` with `F_r >= m`.
pub fn fibonacci_at_least(m: usize) -> u32 {
    let mut r = 3;
    while (fibonacci(r).expect("index in range") as usize) < m {
        r += 1;
    }
    r
}

/// The 2-D Fibonacci lattice with `n = F_r` points and multiplier `F_{r-1}`.
pub fn fibonacci_lattice(r: u32) -> Result<RandomizedPointSet> {
    // Keep n*F_{r-1} inside u128 and n inside usize-sized allocations.
    if !(3..=40).contains(&r) {
        return Err(Error::FibonacciIndex(r));
    }
    let n = fibonacci(r)? as usize;
    let gv = GeneratingVector::new(vec![1, fibonacci(r - 1)?])?;
    let mut set = generate_lattice(n, 2, &gv)?;
    set.construction = Construction::Fibonacci;
    Ok(set)
}

/// Shift each column `j` by a uniform drawn from `derive_seed(seed, [j])`.
pub fn shift_columns(points: &RandomizedPointSet, seed: u64) -> RandomizedPointSet {
    let shift: Vec<f64> = (0..points.dim())
        .map(|j| rng_from_seed(derive_seed(seed, &[j as u64])).gen())
        .collect();
    super::apply_shift(points, &shift, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmc::{has_latin_hypercube_property, random_shift};

    #[test]
    fn non_coprime_entries_are_rejected() {
        // z_2 = 213731 = 7 * 30533.
        let gv = GeneratingVector::kuo();
        assert!(matches!(generate_lattice(7, 3, gv), Err(Error::LatticeNotCoprime { n: 7, dim: 2, .. })));
        assert!(generate_lattice(7, 2, gv).is_ok());
        assert!(generate_lattice(1, 5, gv).is_ok());
    }

    #[test]
    fn lattice_example_values() {
        let gv = GeneratingVector::new(vec![1, 5]).unwrap();
        let p = generate_lattice(8, 2, &gv).unwrap();
        assert_eq!(p.row(0), &[0.0, 0.0]);
        assert_eq!(p.row(2), &[0.25, 0.25]);
        let col: Vec<f64> = (0..8).map(|i| i as f64 / 8.0).collect();
        assert_eq!(p.column(0), col);
    }

    #[test]
    fn fibonacci_lattice_example_values() {
        assert_eq!(fibonacci(8).unwrap(), 21);
        assert_eq!(fibonacci(7).unwrap(), 13);
        let p = fibonacci_lattice(8).unwrap();
        assert_eq!(p.n(), 21);
        assert_eq!(p.row(0), &[0.0, 0.0]);
        assert_eq!(p.row(1), &[1.0 / 21.0, 13.0 / 21.0]);
        assert_eq!(p.row(3), &[3.0 / 21.0, 18.0 / 21.0]);
    }

    #[test]
    fn fibonacci_lattice_equals_rank_one_form() {
        for r in 3..=25 {
            let fib = fibonacci_lattice(r).unwrap();
            let gv = GeneratingVector::new(vec![1, fibonacci(r - 1).unwrap()]).unwrap();
            let lat = generate_lattice(fibonacci(r).unwrap() as usize, 2, &gv).unwrap();
            assert_eq!(fib.values(), lat.values());
        }
        assert!(fibonacci_lattice(2).is_err());
        assert!(fibonacci(94).is_err());
        assert_eq!(fibonacci_at_least(21), 8);
        assert_eq!(fibonacci_at_least(22), 9);
    }

    #[test]
    fn kuo_vector_loaded() {
        let gv = GeneratingVector::kuo();
        assert_eq!(gv.len(), 1024);
        assert_eq!(&gv.entries()[..4], &[1, 182667, 213731, 255351]);
    }

    #[test]
    fn shifted_columns_have_unit_gaps() {
        let gv = GeneratingVector::kuo();
        let p = generate_lattice(64, 4, gv).unwrap();
        let q = random_shift(&p, 11);
        for j in 0..4 {
            let mut col = q.column(j);
            assert!(has_latin_hypercube_property(&col));
            col.sort_by(f64::total_cmp);
            for w in col.windows(2) {
                assert!(((w[1] - w[0]) - 1.0 / 64.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_bad_vectors() {
        assert!(GeneratingVector::new(vec![2, 3]).is_err());
        assert!(GeneratingVector::new(vec![1, 0]).is_err());
        assert!(generate_lattice(8, 3, &GeneratingVector::new(vec![1, 3]).unwrap()).is_err());
    }
}
