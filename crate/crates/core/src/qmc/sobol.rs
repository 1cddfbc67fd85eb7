//! Sobol' digital nets in base 2 with Matoušek's linear matrix scramble.
//!
//! Digits are carried as 53-bit integers: bit 52 holds the first binary digit
//! (weight 1/2) and bit 0 the 53rd, so a digit vector converts to an `f64` in
//! `[0,1)` exactly.

use std::path::Path;
use std::sync::OnceLock;

use rand::Rng;

use super::seed::{derive_seed, rng_from_seed};
use super::{Construction, RandomizedPointSet};
use crate::error::{Error, Result};

/// Output precision in bits.
pub const OUTPUT_BITS: u32 = 53;
const MAX_LOG2_N: u32 = 31;
const SCALE: f64 = 1.0 / (1u64 << OUTPUT_BITS) as f64;

static JOE_KUO_TEXT: &str = include_str!("../../data/new-joe-kuo-6.1000");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionRecord {
    pub dim: usize,
    pub degree: u32,
    pub coeffs: u32,
    pub m: Vec<u32>,
}

/// Primitive polynomials and initial direction integers, one record per
/// dimension starting at 2. Dimension 1 is the van der Corput column and has
/// no record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectionNumberTable {
    records: Vec<DirectionRecord>,
}

impl DirectionNumberTable {
    /// Parse the whitespace-separated `d s a m_1 ... m_s` format. A leading
    /// header line and blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut records = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.trim();
            if line.is_empty() || !line.starts_with(|c: char| c.is_ascii_digit()) {
                continue;
            }
            let fields: Vec<u64> = line
                .split_whitespace()
                .map(|t| t.parse::<u64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Parse {
                    line: line_no,
                    msg: e.to_string(),
                })?;
            if fields.len() < 3 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "expected d s a m_1..m_s".into(),
                });
            }
            let (dim, degree, coeffs) = (fields[0] as usize, fields[1] as u32, fields[2] as u32);
            let m: Vec<u32> = fields[3..].iter().map(|&v| v as u32).collect();
            let expected_dim = records.len() + 2;
            if dim != expected_dim {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected dimension {expected_dim}, found {dim}"),
                });
            }
            if degree == 0 || m.len() != degree as usize {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("degree {degree} but {} initial direction integers", m.len()),
                });
            }
            for (j, &mj) in m.iter().enumerate() {
                let bound = 1u64 << (j + 1);
                if mj % 2 == 0 || u64::from(mj) >= bound {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("m_{} = {mj} must be odd and below {bound}", j + 1),
                    });
                }
            }
            records.push(DirectionRecord {
                dim,
                degree,
                coeffs,
                m,
            });
        }
        Ok(Self { records })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// The vendored Joe–Kuo table (first 1000 dimensions).
    pub fn joe_kuo() -> &'static Self {
        static TABLE: OnceLock<DirectionNumberTable> = OnceLock::new();
        TABLE.get_or_init(|| Self::parse(JOE_KUO_TEXT).expect("vendored direction numbers parse"))
    }

    /// Number of dimensions the table supports, including dimension 1.
    pub fn capacity(&self) -> usize {
        self.records.len() + 1
    }

    pub fn record(&self, dim: usize) -> Option<&DirectionRecord> {
        dim.checked_sub(2).and_then(|i| self.records.get(i))
    }

    /// The first `bits` generating-matrix columns of 0-based dimension `j`,
    /// aligned to 53-bit digits.
    pub fn generating_columns(&self, j: usize, bits: u32) -> Result<Vec<u64>> {
        if j >= self.capacity() {
            return Err(Error::DimensionTooLarge {
                requested: j + 1,
                capacity: self.capacity(),
            });
        }
        let bits = bits as usize;
        let top = OUTPUT_BITS as usize;
        if j == 0 {
            return Ok((1..=bits).map(|k| 1u64 << (top - k)).collect());
        }
        let rec = &self.records[j - 1];
        let s = rec.degree as usize;
        let mut v = vec![0u64; bits + 1];
        for k in 1..=bits {
            v[k] = if k <= s {
                u64::from(rec.m[k - 1]) << (top - k)
            } else {
                let mut x = v[k - s] ^ (v[k - s] >> s);
                for l in 1..s {
                    if (rec.coeffs >> (s - 1 - l)) & 1 == 1 {
                        x ^= v[k - l];
                    }
                }
                x
            };
        }
        Ok(v[1..].to_vec())
    }
}

/// The first `2^m` points of an `s`-dimensional Sobol' sequence, stored by
/// generating matrix so it can be re-scrambled cheaply.
#[derive(Debug, Clone)]
pub struct DigitalNet {
    log2_n: u32,
    columns: Vec<Vec<u64>>,
}

pub fn generate_sobol(n: usize, s: usize, table: &DirectionNumberTable) -> Result<DigitalNet> {
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let log2_n = n.trailing_zeros();
    if log2_n > MAX_LOG2_N {
        return Err(Error::NotPowerOfTwo(n));
    }
    if s > table.capacity() {
        return Err(Error::DimensionTooLarge {
            requested: s,
            capacity: table.capacity(),
        });
    }
    let columns = (0..s)
        .map(|j| table.generating_columns(j, log2_n))
        .collect::<Result<Vec<_>>>()?;
    Ok(DigitalNet { log2_n, columns })
}

fn enumerate_digits(n: usize, matrix: &[u64]) -> Vec<u64> {
    let mut x = vec![0u64; n];
    for i in 1..n {
        x[i] = x[i & (i - 1)] ^ matrix[i.trailing_zeros() as usize];
    }
    x
}

#[inline]
fn parity(x: u64) -> u64 {
    u64::from(x.count_ones() & 1)
}

/// A nonsingular lower-triangular binary matrix plus a digital shift, both
/// restricted to `precision` leading digits.
struct LinearScramble {
    rows: Vec<u64>,
    shift: u64,
    mask: u64,
}

impl LinearScramble {
    fn draw(seed: u64, precision: u32) -> Self {
        let mut rng = rng_from_seed(seed);
        let top = OUTPUT_BITS;
        let full = (1u64 << top) - 1;
        let mask = full & !((1u64 << (top - precision)) - 1);
        let rows = (0..precision)
            .map(|r| {
                let diag = 1u64 << (top - 1 - r);
                let above = full & !((1u64 << (top - r)) - 1);
                (rng.gen::<u64>() & above) | diag
            })
            .collect();
        let shift = rng.gen::<u64>() & mask;
        Self { rows, shift, mask }
    }

    fn apply(&self, v: u64) -> u64 {
        self.rows.iter().enumerate().fold(0u64, |acc, (r, &row)| {
            acc | (parity(row & v) << (OUTPUT_BITS - 1 - r as u32))
        })
    }
}

impl DigitalNet {
    pub fn n(&self) -> usize {
        1usize << self.log2_n
    }

    pub fn dim(&self) -> usize {
        self.columns.len()
    }

    pub fn generating_matrix(&self, j: usize) -> &[u64] {
        &self.columns[j]
    }

    /// Unrandomized digit vectors of column `j`, in sequence order.
    pub fn digits(&self, j: usize) -> Vec<u64> {
        enumerate_digits(self.n(), &self.columns[j])
    }

    /// Unrandomized point set.
    pub fn points(&self) -> RandomizedPointSet {
        let cols: Vec<Vec<f64>> = (0..self.dim())
            .map(|j| {
                self.digits(j)
                    .into_iter()
                    .map(|x| x as f64 * SCALE)
                    .collect()
            })
            .collect();
        RandomizedPointSet::from_columns(&cols, Construction::Sobol, None)
    }

    /// Column `j` after an independent linear matrix scramble and digital
    /// shift drawn from `seed`. Scrambling the generating matrix and then
    /// enumerating is the same as scrambling every point's digits, because the
    /// net is linear in the digits of the index.
    pub fn scrambled_column(&self, j: usize, seed: u64) -> Vec<f64> {
        self.scrambled_column_with_precision(j, seed, OUTPUT_BITS)
            .expect("full precision is valid")
    }

    pub fn scrambled_column_with_precision(
        &self,
        j: usize,
        seed: u64,
        precision: u32,
    ) -> Result<Vec<f64>> {
        if precision == 0 || precision > OUTPUT_BITS {
            return Err(Error::Precision(precision));
        }
        let scramble = LinearScramble::draw(seed, precision);
        let matrix: Vec<u64> = self.columns[j].iter().map(|&c| scramble.apply(c)).collect();
        Ok(enumerate_digits(self.n(), &matrix)
            .into_iter()
            .map(|x| ((x ^ scramble.shift) & scramble.mask) as f64 * SCALE)
            .collect())
    }
}

/// Scramble every dimension independently; dimension `j` uses
/// `derive_seed(seed, [j])`.
pub fn scramble_matousek(net: &DigitalNet, seed: u64) -> RandomizedPointSet {
    let cols: Vec<Vec<f64>> = (0..net.dim())
        .map(|j| net.scrambled_column(j, derive_seed(seed, &[j as u64])))
        .collect();
    RandomizedPointSet::from_columns(&cols, Construction::SobolLms, Some(seed))
}
