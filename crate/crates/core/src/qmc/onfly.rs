//! Small point sets built per step for the active walkers only: stratified
//! shifted 1-D sets with a golden-ratio multiplier, and Hammersley sets.

use rand::Rng;

use super::seed::{derive_seed, rng_from_seed};
use super::{gcd, Construction, RandomizedPointSet};

const PHI: f64 = 1.618_033_988_749_895;
const HALTON_BASES: [u64; 3] = [2, 3, 5];

/// Multiplier coprime with `m`: start at `max(round(m/phi) mod m, 2)` and step
/// up (wrapping back to 2) until coprime. For `m <= 2` the rule cannot leave 2,
/// so 1 is used.
pub fn golden_multiplier(m: usize) -> usize {
    assert!(m >= 1);
    if m <= 2 {
        return 1;
    }
    let mut a = ((m as f64 / PHI).round() as usize % m).max(2);
    loop {
        if a >= m {
            a = 2;
        }
        if gcd(a, m) == 1 {
            return a;
        }
        a += 1;
    }
}

/// `x_i = ((a (i-1) mod m) + delta) / m` with one shared uniform `delta`.
pub fn stratified_shifted_1d(m: usize, seed: u64) -> RandomizedPointSet {
    let delta: f64 = rng_from_seed(seed).gen();
    let values = stratified_values(m, delta);
    RandomizedPointSet::from_rows(m, 1, values, Construction::Stratified1D, Some(seed))
}

pub(crate) fn stratified_values(m: usize, delta: f64) -> Vec<f64> {
    let a = golden_multiplier(m);
    (0..m)
        .map(|i| ((a * i % m) as f64 + delta) / m as f64)
        .collect()
}

/// Van der Corput radical inverse of `i` in base `b`.
pub fn radical_inverse(mut i: u64, b: u64) -> f64 {
    let inv = 1.0 / b as f64;
    let mut scale = inv;
    let mut v = 0.0;
    while i > 0 {
        v += (i % b) as f64 * scale;
        i /= b;
        scale *= inv;
    }
    v
}

fn digits_for_base(b: u64) -> usize {
    // Enough base-b digits to resolve 2^-52.
    (52.0 * std::f64::consts::LN_2 / (b as f64).ln()).ceil() as usize
}

/// Radical inverse followed by a base-`b` digital shift with digits `shift`.
fn shifted_radical_inverse(mut i: u64, b: u64, shift: &[u64]) -> f64 {
    let mut digits = Vec::with_capacity(shift.len());
    for &e in shift {
        digits.push((i % b + e) % b);
        i /= b;
    }
    let v = digits
        .iter()
        .rev()
        .fold(0.0, |acc, &d| (acc + d as f64) / b as f64);
    v.min(1.0 - f64::EPSILON / 2.0)
}

pub(crate) fn halton_column(m: usize, b: u64, seed: u64) -> Vec<f64> {
    let mut rng = rng_from_seed(seed);
    let shift: Vec<u64> = (0..digits_for_base(b))
        .map(|_| rng.gen_range(0..b))
        .collect();
    (0..m as u64)
        .map(|i| shifted_radical_inverse(i, b, &shift))
        .collect()
}

/// Hammersley set with `s` columns: column 1 is `(i-1)/m`, columns 2.. are
/// Halton columns in bases 2, 3, 5 with independent random digital shifts.
pub fn hammersley(m: usize, s: usize, seed: u64) -> RandomizedPointSet {
    assert!((1..=4).contains(&s), "hammersley supports 1 <= s <= 4");
    let mut cols = vec![(0..m).map(|i| i as f64 / m as f64).collect::<Vec<_>>()];
    for j in 1..s {
        cols.push(halton_column(
            m,
            HALTON_BASES[j - 1],
            derive_seed(seed, &[j as u64]),
        ));
    }
    RandomizedPointSet::from_columns(&cols, Construction::Hammersley, Some(seed))
}
