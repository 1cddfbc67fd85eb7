//! Discrete Hilbert curves in 2 and 3 dimensions and the sorting key used to
//! order walkers.
//!
//! Keys are computed with Skilling's transpose algorithm at a fixed internal
//! order (31 bits per axis in 2-D, 20 in 3-D) and truncated to the requested
//! resolution `p`. Truncating one fixed curve makes coarse keys exact prefixes
//! of fine keys, so refining `p` never reorders cells that were already
//! distinct.

use crate::error::{Error, Result};

/// Resolution and dimension of a discrete Hilbert curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HilbertConfig {
    dim: usize,
    bits: u32,
}

/// Identifier of the orientation convention: Skilling's transform, axis 0 is
/// the most significant axis, truncated from the fixed internal order.
pub const ORIENTATION: &str = "skilling-transpose/prefix-v1";

fn internal_bits(dim: usize) -> u32 {
    match dim {
        2 => 31,
        _ => 20,
    }
}

fn axes_to_transpose(x: &mut [u32], bits: u32) {
    let n = x.len();
    let m = 1u32 << (bits - 1);
    // Branch-free form of: if bit q of x[i] is set, invert the low bits of
    // x[0]; otherwise exchange the low bits of x[0] and x[i].
    let mut q = m;
    while q > 1 {
        let p = q - 1;
        for i in 0..n {
            let set = 0u32.wrapping_sub(u32::from(x[i] & q != 0));
            let t = (x[0] ^ x[i]) & p & !set;
            x[0] ^= (p & set) | t;
            x[i] ^= t;
        }
        q >>= 1;
    }
    for i in 1..n {
        x[i] ^= x[i - 1];
    }
    let mut t = 0;
    let mut q = m;
    while q > 1 {
        t ^= (q - 1) & 0u32.wrapping_sub(u32::from(x[n - 1] & q != 0));
        q >>= 1;
    }
    for xi in x.iter_mut() {
        *xi ^= t;
    }
}

fn transpose_to_axes(x: &mut [u32], bits: u32) {
    let n = x.len();
    let top = 1u64 << bits;
    let t = x[n - 1] >> 1;
    for i in (1..n).rev() {
        x[i] ^= x[i - 1];
    }
    x[0] ^= t;
    let mut q = 2u64;
    while q != top {
        let p = (q - 1) as u32;
        let qq = q as u32;
        for i in (0..n).rev() {
            if x[i] & qq != 0 {
                x[0] ^= p;
            } else {
                let t = (x[0] ^ x[i]) & p;
                x[0] ^= t;
                x[i] ^= t;
            }
        }
        q <<= 1;
    }
}

/// Bit `b` of `v` moved to bit `2b`.
#[inline]
fn spread2(v: u32) -> u64 {
    let mut x = u64::from(v);
    x = (x | (x << 16)) & 0x0000_ffff_0000_ffff;
    x = (x | (x << 8)) & 0x00ff_00ff_00ff_00ff;
    x = (x | (x << 4)) & 0x0f0f_0f0f_0f0f_0f0f;
    x = (x | (x << 2)) & 0x3333_3333_3333_3333;
    (x | (x << 1)) & 0x5555_5555_5555_5555
}

/// Bit `b` of `v` (21 bits at most) moved to bit `3b`.
#[inline]
fn spread3(v: u32) -> u64 {
    let mut x = u64::from(v) & 0x1f_ffff;
    x = (x | (x << 32)) & 0x001f_0000_0000_ffff;
    x = (x | (x << 16)) & 0x001f_0000_ff00_00ff;
    x = (x | (x << 8)) & 0x100f_00f0_0f00_f00f;
    x = (x | (x << 4)) & 0x10c3_0c30_c30c_30c3;
    (x | (x << 2)) & 0x1249_2492_4924_9249
}

#[cfg(test)]
fn interleave(x: &[u32], bits: u32) -> u64 {
    let mut key = 0u64;
    for b in (0..bits).rev() {
        for &xi in x {
            key = (key << 1) | u64::from((xi >> b) & 1);
        }
    }
    key
}

fn deinterleave(key: u64, dim: usize, bits: u32, out: &mut [u32]) {
    out.iter_mut().for_each(|v| *v = 0);
    let total = dim as u32 * bits;
    for pos in 0..total {
        let bit = (key >> (total - 1 - pos)) & 1;
        let axis = pos as usize % dim;
        let level = bits - 1 - pos / dim as u32;
        out[axis] |= (bit as u32) << level;
    }
}

impl HilbertConfig {
    pub fn new(dim: usize, bits: u32) -> Result<Self> {
        if !(2..=3).contains(&dim) || bits == 0 || bits > internal_bits(dim) {
            return Err(Error::HilbertConfig { dim, bits });
        }
        Ok(Self { dim, bits })
    }

    /// `p = 16` in 2-D and `p = 10` in 3-D.
    pub fn default_for(dim: usize) -> Result<Self> {
        Self::new(dim, if dim == 2 { 16 } else { 10 })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn cells_per_axis(&self) -> u64 {
        1u64 << self.bits
    }

    pub fn key_count(&self) -> u64 {
        1u64 << (self.dim as u32 * self.bits)
    }

    /// Level `q` of the transform only rewrites bits below `q`, so running it
    /// at order `p` yields exactly the top `dp` bits of the internal-order key.
    fn encode_unchecked(&self, cell: &[u64]) -> u64 {
        let mut x = [0u32; 3];
        for (xi, &c) in x.iter_mut().zip(cell) {
            *xi = c as u32;
        }
        let x = &mut x[..self.dim];
        axes_to_transpose(x, self.bits);
        if self.dim == 2 {
            (spread2(x[0]) << 1) | spread2(x[1])
        } else {
            (spread3(x[0]) << 2) | (spread3(x[1]) << 1) | spread3(x[2])
        }
    }

    /// Truncation of the internal-order key; reference for `encode_unchecked`.
    #[cfg(test)]
    fn encode_by_truncation(&self, cell: &[u64]) -> u64 {
        let full = internal_bits(self.dim);
        let up = full - self.bits;
        let mut x = [0u32; 3];
        for (xi, &c) in x.iter_mut().zip(cell) {
            *xi = (c << up) as u32;
        }
        let x = &mut x[..self.dim];
        axes_to_transpose(x, full);
        interleave(x, full) >> (self.dim as u32 * up)
    }

    /// Hilbert index of an integer cell.
    pub fn encode(&self, cell: &[u64]) -> Result<u64> {
        assert_eq!(cell.len(), self.dim, "cell dimension mismatch");
        if let Some(&c) = cell.iter().find(|&&c| c >= self.cells_per_axis()) {
            return Err(Error::HilbertCoordinate {
                coord: c,
                bits: self.bits,
            });
        }
        Ok(self.encode_unchecked(cell))
    }

    /// Cell with Hilbert index `key`.
    pub fn decode(&self, key: u64) -> Result<Vec<u64>> {
        if key >= self.key_count() {
            return Err(Error::HilbertKey(key));
        }
        let full = internal_bits(self.dim);
        let up = full - self.bits;
        let mut x = [0u32; 3];
        let x = &mut x[..self.dim];
        deinterleave(key << (self.dim as u32 * up), self.dim, full, x);
        transpose_to_axes(x, full);
        Ok(x.iter().map(|&v| u64::from(v >> up)).collect())
    }

    /// Resolution-`p` cell containing `z` in `[0,1]^d`; a coordinate of 1.0
    /// (or anything beyond) clamps to the top cell.
    pub fn cell_of(&self, z: &[f64]) -> Result<Vec<u64>> {
        let side = self.cells_per_axis();
        z.iter()
            .map(|&v| {
                if !v.is_finite() {
                    return Err(Error::NonFinite);
                }
                let c = (v.clamp(0.0, 1.0) * side as f64).floor() as u64;
                Ok(c.min(side - 1))
            })
            .collect()
    }

    /// Pseudo-inverse sort key `h(z) = (encode(cell) + 1/2) / 2^{dp}` in `[0,1)`.
    pub fn sort_key(&self, z: &[f64]) -> Result<f64> {
        assert_eq!(z.len(), self.dim, "point dimension mismatch");
        let side = self.cells_per_axis();
        let mut cell = [0u64; 3];
        for (c, &v) in cell.iter_mut().zip(z) {
            if !v.is_finite() {
                return Err(Error::NonFinite);
            }
            *c = ((v.clamp(0.0, 1.0) * side as f64).floor() as u64).min(side - 1);
        }
        let key = self.encode_unchecked(&cell[..self.dim]);
        Ok((key as f64 + 0.5) / self.key_count() as f64)
    }

    /// Center of the cell visited at curve parameter `t` in `[0,1)`.
    pub fn curve_point(&self, t: f64) -> Vec<f64> {
        let count = self.key_count();
        let key = ((t.clamp(0.0, 1.0) * count as f64).floor() as u64).min(count - 1);
        let side = self.cells_per_axis() as f64;
        self.decode(key)
            .expect("key in range")
            .into_iter()
            .map(|c| (c as f64 + 0.5) / side)
            .collect()
    }
}
