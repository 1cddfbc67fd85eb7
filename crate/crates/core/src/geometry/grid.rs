//! Uniform 2-D grid of conservative candidate lists for nearest-primitive
//! queries.
//!
//! For a cell with center `c` and half-diagonal `h`, a primitive whose distance
//! from `c` exceeds `min_q dist(c, q) + 2h` can never be nearest to a point in
//! the cell. Candidate lists keep the original primitive order, so tie-breaking
//! matches the brute-force scan exactly.

use super::primitive::{BoundaryPrimitive, Point};

#[derive(Debug, Clone)]
pub(crate) struct Grid {
    lo: [f64; 2],
    cell: [f64; 2],
    cells: usize,
    offsets: Vec<u32>,
    candidates: Vec<u32>,
}

impl Grid {
    pub(crate) fn build(
        primitives: &[BoundaryPrimitive],
        lo: &Point,
        hi: &Point,
        cells: usize,
    ) -> Self {
        let cell = [
            (hi[0] - lo[0]) / cells as f64,
            (hi[1] - lo[1]) / cells as f64,
        ];
        let h = 0.5 * (cell[0] * cell[0] + cell[1] * cell[1]).sqrt();
        let mut offsets = Vec::with_capacity(cells * cells + 1);
        let mut candidates = Vec::new();
        offsets.push(0);
        let mut dist = vec![0.0; primitives.len()];
        for iy in 0..cells {
            for ix in 0..cells {
                let c = [
                    lo[0] + (ix as f64 + 0.5) * cell[0],
                    lo[1] + (iy as f64 + 0.5) * cell[1],
                    0.0,
                ];
                for (d, p) in dist.iter_mut().zip(primitives) {
                    *d = p.shape.distance(&c);
                }
                let best = dist.iter().copied().fold(f64::INFINITY, f64::min);
                // Small slack guards the bound against rounding in the distances.
                let cutoff = best + 2.0 * h * (1.0 + 1e-9) + 1e-12;
                candidates.extend(
                    (0..primitives.len())
                        .filter(|&i| dist[i] <= cutoff)
                        .map(|i| i as u32),
                );
                offsets.push(candidates.len() as u32);
            }
        }
        Self {
            lo: [lo[0], lo[1]],
            cell,
            cells,
            offsets,
            candidates,
        }
    }

    /// Candidate primitive indices for `z`, or `None` outside the grid.
    #[inline]
    pub(crate) fn candidates(&self, z: &Point) -> Option<&[u32]> {
        let fx = (z[0] - self.lo[0]) / self.cell[0];
        let fy = (z[1] - self.lo[1]) / self.cell[1];
        if !(fx >= 0.0 && fy >= 0.0) {
            return None;
        }
        let (ix, iy) = (fx as usize, fy as usize);
        if ix >= self.cells || iy >= self.cells {
            return None;
        }
        let k = iy * self.cells + ix;
        Some(&self.candidates[self.offsets[k] as usize..self.offsets[k + 1] as usize])
    }

    pub(crate) fn mean_candidates(&self) -> f64 {
        self.candidates.len() as f64 / (self.cells * self.cells) as f64
    }
}
