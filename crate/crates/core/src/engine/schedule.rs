use crate::qmc::derive_seed;

/// Randomization seeds of one replicate: for each step `k = 1..=K`, entry 0
/// seeds the sort column and entries `1..=s` seed the data columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    width: usize,
    steps: usize,
    seeds: Vec<u64>,
}

impl Schedule {
    /// Entry `(k, j)` is `derive_seed(master, [replicate, k, j])`.
    pub fn derive(master: u64, replicate: u64, steps: usize, width: usize) -> Self {
        let mut seeds = Vec::with_capacity(steps * width);
        for k in 1..=steps {
            for j in 0..width {
                seeds.push(derive_seed(master, &[replicate, k as u64, j as u64]));
            }
        }
        Self {
            width,
            steps,
            seeds,
        }
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn seed(&self, k: usize, j: usize) -> u64 {
        assert!(
            (1..=self.steps).contains(&k) && j < self.width,
            "schedule entry ({k}, {j}) out of range"
        );
        self.seeds[(k - 1) * self.width + j]
    }

    pub fn step(&self, k: usize) -> &[u64] {
        &self.seeds[(k - 1) * self.width..k * self.width]
    }

    /// Copy with entries `j in entries` of step `k` redrawn from `fresh`.
    pub fn refreshed(&self, k: usize, entries: std::ops::Range<usize>, fresh: u64) -> Self {
        let mut out = self.clone();
        for j in entries {
            out.seeds[(k - 1) * self.width + j] = derive_seed(fresh, &[k as u64, j as u64]);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entries_are_distinct_and_reproducible() {
        let a = Schedule::derive(9, 2, 5, 3);
        assert_eq!(a, Schedule::derive(9, 2, 5, 3));
        assert_ne!(a, Schedule::derive(9, 3, 5, 3));
        let mut all: Vec<u64> = (1..=5).flat_map(|k| a.step(k).to_vec()).collect();
        all.sort_unstable();
        all.dedup();
        assert_eq!(all.len(), 15);
    }

    #[test]
    fn refresh_touches_only_the_named_entries() {
        let a = Schedule::derive(1, 0, 4, 2);
        let b = a.refreshed(3, 1..2, 77);
        for k in 1..=4 {
            for j in 0..2 {
                assert_eq!(a.seed(k, j) == b.seed(k, j), !(k == 3 && j == 1));
            }
        }
    }
}
