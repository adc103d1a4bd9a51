//! Dense indexing of the lattice box `0 <= a <= bounds`, used to sweep
//! candidate exponent vectors and to answer ideal membership in O(1).

use crate::monomial::{Monomial, MonomialIdeal};

/// Boxes larger than this are refused rather than allocated.
pub const MAX_GRID_POINTS: usize = 1 << 27;

#[derive(Clone, Debug)]
pub(crate) struct Grid {
    bounds: Vec<u32>,
    strides: Vec<usize>,
    size: usize,
}

impl Grid {
    pub fn new(bounds: Vec<u32>) -> Self {
        let mut strides = Vec::with_capacity(bounds.len());
        let mut size = 1usize;
        for &b in &bounds {
            strides.push(size);
            size = size
                .checked_mul(b as usize + 1)
                .filter(|&s| s <= MAX_GRID_POINTS)
                .unwrap_or_else(|| panic!("lattice box {bounds:?} is too large to enumerate"));
        }
        Grid { bounds, strides, size }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn bounds(&self) -> &[u32] {
        &self.bounds
    }

    pub fn contains(&self, e: &[u32]) -> bool {
        e.iter().zip(&self.bounds).all(|(a, b)| a <= b)
    }

    pub fn index(&self, e: &[u32]) -> usize {
        e.iter().zip(&self.strides).map(|(&a, &s)| a as usize * s).sum()
    }

    pub fn point(&self, mut idx: usize) -> Vec<u32> {
        self.bounds
            .iter()
            .map(|&b| {
                let radix = b as usize + 1;
                let a = idx % radix;
                idx /= radix;
                a as u32
            })
            .collect()
    }

    pub fn stride(&self, i: usize) -> usize {
        self.strides[i]
    }

    /// Membership of every box point in `ideal`. Lower indices are always
    /// coordinatewise-smaller neighbours, so one forward sweep suffices.
    pub fn membership(&self, ideal: &MonomialIdeal) -> Vec<bool> {
        let mut table = vec![false; self.size];
        for g in ideal.generators() {
            if self.contains(g.exponents()) {
                table[self.index(g.exponents())] = true;
            }
        }
        let r = self.bounds.len();
        let mut point = vec![0u32; r];
        for idx in 0..self.size {
            if !table[idx] {
                table[idx] = (0..r).any(|i| point[i] > 0 && table[idx - self.strides[i]]);
            }
            self.advance(&mut point);
        }
        table
    }

    /// Steps `point` to the next index in mixed-radix order.
    pub fn advance(&self, point: &mut [u32]) {
        for (a, &b) in point.iter_mut().zip(&self.bounds) {
            if *a < b {
                *a += 1;
                return;
            }
            *a = 0;
        }
    }

    /// Indices of all box points grouped by total degree.
    pub fn by_degree(&self) -> Vec<Vec<usize>> {
        let max: u64 = self.bounds.iter().map(|&b| b as u64).sum();
        let mut levels = vec![Vec::new(); max as usize + 1];
        let mut point = vec![0u32; self.bounds.len()];
        for idx in 0..self.size {
            let d: u64 = point.iter().map(|&a| a as u64).sum();
            levels[d as usize].push(idx);
            self.advance(&mut point);
        }
        levels
    }

    pub fn monomial(&self, idx: usize) -> Monomial {
        Monomial::new(self.point(idx))
    }
}
