//! Seeded integer sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{rat, RatMatrix};

/// Root of every random decision. Identical seeds and call sequences give
/// identical outputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Seed(pub u64);

impl Seed {
    pub fn rng(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.0)
    }

    /// Independent child seed for attempt/stage `k` (splitmix64 finaliser).
    pub fn derive(self, k: u64) -> Seed {
        let mut z = self.0 ^ k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        Seed(z ^ (z >> 31))
    }
}

/// One cell of a zero/non-zero pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cell {
    Zero,
    /// Fixed entry 1 (identity blocks and the unit entries added by the steps).
    Unit,
    /// Free entry, instantiated by a random positive integer.
    Free,
}

impl Cell {
    pub fn is_nonzero(self) -> bool {
        self != Cell::Zero
    }
}

/// Row-major grid of [`Cell`]s.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZeroNonzeroMask {
    rows: usize,
    cols: usize,
    cells: Vec<Cell>,
}

impl ZeroNonzeroMask {
    pub fn new(rows: usize, cols: usize, fill: Cell) -> Self {
        ZeroNonzeroMask { rows, cols, cells: vec![fill; rows * cols] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Cell {
        self.cells[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, c: Cell) {
        self.cells[i * self.cols + j] = c;
    }

    pub fn nonzero(&self, i: usize, j: usize) -> bool {
        self.get(i, j).is_nonzero()
    }

    pub fn column(&self, j: usize) -> Vec<Cell> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Reorders columns: column `k` of the result is column `order[k]` of `self`.
    pub fn permute_columns(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.cols);
        let mut out = Self::new(self.rows, self.cols, Cell::Zero);
        for (k, &j) in order.iter().enumerate() {
            for i in 0..self.rows {
                out.set(i, k, self.get(i, j));
            }
        }
        out
    }

    /// Renders the pattern with `0`, `1` and `*` per cell, one row per line.
    pub fn render(&self) -> String {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| match self.get(i, j) {
                        Cell::Zero => '0',
                        Cell::Unit => '1',
                        Cell::Free => '*',
                    })
                    .collect::<String>()
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Instantiates a pattern: zeros stay zero, units stay one, free cells get
/// independent uniform integers in `[1, range_max]`, drawn in row-major order.
pub fn sample_pattern(pattern: &ZeroNonzeroMask, range_max: u64, seed: Seed) -> RatMatrix {
    assert!(range_max >= 2, "range_max must be at least 2");
    let mut rng = seed.rng();
    let mut m = RatMatrix::zeros(pattern.rows, pattern.cols);
    for i in 0..pattern.rows {
        for j in 0..pattern.cols {
            match pattern.get(i, j) {
                Cell::Zero => {}
                Cell::Unit => m.set(i, j, rat(1)),
                Cell::Free => m.set(i, j, rat(rng.gen_range(1..=range_max) as i64)),
            }
        }
    }
    m
}

/// Integer matrix with independent uniform entries in `[lo, hi]`.
pub fn sample_integers(rows: usize, cols: usize, lo: i64, hi: i64, rng: &mut impl Rng) -> RatMatrix {
    let mut m = RatMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, rat(rng.gen_range(lo..=hi)));
        }
    }
    m
}
