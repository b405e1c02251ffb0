//! Dense storage for values indexed by ordered vertex pairs `(u, v)`.

use std::ops::Range;

use crate::pattern::PatternIndex;

/// Staircase layout: row `u` stores the columns `first_col(u)..cols`, with
/// `first_col(u) > u` and non-decreasing in `u`.
///
/// For pattern ids the first column of `α` is the first id ending after
/// `j_α`, so every pair that can satisfy `β ≻ α` has a slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairLayout {
    first_col: Vec<usize>,
    row_start: Vec<usize>,
}

impl PairLayout {
    pub fn for_patterns(index: &PatternIndex) -> Self {
        let first = (0..index.len()).map(|id| index.first_after(index.end(id))).collect();
        Self::from_first_cols(first)
    }

    /// Full upper triangle over `vertices` vertices.
    pub fn upper_triangle(vertices: usize) -> Self {
        Self::from_first_cols((1..=vertices).collect())
    }

    /// Panics if the staircase shape is violated.
    pub fn from_first_cols(first_col: Vec<usize>) -> Self {
        let cols = first_col.len();
        let mut row_start = Vec::with_capacity(cols + 1);
        let mut total = 0usize;
        for (u, &f) in first_col.iter().enumerate() {
            assert!(f > u && f <= cols, "row {u} starts at column {f}");
            if u > 0 {
                assert!(f >= first_col[u - 1], "first columns must be non-decreasing");
            }
            row_start.push(total);
            total += cols - f;
        }
        row_start.push(total);
        PairLayout { first_col, row_start }
    }

    pub fn vertices(&self) -> usize {
        self.first_col.len()
    }

    /// Total number of slots.
    pub fn len(&self) -> usize {
        *self.row_start.last().expect("row_start is never empty")
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn first_col(&self, u: usize) -> usize {
        self.first_col[u]
    }

    /// Slot range of row `u`.
    #[inline]
    pub fn row(&self, u: usize) -> Range<usize> {
        self.row_start[u]..self.row_start[u + 1]
    }

    /// Slot of `(u, v)` if stored.
    #[inline]
    pub fn slot(&self, u: usize, v: usize) -> Option<usize> {
        (v >= self.first_col[u] && v < self.vertices()).then(|| self.slot_unchecked(u, v))
    }

    /// Slot of a stored pair; `v` must be at least `first_col(u)`.
    #[inline]
    pub fn slot_unchecked(&self, u: usize, v: usize) -> usize {
        self.row_start[u] + v - self.first_col[u]
    }
}
