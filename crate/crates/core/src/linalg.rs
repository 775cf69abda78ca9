//! Exact linear algebra over [`Scalar`]: incremental row reduction,
//! nullspaces and particular solutions.
//!
//! The constraint systems built elsewhere in the crate have few unknowns
//! and a great many (mostly redundant) equations, so rows are reduced as
//! they arrive and only an independent set is ever stored.

use alloc::vec;
use alloc::vec::Vec;

use crate::Scalar;

/// Reduced row echelon form maintained under row insertion.
#[derive(Clone, Debug)]
pub struct RowReducer {
    cols: usize,
    /// `(pivot column, row)` with the pivot entry equal to one and every
    /// other stored row zero in that column.
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl RowReducer {
    pub fn new(cols: usize) -> Self {
        RowReducer { cols, rows: Vec::new() }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds an equation row. Returns `true` if it increased the rank.
    pub fn push(&mut self, mut row: Vec<Scalar>) -> bool {
        assert_eq!(row.len(), self.cols, "row width");
        for (pivot, stored) in &self.rows {
            let f = row[*pivot].clone();
            if f.is_zero() {
                continue;
            }
            for (r, s) in row.iter_mut().zip(stored) {
                if !s.is_zero() {
                    *r -= &(&f * s);
                }
            }
        }
        let Some(pivot) = row.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let inv = row[pivot].inv().expect("pivot is nonzero");
        for c in row.iter_mut() {
            if !c.is_zero() {
                *c = &*c * &inv;
            }
        }
        for (_, stored) in self.rows.iter_mut() {
            let f = stored[pivot].clone();
            if f.is_zero() {
                continue;
            }
            for (s, r) in stored.iter_mut().zip(&row) {
                if !r.is_zero() {
                    *s -= &(&f * r);
                }
            }
        }
        let at = self.rows.partition_point(|(p, _)| *p < pivot);
        self.rows.insert(at, (pivot, row));
        true
    }

    pub fn is_full_rank(&self) -> bool {
        self.rows.len() == self.cols
    }

    /// Basis of `{v : M v = 0}`, one vector per free column, with a one in
    /// that free column.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let pivots: Vec<usize> = self.rows.iter().map(|(p, _)| *p).collect();
        (0..self.cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[free] = Scalar::one();
                for (p, row) in &self.rows {
                    v[*p] = -&row[free];
                }
                v
            })
            .collect()
    }
}

/// Nullspace of the matrix with the given rows.
pub fn nullspace(cols: usize, rows: impl IntoIterator<Item = Vec<Scalar>>) -> Vec<Vec<Scalar>> {
    let mut r = RowReducer::new(cols);
    for row in rows {
        r.push(row);
    }
    r.nullspace()
}

/// Some `v` with `A v = b`, where each equation is `(row, rhs)`, or `None`
/// if the system is inconsistent.
pub fn solve(cols: usize, equations: impl IntoIterator<Item = (Vec<Scalar>, Scalar)>) -> Option<Vec<Scalar>> {
    // augmented homogeneous system: [A | −b] (v, 1) = 0
    let mut r = RowReducer::new(cols + 1);
    for (mut row, rhs) in equations {
        row.push(-rhs);
        r.push(row);
    }
    if r.rows.iter().any(|(p, _)| *p == cols) {
        return None;
    }
    let mut v = vec![Scalar::zero(); cols];
    for (p, row) in &r.rows {
        v[*p] = -&row[cols];
    }
    Some(v)
}
