//! Exact sparse matrices on a window basis.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::exact::Rat;

/// Square sparse matrix with exact rational entries. Columns whose true
/// image leaves the window are flagged as boundary columns; their stored
/// entries are the in-window part only.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseOperator {
    dim: usize,
    entries: BTreeMap<(usize, usize), Rat>,
    boundary: BTreeSet<usize>,
}

/// One `(row, col, value)` triplet.
#[derive(Clone, Debug, Serialize)]
pub struct Triplet {
    pub row: usize,
    pub col: usize,
    pub value: String,
}

impl SparseOperator {
    pub fn zero(dim: usize) -> Self {
        SparseOperator { dim, ..Default::default() }
    }

    pub fn identity(dim: usize) -> Self {
        let mut out = SparseOperator::zero(dim);
        for i in 0..dim {
            out.set(i, i, Rat::one());
        }
        out
    }

    /// Matrix unit `E_{row, col}`.
    pub fn unit(dim: usize, row: usize, col: usize) -> Self {
        let mut out = SparseOperator::zero(dim);
        out.set(row, col, Rat::one());
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Rat {
        self.entries.get(&(row, col)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn set(&mut self, row: usize, col: usize, v: Rat) {
        assert!(row < self.dim && col < self.dim, "index out of range");
        if v.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), v);
        }
    }

    pub fn add_to(&mut self, row: usize, col: usize, v: &Rat) {
        let cur = self.get(row, col);
        self.set(row, col, cur + v);
    }

    pub fn mark_boundary(&mut self, col: usize) {
        self.boundary.insert(col);
    }

    pub fn boundary(&self) -> &BTreeSet<usize> {
        &self.boundary
    }

    pub fn is_boundary(&self, col: usize) -> bool {
        self.boundary.contains(&col)
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &Rat)> {
        self.entries.iter()
    }

    pub fn column(&self, col: usize) -> BTreeMap<usize, Rat> {
        self.entries.iter().filter(|((_, c), _)| *c == col).map(|((r, _), v)| (*r, v.clone())).collect()
    }

    fn columns(&self) -> BTreeMap<usize, Vec<(usize, Rat)>> {
        let mut cols: BTreeMap<usize, Vec<(usize, Rat)>> = BTreeMap::new();
        for ((r, c), v) in &self.entries {
            cols.entry(*c).or_default().push((*r, v.clone()));
        }
        cols
    }

    /// Product `self * o`. Boundary flags propagate: a column of the product
    /// is boundary if the column of `o` is, or if it reaches a boundary
    /// column of `self`.
    pub fn mul(&self, o: &SparseOperator) -> SparseOperator {
        assert_eq!(self.dim, o.dim, "dimension mismatch");
        let a_cols = self.columns();
        let mut out = SparseOperator::zero(self.dim);
        for (j, col) in o.columns() {
            for (k, v) in col {
                if self.boundary.contains(&k) {
                    out.boundary.insert(j);
                }
                if let Some(a_col) = a_cols.get(&k) {
                    for (i, w) in a_col {
                        out.add_to(*i, j, &(w * &v));
                    }
                }
            }
        }
        out.boundary.extend(o.boundary.iter().copied());
        out
    }

    pub fn add(&self, o: &SparseOperator) -> SparseOperator {
        assert_eq!(self.dim, o.dim, "dimension mismatch");
        let mut out = self.clone();
        for ((r, c), v) in &o.entries {
            out.add_to(*r, *c, v);
        }
        out.boundary.extend(o.boundary.iter().copied());
        out
    }

    pub fn scale(&self, k: &Rat) -> SparseOperator {
        let mut out = SparseOperator::zero(self.dim);
        for ((r, c), v) in &self.entries {
            out.set(*r, *c, v * k);
        }
        out.boundary = self.boundary.clone();
        out
    }

    pub fn sub(&self, o: &SparseOperator) -> SparseOperator {
        self.add(&o.scale(&-Rat::one()))
    }

    /// Plain matrix transpose; boundary flags are dropped.
    pub fn transpose(&self) -> SparseOperator {
        let mut out = SparseOperator::zero(self.dim);
        for ((r, c), v) in &self.entries {
            out.set(*c, *r, v.clone());
        }
        out
    }

    /// Entries with both indices below `n`.
    pub fn restrict(&self, n: usize) -> BTreeMap<(usize, usize), Rat> {
        self.entries.iter().filter(|((r, c), _)| *r < n && *c < n).map(|(k, v)| (*k, v.clone())).collect()
    }

    /// Entries in columns below `n`, any row.
    pub fn restrict_columns(&self, n: usize) -> BTreeMap<(usize, usize), Rat> {
        self.entries.iter().filter(|((_, c), _)| *c < n).map(|(k, v)| (*k, v.clone())).collect()
    }

    /// Whether the first `n` columns agree entry by entry.
    pub fn columns_equal(&self, o: &SparseOperator, n: usize) -> bool {
        self.restrict_columns(n) == o.restrict_columns(n)
    }

    pub fn triplets(&self) -> Vec<Triplet> {
        self.entries.iter().map(|((r, c), v)| Triplet { row: *r, col: *c, value: v.to_string() }).collect()
    }

    pub fn diagonal(&self) -> Vec<Rat> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries.keys().all(|(r, c)| r == c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn products_and_transposes() {
        let mut a = SparseOperator::zero(3);
        a.set(1, 0, rat(2, 1));
        a.set(2, 1, rat(1, 3));
        let b = a.transpose();
        let ab = a.mul(&b);
        assert_eq!(ab.get(1, 1), rat(4, 1));
        assert_eq!(ab.get(2, 2), rat(1, 9));
        assert_eq!(ab.nnz(), 2);
        assert_eq!(a.mul(&SparseOperator::identity(3)), a);
        assert_eq!(a.sub(&a), SparseOperator::zero(3));
    }

    #[test]
    fn boundary_propagates() {
        let mut a = SparseOperator::identity(2);
        a.mark_boundary(1);
        let b = SparseOperator::unit(2, 1, 0);
        assert!(a.mul(&b).is_boundary(0));
        assert!(!b.mul(&b).is_boundary(0));
    }
}
