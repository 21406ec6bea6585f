//! Sparse Gaussian elimination over the two-element field.
//!
//! Columns are sorted lists of row indices; addition is symmetric
//! difference. The eliminator keeps reduced pivot columns keyed by their
//! leading row, supporting incremental rank queries and membership tests
//! for the column space.

use std::collections::BTreeMap;

/// Symmetric difference of two sorted index lists.
pub fn xor_columns(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

#[derive(Debug, Default, Clone)]
pub struct Eliminator {
    /// leading row -> fully reduced column with that leading row.
    pivots: BTreeMap<u32, Vec<u32>>,
}

impl Eliminator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reduces a column against the current pivots.
    pub fn reduce(&self, mut col: Vec<u32>) -> Vec<u32> {
        loop {
            let Some(&lead) = col.first() else {
                return col;
            };
            match self.pivots.get(&lead) {
                Some(p) => col = xor_columns(&col, p),
                None => return col,
            }
        }
    }

    /// Feeds a column; returns true when it enlarged the column space.
    pub fn insert(&mut self, col: Vec<u32>) -> bool {
        let reduced = self.reduce(col);
        match reduced.first() {
            None => false,
            Some(&lead) => {
                self.pivots.insert(lead, reduced);
                true
            }
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// True iff the column lies in the span of the inserted columns.
    pub fn spans(&self, col: Vec<u32>) -> bool {
        self.reduce(col).is_empty()
    }
}

/// Rank of a sparse GF(2) matrix given as columns.
pub fn rank(columns: impl IntoIterator<Item = Vec<u32>>) -> usize {
    let mut e = Eliminator::new();
    for c in columns {
        e.insert(c);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xor_is_symmetric_difference() {
        assert_eq!(xor_columns(&[0, 2, 5], &[2, 3]), vec![0, 3, 5]);
        assert_eq!(xor_columns(&[1], &[1]), Vec::<u32>::new());
    }

    #[test]
    fn rank_of_small_matrices() {
        // Identity 3x3.
        assert_eq!(rank(vec![vec![0], vec![1], vec![2]]), 3);
        // Dependent columns.
        assert_eq!(rank(vec![vec![0, 1], vec![1, 2], vec![0, 2]]), 2);
        // Zero column contributes nothing.
        assert_eq!(rank(vec![vec![], vec![0]]), 1);
    }

    #[test]
    fn span_membership() {
        let mut e = Eliminator::new();
        e.insert(vec![0, 1]);
        e.insert(vec![1, 2]);
        assert!(e.spans(vec![0, 2]));
        assert!(!e.spans(vec![0, 3]));
    }
}
