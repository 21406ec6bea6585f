//! Finite-index sublattices of Z^n in Hermite normal form.
//!
//! The basis is stored as columns of an upper-triangular integer matrix with
//! positive pivots and off-pivot entries reduced modulo the row pivot. This
//! makes coset representatives canonical: `reduce` maps every vector to the
//! unique transversal representative in the box `[0, pivot_i)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::RationalMatrix;

/// Hermite-normal-form basis of a full-rank sublattice of Z^n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeBasis {
    n: usize,
    /// Column vectors; `cols[j][i]` is entry (row i, column j). Upper
    /// triangular: `cols[j][i] = 0` for `i > j`.
    cols: Vec<Vec<BigInt>>,
    index: BigInt,
}

impl LatticeBasis {
    /// The full lattice Z^n (identity basis, index 1).
    pub fn full(n: usize) -> Self {
        let cols = (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        Self {
            n,
            cols,
            index: BigInt::one(),
        }
    }

    /// Computes the HNF basis of the lattice generated by `generators`
    /// (column vectors). Panics if the span has rank < n; the callers only
    /// construct full-rank lattices.
    pub fn from_generators(n: usize, generators: Vec<Vec<BigInt>>) -> Self {
        assert!(generators.iter().all(|c| c.len() == n));
        let mut work: Vec<Vec<BigInt>> = generators;
        let mut pivot_cols: Vec<Option<Vec<BigInt>>> = vec![None; n];

        // Eliminate bottom row first; an upper-triangular column basis falls
        // out because each extracted pivot column is zero below its row.
        for row in (0..n).rev() {
            loop {
                let mut nonzero: Vec<usize> = work
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c[row].is_zero())
                    .map(|(idx, _)| idx)
                    .collect();
                if nonzero.is_empty() {
                    panic!("generators do not span a full-rank lattice");
                }
                if nonzero.len() == 1 {
                    let mut col = work.swap_remove(nonzero[0]);
                    if col[row].is_negative() {
                        for e in col.iter_mut() {
                            *e = -std::mem::take(e);
                        }
                    }
                    pivot_cols[row] = Some(col);
                    break;
                }
                // Reduce all other columns by the one with the smallest
                // nonzero magnitude in this row.
                nonzero.sort_by(|&a, &b| work[a][row].abs().cmp(&work[b][row].abs()));
                let min_idx = nonzero[0];
                let min_col = work[min_idx].clone();
                for &idx in &nonzero[1..] {
                    let q = work[idx][row].div_floor(&min_col[row]);
                    if q.is_zero() {
                        continue;
                    }
                    for i in 0..n {
                        let sub = &q * &min_col[i];
                        work[idx][i] -= sub;
                    }
                }
            }
        }

        let mut cols: Vec<Vec<BigInt>> = pivot_cols.into_iter().map(|c| c.unwrap()).collect();
        // Canonical reduction of entries above each pivot.
        for j in 0..n {
            for r in (0..j).rev() {
                let q = cols[j][r].div_floor(&cols[r][r]);
                if q.is_zero() {
                    continue;
                }
                let reducer = cols[r].clone();
                for i in 0..n {
                    let sub = &q * &reducer[i];
                    cols[j][i] -= sub;
                }
            }
        }
        let index = cols.iter().enumerate().map(|(j, c)| c[j].clone()).product();
        Self { n, cols, index }
    }

    /// The lattice `{v in Z^n : M v in Z^n}` for an invertible rational `M`.
    /// Writing `M = P/d`, this is the set of integer solutions of
    /// `P v ≡ 0 (mod d)`, computed from the integer kernel of `[P | -d·I]`.
    pub fn congruence_kernel(m: &RationalMatrix) -> Self {
        let n = m.dim();
        let (p, d) = m.to_int_scaled();
        if d.is_one() {
            return Self::full(n);
        }
        // Columns of the stacked system: n columns of P, then n columns of -d·I.
        let mut sys_cols: Vec<Vec<BigInt>> = Vec::with_capacity(2 * n);
        for j in 0..n {
            sys_cols.push((0..n).map(|i| p[i * n + j].clone()).collect());
        }
        for j in 0..n {
            sys_cols.push(
                (0..n)
                    .map(|i| if i == j { -d.clone() } else { BigInt::zero() })
                    .collect(),
            );
        }
        // Track the transformation on the 2n original columns; kernel columns
        // are those whose system column becomes zero.
        let mut track: Vec<Vec<BigInt>> = (0..2 * n)
            .map(|j| {
                (0..2 * n)
                    .map(|i| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        for row in 0..n {
            loop {
                let nonzero: Vec<usize> = sys_cols
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c[row].is_zero())
                    .map(|(idx, _)| idx)
                    .collect();
                if nonzero.len() <= 1 {
                    // Park the pivot column by zeroing it out of future play:
                    // swap it to the back and truncate both stacks.
                    if let Some(&idx) = nonzero.first() {
                        let last = sys_cols.len() - 1;
                        sys_cols.swap(idx, last);
                        track.swap(idx, last);
                        sys_cols.pop();
                        track.pop();
                    }
                    break;
                }
                let min_idx = *nonzero
                    .iter()
                    .min_by(|&&a, &&b| sys_cols[a][row].abs().cmp(&sys_cols[b][row].abs()))
                    .unwrap();
                let min_sys = sys_cols[min_idx].clone();
                let min_track = track[min_idx].clone();
                for &idx in nonzero.iter().filter(|&&i| i != min_idx) {
                    let q = sys_cols[idx][row].div_floor(&min_sys[row]);
                    if q.is_zero() {
                        continue;
                    }
                    for i in 0..n {
                        let sub = &q * &min_sys[i];
                        sys_cols[idx][i] -= sub;
                    }
                    for i in 0..2 * n {
                        let sub = &q * &min_track[i];
                        track[idx][i] -= sub;
                    }
                }
            }
        }
        // Remaining tracked columns are kernel vectors (v, u); keep v.
        let kernel_v: Vec<Vec<BigInt>> = sys_cols
            .iter()
            .zip(track.iter())
            .filter(|(c, _)| c.iter().all(|e| e.is_zero()))
            .map(|(_, t)| t[0..n].to_vec())
            .collect();
        Self::from_generators(n, kernel_v)
    }

    /// Image of this lattice under an invertible rational matrix, which the
    /// caller guarantees maps it into Z^n.
    pub fn image_under(&self, m: &RationalMatrix) -> Self {
        let cols = self.cols.iter().map(|c| m.apply_integral(c)).collect();
        Self::from_generators(self.n, cols)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// The index [Z^n : L] = product of the pivots.
    pub fn index(&self) -> &BigInt {
        &self.index
    }

    pub fn pivot(&self, i: usize) -> &BigInt {
        &self.cols[i][i]
    }

    pub fn basis_columns(&self) -> &[Vec<BigInt>] {
        &self.cols
    }

    /// The unique transversal representative of `v` modulo the lattice.
    /// `reduce(v) == reduce(w)` iff `v - w` lies in the lattice.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut v = v.to_vec();
        for i in (0..self.n).rev() {
            let q = v[i].div_floor(&self.cols[i][i]);
            if q.is_zero() {
                continue;
            }
            for r in 0..=i {
                let sub = &q * &self.cols[i][r];
                v[r] -= sub;
            }
        }
        v
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).iter().all(|e| e.is_zero())
    }

    /// All transversal representatives, ordered lexicographically. The count
    /// equals the index; callers keep indices at desk scale.
    pub fn transversal(&self) -> Vec<Vec<BigInt>> {
        let mut reps = vec![vec![BigInt::zero(); self.n]];
        for i in 0..self.n {
            let pivot = self.cols[i][i].clone();
            let mut next = Vec::new();
            let mut k = BigInt::zero();
            while k < pivot {
                for r in &reps {
                    let mut v = r.clone();
                    v[i] = k.clone();
                    next.push(v);
                }
                k += 1;
            }
            next.sort();
            reps = next;
        }
        // Re-reduce: with a non-diagonal basis the raw box is not itself the
        // canonical transversal, but its reductions enumerate it exactly once.
        let mut reps: Vec<Vec<BigInt>> = reps.iter().map(|v| self.reduce(v)).collect();
        reps.sort();
        reps.dedup();
        reps
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::RationalMatrix;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn full_lattice_reduces_everything_to_zero() {
        let l = LatticeBasis::full(2);
        assert_eq!(l.index(), &bi(1));
        assert_eq!(l.reduce(&[bi(17), bi(-4)]), vec![bi(0), bi(0)]);
        assert_eq!(l.transversal(), vec![vec![bi(0), bi(0)]]);
    }

    #[test]
    fn bs13_source_and_image() {
        let m = RationalMatrix::from_num_den(&[vec![3]], 1, "t").unwrap();
        let b = LatticeBasis::congruence_kernel(&m);
        assert_eq!(b.index(), &bi(1));
        let c = b.image_under(&m);
        assert_eq!(c.index(), &bi(3));
        assert_eq!(c.reduce(&[bi(7)]), vec![bi(1)]);
        assert_eq!(c.reduce(&[bi(-1)]), vec![bi(2)]);
        assert!(c.contains(&[bi(-6)]));
    }

    #[test]
    fn leary_minasyan_indices_match_bruteforce() {
        // Oracle: count solutions of M v in Z^2 with v in [0,13)^2; the index
        // is 13^2 divided by that count.
        let m = RationalMatrix::from_num_den(&[vec![5, 12], vec![-12, 5]], 13, "t").unwrap();
        let mut solutions = 0u64;
        for x in 0..13i64 {
            for y in 0..13i64 {
                let img = m.apply(&[bi(x), bi(y)]);
                if img.iter().all(|r| r.is_integer()) {
                    solutions += 1;
                }
            }
        }
        let oracle_index = 13 * 13 / solutions;
        let b = LatticeBasis::congruence_kernel(&m);
        assert_eq!(b.index(), &bi(oracle_index as i64));
        assert_eq!(b.index(), &bi(13));
        let c = b.image_under(&m);
        assert_eq!(c.index(), &bi(13));
    }

    #[test]
    fn reduce_is_transversal_map() {
        let m = RationalMatrix::from_num_den(&[vec![5, 12], vec![-12, 5]], 13, "t").unwrap();
        let b = LatticeBasis::congruence_kernel(&m);
        // reduce(v) == reduce(w) iff v - w in lattice, spot-checked on a grid.
        let vs: Vec<Vec<BigInt>> = (-6..6)
            .flat_map(|x| (-6..6).map(move |y| vec![bi(x), bi(y)]))
            .collect();
        for v in &vs {
            let rv = b.reduce(v);
            assert!(b.contains(&sub(v, &rv)));
            for w in &vs {
                let same_class = b.contains(&sub(v, w));
                assert_eq!(same_class, rv == b.reduce(w), "v={v:?} w={w:?}");
            }
        }
        assert_eq!(b.transversal().len(), 13);
    }

    fn sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    #[test]
    fn congruence_kernel_membership_matches_definition() {
        let m = RationalMatrix::from_num_den(&[vec![1, 1], vec![0, 2]], 2, "t").unwrap();
        let b = LatticeBasis::congruence_kernel(&m);
        for x in -8..8i64 {
            for y in -8..8i64 {
                let v = vec![bi(x), bi(y)];
                let integral = m.apply(&v).iter().all(|r| r.is_integer());
                assert_eq!(b.contains(&v), integral, "v=({x},{y})");
            }
        }
    }
}
