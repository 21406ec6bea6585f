//! Exact n×n rational matrices.
//!
//! All arithmetic is over `BigRational`; nothing in this module touches
//! floating point. Floats appear only at display time, produced by callers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// Square matrix with exact rational entries, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    n: usize,
    entries: Vec<Rat>,
}

impl RationalMatrix {
    /// Builds from an integer numerator matrix over a single positive
    /// denominator, the input sugar used by presentation documents.
    /// Rejects singular matrices.
    pub fn from_num_den(num: &[Vec<i64>], den: i64, letter: &str) -> Result<Self> {
        let n = num.len();
        if n == 0 || num.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch {
                context: format!("matrix for letter `{letter}` is not square"),
            });
        }
        if den <= 0 {
            return Err(Error::BadDocument {
                reason: format!("denominator for letter `{letter}` must be positive"),
            });
        }
        let d = BigInt::from(den);
        let entries = num
            .iter()
            .flat_map(|row| row.iter())
            .map(|&v| Rat::new(BigInt::from(v), d.clone()))
            .collect();
        let m = Self { n, entries };
        if m.determinant().is_zero() {
            return Err(Error::SingularMatrix {
                letter: letter.to_string(),
            });
        }
        Ok(m)
    }

    pub fn from_entries(n: usize, entries: Vec<Rat>) -> Self {
        assert_eq!(entries.len(), n * n);
        Self { n, entries }
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Rat::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = Rat::one();
        }
        Self { n, entries }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rat {
        &self.entries[i * self.n + j]
    }

    pub fn is_identity(&self) -> bool {
        self == &Self::identity(self.n)
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut entries = vec![Rat::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entry(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.entry(k, j);
                    if !b.is_zero() {
                        entries[i * n + j] += a * b;
                    }
                }
            }
        }
        Self { n, entries }
    }

    /// Applies the matrix to an integer vector, returning exact rationals.
    pub fn apply(&self, v: &[BigInt]) -> Vec<Rat> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| {
                let mut acc = Rat::zero();
                for (j, x) in v.iter().enumerate() {
                    let e = self.entry(i, j);
                    if !e.is_zero() && !x.is_zero() {
                        acc += e * Rat::from(x.clone());
                    }
                }
                acc
            })
            .collect()
    }

    /// Applies the matrix to an integer vector and asserts the image is
    /// integral. Panics when it is not; callers guarantee membership in the
    /// appropriate lattice.
    pub fn apply_integral(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.apply(v)
            .into_iter()
            .map(|r| {
                assert!(r.is_integer(), "vector left its lattice");
                r.to_integer()
            })
            .collect()
    }

    /// Componentwise floor of the rational image vector.
    pub fn apply_floor(&self, v: &[BigInt]) -> Vec<BigInt> {
        self.apply(v).into_iter().map(|r| r.floor().to_integer()).collect()
    }

    pub fn determinant(&self) -> Rat {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = Rat::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r * n + col].is_zero());
            let Some(pivot) = pivot else {
                return Rat::zero();
            };
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col].clone();
            det *= p.clone();
            for r in (col + 1)..n {
                let factor = &a[r * n + col] / &p;
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let sub = &factor * &a[col * n + j];
                    a[r * n + j] -= sub;
                }
            }
        }
        det
    }

    /// Exact inverse by Gauss–Jordan elimination. Panics on singular input;
    /// construction already rejects singular matrices.
    pub fn inverse(&self) -> Self {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut inv = Self::identity(n).entries;
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r * n + col].is_zero())
                .expect("singular matrix");
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    inv.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a[col * n + col].clone();
            for j in 0..n {
                a[col * n + j] /= p.clone();
                inv[col * n + j] /= p.clone();
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let factor = a[r * n + col].clone();
                for j in 0..n {
                    let s = &factor * &a[col * n + j];
                    a[r * n + j] -= s;
                    let s = &factor * &inv[col * n + j];
                    inv[r * n + j] -= s;
                }
            }
        }
        Self { n, entries: inv }
    }

    /// The ℓ1 operator norm: maximum over columns of the sum of entry
    /// absolute values. Exact rational.
    pub fn one_norm(&self) -> Rat {
        let n = self.n;
        let mut best = Rat::zero();
        for j in 0..n {
            let mut s = Rat::zero();
            for i in 0..n {
                s += self.entry(i, j).abs();
            }
            if s > best {
                best = s;
            }
        }
        best
    }

    /// Clears denominators: returns `(P, d)` with integer `P` and `d > 0`
    /// such that `self = P / d`.
    pub fn to_int_scaled(&self) -> (Vec<BigInt>, BigInt) {
        let mut d = BigInt::one();
        for e in &self.entries {
            d = num_integer::lcm(d, e.denom().clone());
        }
        let ints = self
            .entries
            .iter()
            .map(|e| e.numer() * (&d / e.denom()))
            .collect();
        (ints, d)
    }

    /// Deterministic text form, used for hashing and DP state keys.
    pub fn canonical_string(&self) -> String {
        let cells: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        format!("{}:[{}]", self.n, cells.join(","))
    }
}

impl std::fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.n {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.entry(i, j))?;
            }
        }
        Ok(())
    }
}
