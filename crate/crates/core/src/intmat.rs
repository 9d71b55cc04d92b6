//! Exact integer matrices: determinant, permanent, the Pólya test,
//! entrywise domination and Smith invariants.
//!
//! Entries are stored as `i64`. Determinants and permanents are computed
//! on a checked `i128` fast path and fall back to `BigInt` arithmetic on
//! overflow, so every result is exact.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default hard limit on the size of a matrix whose permanent is computed.
pub const DEFAULT_PERMANENT_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix of size {size} exceeds the configured limit {limit}")]
    SizeLimitExceeded { size: usize, limit: usize },
    #[error("matrix sizes differ: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
}

/// Square matrix of exact integers.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct SignedMatrix {
    size: usize,
    entries: Vec<i64>,
}

impl TryFrom<Vec<Vec<i64>>> for SignedMatrix {
    type Error = MatrixError;

    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self, Self::Error> {
        SignedMatrix::from_rows(rows)
    }
}

impl From<SignedMatrix> for Vec<Vec<i64>> {
    fn from(m: SignedMatrix) -> Self {
        m.rows()
    }
}

impl fmt::Debug for SignedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

impl fmt::Display for SignedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .entries
            .iter()
            .map(|e| e.to_string().len())
            .max()
            .unwrap_or(1);
        for i in 0..self.size {
            write!(f, "[")?;
            for j in 0..self.size {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>width$}", self.get(i, j), width = width)?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl SignedMatrix {
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self, MatrixError> {
        let size = rows.len();
        let mut entries = Vec::with_capacity(size * size);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != size {
                return Err(MatrixError::NotSquare {
                    row,
                    len: r.len(),
                    expected: size,
                });
            }
            entries.extend(r);
        }
        Ok(SignedMatrix { size, entries })
    }

    /// Builds a matrix from a row-major slice. Panics if the length is not `size * size`.
    pub fn from_flat(size: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), size * size, "flat entry count");
        SignedMatrix {
            size,
            entries: entries.to_vec(),
        }
    }

    pub fn zeros(size: usize) -> Self {
        SignedMatrix {
            size,
            entries: vec![0; size * size],
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size);
        for i in 0..size {
            m.set(i, i, 1);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.size + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: i64) {
        self.entries[i * self.size + j] = value;
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries
            .chunks(self.size.max(1))
            .take(self.size)
            .map(|c| c.to_vec())
            .collect()
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    /// Entrywise absolute value.
    pub fn abs(&self) -> SignedMatrix {
        SignedMatrix {
            size: self.size,
            entries: self.entries.iter().map(|e| e.abs()).collect(),
        }
    }

    pub fn transpose(&self) -> SignedMatrix {
        let mut t = Self::zeros(self.size);
        for i in 0..self.size {
            for j in 0..self.size {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.size).all(|i| (0..i).all(|j| self.get(i, j) == 0))
    }

    pub fn has_zero_entry(&self) -> bool {
        self.entries.contains(&0)
    }

    /// Exact determinant. The empty matrix has determinant 1.
    pub fn det(&self) -> BigInt {
        match self.det_i128() {
            Some(d) => BigInt::from(d),
            None => self.det_big(),
        }
    }

    /// Fraction-free Bareiss elimination in checked `i128`; `None` on overflow.
    pub fn det_i128(&self) -> Option<i128> {
        let n = self.size;
        if n == 0 {
            return Some(1);
        }
        let mut a: Vec<i128> = self.entries.iter().map(|&e| e as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n.saturating_sub(1) {
            if a[k * n + k] == 0 {
                let Some(swap) = (k + 1..n).find(|&r| a[r * n + k] != 0) else {
                    return Some(0);
                };
                for c in 0..n {
                    a.swap(k * n + c, swap * n + c);
                }
                sign = -sign;
            }
            let pivot = a[k * n + k];
            for i in k + 1..n {
                for j in k + 1..n {
                    let lhs = a[i * n + j].checked_mul(pivot)?;
                    let rhs = a[i * n + k].checked_mul(a[k * n + j])?;
                    a[i * n + j] = lhs.checked_sub(rhs)? / prev;
                }
            }
            prev = pivot;
        }
        a[n * n - 1].checked_mul(sign)
    }

    fn det_big(&self) -> BigInt {
        let n = self.size;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<BigInt> = self.entries.iter().map(|&e| BigInt::from(e)).collect();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&r| !a[r * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for c in 0..n {
                    a.swap(k * n + c, swap * n + c);
                }
                negate = !negate;
            }
            let pivot = a[k * n + k].clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i * n + j] * &pivot - &a[i * n + k] * &a[k * n + j]) / &prev;
                    a[i * n + j] = v;
                }
            }
            prev = pivot;
        }
        let d = a[n * n - 1].clone();
        if negate {
            -d
        } else {
            d
        }
    }

    /// Exact permanent with the default size limit.
    pub fn permanent(&self) -> Result<BigInt, MatrixError> {
        self.permanent_with_limit(DEFAULT_PERMANENT_LIMIT)
    }

    /// Exact permanent by Ryser's inclusion–exclusion formula, visiting
    /// column subsets in Gray-code order so each step updates the row sums
    /// by a single column. Cost is `O(2^n n)`.
    pub fn permanent_with_limit(&self, limit: usize) -> Result<BigInt, MatrixError> {
        if self.size > limit {
            return Err(MatrixError::SizeLimitExceeded {
                size: self.size,
                limit,
            });
        }
        Ok(match self.permanent_i128() {
            Some(p) => BigInt::from(p),
            None => self.permanent_big(),
        })
    }

    /// Ryser permanent in checked `i128`; `None` on overflow. No size limit is applied.
    pub fn permanent_i128(&self) -> Option<i128> {
        let n = self.size;
        if n == 0 {
            return Some(1);
        }
        assert!(n < 64, "permanent of a {n}x{n} matrix is out of reach");
        let mut row_sums = vec![0i128; n];
        let mut total = 0i128;
        let mut subset: u64 = 0;
        for k in 1u64..(1u64 << n) {
            let col = k.trailing_zeros() as usize;
            let bit = 1u64 << col;
            let adding = subset & bit == 0;
            subset ^= bit;
            for (i, s) in row_sums.iter_mut().enumerate() {
                let e = self.get(i, col) as i128;
                *s = if adding { s.checked_add(e)? } else { s.checked_sub(e)? };
            }
            let mut prod = 1i128;
            for &s in &row_sums {
                if s == 0 {
                    prod = 0;
                    break;
                }
                prod = prod.checked_mul(s)?;
            }
            if subset.count_ones() % 2 == 1 {
                total = total.checked_sub(prod)?;
            } else {
                total = total.checked_add(prod)?;
            }
        }
        if n % 2 == 1 {
            total.checked_neg()
        } else {
            Some(total)
        }
    }

    fn permanent_big(&self) -> BigInt {
        let n = self.size;
        let mut row_sums = vec![BigInt::zero(); n];
        let mut total = BigInt::zero();
        let mut subset: u64 = 0;
        for k in 1u64..(1u64 << n) {
            let col = k.trailing_zeros() as usize;
            let bit = 1u64 << col;
            let adding = subset & bit == 0;
            subset ^= bit;
            for (i, s) in row_sums.iter_mut().enumerate() {
                let e = BigInt::from(self.get(i, col));
                if adding {
                    *s += e;
                } else {
                    *s -= e;
                }
            }
            let prod: BigInt = row_sums.iter().product();
            if subset.count_ones() % 2 == 1 {
                total -= prod;
            } else {
                total += prod;
            }
        }
        if n % 2 == 1 {
            -total
        } else {
            total
        }
    }

    /// True iff `|det M| = per |M|`, i.e. all nonzero terms of the
    /// permutation expansion share one sign.
    pub fn is_polya(&self) -> Result<bool, MatrixError> {
        self.is_polya_with_limit(DEFAULT_PERMANENT_LIMIT)
    }

    pub fn is_polya_with_limit(&self, limit: usize) -> Result<bool, MatrixError> {
        if self.size > limit {
            return Err(MatrixError::SizeLimitExceeded {
                size: self.size,
                limit,
            });
        }
        let abs = self.abs();
        if let (Some(d), Some(p)) = (self.det_i128(), abs.permanent_i128()) {
            return Ok(d.abs() == p);
        }
        Ok(self.det().abs() == abs.permanent_with_limit(limit)?)
    }

    /// True iff `|self[i][j]| >= other[i][j]` everywhere and `other` is nonnegative.
    pub fn dominates(&self, other: &SignedMatrix) -> Result<bool, MatrixError> {
        if self.size != other.size {
            return Err(MatrixError::SizeMismatch {
                left: self.size,
                right: other.size,
            });
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .all(|(&p, &n)| n >= 0 && p.abs() >= n))
    }

    /// Invariant factors `d_1 | d_2 | ... | d_g` of the cokernel; zeros trail.
    pub fn smith_invariants(&self) -> Vec<BigInt> {
        SmithForm::new(self).diagonal
    }
}

/// Smith normal form `U M V = D` keeping the unimodular left factor `U`,
/// which is what maps `Z^g` onto the cokernel `Z^g / M Z^g`.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub left: Vec<Vec<BigInt>>,
}

impl SmithForm {
    pub fn new(m: &SignedMatrix) -> Self {
        let n = m.size();
        let mut a: Vec<Vec<BigInt>> = m
            .rows()
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect();
        let mut left: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();

        for t in 0..n {
            loop {
                // smallest nonzero |entry| in the trailing block; ties by row then column
                let mut best: Option<(usize, usize)> = None;
                for i in t..n {
                    for j in t..n {
                        if a[i][j].is_zero() {
                            continue;
                        }
                        let better = match best {
                            None => true,
                            Some((bi, bj)) => a[i][j].abs() < a[bi][bj].abs(),
                        };
                        if better {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = best else { break };
                a.swap(t, pi);
                left.swap(t, pi);
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }

                let pivot = a[t][t].clone();
                let mut clean = true;
                for i in t + 1..n {
                    if a[i][t].is_zero() {
                        continue;
                    }
                    let q = a[i][t].div_floor(&pivot);
                    row_sub(&mut a, i, t, &q);
                    row_sub(&mut left, i, t, &q);
                    if !a[i][t].is_zero() {
                        clean = false;
                    }
                }
                for j in t + 1..n {
                    if a[t][j].is_zero() {
                        continue;
                    }
                    let q = a[t][j].div_floor(&pivot);
                    for row in a.iter_mut() {
                        let d = &row[t] * &q;
                        row[j] -= d;
                    }
                    if !a[t][j].is_zero() {
                        clean = false;
                    }
                }
                if !clean {
                    continue;
                }
                // divisibility of the remaining block by the pivot
                let offender = (t + 1..n)
                    .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !a[i][j].is_multiple_of(&pivot));
                match offender {
                    Some((i, _)) => {
                        let one = -BigInt::one();
                        row_sub(&mut a, t, i, &one);
                        row_sub(&mut left, t, i, &one);
                    }
                    None => break,
                }
            }
            if a[t][t].is_negative() {
                for v in a[t].iter_mut() {
                    *v = -v.clone();
                }
                for v in left[t].iter_mut() {
                    *v = -v.clone();
                }
            }
        }

        let diagonal = (0..n).map(|i| a[i][i].clone()).collect();
        SmithForm { diagonal, left }
    }

    /// Canonical representative of `x` in the cokernel: `U x` reduced
    /// modulo each nonzero invariant factor.
    pub fn reduce(&self, x: &[i64]) -> Vec<BigInt> {
        let n = self.diagonal.len();
        assert_eq!(x.len(), n, "vector length");
        (0..n)
            .map(|i| {
                let y: BigInt = (0..n).map(|j| &self.left[i][j] * BigInt::from(x[j])).sum();
                let d = &self.diagonal[i];
                if d.is_zero() {
                    y
                } else {
                    y.mod_floor(d)
                }
            })
            .collect()
    }

    /// Order of the cokernel, or `None` when it is infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.diagonal.iter().any(|d| d.is_zero()) {
            None
        } else {
            Some(self.diagonal.iter().product())
        }
    }
}

// row[target] -= q * row[source]
fn row_sub(a: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    let src = a[source].clone();
    for (t, s) in a[target].iter_mut().zip(src) {
        *t -= s * q;
    }
}

/// Converts an exact integer to `i64`, saturating; used for display paths only.
pub fn to_i64_saturating(v: &BigInt) -> i64 {
    v.to_i64().unwrap_or(if v.is_negative() { i64::MIN } else { i64::MAX })
}
