//! Dense matrices over the integers.
//!
//! Small, exact, and deliberately boring: row-major `BigInt` storage with
//! the handful of operations the solver and the congruence tests need.
//! Serialization is sparse (only nonzero entries), with coefficients as
//! decimal strings so arbitrary precision survives JSON.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A rows x cols matrix of arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Build from row-major i64 slices; convenient in tests.
    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut m = IntMat::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(*v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Column `j` as a fresh vector.
    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// The submatrix of columns `lo..hi`.
    pub fn col_range(&self, lo: usize, hi: usize) -> IntMat {
        assert!(lo <= hi && hi <= self.cols);
        let mut out = IntMat::zeros(self.rows, hi - lo);
        for i in 0..self.rows {
            for j in lo..hi {
                out[(i, j - lo)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -std::mem::take(&mut self[(i, j)]);
            self[(i, j)] = v;
        }
    }

    /// Column operation `col_j += k * col_i` (the elementary unimodular op).
    pub fn col_axpy(&mut self, j: usize, k: &BigInt, i: usize) {
        if k.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let add = &self[(r, i)] * k;
            self[(r, j)] += add;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -std::mem::take(&mut self[(i, j)]);
            self[(i, j)] = v;
        }
    }

    /// Row operation `row_i += k * row_j`.
    pub fn row_axpy(&mut self, i: usize, k: &BigInt, j: usize) {
        if k.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let add = &self[(j, c)] * k;
            self[(i, c)] += add;
        }
    }

    pub fn mul(&self, rhs: &IntMat) -> Result<IntMat> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = IntMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if self.cols != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * vec[{}]",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![BigInt::zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if !a.is_zero() {
                    out[i] += a * &v[j];
                }
            }
        }
        Ok(out)
    }

    /// Exact determinant by Bareiss fraction-free elimination. Square only.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "determinant of {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut m = self.data.clone();
        let at = |m: &Vec<BigInt>, i: usize, j: usize| m[i * n + j].clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if at(&m, k, k).is_zero() {
                // pivot search below row k
                let swap = (k + 1..n).find(|&r| !at(&m, r, k).is_zero());
                match swap {
                    None => return Ok(BigInt::zero()),
                    Some(r) => {
                        for j in 0..n {
                            m.swap(k * n + j, r * n + j);
                        }
                        sign = -sign;
                    }
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = at(&m, i, j) * at(&m, k, k) - at(&m, i, k) * at(&m, k, j);
                    // Bareiss: division is exact
                    m[i * n + j] = num / &prev;
                }
            }
            for i in k + 1..n {
                m[i * n + k] = BigInt::zero();
            }
            prev = at(&m, k, k);
        }
        Ok(sign * at(&m, n - 1, n - 1))
    }

    pub fn is_unimodular(&self) -> Result<bool> {
        Ok(self.determinant()?.abs().is_one())
    }
}

impl std::ops::Index<(usize, usize)> for IntMat {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

// Sparse serialized form: {"rows", "cols", "entries": [[i, j, "value"], ...]}
#[derive(Serialize, Deserialize)]
struct SparseRepr {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, String)>,
}

impl Serialize for IntMat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut entries = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = &self[(i, j)];
                if !v.is_zero() {
                    entries.push((i, j, v.to_string()));
                }
            }
        }
        SparseRepr {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntMat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SparseRepr::deserialize(deserializer)?;
        let mut m = IntMat::zeros(repr.rows, repr.cols);
        for (i, j, text) in repr.entries {
            if i >= repr.rows || j >= repr.cols {
                return Err(D::Error::custom(format!("entry ({i},{j}) out of bounds")));
            }
            m[(i, j)] = text
                .parse()
                .map_err(|_| D::Error::custom(format!("invalid integer `{text}`")))?;
        }
        Ok(m)
    }
}
