//! Integer matrices with arbitrary-precision entries.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Sparse integer matrix. Only non-zero entries are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl SparseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: BTreeMap::new() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Sets an entry; writing zero removes it.
    pub fn set(&mut self, row: usize, col: usize, value: impl Into<BigInt>) {
        assert!(row < self.rows && col < self.cols, "index ({row}, {col}) out of bounds");
        let value = value.into();
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    pub fn get(&self, row: usize, col: usize) -> BigInt {
        self.entries.get(&(row, col)).cloned().unwrap_or_default()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn transpose(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(&(r, c), v)| ((c, r), v.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut other_rows: Vec<Vec<(usize, &BigInt)>> = vec![Vec::new(); other.rows];
        for (&(r, c), v) in &other.entries {
            other_rows[r].push((c, v));
        }
        let mut acc: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
        for (&(i, k), a) in &self.entries {
            for &(j, b) in &other_rows[k] {
                *acc.entry((i, j)).or_default() += a * b;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        SparseIntMatrix { rows: self.rows, cols: other.cols, entries: acc }
    }

    /// Keeps the listed rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> SparseIntMatrix {
        let row_pos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let col_pos: BTreeMap<usize, usize> = cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let entries = self
            .entries
            .iter()
            .filter_map(|(&(r, c), v)| Some(((*row_pos.get(&r)?, *col_pos.get(&c)?), v.clone())))
            .collect();
        SparseIntMatrix { rows: rows.len(), cols: cols.len(), entries }
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for (&(r, c), v) in &self.entries {
            m[(r, c)] = v.clone();
        }
        m
    }
}

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = v.clone().into();
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

    pub fn to_sparse(&self) -> SparseIntMatrix {
        let mut s = SparseIntMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !self[(i, j)].is_zero() {
                    s.set(i, j, self[(i, j)].clone());
                }
            }
        }
        s
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += factor * row[src]
    pub(crate) fn add_row(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = &self.data[src * self.cols + j];
            if !s.is_zero() {
                let delta = s * factor;
                self.data[dst * self.cols + j] += delta;
            }
        }
    }

    /// col[dst] += factor * col[src]
    pub(crate) fn add_col(&mut self, dst: usize, src: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = &self.data[i * self.cols + src];
            if !s.is_zero() {
                let delta = s * factor;
                self.data[i * self.cols + dst] += delta;
            }
        }
    }

    pub(crate) fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = &mut self.data[r * self.cols + j];
            *v = -std::mem::take(v);
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if m[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !m[(i, k)].is_zero()) {
                    Some(i) => {
                        m.swap_rows(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)]) / &prev;
                    m[(i, j)] = v;
                }
            }
            prev = m[(k, k)].clone();
        }
        sign * &m[(n - 1, n - 1)]
    }

    pub fn max_abs(&self) -> BigInt {
        self.data.iter().map(|v| v.abs()).max().unwrap_or_default()
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
