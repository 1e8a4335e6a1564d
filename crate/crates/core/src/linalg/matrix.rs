use std::ops::{Index, IndexMut};

use super::scalar::{dot, Scalar};

/// Dense column-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::eye(n, n)
    }

    /// The leading `cols` columns of the `rows x rows` identity.
    pub fn eye(rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows.min(cols) {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds from column-major storage.
    ///
    /// # Panics
    /// If `data.len() != rows * cols`.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "column-major data length");
        Self { rows, cols, data }
    }

    /// Builds from a row-major nested slice; handy in tests.
    pub fn from_rows(rows: &[Vec<T>]) -> Self {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        let mut out = Self::zeros(n, m);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), m, "ragged rows");
            for (j, &v) in row.iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        out
    }

    /// Builds from columns of equal length. An empty list yields `0 x 0`.
    pub fn from_columns<C: AsRef<[T]>>(columns: &[C]) -> Self {
        let rows = columns.first().map_or(0, |c| c.as_ref().len());
        let mut data = Vec::with_capacity(rows * columns.len());
        for c in columns {
            let c = c.as_ref();
            assert_eq!(c.len(), rows, "columns must share a length");
            data.extend_from_slice(c);
        }
        Self {
            rows,
            cols: columns.len(),
            data,
        }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[T] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [T] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[T]> {
        (0..self.cols).map(move |j| self.col(j))
    }

    /// The first `k` columns.
    pub fn leading_columns(&self, k: usize) -> Self {
        assert!(k <= self.cols);
        Self {
            rows: self.rows,
            cols: k,
            data: self.data[..k * self.rows].to_vec(),
        }
    }

    /// The leading `r x c` block.
    pub fn leading_block(&self, r: usize, c: usize) -> Self {
        assert!(r <= self.rows && c <= self.cols);
        let mut out = Self::zeros(r, c);
        for j in 0..c {
            out.col_mut(j).copy_from_slice(&self.col(j)[..r]);
        }
        out
    }

    /// Columns whose `keep` flag is set, in their original order.
    pub fn select_columns(&self, keep: &[bool]) -> Self {
        assert_eq!(keep.len(), self.cols);
        let cols: Vec<&[T]> = keep
            .iter()
            .enumerate()
            .filter(|(_, &k)| k)
            .map(|(j, _)| self.col(j))
            .collect();
        if cols.is_empty() {
            return Self::zeros(self.rows, 0);
        }
        Self::from_columns(&cols)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for i in 0..self.rows {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions");
        let mut out = Self::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            let oc = other.col(j);
            let dst = &mut out.data[j * self.rows..(j + 1) * self.rows];
            for (p, &b) in oc.iter().enumerate() {
                if b == T::zero() {
                    continue;
                }
                let src = &self.data[p * self.rows..(p + 1) * self.rows];
                for (d, &a) in dst.iter_mut().zip(src) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(self.cols, x.len());
        let mut out = vec![T::zero(); self.rows];
        for (j, &xj) in x.iter().enumerate() {
            if xj == T::zero() {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.col(j)) {
                *o += a * xj;
            }
        }
        out
    }

    /// `A* x`.
    pub fn adjoint_matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(self.rows, x.len());
        self.columns().map(|c| dot(c, x)).collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        super::scalar::norm2(&self.data)
    }

    /// Euclidean norm of every column.
    pub fn column_norms(&self) -> Vec<f64> {
        self.columns().map(super::scalar::norm2).collect()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    /// Inserts `column` as the new first column.
    pub fn prepend_column(&mut self, column: &[T]) {
        if self.cols == 0 {
            self.rows = column.len();
        }
        assert_eq!(column.len(), self.rows);
        let mut data = Vec::with_capacity(self.data.len() + self.rows);
        data.extend_from_slice(column);
        data.extend_from_slice(&self.data);
        self.data = data;
        self.cols += 1;
    }

    /// Drops every column past the first `k`.
    pub fn truncate_columns(&mut self, k: usize) {
        if k < self.cols {
            self.data.truncate(k * self.rows);
            self.cols = k;
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[j * self.rows + i]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[j * self.rows + i]
    }
}
