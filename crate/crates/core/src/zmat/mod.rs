//! Exact integer matrices and the lattice algebra built on them.
//!
//! Everything here is generic over an [`IntScalar`]: the pipeline runs on
//! [`num_bigint::BigInt`] (see [`crate::ZMatrix`]) so that intermediate
//! Hermite/Smith growth can never overflow, while `i64`/`i128` remain usable
//! for small, bounded computations and tests.

mod io;
mod lattice;
mod normal_form;

use std::fmt;
use std::ops::Mul;

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

pub use io::{parse_csv, parse_json, read_matrix, to_csv, to_json_value, MatrixFormat};
pub use lattice::{
    column_lattice_basis, gale_dual, inverse_unimodular, kernel_basis, same_column_lattice,
    same_row_lattice, solve_integral, solve_integral_columns, solve_rational, verify_short_exact,
    ExactnessReport,
};
pub use normal_form::{hermite_normal_form, smith_normal_form, Hermite, SmithDecomposition};

/// Integer scalar usable by the exact algorithms in this module.
pub trait IntScalar:
    Integer + Signed + Clone + fmt::Debug + fmt::Display + FromPrimitive + ToPrimitive + Send + Sync
{
}

impl<T> IntScalar for T where
    T: Integer
        + Signed
        + Clone
        + fmt::Debug
        + fmt::Display
        + FromPrimitive
        + ToPrimitive
        + Send
        + Sync
{
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum ZmatError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not surjective: invariant factors {factors:?} for {rows} rows")]
    NotSurjective { factors: Vec<String>, rows: usize },
    #[error("ragged matrix: row {row} has {len} entries, expected {expected}")]
    Ragged {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("I/O error: {0}")]
    Io(String),
}

/// Dense row-major integer matrix. Either dimension may be zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: IntScalar> IntMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Builds a matrix from row vectors. `cols` is needed to describe an
    /// `m x n` matrix with `m = 0`.
    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize) -> Result<Self, ZmatError> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(ZmatError::Ragged {
                    row: i,
                    len: row.len(),
                    expected: cols,
                });
            }
            data.extend(row);
        }
        Ok(IntMatrix {
            rows: nrows,
            cols,
            data,
        })
    }

    /// Convenience constructor from small literals; panics on ragged input.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&x| T::from_i64(x).expect("i64 fits"))
                    .collect()
            })
            .collect();
        Self::from_rows(rows, cols).expect("ragged literal matrix")
    }

    pub fn from_columns(columns: &[Vec<T>], rows: usize) -> Result<Self, ZmatError> {
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(ZmatError::Ragged {
                    row: j,
                    len: c.len(),
                    expected: rows,
                });
            }
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| {
            columns[j][i].clone()
        }))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, ZmatError> {
        if self.cols != rhs.rows {
            return Err(ZmatError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * rhs.cols + j;
                        out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols, "vector length must match column count");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols[j]).clone())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self::from_fn(rows.len(), self.cols, |i, j| self.get(rows[i], j).clone())
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &Self) -> Result<Self, ZmatError> {
        if self.rows != other.rows {
            return Err(ZmatError::DimensionMismatch(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        Ok(Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        }))
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[target] += factor * row[source]`
    pub fn add_row_multiple(&mut self, target: usize, source: usize, factor: &T) {
        if factor.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = self.data[source * self.cols + j].clone();
            if !s.is_zero() {
                let idx = target * self.cols + j;
                self.data[idx] = self.data[idx].clone() + factor.clone() * s;
            }
        }
    }

    /// `col[target] += factor * col[source]`
    pub fn add_col_multiple(&mut self, target: usize, source: usize, factor: &T) {
        if factor.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self.data[i * self.cols + source].clone();
            if !s.is_zero() {
                let idx = i * self.cols + target;
                self.data[idx] = self.data[idx].clone() + factor.clone() * s;
            }
        }
    }

    pub fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = -self.data[idx].clone();
        }
    }

    pub fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let idx = i * self.cols + j;
            self.data[idx] = -self.data[idx].clone();
        }
    }

    /// Returns a copy with the row order reversed.
    pub fn reverse_rows(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            self.get(self.rows - 1 - i, j).clone()
        })
    }

    /// Determinant by Bareiss fraction-free elimination.
    pub fn determinant(&self) -> Result<T, ZmatError> {
        if self.rows != self.cols {
            return Err(ZmatError::DimensionMismatch(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(T::one());
        }
        let mut a = self.clone();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n {
            if a.get(k, k).is_zero() {
                match (k + 1..n).find(|&i| !a.get(i, k).is_zero()) {
                    Some(i) => {
                        a.swap_rows(k, i);
                        sign = -sign;
                    }
                    None => return Ok(T::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a.get(k, k).clone() * a.get(i, j).clone()
                        - a.get(i, k).clone() * a.get(k, j).clone();
                    a.set(i, j, v / prev.clone());
                }
            }
            prev = a.get(k, k).clone();
        }
        Ok(sign * a.get(n - 1, n - 1).clone())
    }

    pub fn is_unimodular(&self) -> bool {
        matches!(self.determinant(), Ok(d) if d.abs().is_one())
    }

    /// Converts every entry into another scalar type. Fails if an entry
    /// does not fit.
    pub fn try_cast<U: IntScalar>(&self) -> Option<IntMatrix<U>> {
        let data = self
            .data
            .iter()
            .map(|x| x.to_i128().and_then(U::from_i128))
            .collect::<Option<Vec<_>>>();
        if let Some(data) = data {
            return Some(IntMatrix {
                rows: self.rows,
                cols: self.cols,
                data,
            });
        }
        None
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> IntMatrix<U> {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }
}

impl<T: IntScalar> Mul for &IntMatrix<T> {
    type Output = IntMatrix<T>;

    fn mul(self, rhs: &IntMatrix<T>) -> IntMatrix<T> {
        self.checked_mul(rhs).expect("matrix product dimensions")
    }
}

impl<T: fmt::Debug> fmt::Debug for IntMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self.data[i * self.cols + j])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl<T: fmt::Display> fmt::Display for IntMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(|x| x.to_string()).collect();
        let width = cells.iter().map(|c| c.len()).max().unwrap_or(1);
        for i in 0..self.rows {
            let line: Vec<String> = (0..self.cols)
                .map(|j| format!("{:>width$}", cells[i * self.cols + j]))
                .collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    type M = IntMatrix<BigInt>;

    #[test]
    fn product_and_transpose() {
        let a = M::from_i64_rows(&[&[1, 2], &[3, 4]]);
        let b = M::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(&a * &b, M::from_i64_rows(&[&[2, 1], &[4, 3]]));
        assert_eq!(a.transpose(), M::from_i64_rows(&[&[1, 3], &[2, 4]]));
    }

    #[test]
    fn empty_shapes_multiply() {
        let k = M::zeros(3, 0);
        let l = M::identity(3);
        let p = &l * &k;
        assert_eq!(p.shape(), (3, 0));
        assert!(p.is_zero());
    }

    #[test]
    fn bareiss_determinant() {
        let a = M::from_i64_rows(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]]);
        assert_eq!(a.determinant().unwrap(), BigInt::from(6));
        let b = M::from_i64_rows(&[&[0, 0, 1], &[0, 2, 5], &[3, 1, 1]]);
        assert_eq!(b.determinant().unwrap(), BigInt::from(-6));
        let s = M::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(s.determinant().unwrap(), BigInt::from(-1));
        let z = M::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(z.determinant().unwrap(), BigInt::from(0));
    }

    #[test]
    fn ragged_rows_rejected() {
        let err = M::from_rows(vec![vec![1.into(), 2.into()], vec![3.into()]], 2).unwrap_err();
        assert!(matches!(err, ZmatError::Ragged { row: 1, .. }));
    }

    #[test]
    fn cast_between_scalars() {
        let a = IntMatrix::<i64>::from_i64_rows(&[&[1, -2], &[3, 4]]);
        let b: M = a.try_cast().unwrap();
        assert_eq!(b.try_cast::<i64>().unwrap(), a);
    }
}
