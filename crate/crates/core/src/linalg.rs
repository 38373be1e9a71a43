//! Dense exact linear algebra: rank, kernels and annihilators of column spaces.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::field::{integer_row, Field, RationalField};
use crate::par;

/// Below this many entries elimination runs on one thread.
const PAR_THRESHOLD: usize = 1 << 14;

/// Row-major dense matrix over an exact field.
#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

/// Reduced row echelon form: `matrix` has `pivots.len()` nonzero rows, each with
/// a leading one in the listed pivot column.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    pub matrix: Matrix<F>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    /// Builds a matrix from equally long rows. `cols` is needed when `rows` is empty.
    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged rows");
            data.extend(r);
        }
        Self {
            field,
            rows: n,
            cols,
            data,
        }
    }

    /// Builds a matrix whose columns are the given vectors of length `rows`.
    pub fn from_columns(field: F, columns: &[Vec<F::Elem>], rows: usize) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn from_i64(field: F, rows: usize, cols: usize, values: &[i64]) -> Self {
        assert_eq!(values.len(), rows * cols);
        Self {
            field,
            rows,
            cols,
            data: values.iter().map(|&v| field.from_i64(v)).collect(),
        }
    }

    pub fn field(&self) -> F {
        self.field
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

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| self.field.is_zero(v))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Self {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend(self.row(i).iter().cloned());
            data.extend(other.row(i).iter().cloned());
        }
        Self {
            field: self.field,
            rows: self.rows,
            cols,
            data,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let f = self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !f.is_zero(b) {
                        out[(i, j)] = f.add(&out[(i, j)], &f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.cols);
        let f = self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect()
    }

    /// `vᵀ · A`.
    pub fn vec_mul(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(v.len(), self.rows);
        let f = self.field;
        let mut out = vec![f.zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if f.is_zero(vi) {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o = f.add(o, &f.mul(vi, a));
            }
        }
        out
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = self.field;
        Self {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| f.mul(v, c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.shape(), other.shape());
        let f = self.field;
        Self {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f.add(a, b)).collect(),
        }
    }

    /// Exact rank.
    pub fn rank(&self) -> usize {
        self.field.rank(self)
    }

    /// Reduced row echelon form by Gauss–Jordan elimination with first-nonzero pivoting.
    pub fn rref(&self) -> Echelon<F> {
        let f = self.field;
        let (rows, cols) = self.shape();
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !f.is_zero(&m[(i, c)])) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = f.inv(&m[(r, c)]).expect("pivot is nonzero");
            for j in c..cols {
                m[(r, j)] = f.mul(&m[(r, j)], &inv);
            }
            let pivot_row: Vec<F::Elem> = m.row(r)[c..].to_vec();
            let eliminate = |i: usize, row: &mut [F::Elem]| {
                if i == r || f.is_zero(&row[c]) {
                    return;
                }
                let factor = row[c].clone();
                for (x, pv) in row[c..].iter_mut().zip(&pivot_row) {
                    if !f.is_zero(pv) {
                        *x = f.sub(x, &f.mul(&factor, pv));
                    }
                }
            };
            if m.data.len() >= PAR_THRESHOLD {
                par::for_each_row(&mut m.data, cols, eliminate);
            } else {
                m.data.chunks_mut(cols).enumerate().for_each(|(i, row)| eliminate(i, row));
            }
            pivots.push(c);
            r += 1;
        }
        m.data.truncate(r * cols);
        m.rows = r;
        Echelon { matrix: m, pivots }
    }

    /// Basis of `{v : A v = 0}`: one vector per non-pivot column `f`, with a one
    /// in position `f` and zeros in every other non-pivot position.
    pub fn kernel_basis(&self) -> Vec<Vec<F::Elem>> {
        let f = self.field;
        let ech = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &ech.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![f.zero(); self.cols];
                v[free] = f.one();
                for (i, &p) in ech.pivots.iter().enumerate() {
                    v[p] = f.neg(&ech.matrix[(i, free)]);
                }
                v
            })
            .collect()
    }

    /// Basis of the annihilator of the column space, `{l : lᵀ A = 0}`.
    pub fn complement_of_column_space(&self) -> Vec<Vec<F::Elem>> {
        self.transpose().kernel_basis()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let c = self.cols;
        let (lo, hi) = (a.min(b), a.max(b));
        let (head, tail) = self.data.split_at_mut(hi * c);
        head[lo * c..(lo + 1) * c].swap_with_slice(&mut tail[..c]);
    }
}

impl<F: Field> Index<(usize, usize)> for Matrix<F> {
    type Output = F::Elem;

    fn index(&self, (i, j): (usize, usize)) -> &F::Elem {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<F: Field> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F::Elem {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field.describe())?;
        for i in 0..self.rows.min(12) {
            let cells: Vec<String> = self.row(i).iter().take(12).map(|v| self.field.format(v)).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Rank of a rational matrix by fraction-free (Bareiss) elimination on the
/// row-wise integer scaling. Every intermediate entry is a minor of the input,
/// so the divisions below are exact.
pub fn bareiss_rank(m: &Matrix<RationalField>) -> usize {
    let (rows, cols) = m.shape();
    let mut a: Vec<Vec<BigInt>> = (0..rows).map(|i| integer_row(m.row(i))).collect();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let (head, tail) = a.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let pivot = &pivot_row[c];
        for row in tail.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..cols {
                let v = pivot * &row[j] - &lead * &pivot_row[j];
                debug_assert!((&v % &prev).is_zero());
                row[j] = v / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot.clone();
        rank += 1;
    }
    rank
}

/// Converts a vector of rationals to a primitive integer vector with the same span.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    integer_row(v)
}
