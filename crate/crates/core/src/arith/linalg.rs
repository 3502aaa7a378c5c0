//! Dense exact linear algebra.
//!
//! Generic Gaussian elimination works over any [`Scalar`] field. Rational
//! matrices additionally get a fraction-free (Bareiss) path that eliminates
//! over the integers after clearing row denominators.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{common_denominator, Rational, Scalar};
use crate::error::{Error, Result};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T: Scalar> {
    nrows: usize,
    ncols: usize,
    zero: T,
    data: Vec<T>,
}

/// Outcome of [`Matrix::solve`].
#[derive(Clone, Debug, PartialEq)]
pub enum Solution<T> {
    Solved(Vec<T>),
    NoSolution,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(nrows: usize, ncols: usize, zero: T) -> Self {
        Self { nrows, ncols, data: vec![zero.clone(); nrows * ncols], zero }
    }

    pub fn identity(n: usize, proto: &T) -> Self {
        let mut m = Self::zeros(n, n, proto.zero_like());
        for i in 0..n {
            m[(i, i)] = proto.one_like();
        }
        m
    }

    /// Panics if `rows` is empty or ragged.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let zero = rows.iter().flatten().next().expect("matrix needs at least one entry").zero_like();
        Self::from_rows_with(zero, rows)
    }

    pub fn from_rows_with(zero: T, rows: Vec<Vec<T>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Self { nrows, ncols, zero, data: rows.into_iter().flatten().collect() }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn zero_elem(&self) -> &T {
        &self.zero
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..self.nrows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ncols, self.nrows, self.zero.clone());
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.ncols != rhs.nrows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.nrows, self.ncols, rhs.nrows, rhs.ncols
            )));
        }
        let mut out = Self::zeros(self.nrows, rhs.ncols, self.zero.clone());
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.ncols {
                    out[(i, j)] = out[(i, j)].plus(&a.times(&rhs[(k, j)]));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.ncols {
            return Err(Error::DimensionMismatch(format!("{} columns vs vector of {}", self.ncols, v.len())));
        }
        Ok((0..self.nrows)
            .map(|i| self.row(i).iter().zip(v).fold(self.zero.clone(), |acc, (a, b)| acc.plus(&a.times(b))))
            .collect())
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> Result<(Self, Vec<usize>)> {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.ncols {
            if r == m.nrows {
                break;
            }
            let Some(p) = (r..m.nrows).find(|&i| !m[(i, c)].is_zero()) else { continue };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inverse()?;
            for j in c..m.ncols {
                m[(r, j)] = m[(r, j)].times(&inv);
            }
            for i in 0..m.nrows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].clone();
                for j in c..m.ncols {
                    let sub = f.times(&m[(r, j)]);
                    m[(i, j)] = m[(i, j)].minus(&sub);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Ok((m, pivots))
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.rref()?.1.len())
    }

    /// Basis of `{v : Mv = 0}` in reduced echelon form: each vector has a one
    /// in its own free column and zeros in the other free columns.
    pub fn kernel(&self) -> Result<Vec<Vec<T>>> {
        let (r, pivots) = self.rref()?;
        Ok(kernel_from_rref(&r, &pivots))
    }

    /// Some solution of `Mx = b`, free variables set to zero.
    pub fn solve(&self, b: &[T]) -> Result<Solution<T>> {
        if b.len() != self.nrows {
            return Err(Error::DimensionMismatch("right-hand side length".into()));
        }
        let mut aug = Self::zeros(self.nrows, self.ncols + 1, self.zero.clone());
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.ncols)] = b[i].clone();
        }
        let (r, pivots) = aug.rref()?;
        if pivots.last() == Some(&self.ncols) {
            return Ok(Solution::NoSolution);
        }
        let mut x = vec![self.zero.clone(); self.ncols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = r[(i, self.ncols)].clone();
        }
        Ok(Solution::Solved(x))
    }

    pub fn determinant(&self) -> Result<T> {
        if self.nrows != self.ncols {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let mut m = self.clone();
        let one = self.zero.one_like();
        let mut det = one;
        for c in 0..m.ncols {
            let Some(p) = (c..m.nrows).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(self.zero.clone());
            };
            if p != c {
                m.swap_rows(c, p);
                det = det.negated();
            }
            det = det.times(&m[(c, c)]);
            let inv = m[(c, c)].inverse()?;
            for i in c + 1..m.nrows {
                if m[(i, c)].is_zero() {
                    continue;
                }
                let f = m[(i, c)].times(&inv);
                for j in c..m.ncols {
                    let sub = f.times(&m[(c, j)]);
                    m[(i, j)] = m[(i, j)].minus(&sub);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.nrows;
        if n != self.ncols {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let mut aug = Self::zeros(n, 2 * n, self.zero.clone());
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = self.zero.one_like();
        }
        let (r, pivots) = aug.rref()?;
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::SingularMatrix);
        }
        let mut inv = Self::zeros(n, n, self.zero.clone());
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = r[(i, n + j)].clone();
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.ncols {
            self.data.swap(a * self.ncols + j, b * self.ncols + j);
        }
    }
}

impl<T: Scalar> std::ops::Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.ncols + j]
    }
}

impl<T: Scalar> std::ops::IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.ncols + j]
    }
}

fn kernel_from_rref<T: Scalar>(r: &Matrix<T>, pivots: &[usize]) -> Vec<Vec<T>> {
    let n = r.ncols;
    let mut is_pivot = vec![false; n];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|&c| !is_pivot[c]) {
        let mut v = vec![r.zero.clone(); n];
        v[free] = r.zero.one_like();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = r[(i, free)].negated();
        }
        basis.push(v);
    }
    basis
}

/// Fraction-free row echelon form of an integer matrix (Bareiss). Returns
/// the nonzero echelon rows and their pivot columns.
fn bareiss_echelon(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let nrows = rows.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pv = &pivot_row[c];
        for row in tail.iter_mut() {
            let f = std::mem::take(&mut row[c]);
            if f.is_zero() {
                // still needs the Bareiss scaling to keep entries as minors
                for j in c + 1..ncols {
                    if !row[j].is_zero() {
                        row[j] = (&row[j] * pv) / &prev;
                    }
                }
                continue;
            }
            for j in c + 1..ncols {
                let v = &row[j] * pv - &f * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = pv.clone();
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

fn integer_rows(m: &Matrix<Rational>) -> Vec<Vec<BigInt>> {
    (0..m.nrows)
        .map(|i| {
            let row = m.row(i);
            let den = common_denominator(row);
            row.iter().map(|x| (x * Rational::from_integer(den.clone())).to_integer()).collect()
        })
        .collect()
}

/// Reduced row echelon form of a rational matrix through fraction-free
/// elimination; only the pivot rows are returned.
pub fn rref_q(m: &Matrix<Rational>) -> (Matrix<Rational>, Vec<usize>) {
    let n = m.ncols;
    let zero = Rational::zero();
    if m.nrows == 0 || n == 0 {
        return (Matrix::zeros(0, n, zero), Vec::new());
    }
    let (ech, pivots) = bareiss_echelon(integer_rows(m), n);
    let r = pivots.len();
    let mut out = Matrix::zeros(r, n, zero);
    for i in 0..r {
        for j in 0..n {
            out[(i, j)] = Rational::from_integer(ech[i][j].clone());
        }
    }
    // back substitution on the small echelon block
    for i in (0..r).rev() {
        let inv = out[(i, pivots[i])].recip();
        for j in 0..n {
            if !Zero::is_zero(&out[(i, j)]) {
                out[(i, j)] = &out[(i, j)] * &inv;
            }
        }
        for k in 0..i {
            let f = out[(k, pivots[i])].clone();
            if Zero::is_zero(&f) {
                continue;
            }
            for j in pivots[i]..n {
                let sub = &f * &out[(i, j)];
                if !Zero::is_zero(&sub) {
                    out[(k, j)] = &out[(k, j)] - sub;
                }
            }
        }
    }
    (out, pivots)
}

/// Kernel of a rational matrix, in reduced echelon form.
pub fn kernel_q(m: &Matrix<Rational>) -> Vec<Vec<Rational>> {
    let (r, pivots) = rref_q(m);
    kernel_from_rref(&r, &pivots)
}

pub fn rank_q(m: &Matrix<Rational>) -> usize {
    if m.nrows == 0 || m.ncols == 0 {
        return 0;
    }
    bareiss_echelon(integer_rows(m), m.ncols).1.len()
}
