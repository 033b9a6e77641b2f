//! Dense linear algebra over an arbitrary field scalar.
//!
//! Everything here is plain Gaussian elimination. The intended scalar is
//! [`crate::Rat`] (exact rationals), but the routines are generic so the
//! same code runs over `f64` where exactness is not needed.

use std::fmt::Debug;
use std::ops::Neg;

/// Field scalar usable as a matrix entry.
pub trait Scalar: num_traits::Num + Neg<Output = Self> + Clone + PartialEq + Debug {}
impl<T> Scalar for T where T: num_traits::Num + Neg<Output = T> + Clone + PartialEq + Debug {}

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![F::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged rows");
        Matrix {
            rows: nrows,
            cols: ncols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_columns(rows: usize, cols: Vec<Vec<F>>) -> Self {
        let ncols = cols.len();
        let mut m = Self::zeros(rows, ncols);
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
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

    pub fn at(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: F) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        Self::from_columns(self.rows, idx.iter().map(|&j| self.column(j)).collect())
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "row count mismatch in hstack");
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.at(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.at(i, j).clone());
            }
        }
        m
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matmul");
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = m.at(i, j).clone() + a.clone() * other.at(k, j).clone();
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in mul_vec");
        (0..self.rows)
            .map(|i| {
                let mut acc = F::zero();
                for (j, x) in v.iter().enumerate() {
                    if !self.at(i, j).is_zero() && !x.is_zero() {
                        acc = acc + self.at(i, j).clone() * x.clone();
                    }
                }
                acc
            })
            .collect()
    }

    /// Reduced row echelon form together with the pivot column indices.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| !m.at(i, c).is_zero()) else {
                continue;
            };
            if pr != r {
                for j in 0..m.cols {
                    m.data.swap(pr * m.cols + j, r * m.cols + j);
                }
            }
            let inv = F::one() / m.at(r, c).clone();
            for j in c..m.cols {
                let v = m.at(r, j).clone() * inv.clone();
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.at(i, c).is_zero() {
                    let f = m.at(i, c).clone();
                    for j in c..m.cols {
                        let v = m.at(i, j).clone() - f.clone() * m.at(r, j).clone();
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Columns forming a basis of the null space.
    pub fn kernel_basis(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut cols = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![F::zero(); self.cols];
            v[fc] = F::one();
            for (pr, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.at(pr, fc).clone();
            }
            cols.push(v);
        }
        Self::from_columns(self.cols, cols)
    }

    /// Columns of `self` forming a basis of the column space.
    pub fn column_space_basis(&self) -> Self {
        let (_, pivots) = self.rref();
        self.select_columns(&pivots)
    }

    /// Any solution `x` of `self * x = rhs`, or `None` if inconsistent.
    pub fn solve(&self, rhs: &[F]) -> Option<Vec<F>> {
        assert_eq!(self.rows, rhs.len(), "dimension mismatch in solve");
        let b = Self::from_columns(self.rows, vec![rhs.to_vec()]);
        let aug = self.hstack(&b);
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![F::zero(); self.cols];
        for (pr, &pc) in pivots.iter().enumerate() {
            x[pc] = r.at(pr, self.cols).clone();
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rat;
    use num::BigInt;

    fn q(n: i64) -> Rat {
        Rat::from(BigInt::from(n))
    }

    #[test]
    fn rank_and_kernel() {
        let m = Matrix::from_rows(vec![
            vec![q(1), q(2), q(3)],
            vec![q(2), q(4), q(6)],
            vec![q(0), q(1), q(1)],
        ]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        assert!(m.matmul(&k).is_zero());
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = Matrix::from_rows(vec![vec![q(1), q(0)], vec![q(0), q(0)]]);
        let x = m.solve(&[q(5), q(0)]).unwrap();
        assert_eq!(x, vec![q(5), q(0)]);
        assert!(m.solve(&[q(0), q(1)]).is_none());
    }

    #[test]
    fn column_space_basis_spans() {
        let m = Matrix::from_rows(vec![vec![q(1), q(2), q(0)], vec![q(2), q(4), q(1)]]);
        let b = m.column_space_basis();
        assert_eq!(b.cols(), 2);
        assert_eq!(b.rank(), 2);
    }
}
