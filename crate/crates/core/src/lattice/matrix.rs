use std::fmt;
use std::ops::{Add, Mul};

use num::{One, Zero};

use crate::scalar::{to_ratio, Fraction, RingInt};

use super::Vector;

/// Row-major dense matrix with consistent dimensions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix<T> {
    nrows: usize,
    ncols: usize,
    entries: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols, "ragged rows");
            entries.extend(row);
        }
        Matrix {
            nrows,
            ncols,
            entries,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.entries[r * self.ncols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.entries[r * self.ncols + c] = v;
    }

    pub fn row(&self, r: usize) -> Vec<T> {
        self.entries[r * self.ncols..(r + 1) * self.ncols].to_vec()
    }

    pub fn rows(&self) -> impl Iterator<Item = Vec<T>> + '_ {
        (0..self.nrows).map(move |r| self.row(r))
    }

    pub fn col(&self, c: usize) -> Vec<T> {
        (0..self.nrows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for c in 0..self.ncols {
            for r in 0..self.nrows {
                entries.push(self.get(r, c).clone());
            }
        }
        Matrix {
            nrows: self.ncols,
            ncols: self.nrows,
            entries,
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.ncols {
            self.entries.swap(a * self.ncols + c, b * self.ncols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.nrows {
            self.entries.swap(r * self.ncols + a, r * self.ncols + b);
        }
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + One + Add<Output = T> + Mul<Output = T> + PartialEq,
{
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        Matrix {
            nrows,
            ncols,
            entries: vec![T::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn is_identity(&self) -> bool {
        if self.nrows != self.ncols {
            return false;
        }
        for r in 0..self.nrows {
            for c in 0..self.ncols {
                let e = self.get(r, c);
                if r == c {
                    if !e.is_one() {
                        return false;
                    }
                } else if !e.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows);
        let mut out = Self::zero(self.nrows, other.ncols);
        for r in 0..self.nrows {
            for k in 0..self.ncols {
                let a = self.get(r, k).clone();
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.ncols {
                    let v = out.get(r, c).clone() + a.clone() * other.get(k, c).clone();
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.ncols, v.len());
        (0..self.nrows)
            .map(|r| {
                let mut acc = T::zero();
                for c in 0..self.ncols {
                    acc = acc + self.get(r, c).clone() * v[c].clone();
                }
                acc
            })
            .collect()
    }

    pub fn apply(&self, v: &Vector<T>) -> Vector<T> {
        Vector::new(self.mul_vec(v.coords()))
    }
}

impl<I: RingInt> Matrix<I> {
    /// Fraction-free determinant (Bareiss). Exact division at every step.
    pub fn det(&self) -> I {
        assert_eq!(self.nrows, self.ncols, "determinant of non-square matrix");
        let n = self.nrows;
        if n == 0 {
            return I::one();
        }
        let mut m = self.clone();
        let mut sign = I::one();
        let mut prev = I::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !m.get(r, k).is_zero()) else {
                    return I::zero();
                };
                m.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j).clone() * m.get(k, k).clone()
                        - m.get(i, k).clone() * m.get(k, j).clone())
                        / prev.clone();
                    m.set(i, j, v);
                }
                m.set(i, k, I::zero());
            }
            prev = m.get(k, k).clone();
        }
        sign * m.get(n - 1, n - 1).clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.nrows == self.ncols && self.det().abs().is_one()
    }

    pub fn to_rational(&self) -> Matrix<Fraction<I>> {
        Matrix {
            nrows: self.nrows,
            ncols: self.ncols,
            entries: self.entries.iter().map(to_ratio).collect(),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for r in 0..self.nrows {
            write!(f, "  [")?;
            for c in 0..self.ncols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self.entries[r * self.ncols + c])?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}
