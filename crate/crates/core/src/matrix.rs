//! Dense matrices over a [`Ring`], with the few p-adic linear-algebra
//! routines the operator modules need.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::padic::scalar::PadicRing;
use crate::ring::{Field, Ring};

#[derive(Clone, PartialEq)]
pub struct Matrix<R> {
    rows: usize,
    cols: usize,
    data: Vec<R>,
}

impl<R: Ring> Matrix<R> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> R) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Domain("ragged matrix rows".into()));
        }
        Ok(Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn zeros(rows: usize, cols: usize, sample: &R) -> Self {
        Self { rows, cols, data: vec![sample.zero_like(); rows * cols] }
    }

    pub fn identity(n: usize, sample: &R) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { sample.one_like() } else { sample.zero_like() })
    }

    pub fn diagonal(entries: &[R]) -> Self {
        let n = entries.len();
        let z = entries[0].zero_like();
        Self::from_fn(n, n, |i, j| if i == j { entries[i].clone() } else { z.clone() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[R] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<R> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[R] {
        &self.data
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &R) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn trace(&self) -> R {
        let mut acc = self.data[0].zero_like();
        for i in 0..self.rows.min(self.cols) {
            acc = acc + self.get(i, i).clone();
        }
        acc
    }

    pub fn apply(&self, v: &[R]) -> Vec<R> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let mut acc = v[0].zero_like();
                for (a, b) in row.iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc + a.clone() * b.clone();
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows, &self.data[0]);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Block-diagonal direct sum.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let z = self.data[0].zero_like();
        Self::from_fn(self.rows + other.rows, self.cols + other.cols, |i, j| {
            match (i < self.rows, j < self.cols) {
                (true, true) => self.get(i, j).clone(),
                (false, false) => other.get(i - self.rows, j - self.cols).clone(),
                _ => z.clone(),
            }
        })
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }
}

impl<R: Field> Matrix<R> {
    /// Rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..a.cols {
            let Some(piv) = (rank..a.rows).find(|&r| !a.get(r, col).is_zero()) else { continue };
            for j in 0..a.cols {
                let t = a.get(piv, j).clone();
                a.set(piv, j, a.get(rank, j).clone());
                a.set(rank, j, t);
            }
            let inv = a.get(rank, col).inv().expect("nonzero pivot");
            for r in rank + 1..a.rows {
                if a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone() * inv.clone();
                for j in col..a.cols {
                    let v = a.get(r, j).clone() - factor.clone() * a.get(rank, j).clone();
                    a.set(r, j, v);
                }
            }
            rank += 1;
        }
        rank
    }
}

impl<R: PadicRing> Matrix<R> {
    /// Entrywise comparison at the lower precision of each pair.
    pub fn eq_at(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a.eq_at(b))
    }

    /// Smallest entry valuation, `None` for the zero matrix.
    pub fn valuation(&self) -> Option<u32> {
        self.data.iter().filter_map(|x| x.valuation()).min()
    }

    pub fn truncate(&self, prec: u32) -> Self {
        self.map(|x| x.truncate(prec))
    }

    /// Solves `A x = b` for `A` invertible mod `p`, by elimination with unit pivots.
    pub fn solve_unimodular(&self, b: &[R]) -> Result<Vec<R>> {
        let n = self.rows;
        if !self.is_square() || b.len() != n {
            return Err(Error::Domain("solve needs a square system".into()));
        }
        let mut a = self.clone();
        let mut rhs = b.to_vec();
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| a.get(r, col).valuation() == Some(0))
                .ok_or_else(|| Error::Degenerate("matrix is singular mod p".into()))?;
            if piv != col {
                for j in 0..n {
                    let t = a.get(piv, j).clone();
                    a.set(piv, j, a.get(col, j).clone());
                    a.set(col, j, t);
                }
                rhs.swap(piv, col);
            }
            let inv = a.get(col, col).try_inverse()?;
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone() * inv.clone();
                for j in col..n {
                    let v = a.get(r, j).clone() - factor.clone() * a.get(col, j).clone();
                    a.set(r, j, v);
                }
                rhs[r] = rhs[r].clone() - factor * rhs[col].clone();
            }
        }
        Ok((0..n).map(|i| rhs[i].clone() * a.get(i, i).try_inverse().unwrap()).collect())
    }
}

impl<R: Ring> Mul for &Matrix<R> {
    type Output = Matrix<R>;
    fn mul(self, rhs: Self) -> Matrix<R> {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let zero = self.data.first().or(rhs.data.first()).expect("non-empty matrix").zero_like();
        let mut out = vec![zero; self.rows * rhs.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs.data[k * rhs.cols + j];
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out[idx] = out[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        Matrix { rows: self.rows, cols: rhs.cols, data: out }
    }
}

impl<R: Ring> Add for &Matrix<R> {
    type Output = Matrix<R>;
    fn add(self, rhs: Self) -> Matrix<R> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }
}

impl<R: Ring> Sub for &Matrix<R> {
    type Output = Matrix<R>;
    fn sub(self, rhs: Self) -> Matrix<R> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.clone() - b.clone()).collect(),
        }
    }
}

impl<R: Ring + fmt::Display> fmt::Display for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<R: Ring> fmt::Debug for Matrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matrix").field("rows", &self.rows).field("cols", &self.cols).field("data", &self.data).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::scalar::PadicContext;

    #[test]
    fn unimodular_solve_roundtrips() {
        let c = PadicContext::new(5, 8).unwrap();
        let a = Matrix::from_rows(vec![
            vec![c.scalar(2), c.scalar(5), c.scalar(1)],
            vec![c.scalar(0), c.scalar(1), c.scalar(10)],
            vec![c.scalar(3), c.scalar(7), c.scalar(3)],
        ])
        .unwrap();
        let b = vec![c.scalar(1), c.scalar(2), c.scalar(3)];
        let x = a.solve_unimodular(&b).unwrap();
        assert_eq!(a.apply(&x), b);
    }

    #[test]
    fn direct_sum_and_power() {
        let c = PadicContext::new(3, 6).unwrap();
        let a = Matrix::diagonal(&[c.scalar(2)]);
        let b = Matrix::diagonal(&[c.scalar(3)]);
        let s = a.direct_sum(&b).pow(3);
        assert_eq!(s, Matrix::diagonal(&[c.scalar(8), c.scalar(27)]));
    }
}
