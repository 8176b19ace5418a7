//! Dense matrices over `Q(ζ_p)` with exact Gaussian elimination.

use std::ops::{Index, IndexMut};

use rayon::prelude::*;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::cyclotomic::{CycNum, Rational};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CycMatrix {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<CycNum>,
}

impl CycMatrix {
    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        CycMatrix {
            p,
            rows,
            cols,
            data: vec![CycNum::zero(p); rows * cols],
        }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m[(i, i)] = CycNum::one(p);
        }
        m
    }

    pub fn from_rows(p: u64, rows: Vec<Vec<CycNum>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Internal("ragged matrix rows".into()));
        }
        if rows.iter().flatten().any(|x| x.order() != p) {
            return Err(Error::OrderMismatch(p, 0));
        }
        Ok(CycMatrix {
            p,
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(p: u64, rows: usize, cols: usize, f: impl Fn(usize, usize) -> CycNum) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        CycMatrix { p, rows, cols, data }
    }

    pub fn order(&self) -> u64 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[CycNum] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<CycNum> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<CycNum>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = &self[(i, j)];
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CycNum::is_zero)
    }

    pub fn checked_mul(&self, other: &CycMatrix) -> Result<CycMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let cols = other.cols;
        let data: Vec<CycNum> = (0..self.rows * cols)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / cols, k % cols);
                let mut acc = CycNum::zero(self.p);
                for t in 0..self.cols {
                    let a = &self[(i, t)];
                    if a.is_zero() {
                        continue;
                    }
                    let b = &other[(t, j)];
                    if b.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                acc
            })
            .collect();
        Ok(CycMatrix {
            p: self.p,
            rows: self.rows,
            cols,
            data,
        })
    }

    /// Matrix product; panics on shape mismatch.
    pub fn mul(&self, other: &CycMatrix) -> CycMatrix {
        self.checked_mul(other).expect("matrix shapes")
    }

    pub fn add(&self, other: &CycMatrix) -> CycMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CycMatrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &CycMatrix) -> CycMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CycMatrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &CycNum) -> CycMatrix {
        CycMatrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> CycMatrix {
        CycMatrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.scale(r)).collect(),
        }
    }

    pub fn transpose(&self) -> CycMatrix {
        Self::from_fn(self.p, self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    /// Kronecker product, row index `(i, k) ↦ i·rows(other) + k`.
    pub fn kron(&self, other: &CycMatrix) -> CycMatrix {
        let (r2, c2) = (other.rows, other.cols);
        Self::from_fn(self.p, self.rows * r2, self.cols * c2, |i, j| {
            &self[(i / r2, j / c2)] * &other[(i % r2, j % c2)]
        })
    }

    pub fn apply(&self, v: &[CycNum]) -> Vec<CycNum> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(CycNum::zero(self.p), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &CycMatrix) -> CycMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        CycMatrix {
            p: self.p,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> CycMatrix {
        Self::from_fn(self.p, self.rows, cols.len(), |i, j| self[(i, cols[j])].clone())
    }

    /// Row-reduces a copy; returns the reduced rows and pivot columns.
    fn echelon(&self) -> (Vec<Vec<CycNum>>, Vec<usize>) {
        let mut a = self.to_rows();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == a.len() {
                break;
            }
            let Some(sel) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, sel);
            let inv = a[r][c].inv().expect("nonzero pivot");
            for x in a[r].iter_mut() {
                if !x.is_zero() {
                    *x = &*x * &inv;
                }
            }
            let pivot_row = a[r].clone();
            let pivot_row = &pivot_row;
            a.par_iter_mut().enumerate().for_each(|(i, row)| {
                if i != r && !row[c].is_zero() {
                    let f = row[c].clone();
                    for (x, y) in row.iter_mut().zip(pivot_row) {
                        if !y.is_zero() {
                            *x = &*x - &(&f * y);
                        }
                    }
                }
            });
            pivots.push(c);
            r += 1;
        }
        a.truncate(r);
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.echelon().1.len()
    }

    /// Basis of the right null space `{x : self·x = 0}`, as columns of the
    /// returned `cols × nullity` matrix.
    pub fn nullspace(&self) -> CycMatrix {
        let (a, pivots) = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(self.p, self.cols, free.len());
        for (k, &f) in free.iter().enumerate() {
            out[(f, k)] = CycNum::one(self.p);
            for (row, &pc) in a.iter().zip(&pivots) {
                out[(pc, k)] = -&row[f];
            }
        }
        out
    }

    pub fn inverse(&self) -> Result<CycMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let aug = Self::from_fn(self.p, n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                CycNum::one(self.p)
            } else {
                CycNum::zero(self.p)
            }
        });
        let (a, pivots) = aug.echelon();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::from_fn(self.p, n, n, |i, j| a[i][n + j].clone()))
    }

    pub fn to_float_rows(&self) -> Vec<Vec<crate::cyclotomic::FloatRender>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(Into::into).collect())
            .collect()
    }
}

impl Index<(usize, usize)> for CycMatrix {
    type Output = CycNum;
    fn index(&self, (i, j): (usize, usize)) -> &CycNum {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CycMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut CycNum {
        &mut self.data[i * self.cols + j]
    }
}

impl Serialize for CycMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.rows))?;
        for i in 0..self.rows {
            seq.serialize_element(self.row(i))?;
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_inverse() {
        let p = 5;
        let m = CycMatrix::from_fn(p, 3, 3, |i, j| CycNum::root(p, (i * j + i) as u64));
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(inv.mul(&m).is_identity());
    }

    #[test]
    fn rank_and_nullspace() {
        let p = 3;
        let z = CycNum::root(p, 1);
        // second row is ζ times the first
        let m = CycMatrix::from_rows(
            p,
            vec![
                vec![CycNum::one(p), z.clone()],
                vec![z.clone(), &z * &z],
            ],
        )
        .unwrap();
        assert_eq!(m.rank(), 1);
        let ns = m.nullspace();
        assert_eq!(ns.cols(), 1);
        assert!(m.mul(&ns).is_zero());
        assert!(m.inverse().is_err());
    }

    #[test]
    fn kron_shape() {
        let a = CycMatrix::identity(3, 2);
        let b = CycMatrix::from_fn(3, 2, 2, |i, j| CycNum::from_int(3, (2 * i + j) as i64));
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (4, 4));
        assert_eq!(k[(3, 2)], CycNum::from_int(3, 2));
        assert!(k[(0, 2)].is_zero());
    }
}
