//! Arithmetic and dense linear algebra over a prime field `F_p`.
//!
//! Scalars are `u64` values reduced to `0..p`; vectors and matrices are plain
//! `Vec`s. The primes in scope are tiny, so products never overflow.

use crate::error::{Error, Result};

pub type FVec = Vec<u64>;
pub type FMat = Vec<FVec>;

/// Returns true when `p` is an odd prime.
pub fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn check_prime(p: u64) -> Result<()> {
    // bounded so that exponent and coefficient arithmetic stays in u64
    if is_odd_prime(p) && p < (1 << 20) {
        Ok(())
    } else {
        Err(Error::InvalidPrime(p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        check_prime(p)?;
        Ok(PrimeField { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn reduce(&self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b % self.p) % self.p
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a % self.p) % self.p
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        (a % self.p) * (b % self.p) % self.p
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let a = a % self.p;
        if a == 0 {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }

    /// The inverse of 2, i.e. the field element written as ½.
    pub fn half(&self) -> u64 {
        self.p.div_ceil(2)
    }

    /// `(-1)^k` as a field element.
    pub fn sign(&self, k: u64) -> u64 {
        if k.is_multiple_of(2) {
            1
        } else {
            self.p - 1
        }
    }

    pub fn dot(&self, a: &[u64], b: &[u64]) -> u64 {
        a.iter()
            .zip(b)
            .fold(0, |acc, (x, y)| (acc + x * y) % self.p)
    }

    pub fn add_vec(&self, a: &[u64], b: &[u64]) -> FVec {
        a.iter().zip(b).map(|(x, y)| (x + y) % self.p).collect()
    }

    pub fn sub_vec(&self, a: &[u64], b: &[u64]) -> FVec {
        a.iter().zip(b).map(|(x, y)| self.sub(*x, *y)).collect()
    }

    pub fn neg_vec(&self, a: &[u64]) -> FVec {
        a.iter().map(|x| self.neg(*x)).collect()
    }

    pub fn scale_vec(&self, c: u64, a: &[u64]) -> FVec {
        a.iter().map(|x| self.mul(c, *x)).collect()
    }

    /// `a + c·b`
    pub fn axpy(&self, a: &mut [u64], c: u64, b: &[u64]) {
        if c.is_multiple_of(self.p) {
            return;
        }
        for (x, y) in a.iter_mut().zip(b) {
            *x = (*x + c * y) % self.p;
        }
    }

    pub fn mat_vec(&self, m: &FMat, v: &[u64]) -> FVec {
        m.iter().map(|row| self.dot(row, v)).collect()
    }

    pub fn mat_mul(&self, a: &FMat, b: &FMat) -> FMat {
        let cols = b.first().map_or(0, |r| r.len());
        a.iter()
            .map(|row| {
                (0..cols)
                    .map(|j| {
                        row.iter()
                            .zip(b)
                            .fold(0, |acc, (x, brow)| (acc + x * brow[j]) % self.p)
                    })
                    .collect()
            })
            .collect()
    }

    /// Reduced row-echelon form in place; returns the pivot columns.
    pub fn rref(&self, m: &mut FMat) -> Vec<usize> {
        let rows = m.len();
        let cols = m.first().map_or(0, |r| r.len());
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(sel) = (r..rows).find(|&i| m[i][c] != 0) else {
                continue;
            };
            m.swap(r, sel);
            let inv = self.inv(m[r][c]).expect("nonzero pivot");
            for x in m[r].iter_mut() {
                *x = self.mul(*x, inv);
            }
            let pivot_row = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i != r && row[c] != 0 {
                    let f = self.neg(row[c]);
                    self.axpy(row, f, &pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        m.truncate(r);
        pivots
    }

    pub fn rank(&self, m: &FMat) -> usize {
        let mut m = m.clone();
        self.rref(&mut m).len()
    }

    pub fn det(&self, m: &FMat) -> u64 {
        let n = m.len();
        let mut a = m.clone();
        let mut det = 1;
        for c in 0..n {
            let Some(sel) = (c..n).find(|&i| a[i][c] != 0) else {
                return 0;
            };
            if sel != c {
                a.swap(sel, c);
                det = self.neg(det);
            }
            det = self.mul(det, a[c][c]);
            let inv = self.inv(a[c][c]).expect("nonzero pivot");
            for i in c + 1..n {
                if a[i][c] != 0 {
                    let f = self.neg(self.mul(a[i][c], inv));
                    let pivot = a[c].clone();
                    self.axpy(&mut a[i], f, &pivot);
                }
            }
        }
        det
    }

    pub fn inverse(&self, m: &FMat) -> Option<FMat> {
        let n = m.len();
        let mut aug: FMat = m
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..n).map(|j| u64::from(i == j)));
                r
            })
            .collect();
        let pivots = self.rref(&mut aug);
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| i != c) {
            return None;
        }
        Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
    }

    /// Basis of `{x : m·x = 0}` for an `r × cols` matrix.
    pub fn nullspace(&self, m: &FMat, cols: usize) -> FMat {
        let mut a = m.clone();
        let pivots = self.rref(&mut a);
        let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![0; cols];
                x[f] = 1;
                for (row, &pc) in a.iter().zip(&pivots) {
                    x[pc] = self.neg(row[f]);
                }
                x
            })
            .collect()
    }

    /// Coordinates of `v` in the (independent) family `basis`, if `v` lies in
    /// its span.
    pub fn coords(&self, basis: &[FVec], v: &[u64]) -> Option<FVec> {
        let k = basis.len();
        let dim = v.len();
        // columns are basis vectors, last column is v
        let mut aug: FMat = (0..dim)
            .map(|i| {
                let mut r: FVec = basis.iter().map(|b| b[i]).collect();
                r.push(v[i]);
                r
            })
            .collect();
        let pivots = self.rref(&mut aug);
        if pivots.contains(&k) || pivots.len() != k {
            return None;
        }
        Some(aug.iter().take(k).map(|r| r[k]).collect())
    }

    pub fn transpose(&self, m: &FMat) -> FMat {
        let cols = m.first().map_or(0, |r| r.len());
        (0..cols).map(|j| m.iter().map(|r| r[j]).collect()).collect()
    }

    pub fn identity(&self, n: usize) -> FMat {
        (0..n)
            .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
            .collect()
    }

    pub fn is_square(&self, a: u64) -> bool {
        legendre_symbol(a, self.p) >= 0
    }
}

/// Legendre symbol by Euler's criterion: +1, −1, or 0 when `p | a`.
pub fn legendre_symbol(a: u64, p: u64) -> i8 {
    let f = PrimeField { p };
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if f.pow(a, (p - 1) / 2) == 1 {
        1
    } else {
        -1
    }
}

/// Binomial coefficient C(n, 2) with C(0,2) = C(1,2) = 0.
pub fn choose2(n: usize) -> u64 {
    (n as u64) * (n as u64).saturating_sub(1) / 2
}

/// Index of a vector under base-`p` lexicographic order (first coordinate most
/// significant).
pub fn lex_index(v: &[u64], p: u64) -> usize {
    v.iter().fold(0usize, |acc, &x| acc * p as usize + x as usize)
}

pub fn lex_vector(mut idx: usize, len: usize, p: u64) -> FVec {
    let mut v = vec![0; len];
    for slot in v.iter_mut().rev() {
        *slot = (idx % p as usize) as u64;
        idx /= p as usize;
    }
    v
}
