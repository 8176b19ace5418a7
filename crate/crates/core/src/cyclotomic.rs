//! Exact arithmetic in the cyclotomic field `Q(ζ_p)` for an odd prime `p`.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^{p-2}`; the relation
//! `1 + ζ + … + ζ^{p-1} = 0` rewrites `ζ^{p-1}` so every element has exactly
//! one representation and equality is coefficient-wise.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{check_prime, legendre_symbol, PrimeField};

/// Arbitrary-precision rational in lowest terms with positive denominator.
pub type Rational = BigRational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    p: u64,
    coeffs: Vec<Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithKind {
    Add,
    Sub,
    Mul,
    Div,
}

impl CycNum {
    pub fn zero(p: u64) -> Self {
        CycNum {
            p,
            coeffs: vec![Rational::zero(); (p - 1) as usize],
        }
    }

    pub fn one(p: u64) -> Self {
        Self::from_int(p, 1)
    }

    pub fn from_int(p: u64, c: i64) -> Self {
        Self::from_rational(p, Rational::from_integer(BigInt::from(c)))
    }

    pub fn from_rational(p: u64, c: Rational) -> Self {
        let mut out = Self::zero(p);
        out.coeffs[0] = c;
        out
    }

    /// `ζ_p^e`, exponent taken mod `p`.
    pub fn root(p: u64, e: u64) -> Self {
        let mut counts = vec![0i64; p as usize];
        counts[(e % p) as usize] = 1;
        Self::from_exponent_counts(p, &counts)
    }

    /// Builds `Σ counts[e] ζ^e` from a length-`p` table of integer
    /// multiplicities.
    pub fn from_exponent_counts(p: u64, counts: &[i64]) -> Self {
        debug_assert_eq!(counts.len(), p as usize);
        let top = counts[(p - 1) as usize];
        CycNum {
            p,
            coeffs: counts[..(p - 1) as usize]
                .iter()
                .map(|&c| Rational::from_integer(BigInt::from(c - top)))
                .collect(),
        }
    }

    /// Builds an element from power-basis coefficients of `1, ζ, …, ζ^{p-2}`.
    pub fn from_coeffs(p: u64, coeffs: Vec<Rational>) -> Result<Self> {
        check_prime(p)?;
        if coeffs.len() != (p - 1) as usize {
            return Err(Error::DimensionMismatch {
                expected: (p - 1) as usize,
                found: coeffs.len(),
            });
        }
        Ok(CycNum { p, coeffs })
    }

    /// Reduces a length-`p` coefficient vector (basis `1, …, ζ^{p-1}`).
    fn from_full(p: u64, mut full: Vec<Rational>) -> Self {
        let top = full.pop().expect("length p");
        if !top.is_zero() {
            for c in full.iter_mut() {
                *c -= &top;
            }
        }
        CycNum { p, coeffs: full }
    }

    pub fn order(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(Error::OrderMismatch(self.p, other.p))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(CycNum {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(CycNum {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let p = self.p as usize;
        if let Some(r) = self.as_rational() {
            return Ok(other.scale(r));
        }
        if let Some(r) = other.as_rational() {
            return Ok(self.scale(r));
        }
        let mut full = vec![Rational::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                full[(i + j) % p] += a * b;
            }
        }
        Ok(Self::from_full(self.p, full))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        Ok(self * &other.inv()?)
    }

    /// Exact inverse: the product of the nontrivial Galois conjugates divided
    /// by the (rational) field norm.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(self.p, r.recip()));
        }
        let mut cofactor = Self::one(self.p);
        for k in 2..self.p {
            cofactor = &cofactor * &self.galois(k);
        }
        let norm = (self * &cofactor)
            .as_rational()
            .cloned()
            .ok_or_else(|| Error::Internal("field norm is not rational".into()))?;
        Ok(cofactor.scale(&norm.recip()))
    }

    /// The automorphism `ζ ↦ ζ^k` for `k` prime to `p`.
    pub fn galois(&self, k: u64) -> Self {
        let p = self.p as usize;
        let mut full = vec![Rational::zero(); p];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                full[(i * k as usize) % p] += c;
            }
        }
        Self::from_full(self.p, full)
    }

    /// `ζ^e · self`, a cyclic shift of the unreduced coefficients.
    pub fn mul_root(&self, e: u64) -> Self {
        let p = self.p as usize;
        let e = (e % self.p) as usize;
        if e == 0 {
            return self.clone();
        }
        let mut full = vec![Rational::zero(); p];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                full[(i + e) % p] = c.clone();
            }
        }
        Self::from_full(self.p, full)
    }

    /// Complex conjugation `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Self {
        self.galois(self.p - 1)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        CycNum {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&Rational::from_integer(BigInt::from(c)))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Evaluation at `ζ_p = e^{2πi/p}` in double precision.
    pub fn to_float(&self) -> (f64, f64) {
        let p = self.p as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold((0.0, 0.0), |(re, im), (k, c)| {
                let c = c.to_f64().unwrap_or(f64::NAN);
                let theta = 2.0 * std::f64::consts::PI * k as f64 / p;
                (re + c * theta.cos(), im + c * theta.sin())
            })
    }
}

/// Field arithmetic with order checking.
pub fn cyc_arith(a: &CycNum, b: &CycNum, kind: ArithKind) -> Result<CycNum> {
    match kind {
        ArithKind::Add => a.checked_add(b),
        ArithKind::Sub => a.checked_sub(b),
        ArithKind::Mul => a.checked_mul(b),
        ArithKind::Div => a.checked_div(b),
    }
}

/// The additive character `ψ(z) = ζ_p^z`.
pub fn psi(z: u64, p: u64) -> Result<CycNum> {
    check_prime(p)?;
    Ok(CycNum::root(p, z))
}

/// The Legendre character σ, with σ(0) = 0.
pub fn legendre(a: u64, p: u64) -> Result<i8> {
    check_prime(p)?;
    Ok(legendre_symbol(a, p))
}

/// The one-dimensional Gauss sum `Σ_z ψ(½z²)` for the character
/// `ψ_c(z) = ζ^{cz}`.
pub fn gauss_sum_for(p: u64, character: u64) -> Result<CycNum> {
    let f = PrimeField::new(p)?;
    let mut counts = vec![0i64; p as usize];
    for z in 0..p {
        let e = f.mul(character, f.mul(f.half(), f.mul(z, z)));
        counts[e as usize] += 1;
    }
    Ok(CycNum::from_exponent_counts(p, &counts))
}

/// `G₁ = Σ_z ψ(½z²)` for the standard character.
pub fn gauss_sum(p: u64) -> Result<CycNum> {
    gauss_sum_for(p, 1)
}

/// Writes `Σ_z ψ(½z²)` term by term before reduction, e.g. `1 + 2ζ^2`.
pub fn gauss_sum_unreduced(p: u64) -> Result<String> {
    let f = PrimeField::new(p)?;
    let mut counts = vec![0u64; p as usize];
    for z in 0..p {
        counts[f.mul(f.half(), f.mul(z, z)) as usize] += 1;
    }
    let terms: Vec<String> = counts
        .iter()
        .enumerate()
        .filter(|(_, c)| **c > 0)
        .map(|(e, &c)| monomial(&Rational::from_integer(BigInt::from(c)), e))
        .collect();
    Ok(terms.join(" + "))
}

fn monomial(c: &Rational, e: usize) -> String {
    let base = match e {
        0 => String::new(),
        1 => "ζ".to_string(),
        _ => format!("ζ^{e}"),
    };
    if e == 0 {
        c.to_string()
    } else if c.is_one() {
        base
    } else {
        format!("{c}{base}")
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let body = monomial(&c.abs(), e);
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum<{}>({})", self.p, self)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&CycNum> for &CycNum {
            type Output = CycNum;
            fn $method(self, rhs: &CycNum) -> CycNum {
                self.$checked(rhs).expect(concat!("CycNum ", stringify!($method)))
            }
        }
        impl $trait<CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: CycNum) -> CycNum {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum {
            p: self.p,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct CycNumJson {
    p: u64,
    coeffs: Vec<(String, String)>,
}

impl Serialize for CycNum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycNumJson {
            p: self.p,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| (c.numer().to_string(), c.denom().to_string()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycNum {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CycNumJson::deserialize(d)?;
        let coeffs = raw
            .coeffs
            .iter()
            .map(|(n, dn)| {
                let n: BigInt = n.parse().map_err(D::Error::custom)?;
                let dn: BigInt = dn.parse().map_err(D::Error::custom)?;
                if dn.is_zero() {
                    return Err(D::Error::custom("zero denominator"));
                }
                Ok(Rational::new(n, dn))
            })
            .collect::<std::result::Result<Vec<_>, _>>()?;
        CycNum::from_coeffs(raw.p, coeffs).map_err(D::Error::custom)
    }
}

/// `{"re": …, "im": …}` rendering of an exact value.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct FloatRender {
    pub re: f64,
    pub im: f64,
}

impl From<&CycNum> for FloatRender {
    fn from(c: &CycNum) -> Self {
        let (re, im) = c.to_float();
        FloatRender { re, im }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(p: u64, coeffs: &[i64]) -> CycNum {
        CycNum::from_coeffs(
            p,
            coeffs
                .iter()
                .map(|&x| Rational::from_integer(BigInt::from(x)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn additive_cancellation() {
        let one_plus_z = c(3, &[1, 1]);
        let minus_z = c(3, &[0, -1]);
        assert_eq!(&one_plus_z + &minus_z, CycNum::one(3));
    }

    #[test]
    fn minimal_polynomial_rewrite() {
        let z = CycNum::root(3, 1);
        let z2 = CycNum::root(3, 2);
        assert_eq!(&z * &z2, CycNum::one(3));
        // ζ² itself is −1 − ζ
        assert_eq!(z2, c(3, &[-1, -1]));
        assert_eq!(&z * &z, c(3, &[-1, -1]));
    }

    #[test]
    fn square_of_gauss_sum_element() {
        // 1 + 2ζ² = −1 − 2ζ
        let g = c(3, &[-1, -2]);
        assert_eq!(&g * &g, CycNum::from_int(3, -3));
    }

    #[test]
    fn psi_values() {
        assert!(psi(0, 3).unwrap().is_one());
        assert_eq!(psi(1, 3).unwrap(), c(3, &[0, 1]));
        let a = psi(2, 3).unwrap();
        assert_eq!(&a * &a, psi(1, 3).unwrap());
        assert!(psi(1, 4).is_err());
    }

    #[test]
    fn legendre_values() {
        assert_eq!(legendre(1, 3).unwrap(), 1);
        assert_eq!(legendre(2, 3).unwrap(), -1);
        assert_eq!(legendre(4, 5).unwrap(), 1);
        assert_eq!(legendre(0, 5).unwrap(), 0);
    }

    #[test]
    fn gauss_sum_small() {
        let g = gauss_sum(3).unwrap();
        assert_eq!(g, c(3, &[-1, -2]));
        assert_eq!(gauss_sum_unreduced(3).unwrap(), "1 + 2ζ^2");
        assert_eq!(&g * &g, CycNum::from_int(3, -3));
        // p = 5: G² = σ(−1)·5 = 5
        let g5 = gauss_sum(5).unwrap();
        assert_eq!(&g5 * &g5, CycNum::from_int(5, 5));
    }

    #[test]
    fn division() {
        let g = gauss_sum(7).unwrap();
        let inv = g.inv().unwrap();
        assert!((&g * &inv).is_one());
        assert_eq!(CycNum::zero(5).inv(), Err(Error::DivisionByZero));
        assert!(matches!(
            cyc_arith(&CycNum::one(3), &CycNum::one(5), ArithKind::Add),
            Err(Error::OrderMismatch(3, 5))
        ));
    }

    #[test]
    fn float_rendering() {
        assert_eq!(CycNum::one(5).to_float(), (1.0, 0.0));
        let (re, im) = CycNum::root(3, 1).to_float();
        assert!((re + 0.5).abs() < 1e-12);
        assert!((im - 3f64.sqrt() / 2.0).abs() < 1e-12);
        let g = gauss_sum(3).unwrap();
        let (re, im) = (&g * &g).to_float();
        assert!((re + 3.0).abs() < 1e-9 && im.abs() < 1e-9);
    }

    #[test]
    fn display() {
        assert_eq!(gauss_sum(3).unwrap().to_string(), "-1 - 2ζ");
        assert_eq!(CycNum::zero(3).to_string(), "0");
        assert_eq!(CycNum::root(5, 3).to_string(), "ζ^3");
    }

    #[test]
    fn json_shape() {
        let g = gauss_sum(3).unwrap();
        let v = serde_json::to_value(&g).unwrap();
        assert_eq!(
            v,
            serde_json::json!({"p": 3, "coeffs": [["-1", "1"], ["-2", "1"]]})
        );
        let back: CycNum = serde_json::from_value(v).unwrap();
        assert_eq!(back, g);
    }
}
