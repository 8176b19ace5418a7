//! The Heisenberg group `H(V) = V × F_p` and its Schrödinger-type models
//! `H_{L°}`: functions on `H(V)` that are ψ-equivariant under the center and
//! left `L`-invariant, with `H(V)` acting by right translation.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::field::{lex_index, lex_vector, FVec};
use crate::matrix::CycMatrix;
use crate::symplectic::{OrientedSubspace, Quotient, SpElement, SymplecticSpace};

/// Commutant computations are refused above this model dimension.
pub const MAX_COMMUTANT_DIM: usize = 125;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct HeisElement {
    pub v: FVec,
    pub z: u64,
}

impl HeisElement {
    pub fn new(v: FVec, z: u64) -> Self {
        HeisElement { v, z }
    }

    pub fn identity(dim: usize) -> Self {
        HeisElement { v: vec![0; dim], z: 0 }
    }

    pub fn central(dim: usize, z: u64) -> Self {
        HeisElement { v: vec![0; dim], z }
    }

    /// `(v, 0)`, the zero section.
    pub fn section(v: FVec) -> Self {
        HeisElement { v, z: 0 }
    }

    pub fn is_central(&self) -> bool {
        self.v.iter().all(|&x| x == 0)
    }

    /// Position in the dense ordering `lex(v)·p + z`.
    pub fn dense_index(&self, p: u64) -> usize {
        lex_index(&self.v, p) * p as usize + self.z as usize
    }

    pub fn from_dense_index(idx: usize, dim: usize, p: u64) -> Self {
        HeisElement {
            v: lex_vector(idx / p as usize, dim, p),
            z: (idx % p as usize) as u64,
        }
    }

    /// Parses `v=1,0|z=2`.
    pub fn parse(text: &str, space: &SymplecticSpace) -> Result<Self> {
        let bad = || Error::Parse(format!("expected 'v=..|z=..', got '{text}'"));
        let (v_part, z_part) = text.trim().split_once('|').ok_or_else(bad)?;
        let v_txt = v_part.trim().strip_prefix("v=").ok_or_else(bad)?;
        let z_txt = z_part.trim().strip_prefix("z=").ok_or_else(bad)?;
        let v = crate::symplectic::parse_scalars(v_txt, space.p())?;
        if v.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: v.len(),
            });
        }
        let z: i64 = z_txt.trim().parse().map_err(|_| bad())?;
        Ok(HeisElement::new(v, z.rem_euclid(space.p() as i64) as u64))
    }
}

impl fmt::Display for HeisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.v.iter().map(u64::to_string).collect();
        write!(f, "v={}|z={}", v.join(","), self.z)
    }
}

fn check_len(space: &SymplecticSpace, h: &HeisElement) -> Result<()> {
    if h.v.len() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: h.v.len(),
        });
    }
    Ok(())
}

/// `(v,z)(v',z') = (v+v', z+z'+½ω(v,v'))`, unchecked.
#[inline]
pub(crate) fn mul_unchecked(space: &SymplecticSpace, a: &HeisElement, b: &HeisElement) -> HeisElement {
    let f = space.field();
    let z = f.add(f.add(a.z, b.z), f.mul(f.half(), space.form(&a.v, &b.v)));
    HeisElement {
        v: f.add_vec(&a.v, &b.v),
        z,
    }
}

pub fn heis_mul(space: &SymplecticSpace, a: &HeisElement, b: &HeisElement) -> Result<HeisElement> {
    check_len(space, a)?;
    check_len(space, b)?;
    Ok(mul_unchecked(space, a, b))
}

/// `(v, z)^{-1} = (−v, −z)`.
pub fn heis_inverse(space: &SymplecticSpace, a: &HeisElement) -> HeisElement {
    let f = space.field();
    HeisElement {
        v: f.neg_vec(&a.v),
        z: f.neg(a.z),
    }
}

/// `g·(v, z) = (g v, z)`.
pub fn sp_act_heis(g: &SpElement, h: &HeisElement) -> HeisElement {
    HeisElement {
        v: g.apply(&h.v),
        z: h.z,
    }
}

/// All `p^{2n+1}` elements in dense order.
pub fn heis_elements(space: &SymplecticSpace) -> Vec<HeisElement> {
    let p = space.p();
    let count = (p as usize).pow(space.dim() as u32 + 1);
    (0..count)
        .map(|i| HeisElement::from_dense_index(i, space.dim(), p))
        .collect()
}

/// Generators `(e_i, 0)` and `(0, 1)`.
pub fn heis_generators(space: &SymplecticSpace) -> Vec<HeisElement> {
    let mut gens: Vec<HeisElement> = (0..space.dim())
        .map(|i| HeisElement::section(space.basis_vector(i)))
        .collect();
    gens.push(HeisElement::central(space.dim(), 1));
    gens
}

/// A monomial matrix: row `i` holds `ζ^{exps[i]}` in column `cols[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub p: u64,
    pub cols: Vec<usize>,
    pub exps: Vec<u64>,
}

impl Monomial {
    pub fn to_matrix(&self) -> CycMatrix {
        let n = self.cols.len();
        let mut m = CycMatrix::zeros(self.p, n, n);
        for (i, (&c, &e)) in self.cols.iter().zip(&self.exps).enumerate() {
            m[(i, c)] = CycNum::root(self.p, e);
        }
        m
    }

    pub fn apply(&self, values: &[CycNum]) -> Vec<CycNum> {
        self.cols
            .iter()
            .zip(&self.exps)
            .map(|(&c, &e)| values[c].mul_root(e))
            .collect()
    }
}

/// The model `H_{L°}` with central character `ψ_χ(z) = ζ^{χz}`.
///
/// Functions are stored by their values on `(r_i, 0)`, `r_i` the quotient
/// representatives of `V/L`. The orientation is carried as a label only.
#[derive(Clone, Debug)]
pub struct Model {
    space: SymplecticSpace,
    label: OrientedSubspace,
    chi: u64,
    quotient: Quotient,
    reps: Vec<FVec>,
}

impl PartialEq for Model {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.label == other.label && self.chi == other.chi
    }
}

impl Eq for Model {}

impl Model {
    pub fn new(space: &SymplecticSpace, label: &OrientedSubspace) -> Result<Self> {
        Self::with_character(space, label, 1)
    }

    pub fn with_character(space: &SymplecticSpace, label: &OrientedSubspace, chi: u64) -> Result<Self> {
        if label.sub().ambient() != space.dim() || label.sub().p() != space.p() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: label.sub().ambient(),
            });
        }
        if !space.is_lagrangian(label.sub()) {
            return Err(Error::NotLagrangian);
        }
        let chi = chi % space.p();
        if chi == 0 {
            return Err(Error::ModelMismatch("trivial central character".into()));
        }
        let quotient = space.full().quotient_by(label.sub())?;
        let reps = quotient.reps();
        Ok(Model {
            space: space.clone(),
            label: label.clone(),
            chi,
            quotient,
            reps,
        })
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn label(&self) -> &OrientedSubspace {
        &self.label
    }

    pub fn chi(&self) -> u64 {
        self.chi
    }

    pub fn p(&self) -> u64 {
        self.space.p()
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn reps(&self) -> &[FVec] {
        &self.reps
    }

    /// Same underlying space of functions (orientation ignored).
    pub fn same_functions(&self, other: &Model) -> bool {
        self.space == other.space && self.label.sub() == other.label.sub() && self.chi == other.chi
    }

    /// Writes `h = (0,z')·(l,0)·(r_i,0)`; returns `(i, χ·z')` so that
    /// `f(h) = ζ^{χz'}·f(r_i)`.
    #[inline]
    pub fn locate(&self, h: &HeisElement) -> (usize, u64) {
        let f = self.space.field();
        let (idx, l) = self.quotient.split(&h.v).expect("V/L covers V");
        let r = &self.reps[idx];
        let z = f.sub(h.z, f.mul(f.half(), self.space.form(&l, r)));
        (idx, f.mul(self.chi, z))
    }

    pub fn evaluate(&self, values: &[CycNum], h: &HeisElement) -> CycNum {
        let (i, e) = self.locate(h);
        values[i].mul_root(e)
    }

    /// `π_{L°}(h)` as a monomial matrix: `(π(h)f)(r_i) = f(r_i·h)`.
    pub fn pi(&self, h: &HeisElement) -> Monomial {
        let (cols, exps) = self
            .reps
            .iter()
            .map(|r| self.locate(&mul_unchecked(&self.space, &HeisElement::section(r.clone()), h)))
            .unzip();
        Monomial {
            p: self.p(),
            cols,
            exps,
        }
    }

    pub fn pi_matrix(&self, h: &HeisElement) -> CycMatrix {
        self.pi(h).to_matrix()
    }

    /// Rows `k ↦ (f ↦ f(points[k]))`.
    pub fn evaluation_matrix(&self, points: &[HeisElement]) -> CycMatrix {
        let mut m = CycMatrix::zeros(self.p(), points.len(), self.dim());
        for (k, h) in points.iter().enumerate() {
            let (i, e) = self.locate(h);
            m[(k, i)] = CycNum::root(self.p(), e);
        }
        m
    }

    /// `δ_L`: supported on `Z·L`, value 1 at the identity.
    pub fn delta_values(&self) -> Vec<CycNum> {
        let mut v = vec![CycNum::zero(self.p()); self.dim()];
        v[0] = CycNum::one(self.p());
        v
    }
}

/// An element of a model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelVector {
    model: Arc<Model>,
    values: Vec<CycNum>,
}

impl ModelVector {
    pub fn new(model: Arc<Model>, values: Vec<CycNum>) -> Result<Self> {
        if values.len() != model.dim() {
            return Err(Error::DimensionMismatch {
                expected: model.dim(),
                found: values.len(),
            });
        }
        if values.iter().any(|x| x.order() != model.p()) {
            return Err(Error::OrderMismatch(model.p(), 0));
        }
        Ok(ModelVector { model, values })
    }

    pub fn delta(model: Arc<Model>) -> Self {
        let values = model.delta_values();
        ModelVector { model, values }
    }

    pub fn zero(model: Arc<Model>) -> Self {
        let values = vec![CycNum::zero(model.p()); model.dim()];
        ModelVector { model, values }
    }

    pub fn model(&self) -> &Arc<Model> {
        &self.model
    }

    pub fn values(&self) -> &[CycNum] {
        &self.values
    }

    pub fn evaluate(&self, h: &HeisElement) -> Result<CycNum> {
        check_len(self.model.space(), h)?;
        Ok(self.model.evaluate(&self.values, h))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "label": self.model.label().to_string(),
            "reps": self.model.reps(),
            "values": self.values,
        })
    }
}

/// `π_{L°}(h) f`.
pub fn pi_act(model: &Arc<Model>, h: &HeisElement, f: &ModelVector) -> Result<ModelVector> {
    if !model.same_functions(&f.model) {
        return Err(Error::ModelMismatch("vector belongs to another model".into()));
    }
    check_len(model.space(), h)?;
    Ok(ModelVector {
        model: model.clone(),
        values: model.pi(h).apply(&f.values),
    })
}

/// Weighted union-find over `x = ζ^{off}·parent(x)`.
struct Cosets {
    p: u64,
    parent: Vec<usize>,
    offset: Vec<u64>,
    forced_zero: Vec<bool>,
}

impl Cosets {
    fn new(n: usize, p: u64) -> Self {
        Cosets {
            p,
            parent: (0..n).collect(),
            offset: vec![0; n],
            forced_zero: vec![false; n],
        }
    }

    fn find(&mut self, x: usize) -> (usize, u64) {
        let parent = self.parent[x];
        if parent == x {
            return (x, 0);
        }
        let (root, off) = self.find(parent);
        self.parent[x] = root;
        self.offset[x] = (self.offset[x] + off) % self.p;
        (root, self.offset[x])
    }

    /// Records `value(x) = ζ^c · value(y)`.
    fn relate(&mut self, x: usize, y: usize, c: u64) {
        let (rx, ox) = self.find(x);
        let (ry, oy) = self.find(y);
        let want = (c + oy) % self.p;
        if rx == ry {
            if ox != want {
                self.forced_zero[rx] = true;
            }
            return;
        }
        self.parent[rx] = ry;
        self.offset[rx] = (want + self.p - ox) % self.p;
        self.forced_zero[ry] |= self.forced_zero[rx];
    }
}

/// `dim {A : A π(h) = π(h) A for all h}` using that `π(h)` is monomial and
/// generators suffice: each orbit of matrix positions under the generators
/// contributes one dimension unless its phases are inconsistent.
pub fn commutant_dimension(model: &Model) -> Result<usize> {
    let n = model.dim();
    if n > MAX_COMMUTANT_DIM {
        return Err(Error::ScaleGuard {
            what: "commutant".into(),
            cells: n as u128,
            limit: MAX_COMMUTANT_DIM as u128,
        });
    }
    let p = model.p();
    let mut cosets = Cosets::new(n * n, p);
    for h in heis_generators(model.space()) {
        let m = model.pi(&h);
        for i in 0..n {
            for j in 0..n {
                // A[σi][σj] = ζ^{e_j − e_i} A[i][j]
                let c = (m.exps[j] + p - m.exps[i]) % p;
                cosets.relate(m.cols[i] * n + m.cols[j], i * n + j, c);
            }
        }
    }
    Ok((0..n * n)
        .filter(|&x| cosets.find(x).0 == x && !cosets.forced_zero[x])
        .count())
}

/// Commutant dimension by dense elimination over `Q(ζ_p)` against the given
/// group elements.
pub fn commutant_dimension_dense(model: &Model, elements: &[HeisElement]) -> usize {
    let n = model.dim();
    let p = model.p();
    let mut rows = Vec::new();
    for h in elements {
        let m = model.pi_matrix(h);
        // (A m − m A)[i][k] as a linear form in the entries of A
        for i in 0..n {
            for k in 0..n {
                let mut row = vec![CycNum::zero(p); n * n];
                for j in 0..n {
                    row[i * n + j] = &row[i * n + j] + &m[(j, k)];
                    row[j * n + k] = &row[j * n + k] - &m[(i, j)];
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        return n * n;
    }
    let system = CycMatrix::from_rows(p, rows).expect("rectangular system");
    n * n - system.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(p: u64, n: usize, k: usize) -> Model {
        let v = SymplecticSpace::standard(p, n).unwrap();
        let l = v.oriented_lagrangians().unwrap()[k].clone();
        Model::new(&v, &l).unwrap()
    }

    #[test]
    fn group_law_examples() {
        let v = SymplecticSpace::standard(3, 1).unwrap();
        let a = HeisElement::section(vec![1, 0]);
        let b = HeisElement::section(vec![0, 1]);
        assert_eq!(heis_mul(&v, &a, &b).unwrap(), HeisElement::new(vec![1, 1], 2));
        let c = HeisElement::new(vec![2, 1], 1);
        assert_eq!(heis_mul(&v, &c, &heis_inverse(&v, &c)).unwrap(), HeisElement::identity(2));
        let ab = heis_mul(&v, &a, &b).unwrap();
        let ab_ai = heis_mul(&v, &ab, &heis_inverse(&v, &a)).unwrap();
        let comm = heis_mul(&v, &ab_ai, &heis_inverse(&v, &b)).unwrap();
        assert_eq!(comm, HeisElement::central(2, v.form(&[1, 0], &[0, 1])));
        assert!(heis_mul(&v, &a, &HeisElement::identity(4)).is_err());
    }

    #[test]
    fn parse_roundtrip() {
        let v = SymplecticSpace::standard(5, 1).unwrap();
        let h = HeisElement::parse("v=1,-1|z=7", &v).unwrap();
        assert_eq!(h, HeisElement::new(vec![1, 4], 2));
        assert_eq!(HeisElement::parse(&h.to_string(), &v).unwrap(), h);
        assert!(HeisElement::parse("v=1|z=0", &v).is_err());
    }

    #[test]
    fn dense_order() {
        let v = SymplecticSpace::standard(3, 1).unwrap();
        for (i, h) in heis_elements(&v).iter().enumerate() {
            assert_eq!(h.dense_index(3), i);
        }
    }

    #[test]
    fn delta_support() {
        let m = model(3, 1, 2);
        let delta = m.delta_values();
        let v = m.space().clone();
        for h in heis_elements(&v) {
            let value = m.evaluate(&delta, &h);
            if m.label().sub().contains(&h.v) {
                assert_eq!(value, CycNum::root(3, h.z));
            } else {
                assert!(value.is_zero());
            }
        }
    }

    #[test]
    fn pi_is_a_representation() {
        let m = model(3, 1, 5);
        let v = m.space().clone();
        let all = heis_elements(&v);
        let mats: Vec<CycMatrix> = all.iter().map(|h| m.pi_matrix(h)).collect();
        for (a, ma) in all.iter().zip(&mats) {
            for (b, mb) in all.iter().zip(&mats) {
                let ab = mul_unchecked(&v, a, b);
                assert_eq!(ma.mul(mb), mats[ab.dense_index(3)]);
            }
        }
        let center = m.pi_matrix(&HeisElement::central(2, 1));
        assert_eq!(center, CycMatrix::identity(3, 3).scale(&CycNum::root(3, 1)));
    }

    #[test]
    fn pi_act_checks_model() {
        let a = Arc::new(model(3, 1, 0));
        let b = Arc::new(model(3, 1, 2));
        let f = ModelVector::delta(a.clone());
        let h = HeisElement::central(2, 1);
        let g = pi_act(&a, &h, &f).unwrap();
        assert_eq!(g.values()[0], CycNum::root(3, 1));
        assert!(pi_act(&b, &h, &f).is_err());
        // the other orientation of the same line shares the function space
        let a2 = Arc::new(model(3, 1, 1));
        assert!(pi_act(&a2, &h, &f).is_ok());
    }

    #[test]
    fn commutant_fast_matches_dense() {
        for (p, n) in [(3, 1), (5, 1)] {
            let v = SymplecticSpace::standard(p, n).unwrap();
            let all = heis_elements(&v);
            for k in [0, 3] {
                let m = model(p, n, k);
                assert_eq!(commutant_dimension(&m).unwrap(), 1);
                assert_eq!(commutant_dimension_dense(&m, &all), 1);
            }
        }
        // reducible: a single central element commutes with everything
        let m = model(3, 1, 0);
        assert_eq!(commutant_dimension_dense(&m, &[HeisElement::central(2, 1)]), 9);
    }
}
