use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{lex_vector, FMat, FVec, PrimeField};

/// A linear subspace of `F_p^d`, stored by its reduced row-echelon basis.
///
/// The RREF basis is the unique canonical representative, so derived `Eq`
/// and `Hash` compare subspaces, not bases.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Subspace {
    p: u64,
    ambient: usize,
    rows: FMat,
}

impl Subspace {
    pub fn span(p: u64, ambient: usize, vectors: &[FVec]) -> Result<Self> {
        let f = PrimeField::new(p)?;
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient) {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                found: v.len(),
            });
        }
        let mut rows: FMat = vectors.iter().map(|v| v.iter().map(|x| x % p).collect()).collect();
        f.rref(&mut rows);
        Ok(Subspace { p, ambient, rows })
    }

    pub(crate) fn from_rref(p: u64, ambient: usize, rows: FMat) -> Self {
        Subspace { p, ambient, rows }
    }

    pub fn zero(p: u64, ambient: usize) -> Self {
        Subspace {
            p,
            ambient,
            rows: Vec::new(),
        }
    }

    pub fn full(p: u64, ambient: usize) -> Self {
        Subspace {
            p,
            ambient,
            rows: (0..ambient)
                .map(|i| (0..ambient).map(|j| u64::from(i == j)).collect())
                .collect(),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn field(&self) -> PrimeField {
        PrimeField::new(self.p).expect("validated prime")
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// The RREF basis rows.
    pub fn rows(&self) -> &FMat {
        &self.rows
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows
            .iter()
            .map(|r| r.iter().position(|&x| x != 0).expect("nonzero row"))
            .collect()
    }

    /// Eliminates the pivot coordinates of `v` using the basis rows.
    pub fn reduce(&self, v: &[u64]) -> FVec {
        let f = self.field();
        let mut out = v.to_vec();
        for (row, pc) in self.rows.iter().zip(self.pivots()) {
            let c = out[pc];
            if c != 0 {
                f.axpy(&mut out, f.neg(c), row);
            }
        }
        out
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        v.len() == self.ambient && self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` against the RREF basis, if `v` lies in the span.
    pub fn coords(&self, v: &[u64]) -> Option<FVec> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots().iter().map(|&pc| v[pc]).collect())
    }

    fn check_same(&self, other: &Subspace) -> Result<()> {
        if self.p != other.p || self.ambient != other.ambient {
            return Err(Error::DimensionMismatch {
                expected: self.ambient,
                found: other.ambient,
            });
        }
        Ok(())
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.p == other.p
            && self.ambient == other.ambient
            && self.rows.iter().all(|r| other.contains(r))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same(other)?;
        let mut all = self.rows.clone();
        all.extend(other.rows.iter().cloned());
        Subspace::span(self.p, self.ambient, &all)
    }

    /// The annihilator under the standard dot product.
    pub fn annihilator(&self) -> Subspace {
        let f = self.field();
        let ns = f.nullspace(&self.rows, self.ambient);
        Subspace::span(self.p, self.ambient, &ns).expect("consistent dimensions")
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_same(other)?;
        Ok(self.annihilator().sum(&other.annihilator())?.annihilator())
    }

    /// Coset representatives of `self / sub`.
    pub fn quotient_by(&self, sub: &Subspace) -> Result<Quotient> {
        self.check_same(sub)?;
        if !sub.is_subspace_of(self) {
            return Err(Error::NotContained);
        }
        let f = self.field();
        let mut comp: FMat = self.rows.iter().map(|r| sub.reduce(r)).collect();
        f.rref(&mut comp);
        let comp_pivots = comp
            .iter()
            .map(|r| r.iter().position(|&x| x != 0).expect("nonzero row"))
            .collect();
        Ok(Quotient {
            p: self.p,
            base: sub.clone(),
            complement: comp,
            comp_pivots,
        })
    }
}

/// Coset representatives for a quotient `A / B`.
///
/// Representatives are `Σ x_k c_k` where `c_k` is an RREF basis of a
/// complement of `B` in `A` whose pivots avoid those of `B`; they are indexed
/// by the coordinate vector `x` in base-`p` lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    p: u64,
    base: Subspace,
    complement: FMat,
    comp_pivots: Vec<usize>,
}

impl Quotient {
    pub fn base(&self) -> &Subspace {
        &self.base
    }

    /// Basis of the chosen complement (lifts of a basis of the quotient).
    pub fn complement(&self) -> &FMat {
        &self.complement
    }

    pub fn dim(&self) -> usize {
        self.complement.len()
    }

    pub fn len(&self) -> usize {
        (self.p as usize).pow(self.complement.len() as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coords_to_vector(&self, x: &[u64]) -> FVec {
        let f = PrimeField::new(self.p).expect("validated prime");
        let mut v = vec![0; self.base.ambient()];
        for (c, row) in x.iter().zip(&self.complement) {
            f.axpy(&mut v, *c, row);
        }
        v
    }

    pub fn rep(&self, index: usize) -> FVec {
        self.coords_to_vector(&lex_vector(index, self.dim(), self.p))
    }

    pub fn reps(&self) -> Vec<FVec> {
        (0..self.len()).map(|i| self.rep(i)).collect()
    }

    /// Quotient coordinates of `v` (assumed to lie in the numerator).
    pub fn coords_of(&self, v: &[u64]) -> FVec {
        let r = self.base.reduce(v);
        self.comp_pivots.iter().map(|&pc| r[pc]).collect()
    }

    /// Splits `v` as `rep + b` with `b` in the base subspace; returns the
    /// representative index and `b`. Fails when `v` is outside the numerator.
    pub fn split(&self, v: &[u64]) -> Result<(usize, FVec)> {
        let f = PrimeField::new(self.p).expect("validated prime");
        let x = self.coords_of(v);
        let rep = self.coords_to_vector(&x);
        let b = f.sub_vec(v, &rep);
        if !self.base.contains(&b) {
            return Err(Error::NotContained);
        }
        let idx = x.iter().fold(0usize, |acc, &c| acc * self.p as usize + c as usize);
        Ok((idx, b))
    }

    pub fn index_of(&self, v: &[u64]) -> Result<usize> {
        self.split(v).map(|(i, _)| i)
    }
}

/// A subspace with a chosen nonzero top-wedge vector, encoded as the scalar
/// `orient` against the wedge of the RREF rows.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct OrientedSubspace {
    sub: Subspace,
    orient: u64,
}

impl OrientedSubspace {
    pub fn new(sub: Subspace, orient: u64) -> Result<Self> {
        let orient = orient % sub.p();
        if orient == 0 {
            return Err(Error::ZeroOrientation);
        }
        Ok(OrientedSubspace { sub, orient })
    }

    /// Orientation `scale · (v_1 ∧ … ∧ v_k)` for an arbitrary independent
    /// family, re-expressed against the RREF wedge.
    pub fn from_frame(p: u64, ambient: usize, vectors: &[FVec], scale: u64) -> Result<Self> {
        let sub = Subspace::span(p, ambient, vectors)?;
        if sub.dim() != vectors.len() {
            return Err(Error::Degenerate);
        }
        let f = sub.field();
        let change: FMat = vectors
            .iter()
            .map(|v| sub.coords(v).expect("vector in its own span"))
            .collect();
        OrientedSubspace::new(sub, f.mul(scale, f.det(&change)))
    }

    pub fn sub(&self) -> &Subspace {
        &self.sub
    }

    pub fn orient(&self) -> u64 {
        self.orient
    }

    pub fn dim(&self) -> usize {
        self.sub.dim()
    }

    pub fn with_orient(&self, orient: u64) -> Result<Self> {
        OrientedSubspace::new(self.sub.clone(), orient)
    }

    /// Rescales the orientation by `c`.
    pub fn rescaled(&self, c: u64) -> Result<Self> {
        let f = self.sub.field();
        OrientedSubspace::new(self.sub.clone(), f.mul(self.orient, c))
    }

    /// Parses `rows=1,0;0,1|o=2`; the scalar is relative to the listed rows.
    pub fn parse(text: &str, p: u64, ambient: usize) -> Result<Self> {
        let bad = || Error::Parse(format!("expected 'rows=..|o=..', got '{text}'"));
        let (rows_part, o_part) = text.trim().split_once('|').ok_or_else(bad)?;
        let rows_txt = rows_part.trim().strip_prefix("rows=").ok_or_else(bad)?;
        let o_txt = o_part.trim().strip_prefix("o=").ok_or_else(bad)?;
        let o: i64 = o_txt.trim().parse().map_err(|_| bad())?;
        let mut vectors = Vec::new();
        for r in rows_txt.split(';').filter(|r| !r.trim().is_empty()) {
            let v = parse_scalars(r, p)?;
            vectors.push(v);
        }
        let scale = o.rem_euclid(p as i64) as u64;
        OrientedSubspace::from_frame(p, ambient, &vectors, scale)
    }
}

pub(crate) fn parse_scalars(text: &str, p: u64) -> Result<FVec> {
    text.split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map(|v| v.rem_euclid(p as i64) as u64)
                .map_err(|_| Error::Parse(format!("bad scalar '{x}'")))
        })
        .collect()
}

fn join_rows(rows: &FMat) -> String {
    rows.iter()
        .map(|r| r.iter().map(u64::to_string).collect::<Vec<_>>().join(","))
        .collect::<Vec<_>>()
        .join(";")
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rows={}", join_rows(&self.rows))
    }
}

impl fmt::Display for OrientedSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|o={}", self.sub, self.orient)
    }
}

/// JSON mirror of the text form.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SubspaceJson {
    pub rows: FMat,
    pub o: u64,
}

impl From<&OrientedSubspace> for SubspaceJson {
    fn from(s: &OrientedSubspace) -> Self {
        SubspaceJson {
            rows: s.sub.rows.clone(),
            o: s.orient,
        }
    }
}

/// Result of [`subspace_ops`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SubspaceOpOutput {
    Subspace(Subspace),
    Membership(bool),
    Reps(Vec<FVec>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubspaceOp {
    Intersect,
    Sum,
    /// Whether `b ⊆ a`.
    Membership,
    /// Coset representatives of `a / b`.
    QuotientReps,
}

pub fn subspace_ops(a: &Subspace, b: &Subspace, kind: SubspaceOp) -> Result<SubspaceOpOutput> {
    Ok(match kind {
        SubspaceOp::Intersect => SubspaceOpOutput::Subspace(a.intersect(b)?),
        SubspaceOp::Sum => SubspaceOpOutput::Subspace(a.sum(b)?),
        SubspaceOp::Membership => SubspaceOpOutput::Membership(b.is_subspace_of(a)),
        SubspaceOp::QuotientReps => SubspaceOpOutput::Reps(a.quotient_by(b)?.reps()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(v: &[u64]) -> Subspace {
        Subspace::span(3, v.len(), &[v.to_vec()]).unwrap()
    }

    #[test]
    fn intersect_and_sum() {
        let a = line(&[1, 0]);
        let b = line(&[0, 1]);
        assert_eq!(a.intersect(&b).unwrap().dim(), 0);
        assert_eq!(a.sum(&b).unwrap(), Subspace::full(3, 2));
        assert_eq!(a.intersect(&a).unwrap(), a);
    }

    #[test]
    fn quotient_reps_of_plane_by_line() {
        let v = Subspace::full(3, 2);
        let q = v.quotient_by(&line(&[1, 0])).unwrap();
        assert_eq!(q.len(), 3);
        assert_eq!(q.reps(), vec![vec![0, 0], vec![0, 1], vec![0, 2]]);
        let (idx, b) = q.split(&[2, 1]).unwrap();
        assert_eq!(idx, 1);
        assert_eq!(b, vec![2, 0]);
        assert_eq!(
            line(&[1, 0]).quotient_by(&line(&[0, 1])),
            Err(Error::NotContained)
        );
    }

    #[test]
    fn ops_wrapper() {
        let a = Subspace::full(3, 2);
        let b = line(&[1, 1]);
        assert_eq!(
            subspace_ops(&a, &b, SubspaceOp::Membership).unwrap(),
            SubspaceOpOutput::Membership(true)
        );
        match subspace_ops(&a, &b, SubspaceOp::QuotientReps).unwrap() {
            SubspaceOpOutput::Reps(r) => assert_eq!(r.len(), 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_text_form() {
        let s = OrientedSubspace::parse("rows=1,0;0,1|o=2", 3, 2).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.orient(), 2);
        assert_eq!(s.to_string(), "rows=1,0;0,1|o=2");
        // swapped rows flip the sign of the wedge
        let t = OrientedSubspace::parse("rows=0,1;1,0|o=1", 3, 2).unwrap();
        assert_eq!(t.orient(), 2);
        // non-RREF row is normalized, scalar follows
        let u = OrientedSubspace::parse("rows=2,2|o=1", 3, 2).unwrap();
        assert_eq!(u.sub().rows(), &vec![vec![1, 1]]);
        assert_eq!(u.orient(), 2);
        assert!(OrientedSubspace::parse("rows=1,0|o=0", 3, 2).is_err());
        assert!(OrientedSubspace::parse("1,0", 3, 2).is_err());
    }
}
