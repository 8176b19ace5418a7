//! Independent evaluations of the identities behind the normalization
//! constants. Each function computes both sides by different routes; the
//! verification suites compare them.

use crate::cyclotomic::{gauss_sum_for, CycNum};
use crate::error::{Error, Result};
use crate::field::{choose2, legendre_symbol, FMat};
use crate::symplectic::{
    discriminant_by_diagonalization, orientation_decompose, residue_map, wedge_pairing,
    wedge_pairing_frames, Frame, OrientedSubspace, SymplecticSpace,
};

use super::{cocycle_c, normalization_triple};

fn require_transverse(space: &SymplecticSpace, pairs: &[(&OrientedSubspace, &OrientedSubspace)]) -> Result<()> {
    for (a, b) in pairs {
        if !space.in_general_position(a.sub(), b.sub()) {
            return Err(Error::NotTransverse("lemma needs transverse inputs".into()));
        }
    }
    Ok(())
}

/// Both sides of a discriminant identity, as Legendre symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiscriminantCheck {
    /// `d[B]` by congruence diagonalization of the Gram matrix.
    pub diagonalized: i8,
    /// The top-wedge expression.
    pub wedge: i8,
}

impl DiscriminantCheck {
    pub fn holds(&self) -> bool {
        self.diagonalized == self.wedge
    }
}

/// `d[ω(r^L(−), −)] = (−1)^{C(n,2)}·ω_∧(r_∧^L o_M, o_M)` with `r^L: M → N`.
pub fn discriminant_lemma(space: &SymplecticSpace, n: &OrientedSubspace, m: &OrientedSubspace, l: &OrientedSubspace) -> Result<DiscriminantCheck> {
    require_transverse(space, &[(n, m), (m, l), (n, l)])?;
    let f = space.field();
    let r = residue_map(space, m.sub(), l.sub(), n.sub())?;
    let basis = m.sub().rows();
    let gram: FMat = basis
        .iter()
        .map(|a| {
            let ra = r.apply(a).expect("a ∈ M");
            basis.iter().map(|b| space.form(&ra, b)).collect()
        })
        .collect();
    let diagonalized = discriminant_by_diagonalization(f, &gram)?;
    let w = wedge_pairing_frames(space, &r.wedge_image(&Frame::from(m))?, &Frame::from(m))?;
    let wedge = legendre_symbol(f.mul(f.sign(choose2(space.n())), w), space.p());
    Ok(DiscriminantCheck { diagonalized, wedge })
}

/// Exact field values of both sides of
/// `ω_∧(r_∧^L o_M, o_M) = (−1)^n·ω_∧(o_M,o_N)·ω_∧(o_L,o_M)·ω_∧(o_L,o_N)^{-1}`.
pub fn identity_lemma(space: &SymplecticSpace, n: &OrientedSubspace, m: &OrientedSubspace, l: &OrientedSubspace) -> Result<(u64, u64)> {
    require_transverse(space, &[(n, m), (m, l), (n, l)])?;
    let f = space.field();
    let r = residue_map(space, m.sub(), l.sub(), n.sub())?;
    let lhs = wedge_pairing_frames(space, &r.wedge_image(&Frame::from(m))?, &Frame::from(m))?;
    let ln = f.inv(wedge_pairing(space, l, n)?).ok_or(Error::Degenerate)?;
    let rhs = f.mul(
        f.sign(space.n() as u64),
        f.mul(f.mul(wedge_pairing(space, m, n)?, wedge_pairing(space, l, m)?), ln),
    );
    Ok((lhs, rhs))
}

/// `A(N°,M°,L°)·C(N°,M°,L°)`; equals 1.
pub fn cocycle_product(space: &SymplecticSpace, n: &OrientedSubspace, m: &OrientedSubspace, l: &OrientedSubspace) -> Result<CycNum> {
    let c = cocycle_c(space, n, m, l)?;
    Ok(&normalization_triple(space, n, m, l)? * &c.closed_form)
}

/// Data for a pair `(M°, L°)` with `I = M ∩ L` and a Lagrangian `S`
/// transverse to both; `r^L: M → S` has kernel `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientDiscriminant {
    pub n_i: usize,
    /// `Σ_{m̄ ∈ M/I} ψ(½ω(m̄, r^L m̄))`.
    pub gauss_type_sum: CycNum,
    /// `G₁^{n_I}·σ(d[B])`.
    pub diagonal_form: CycNum,
    pub discriminant: DiscriminantCheck,
}

impl QuotientDiscriminant {
    pub fn holds(&self) -> bool {
        self.gauss_type_sum == self.diagonal_form && self.discriminant.holds()
    }
}

/// `d[B] = (−1)^{C(n_I,2)}·ω_∧(o_{M/I}, r_∧^L o_{M/I})` on `M/I`, with
/// `B(m̄₁, m̄₂) = ω(m̄₁, r^L m̄₂)` and the Gauss-type sum it controls.
pub fn quotient_discriminant_lemma(space: &SymplecticSpace, m: &OrientedSubspace, l: &OrientedSubspace, s: &OrientedSubspace) -> Result<QuotientDiscriminant> {
    require_transverse(space, &[(m, s), (s, l)])?;
    let f = space.field();
    let p = space.p();
    let i = m.sub().intersect(l.sub())?;
    let n_i = space.n() - i.dim();
    let r = residue_map(space, m.sub(), l.sub(), s.sub())?;
    let split = orientation_decompose(m, &i)?;
    let e = &split.quotient.vectors;
    let images: FMat = e.iter().map(|v| r.apply(v)).collect::<Result<_>>()?;
    let gram: FMat = e
        .iter()
        .map(|a| images.iter().map(|rb| space.form(a, rb)).collect())
        .collect();
    let det = if gram.is_empty() { 1 } else { f.det(&gram) };
    let diagonalized = if gram.is_empty() { 1 } else { discriminant_by_diagonalization(f, &gram)? };
    let w = wedge_pairing_frames(space, &split.quotient, &r.wedge_image(&split.quotient)?)?;
    let wedge = legendre_symbol(f.mul(f.sign(choose2(n_i)), w), p);

    let mut counts = vec![0i64; p as usize];
    for mv in m.sub().quotient_by(&i)?.reps() {
        let rm = r.apply(&mv)?;
        counts[f.mul(f.half(), space.form(&mv, &rm)) as usize] += 1;
    }
    let diagonal_form = gauss_sum_for(p, 1)?
        .pow(n_i as u32)
        .scale_int(legendre_symbol(det, p) as i64);
    Ok(QuotientDiscriminant {
        n_i,
        gauss_type_sum: CycNum::from_exponent_counts(p, &counts),
        diagonal_form,
        discriminant: DiscriminantCheck { diagonalized, wedge },
    })
}

/// Exact field values of both sides of
/// `ω_∧(o_{M/I}, r_∧^L o_{M/I}) = (−1)^n·ω_∧(o_{L/I},o_{M/I})·ω_∧(o_S,o_M)·ω_∧(o_L,o_S)^{-1}·ι_L/ι_M`.
pub fn quotient_identity_lemma(space: &SymplecticSpace, m: &OrientedSubspace, l: &OrientedSubspace, s: &OrientedSubspace) -> Result<(u64, u64)> {
    require_transverse(space, &[(m, s), (s, l)])?;
    let f = space.field();
    let i = m.sub().intersect(l.sub())?;
    let r = residue_map(space, m.sub(), l.sub(), s.sub())?;
    let split_m = orientation_decompose(m, &i)?;
    let split_l = orientation_decompose(l, &i)?;
    let lhs = wedge_pairing_frames(space, &split_m.quotient, &r.wedge_image(&split_m.quotient)?)?;
    let ls = f.inv(wedge_pairing(space, l, s)?).ok_or(Error::Degenerate)?;
    let ratio = f.mul(split_l.iota, f.inv(split_m.iota).ok_or(Error::ZeroOrientation)?);
    let rhs = [
        wedge_pairing_frames(space, &split_l.quotient, &split_m.quotient)?,
        wedge_pairing(space, s, m)?,
        ls,
        ratio,
    ]
    .into_iter()
    .fold(f.sign(space.n() as u64), |acc, x| f.mul(acc, x));
    Ok((lhs, rhs))
}
