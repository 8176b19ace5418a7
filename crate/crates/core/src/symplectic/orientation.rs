//! Top-wedge bookkeeping: the pairing `ω_∧` between top exterior powers,
//! residue maps, discriminants of symmetric forms, and the splitting of an
//! orientation along a subspace.

use crate::error::{Error, Result};
use crate::field::{choose2, legendre_symbol, FMat, FVec, PrimeField};

use super::{OrientedSubspace, Subspace, SymplecticSpace};

/// A top-wedge element `scale · (v_1 ∧ … ∧ v_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub vectors: FMat,
    pub scale: u64,
}

impl From<&OrientedSubspace> for Frame {
    fn from(o: &OrientedSubspace) -> Self {
        Frame {
            vectors: o.sub().rows().clone(),
            scale: o.orient(),
        }
    }
}

/// `(−1)^{C(k,2)}` as a field element.
pub fn wedge_sign(field: PrimeField, k: usize) -> u64 {
    field.sign(choose2(k))
}

/// `det[ω(a_i, b_j)]`; the empty determinant is 1.
pub fn det_pairing(space: &SymplecticSpace, a: &[FVec], b: &[FVec]) -> u64 {
    let m: FMat = a
        .iter()
        .map(|x| b.iter().map(|y| space.form(x, y)).collect())
        .collect();
    if m.is_empty() {
        1
    } else {
        space.field().det(&m)
    }
}

/// The pairing `ω_∧` of two top-wedge elements of equal degree `k`:
/// `(−1)^{C(k,2)} · s_a · s_b · det[ω(a_i, b_j)]`.
pub fn wedge_pairing_frames(space: &SymplecticSpace, a: &Frame, b: &Frame) -> Result<u64> {
    if a.vectors.len() != b.vectors.len() {
        return Err(Error::DimensionMismatch {
            expected: a.vectors.len(),
            found: b.vectors.len(),
        });
    }
    let f = space.field();
    let k = a.vectors.len();
    let det = det_pairing(space, &a.vectors, &b.vectors);
    Ok(f.mul(wedge_sign(f, k), f.mul(f.mul(a.scale, b.scale), det)))
}

/// `ω_∧(o_L, o_M)`.
pub fn wedge_pairing(space: &SymplecticSpace, l: &OrientedSubspace, m: &OrientedSubspace) -> Result<u64> {
    wedge_pairing_frames(space, &l.into(), &m.into())
}

/// The linear map `r: M → N` characterized by `r(m) − m ∈ L`.
#[derive(Clone, Debug)]
pub struct ResidueMap {
    source: Subspace,
    images: FMat,
}

impl ResidueMap {
    pub fn source(&self) -> &Subspace {
        &self.source
    }

    /// Images of the RREF basis rows of the source.
    pub fn images(&self) -> &FMat {
        &self.images
    }

    pub fn apply(&self, v: &[u64]) -> Result<FVec> {
        let x = self.source.coords(v).ok_or(Error::NotContained)?;
        let f = self.source.field();
        let mut out = vec![0; v.len()];
        for (c, img) in x.iter().zip(&self.images) {
            f.axpy(&mut out, *c, img);
        }
        Ok(out)
    }

    /// `r_∧(o_M)` as a frame in the target.
    pub fn wedge_image(&self, o: &Frame) -> Result<Frame> {
        let images = o
            .vectors
            .iter()
            .map(|v| self.apply(v))
            .collect::<Result<FMat>>()?;
        Ok(Frame {
            vectors: images,
            scale: o.scale,
        })
    }
}

/// Residue map `r^L: M → N`. Requires `V = N ⊕ L`.
pub fn residue_map(space: &SymplecticSpace, m: &Subspace, l: &Subspace, n: &Subspace) -> Result<ResidueMap> {
    if n.dim() + l.dim() != space.dim() || !space.in_general_position(n, l) {
        return Err(Error::NotTransverse("residue target must complement L".into()));
    }
    let f = space.field();
    let mut basis = n.rows().clone();
    basis.extend(l.rows().iter().cloned());
    let k = n.dim();
    let images = m
        .rows()
        .iter()
        .map(|row| {
            let x = f.coords(&basis, row).expect("N ⊕ L spans V");
            let mut img = vec![0; space.dim()];
            for (c, b) in x[..k].iter().zip(n.rows()) {
                f.axpy(&mut img, *c, b);
            }
            img
        })
        .collect();
    Ok(ResidueMap {
        source: m.clone(),
        images,
    })
}

fn check_symmetric(field: PrimeField, form: &FMat) -> Result<()> {
    let k = form.len();
    if form.iter().any(|r| r.len() != k) {
        return Err(Error::InvalidForm("form must be square".into()));
    }
    for i in 0..k {
        for j in 0..k {
            if form[i][j] % field.p() != form[j][i] % field.p() {
                return Err(Error::InvalidForm("form is not symmetric".into()));
            }
        }
    }
    Ok(())
}

/// Discriminant of a nondegenerate symmetric form: `σ(det)`.
pub fn discriminant(field: PrimeField, form: &FMat) -> Result<i8> {
    check_symmetric(field, form)?;
    if form.is_empty() {
        return Ok(1);
    }
    match legendre_symbol(field.det(form), field.p()) {
        0 => Err(Error::Degenerate),
        s => Ok(s),
    }
}

/// Discriminant computed by congruence diagonalization: the class of the
/// product of the diagonal entries.
pub fn discriminant_by_diagonalization(field: PrimeField, form: &FMat) -> Result<i8> {
    check_symmetric(field, form)?;
    let n = form.len();
    let mut a: FMat = form.iter().map(|r| r.iter().map(|x| x % field.p()).collect()).collect();
    let mut prod = 1;
    for k in 0..n {
        if a[k][k] == 0 {
            if let Some(i) = (k + 1..n).find(|&i| a[i][i] != 0) {
                swap_basis(&mut a, i, k);
            } else {
                let pair = (k..n)
                    .flat_map(|i| (k..n).map(move |j| (i, j)))
                    .find(|&(i, j)| i != j && a[i][j] != 0);
                let Some((i, j)) = pair else {
                    return Err(Error::Degenerate);
                };
                // e_i ← e_i + e_j makes the diagonal entry 2·a_ij
                add_basis(field, &mut a, i, j);
                swap_basis(&mut a, i, k);
            }
        }
        let pivot = a[k][k];
        let inv = field.inv(pivot).expect("nonzero pivot");
        for i in k + 1..n {
            if a[i][k] != 0 {
                let c = field.neg(field.mul(a[i][k], inv));
                // e_i ← e_i + c·e_k
                let row_k = a[k].clone();
                field.axpy(&mut a[i], c, &row_k);
                for row in a.iter_mut() {
                    row[i] = field.add(row[i], field.mul(c, row[k]));
                }
            }
        }
        prod = field.mul(prod, pivot);
    }
    Ok(legendre_symbol(prod, field.p()))
}

fn swap_basis(a: &mut FMat, i: usize, j: usize) {
    a.swap(i, j);
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

fn add_basis(field: PrimeField, a: &mut FMat, i: usize, j: usize) {
    let row_j = a[j].clone();
    field.axpy(&mut a[i], 1, &row_j);
    for row in a.iter_mut() {
        row[i] = field.add(row[i], row[j]);
    }
}

/// `o_M = ι_M ⊗ o_{M/I}` with `ι_M` measured against the RREF wedge of `I`
/// and `o_{M/I}` carried by a frame of lifts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientationSplit {
    pub intersection: Subspace,
    pub iota: u64,
    pub quotient: Frame,
}

impl OrientationSplit {
    /// Moves a factor `t` from `ι` onto the quotient orientation.
    pub fn regauged(&self, t: u64) -> Result<Self> {
        let f = self.intersection.field();
        let t_inv = f.inv(t).ok_or(Error::ZeroOrientation)?;
        Ok(OrientationSplit {
            intersection: self.intersection.clone(),
            iota: f.mul(self.iota, t_inv),
            quotient: Frame {
                vectors: self.quotient.vectors.clone(),
                scale: f.mul(self.quotient.scale, t),
            },
        })
    }
}

/// Splits the orientation of `M°` along `I ⊆ M`.
///
/// The basis of `I` is its RREF basis; the completion is the greedy choice of
/// RREF rows of `M` outside the running span. All change-of-basis scale is
/// pushed into `ι`, the quotient frame carries scale 1. For `I = 0` the
/// split is `ι = 1`, `o_{M/I} = o_M`.
pub fn orientation_decompose(m: &OrientedSubspace, i: &Subspace) -> Result<OrientationSplit> {
    if !i.is_subspace_of(m.sub()) {
        return Err(Error::NotContained);
    }
    let f = m.sub().field();
    let mut running = i.clone();
    let mut completion = Vec::new();
    for row in m.sub().rows() {
        if !running.contains(row) {
            completion.push(row.clone());
            running = running.sum(&Subspace::span(f.p(), row.len(), std::slice::from_ref(row))?)?;
        }
    }
    let change: FMat = i
        .rows()
        .iter()
        .chain(&completion)
        .map(|v| m.sub().coords(v).expect("vector lies in M"))
        .collect();
    let det = if change.is_empty() { 1 } else { f.det(&change) };
    let iota = f.mul(m.orient(), f.inv(det).expect("basis change is invertible"));
    let split = OrientationSplit {
        intersection: i.clone(),
        iota,
        quotient: Frame {
            vectors: completion,
            scale: 1,
        },
    };
    if i.dim() == 0 {
        // nothing to measure against: keep the whole orientation on M/I
        return split.regauged(iota);
    }
    Ok(split)
}
