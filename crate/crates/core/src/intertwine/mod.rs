//! Canonical intertwining operators `T_{M°,L°} = A_{M°,L°}·F_{M°,L°}` between
//! models, the cocycle of the averaging operators, and the kernel calculus.

mod kernel;
mod lemmas;

pub use kernel::{ansatz_kernel, convolve, kernel_of, kernel_ops, transform, transform_matrix, Kernel, KernelOp, KernelOutput};
pub use lemmas::{
    cocycle_product, discriminant_lemma, identity_lemma, quotient_discriminant_lemma, quotient_identity_lemma,
    DiscriminantCheck, QuotientDiscriminant,
};

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::json;

use crate::cyclotomic::{gauss_sum_for, CycNum, Rational};
use crate::error::{Error, Result};
use crate::field::{choose2, legendre_symbol};
use crate::heisenberg::{mul_unchecked, HeisElement, Model, ModelVector};
use crate::matrix::CycMatrix;
use crate::symplectic::{
    det_pairing, orientation_decompose, residue_map, wedge_pairing, wedge_pairing_frames, Frame,
    OrientedSubspace, SymplecticSpace,
};

/// How `ω_∧` is realized when evaluating normalization constants.
///
/// `Signed` is `(−1)^{C(k,2)}·o·o′·det[ω(b_i, b′_j)]`, the convention under
/// which the discriminant lemma and multiplicativity hold. `PlainDet` drops
/// the sign and is kept only to demonstrate that it breaks multiplicativity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum WedgeConvention {
    Signed,
    PlainDet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TMethod {
    ClosedForm,
    Chained,
}

fn check_models(target: &Model, source: &Model) -> Result<()> {
    if target.space() != source.space() || target.chi() != source.chi() {
        return Err(Error::ModelMismatch("models over different spaces or characters".into()));
    }
    Ok(())
}

/// `F_{M°,L°}[f](h) = Σ_{m̄ ∈ M/I} f(m·h)` with `I = M ∩ L`, as a matrix
/// from the basis of `source` to the basis of `target`.
pub fn averaging_matrix(target: &Model, source: &Model) -> Result<CycMatrix> {
    check_models(target, source)?;
    let space = target.space();
    let (m, l) = (target.label().sub(), source.label().sub());
    let i = m.intersect(l)?;
    let lifts = m.quotient_by(&i)?.reps();
    let p = space.p();
    let (rows, cols) = (target.dim(), source.dim());
    let data: Vec<Vec<CycNum>> = target
        .reps()
        .par_iter()
        .map(|r| {
            let mut counts = vec![vec![0i64; p as usize]; cols];
            let rh = HeisElement::section(r.clone());
            for mv in &lifts {
                let h = mul_unchecked(space, &HeisElement::section(mv.clone()), &rh);
                let (j, e) = source.locate(&h);
                counts[j][e as usize] += 1;
            }
            counts
                .iter()
                .map(|c| {
                    if c.iter().all(|&x| x == 0) {
                        CycNum::zero(p)
                    } else {
                        CycNum::from_exponent_counts(p, c)
                    }
                })
                .collect()
        })
        .collect();
    debug_assert_eq!(data.len(), rows);
    CycMatrix::from_rows(p, data)
}

/// Applies the averaging operator to a vector.
pub fn averaging(target: &Arc<Model>, f: &ModelVector) -> Result<ModelVector> {
    let mat = averaging_matrix(target, f.model())?;
    ModelVector::new(target.clone(), mat.apply(f.values()))
}

fn wedge(space: &SymplecticSpace, a: &Frame, b: &Frame, convention: WedgeConvention) -> Result<u64> {
    match convention {
        WedgeConvention::Signed => wedge_pairing_frames(space, a, b),
        WedgeConvention::PlainDet => {
            let f = space.field();
            let signed = wedge_pairing_frames(space, a, b)?;
            Ok(f.mul(signed, crate::symplectic::wedge_sign(f, a.vectors.len())))
        }
    }
}

/// The σ-argument `(−1)^{C(n_I,2)}·(ι_L/ι_M)·ω_∧(o_{L/I}, o_{M/I})` and `n_I`.
pub fn normalization_argument(
    space: &SymplecticSpace,
    m: &OrientedSubspace,
    l: &OrientedSubspace,
    convention: WedgeConvention,
) -> Result<(u64, usize)> {
    let f = space.field();
    let i = m.sub().intersect(l.sub())?;
    let n_i = space.n() - i.dim();
    let split_m = orientation_decompose(m, &i)?;
    let split_l = orientation_decompose(l, &i)?;
    let w = wedge(space, &split_l.quotient, &split_m.quotient, convention)?;
    let ratio = f.mul(split_l.iota, f.inv(split_m.iota).ok_or(Error::ZeroOrientation)?);
    Ok((f.mul(f.sign(choose2(n_i)), f.mul(ratio, w)), n_i))
}

/// `(G₁/q)^k` for the character `ψ_χ`.
pub fn gauss_factor(p: u64, chi: u64, k: usize) -> Result<CycNum> {
    let g = gauss_sum_for(p, chi)?;
    let q_inv = Rational::new(BigInt::from(1), BigInt::from(p));
    Ok(g.scale(&q_inv).pow(k as u32))
}

/// `A_{M°,L°}` for the standard character.
pub fn normalization(space: &SymplecticSpace, m: &OrientedSubspace, l: &OrientedSubspace) -> Result<CycNum> {
    normalization_with(space, m, l, 1, WedgeConvention::Signed)
}

pub fn normalization_with(
    space: &SymplecticSpace,
    m: &OrientedSubspace,
    l: &OrientedSubspace,
    chi: u64,
    convention: WedgeConvention,
) -> Result<CycNum> {
    for x in [m, l] {
        if !space.is_lagrangian(x.sub()) {
            return Err(Error::NotLagrangian);
        }
    }
    let (arg, n_i) = normalization_argument(space, m, l, convention)?;
    let s = legendre_symbol(arg, space.p());
    if s == 0 {
        return Err(Error::Internal("normalization argument vanished".into()));
    }
    Ok(gauss_factor(space.p(), chi, n_i)?.scale_int(s as i64))
}

/// `A·F` in the bases of the two models.
pub fn closed_form_matrix(target: &Model, source: &Model) -> Result<CycMatrix> {
    closed_form_matrix_with(target, source, WedgeConvention::Signed)
}

pub fn closed_form_matrix_with(target: &Model, source: &Model, convention: WedgeConvention) -> Result<CycMatrix> {
    let a = normalization_with(target.space(), target.label(), source.label(), source.chi(), convention)?;
    Ok(averaging_matrix(target, source)?.scale(&a))
}

/// `T_{M°,S°}·T_{S°,L°}`; the middle must be transverse to both ends.
pub fn chained_matrix_via(target: &Model, middle: &Model, source: &Model) -> Result<CycMatrix> {
    let space = target.space();
    for end in [target, source] {
        if !space.in_general_position(middle.label().sub(), end.label().sub()) {
            return Err(Error::NotTransverse("middle Lagrangian must be transverse to both ends".into()));
        }
    }
    Ok(closed_form_matrix(target, middle)?.mul(&closed_form_matrix(middle, source)?))
}

/// The chained extension through the first Lagrangian (canonical order,
/// orientation 1) transverse to both ends.
pub fn chained_matrix(target: &Model, source: &Model) -> Result<CycMatrix> {
    let space = target.space();
    let s = space
        .transverse_lagrangian(&[target.label().sub(), source.label().sub()])
        .map_err(|_| Error::Internal("no transverse middle Lagrangian".into()))?;
    let middle = Model::with_character(space, &s, source.chi())?;
    chained_matrix_via(target, &middle, source)
}

/// An intertwining operator between two models.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Intertwiner {
    source: Arc<Model>,
    target: Arc<Model>,
    mat: CycMatrix,
}

impl Intertwiner {
    pub fn new(source: Arc<Model>, target: Arc<Model>, mat: CycMatrix) -> Result<Self> {
        if mat.rows() != target.dim() || mat.cols() != source.dim() {
            return Err(Error::DimensionMismatch {
                expected: target.dim(),
                found: mat.rows(),
            });
        }
        Ok(Intertwiner { source, target, mat })
    }

    pub fn source(&self) -> &Arc<Model> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Model> {
        &self.target
    }

    pub fn matrix(&self) -> &CycMatrix {
        &self.mat
    }

    pub fn apply(&self, f: &ModelVector) -> Result<ModelVector> {
        if !self.source.same_functions(f.model()) {
            return Err(Error::ModelMismatch("vector is not in the source model".into()));
        }
        ModelVector::new(self.target.clone(), self.mat.apply(f.values()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Intertwiner) -> Result<Intertwiner> {
        if !self.source.same_functions(&other.target) {
            return Err(Error::ModelMismatch("composition through different models".into()));
        }
        Intertwiner::new(other.source.clone(), self.target.clone(), self.mat.mul(&other.mat))
    }

    /// Whether `T·π_L(h) = π_M(h)·T` for every given `h`.
    pub fn intertwines(&self, elements: &[HeisElement]) -> bool {
        elements.par_iter().all(|h| {
            let left = self.mat.mul(&self.source.pi_matrix(h));
            let right = self.target.pi_matrix(h).mul(&self.mat);
            left == right
        })
    }

    pub fn to_json(&self, float: bool) -> serde_json::Value {
        let mut doc = json!({
            "p": self.source.p(),
            "n": self.source.space().n(),
            "source": self.source.label().to_string(),
            "target": self.target.label().to_string(),
            "basis": self.source.reps(),
            "target_basis": self.target.reps(),
            "matrix": self.mat,
        });
        if float {
            doc["float_matrix"] = json!(self.mat.to_float_rows());
        }
        doc
    }
}

/// `T_{M°,L°}` for the standard character.
pub fn canonical_t(space: &SymplecticSpace, m: &OrientedSubspace, l: &OrientedSubspace, method: TMethod) -> Result<Intertwiner> {
    let target = Arc::new(Model::new(space, m)?);
    let source = Arc::new(Model::new(space, l)?);
    let mat = match method {
        TMethod::ClosedForm => closed_form_matrix(&target, &source)?,
        TMethod::Chained => chained_matrix(&target, &source)?,
    };
    Intertwiner::new(source, target, mat)
}

/// The averaging cocycle of a pairwise transverse triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cocycle {
    /// `G₁^n·σ((−1)^{C(n,2)}·ω_∧(r_∧^L(o_M), o_M))`.
    pub closed_form: CycNum,
    /// `F_{N°,M°}∘F_{M°,L°}(δ_L)(0)`.
    pub direct: CycNum,
    /// `Σ_{m ∈ M} ψ(½ω(r^L(m), m))`.
    pub gauss_type_sum: CycNum,
}

pub fn cocycle_c(space: &SymplecticSpace, n: &OrientedSubspace, m: &OrientedSubspace, l: &OrientedSubspace) -> Result<Cocycle> {
    for (a, b) in [(n, m), (m, l), (n, l)] {
        if !space.in_general_position(a.sub(), b.sub()) {
            return Err(Error::NotTransverse("cocycle needs a pairwise transverse triple".into()));
        }
    }
    let f = space.field();
    let p = space.p();
    let r = residue_map(space, m.sub(), l.sub(), n.sub())?;
    let image = r.wedge_image(&Frame::from(m))?;
    let w = wedge_pairing_frames(space, &image, &Frame::from(m))?;
    let s = legendre_symbol(f.mul(f.sign(choose2(space.n())), w), p);
    let closed_form = gauss_sum_for(p, 1)?.pow(space.n() as u32).scale_int(s as i64);

    let (mn, mm, ml) = (Model::new(space, n)?, Model::new(space, m)?, Model::new(space, l)?);
    let product = averaging_matrix(&mn, &mm)?.mul(&averaging_matrix(&mm, &ml)?);
    let direct = product[(0, 0)].clone();

    let mut counts = vec![0i64; p as usize];
    let zero = crate::symplectic::Subspace::zero(p, space.dim());
    for mv in m.sub().quotient_by(&zero)?.reps() {
        let rm = r.apply(&mv)?;
        counts[f.mul(f.half(), space.form(&rm, &mv)) as usize] += 1;
    }
    Ok(Cocycle {
        closed_form,
        direct,
        gauss_type_sum: CycNum::from_exponent_counts(p, &counts),
    })
}

/// `A(N°,M°,L°) = A_{N°,M°}·A_{M°,L°}·A_{N°,L°}^{-1}`.
pub fn normalization_triple(space: &SymplecticSpace, n: &OrientedSubspace, m: &OrientedSubspace, l: &OrientedSubspace) -> Result<CycNum> {
    let a = &normalization(space, n, m)? * &normalization(space, m, l)?;
    a.checked_div(&normalization(space, n, l)?)
}

/// Thread-safe cache of models and closed-form intertwiners over one space
/// and central character.
#[derive(Debug)]
pub struct Transport {
    space: SymplecticSpace,
    chi: u64,
    models: Mutex<HashMap<OrientedSubspace, Arc<Model>>>,
    mats: Mutex<HashMap<(OrientedSubspace, OrientedSubspace), Arc<CycMatrix>>>,
}

impl Transport {
    pub fn new(space: &SymplecticSpace) -> Self {
        Self::with_character(space, 1)
    }

    pub fn with_character(space: &SymplecticSpace, chi: u64) -> Self {
        Transport {
            space: space.clone(),
            chi: chi % space.p(),
            models: Mutex::new(HashMap::new()),
            mats: Mutex::new(HashMap::new()),
        }
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn chi(&self) -> u64 {
        self.chi
    }

    pub fn model(&self, l: &OrientedSubspace) -> Result<Arc<Model>> {
        if let Some(m) = self.models.lock().expect("poisoned").get(l) {
            return Ok(m.clone());
        }
        let m = Arc::new(Model::with_character(&self.space, l, self.chi)?);
        self.models.lock().expect("poisoned").insert(l.clone(), m.clone());
        Ok(m)
    }

    /// Closed-form `T_{M°,L°}`.
    pub fn t(&self, m: &OrientedSubspace, l: &OrientedSubspace) -> Result<Arc<CycMatrix>> {
        let key = (m.clone(), l.clone());
        if let Some(t) = self.mats.lock().expect("poisoned").get(&key) {
            return Ok(t.clone());
        }
        let t = Arc::new(closed_form_matrix(&*self.model(m)?, &*self.model(l)?)?);
        self.mats.lock().expect("poisoned").insert(key, t.clone());
        Ok(t)
    }

    pub fn intertwiner(&self, m: &OrientedSubspace, l: &OrientedSubspace) -> Result<Intertwiner> {
        Intertwiner::new(self.model(l)?, self.model(m)?, (*self.t(m, l)?).clone())
    }
}

/// `ω_∧(o_L, o_M)` through the public pairing, re-exported for oracles.
pub fn omega_wedge(space: &SymplecticSpace, l: &OrientedSubspace, m: &OrientedSubspace) -> Result<u64> {
    wedge_pairing(space, l, m)
}

/// `det[ω(l_i, m_j)]` on RREF rows.
pub fn raw_pairing(space: &SymplecticSpace, l: &OrientedSubspace, m: &OrientedSubspace) -> u64 {
    det_pairing(space, l.sub().rows(), m.sub().rows())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::gauss_sum;

    fn lag(space: &SymplecticSpace, rows: &[Vec<u64>], o: u64) -> OrientedSubspace {
        OrientedSubspace::new(space.subspace(rows).unwrap(), o).unwrap()
    }

    #[test]
    fn normalization_examples() {
        let v = SymplecticSpace::standard(3, 1).unwrap();
        let l = lag(&v, &[vec![1, 0]], 1);
        let m = lag(&v, &[vec![0, 1]], 1);
        let expected = gauss_sum(3).unwrap().scale(&Rational::new(1.into(), 3.into()));
        assert_eq!(normalization(&v, &m, &l).unwrap(), expected);
        assert!(normalization(&v, &l, &l).unwrap().is_one());
        // o_M = 2·o_L on the same line: σ(2) = −1 at p = 3
        let l2 = lag(&v, &[vec![1, 0]], 2);
        assert_eq!(normalization(&v, &l2, &l).unwrap(), CycNum::from_int(3, -1));
    }

    #[test]
    fn identity_on_the_diagonal() {
        let v = SymplecticSpace::standard(3, 2).unwrap();
        for l in v.oriented_lagrangians().unwrap().iter().step_by(11) {
            let t = canonical_t(&v, l, l, TMethod::ClosedForm).unwrap();
            assert!(t.matrix().is_identity());
        }
    }

    #[test]
    fn transverse_round_trip() {
        let v = SymplecticSpace::standard(5, 1).unwrap();
        let l = lag(&v, &[vec![1, 0]], 3);
        let m = lag(&v, &[vec![2, 1]], 1);
        let tml = canonical_t(&v, &m, &l, TMethod::ClosedForm).unwrap();
        let tlm = canonical_t(&v, &l, &m, TMethod::ClosedForm).unwrap();
        assert!(tlm.compose(&tml).unwrap().matrix().is_identity());
        assert!(tml.intertwines(&crate::heisenberg::heis_generators(&v)));
    }

    #[test]
    fn cocycle_three_term_example() {
        let v = SymplecticSpace::standard(3, 1).unwrap();
        let n = lag(&v, &[vec![0, 1]], 1);
        let m = lag(&v, &[vec![1, 1]], 1);
        let l = lag(&v, &[vec![1, 0]], 1);
        let c = cocycle_c(&v, &n, &m, &l).unwrap();
        // r^L(t·(1,1)) = t·(0,1); ½ω(t(0,1), t(1,1)) = −½t² = t² at p = 3
        let mut counts = vec![0i64; 3];
        for t in 0..3u64 {
            counts[((t * t) % 3) as usize] += 1;
        }
        let oracle = CycNum::from_exponent_counts(3, &counts);
        assert_eq!(c.gauss_type_sum, oracle);
        assert_eq!(c.direct, oracle);
        assert_eq!(c.closed_form, oracle);
    }
}
