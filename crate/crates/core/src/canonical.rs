//! The canonical space `H(V)` of horizontal sections, the linear Weil
//! representation, the total idempotent, and the product / duality /
//! reduction compatibilities.
//!
//! A horizontal section is determined by its component at one oriented
//! Lagrangian; components elsewhere are produced by transport,
//! `v_{L°} = T_{L°,B°}(v_{B°})`.

use std::sync::Arc;

use rayon::prelude::*;
use serde_json::json;

use crate::cyclotomic::{CycNum, Rational};
use crate::error::{Error, Result};
use crate::heisenberg::{HeisElement, Model, ModelVector};
use crate::intertwine::Transport;
use crate::matrix::CycMatrix;
use crate::symplectic::{
    symplectic_reduction, OrientedSubspace, SpElement, SymplecticMap, SymplecticReduction,
    SymplecticSpace,
};

/// `span{e_1..e_n}` with orientation `e_1 ∧ … ∧ e_n`.
pub fn base_lagrangian(space: &SymplecticSpace) -> OrientedSubspace {
    let rows: Vec<Vec<u64>> = (0..space.n()).map(|i| space.basis_vector(i)).collect();
    let sub = space.subspace(&rows).expect("basis vectors");
    OrientedSubspace::new(sub, 1).expect("1 ≠ 0")
}

#[derive(Debug)]
pub struct CanonicalSpace {
    base: OrientedSubspace,
    transport: Transport,
}

impl CanonicalSpace {
    pub fn new(space: &SymplecticSpace) -> Result<Arc<Self>> {
        Self::with_base(space, &base_lagrangian(space), 1)
    }

    pub fn with_base(space: &SymplecticSpace, base: &OrientedSubspace, chi: u64) -> Result<Arc<Self>> {
        if !space.is_lagrangian(base.sub()) {
            return Err(Error::NotLagrangian);
        }
        Ok(Arc::new(CanonicalSpace {
            base: base.clone(),
            transport: Transport::with_character(space, chi),
        }))
    }

    pub fn space(&self) -> &SymplecticSpace {
        self.transport.space()
    }

    pub fn base(&self) -> &OrientedSubspace {
        &self.base
    }

    pub fn chi(&self) -> u64 {
        self.transport.chi()
    }

    pub fn transport(&self) -> &Transport {
        &self.transport
    }

    pub fn model(&self, l: &OrientedSubspace) -> Result<Arc<Model>> {
        self.transport.model(l)
    }

    pub fn base_model(&self) -> Arc<Model> {
        self.transport.model(&self.base).expect("base is Lagrangian")
    }

    pub fn dim(&self) -> usize {
        (self.space().p() as usize).pow(self.space().n() as u32)
    }

    /// `T_{M°,L°}`.
    pub fn t(&self, m: &OrientedSubspace, l: &OrientedSubspace) -> Result<Arc<CycMatrix>> {
        self.transport.t(m, l)
    }
}

#[derive(Clone, Debug)]
pub struct CanonicalVector {
    holder: Arc<CanonicalSpace>,
    value: ModelVector,
}

impl CanonicalVector {
    pub fn new(holder: &Arc<CanonicalSpace>, values: Vec<CycNum>) -> Result<Self> {
        let value = ModelVector::new(holder.base_model(), values)?;
        Ok(CanonicalVector {
            holder: holder.clone(),
            value,
        })
    }

    /// The section whose `L°`-component is `f`.
    pub fn from_component(holder: &Arc<CanonicalSpace>, f: &ModelVector) -> Result<Self> {
        let l = f.model().label().clone();
        if !f.model().same_functions(&*holder.model(&l)?) {
            return Err(Error::ModelMismatch("component is not in a model of this space".into()));
        }
        let t = holder.t(holder.base(), &l)?;
        Self::new(holder, t.apply(f.values()))
    }

    pub fn holder(&self) -> &Arc<CanonicalSpace> {
        &self.holder
    }

    pub fn value_at_base(&self) -> &ModelVector {
        &self.value
    }

    pub fn component(&self, l: &OrientedSubspace) -> Result<ModelVector> {
        let t = self.holder.t(l, self.holder.base())?;
        ModelVector::new(self.holder.model(l)?, t.apply(self.value.values()))
    }
}

/// `r*: H_{s(L°)}(V₂) → H_{L°}(V₁)` for `r(v,z) = (f v, z)`, where
/// `s(L°) = f(L°)` with the transported orientation. Returns `s(L°)` too.
pub fn pullback_matrix(f: &SymplecticMap, l: &OrientedSubspace, chi: u64) -> Result<(OrientedSubspace, CycMatrix)> {
    let image = f.act_on_lagrangian(l)?;
    let target_model = Model::with_character(f.target(), &image, chi)?;
    let source_model = Model::with_character(f.source(), l, chi)?;
    let points: Vec<HeisElement> = source_model
        .reps()
        .iter()
        .map(|r| HeisElement::section(f.apply(r)))
        .collect();
    Ok((image, target_model.evaluation_matrix(&points)))
}

/// `(r*u)(h) = u(r(h))`.
pub fn pullback(f: &SymplecticMap, l: &OrientedSubspace, u: &ModelVector) -> Result<ModelVector> {
    let chi = u.model().chi();
    let (image, mat) = pullback_matrix(f, l, chi)?;
    if u.model().label().sub() != image.sub() {
        return Err(Error::ModelMismatch("vector is not in the model of s(L°)".into()));
    }
    ModelVector::new(Arc::new(Model::with_character(f.source(), l, chi)?), mat.apply(u.values()))
}

/// `H(f): H(V₂) → H(V₁)` on base components:
/// `v ↦ r*_{B₁}(T_{f(B₁)°, B₂}(v))`.
pub fn functor_matrix(f: &SymplecticMap, c1: &CanonicalSpace, c2: &CanonicalSpace) -> Result<CycMatrix> {
    if f.source() != c1.space() || f.target() != c2.space() || c1.chi() != c2.chi() {
        return Err(Error::ModelMismatch("map does not match the canonical spaces".into()));
    }
    let (image, r) = pullback_matrix(f, c1.base(), c1.chi())?;
    Ok(r.mul(&*c2.t(&image, c2.base())?))
}

/// `ρ(g)` on `H_{B°}`.
#[derive(Clone, Debug)]
pub struct WeilMatrix {
    pub g: SpElement,
    pub mat: CycMatrix,
}

impl WeilMatrix {
    pub fn to_json(&self, holder: &CanonicalSpace, float: bool) -> serde_json::Value {
        let mut doc = json!({
            "p": holder.space().p(),
            "n": holder.space().n(),
            "g": self.g.mat(),
            "source": holder.base().to_string(),
            "target": holder.base().to_string(),
            "basis": holder.base_model().reps(),
            "matrix": self.mat,
        });
        if float {
            doc["float_matrix"] = json!(self.mat.to_float_rows());
        }
        doc
    }
}

/// `ρ(g) = H(g^{-1}) = r*_{B°} ∘ T_{g^{-1}B°, B°}` with `r(v,z) = (g^{-1}v, z)`.
/// This direction gives `ρ(g)π(h)ρ(g)^{-1} = π(g·h)`.
pub fn weil_rep(holder: &CanonicalSpace, g: &SpElement) -> Result<WeilMatrix> {
    let mat = functor_matrix(&g.inverse(), holder, holder)?;
    Ok(WeilMatrix { g: g.clone(), mat })
}

/// The total Fourier transform on `Γ = ⊕_{L°} H_{L°}` with blocks
/// `T_{M°,L°}/#OLag`.
#[derive(Clone, Debug)]
pub struct TotalIdempotent {
    pub lagrangians: Vec<OrientedSubspace>,
    pub block: usize,
    pub matrix: CycMatrix,
}

pub fn total_idempotent(space: &SymplecticSpace) -> Result<TotalIdempotent> {
    let holder = CanonicalSpace::new(space)?;
    let lags = space.oriented_lagrangians()?;
    let k = lags.len();
    let block = holder.dim();
    let inv = Rational::new(1.into(), (k as i64).into());
    let blocks: Vec<Vec<CycMatrix>> = lags
        .par_iter()
        .map(|m| lags.iter().map(|l| holder.t(m, l).map(|t| t.scale_rational(&inv))).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let matrix = CycMatrix::from_fn(space.p(), k * block, k * block, |i, j| {
        blocks[i / block][j / block][(i % block, j % block)].clone()
    });
    Ok(TotalIdempotent {
        lagrangians: lags,
        block,
        matrix,
    })
}

/// The action of `g` on `Γ`: `(g·v)_{L°} = r*_{L°}(v_{gL°})` with
/// `r(v,z) = (g v, z)`.
pub fn gamma_action(space: &SymplecticSpace, lags: &[OrientedSubspace], g: &SpElement) -> Result<CycMatrix> {
    let p = space.p();
    let block = (p as usize).pow(space.n() as u32);
    let k = lags.len();
    let mut out = CycMatrix::zeros(p, k * block, k * block);
    for (a, l) in lags.iter().enumerate() {
        let (image, r) = pullback_matrix(g, l, 1)?;
        let b = lags
            .iter()
            .position(|x| *x == image)
            .ok_or(Error::Internal("image Lagrangian not enumerated".into()))?;
        for i in 0..block {
            for j in 0..block {
                out[(a * block + i, b * block + j)] = r[(i, j)].clone();
            }
        }
    }
    Ok(out)
}

/// `α: H(V₁×V₂) ≅ H(V₁)⊗H(V₂)` at the base points, with the product base
/// `s(B₁°, B₂°) = (B₁ × B₂, o₁ ∧ o₂)`.
#[derive(Debug)]
pub struct TensorIso {
    pub product: Arc<CanonicalSpace>,
    pub alpha: CycMatrix,
}

pub fn product_lagrangian(v1: &SymplecticSpace, l1: &OrientedSubspace, v2: &SymplecticSpace, l2: &OrientedSubspace) -> Result<OrientedSubspace> {
    let (d1, d2) = (v1.dim(), v2.dim());
    let mut frame: Vec<Vec<u64>> = l1
        .sub()
        .rows()
        .iter()
        .map(|r| r.iter().copied().chain(std::iter::repeat_n(0, d2)).collect())
        .collect();
    frame.extend(l2.sub().rows().iter().map(|r| std::iter::repeat_n(0, d1).chain(r.iter().copied()).collect()));
    OrientedSubspace::from_frame(v1.p(), d1 + d2, &frame, v1.field().mul(l1.orient(), l2.orient()))
}

pub fn tensor_iso(c1: &CanonicalSpace, c2: &CanonicalSpace) -> Result<TensorIso> {
    let (v1, v2) = (c1.space(), c2.space());
    let w = v1.product(v2)?;
    let base = product_lagrangian(v1, c1.base(), v2, c2.base())?;
    let product = CanonicalSpace::with_base(&w, &base, c1.chi())?;
    let (m1, m2) = (c1.base_model(), c2.base_model());
    // α(f)(r_i, r_j) = f(((r_i, r_j), 0)), row index i·dim₂ + j
    let points: Vec<HeisElement> = m1
        .reps()
        .iter()
        .flat_map(|a| m2.reps().iter().map(move |b| HeisElement::section(a.iter().chain(b).copied().collect())))
        .collect();
    let alpha = product.base_model().evaluation_matrix(&points);
    Ok(TensorIso { product, alpha })
}

impl TensorIso {
    pub fn apply(&self, v: &CanonicalVector) -> Result<Vec<CycNum>> {
        if !Arc::ptr_eq(v.holder(), &self.product) {
            return Err(Error::ModelMismatch("vector is not in the product space".into()));
        }
        Ok(self.alpha.apply(v.value_at_base().values()))
    }
}

/// The canonical space of `V̄ = (V, −ω)` with the same base Lagrangian.
pub fn dual_space(holder: &CanonicalSpace) -> Result<Arc<CanonicalSpace>> {
    CanonicalSpace::with_base(&holder.space().dual(), holder.base(), holder.chi())
}

/// `⟨a, b⟩ = Σ_{v ∈ V/L} a_{L°}(v)·b_{L°}(v)` evaluated at `L°`.
pub fn duality_pairing(a: &CanonicalVector, b: &CanonicalVector, at: &OrientedSubspace) -> Result<CycNum> {
    if a.holder().space() != &b.holder().space().dual() {
        return Err(Error::ModelMismatch("first argument must live on the dual space".into()));
    }
    let (fa, fb) = (a.component(at)?, b.component(at)?);
    Ok(fa
        .values()
        .iter()
        .zip(fb.values())
        .fold(CycNum::zero(a.holder().space().p()), |acc, (x, y)| &acc + &(x * y)))
}

/// Gram matrix of the pairing in the base bases, evaluated at `L°`:
/// `T̄_{L°,B°}ᵀ·T_{L°,B°}`.
pub fn duality_gram(dual: &CanonicalSpace, primal: &CanonicalSpace, at: &OrientedSubspace) -> Result<CycMatrix> {
    let ta = dual.t(at, dual.base())?;
    let tb = primal.t(at, primal.base())?;
    Ok(ta.transpose().mul(&tb))
}

/// `H(V)^I` at the base: columns spanning `{v : π_{B°}(i,0)v = v, i ∈ I}`.
pub fn invariant_subspace(holder: &CanonicalSpace, iso: &crate::symplectic::Subspace) -> Result<CycMatrix> {
    if !holder.space().is_isotropic(iso) {
        return Err(Error::NotIsotropic);
    }
    let model = holder.base_model();
    let n = model.dim();
    let id = CycMatrix::identity(model.p(), n);
    let mut system = CycMatrix::zeros(model.p(), 0, n);
    for i in iso.rows() {
        system = system.vstack(&model.pi_matrix(&HeisElement::section(i.clone())).sub(&id));
    }
    Ok(system.nullspace())
}

/// `α_{(I°,V)}: H(V)^I ≅ H(I^⊥/I)`.
#[derive(Debug)]
pub struct ReductionIso {
    pub reduction: SymplecticReduction,
    pub reduced: Arc<CanonicalSpace>,
    /// Columns spanning `H(V)^I` in the base model of `V`.
    pub invariant: CycMatrix,
    /// `R_{B_U}·T_{s(B_U°), B°}` on all of `H_{B°}`.
    pub alpha: CycMatrix,
    holder: Arc<CanonicalSpace>,
}

/// Restriction to `Z·I^⊥` followed by descent, `H_{s(L°)}(V) → H_{L°}(U)`:
/// `f ↦ (u ↦ f((lift u, 0)))`.
pub fn restriction_matrix(holder: &CanonicalSpace, red: &SymplecticReduction, l: &OrientedSubspace) -> Result<(OrientedSubspace, CycMatrix)> {
    let s = red.lift_lagrangian(l)?;
    let reduced_model = Model::with_character(red.reduced(), l, holder.chi())?;
    let points: Vec<HeisElement> = reduced_model
        .reps()
        .iter()
        .map(|u| HeisElement::section(red.lift(u)))
        .collect();
    Ok((s.clone(), holder.model(&s)?.evaluation_matrix(&points)))
}

pub fn reduction_iso(holder: &Arc<CanonicalSpace>, iso: &OrientedSubspace) -> Result<ReductionIso> {
    let reduction = symplectic_reduction(holder.space(), iso)?;
    let reduced = CanonicalSpace::with_base(
        reduction.reduced(),
        &base_lagrangian(reduction.reduced()),
        holder.chi(),
    )?;
    let invariant = invariant_subspace(holder, iso.sub())?;
    let (s, r) = restriction_matrix(holder, &reduction, reduced.base())?;
    let alpha = r.mul(&*holder.t(&s, holder.base())?);
    Ok(ReductionIso {
        reduction,
        reduced,
        invariant,
        alpha,
        holder: holder.clone(),
    })
}

impl ReductionIso {
    /// The same map computed through the component at `s(L°)` for another
    /// `L° ∈ OLag(I^⊥/I)`, transported back to the reduced base.
    pub fn alpha_at(&self, l: &OrientedSubspace) -> Result<CycMatrix> {
        let (s, r) = restriction_matrix(&self.holder, &self.reduction, l)?;
        let back = self.reduced.t(self.reduced.base(), l)?;
        Ok(back.mul(&r).mul(&*self.holder.t(&s, self.holder.base())?))
    }

    pub fn apply(&self, v: &CanonicalVector) -> Result<CanonicalVector> {
        if !Arc::ptr_eq(v.holder(), &self.holder) {
            return Err(Error::ModelMismatch("vector is not in this canonical space".into()));
        }
        let model = self.holder.base_model();
        for i in self.reduction.isotropic().sub().rows() {
            let moved = model.pi(&HeisElement::section(i.clone())).apply(v.value_at_base().values());
            if moved != v.value_at_base().values() {
                return Err(Error::NotInvariant);
            }
        }
        CanonicalVector::new(&self.reduced, self.alpha.apply(v.value_at_base().values()))
    }

    /// `α` restricted to the invariant basis (square, invertible).
    pub fn restricted(&self) -> CycMatrix {
        self.alpha.mul(&self.invariant)
    }
}

/// For a Lagrangian `L°`, the generator of `H(V)^L` whose `L°`-component is `δ_L`.
pub fn distinguished_vector(holder: &Arc<CanonicalSpace>, l: &OrientedSubspace) -> Result<CanonicalVector> {
    let model = holder.model(l)?;
    CanonicalVector::from_component(holder, &ModelVector::delta(model))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heisenberg::{heis_generators, sp_act_heis};
    use crate::symplectic::SpMode;

    #[test]
    fn identity_acts_trivially() {
        let v = SymplecticSpace::standard(3, 1).unwrap();
        let c = CanonicalSpace::new(&v).unwrap();
        let id = SymplecticMap::identity(&v);
        assert!(weil_rep(&c, &id).unwrap().mat.is_identity());
        let l = &v.oriented_lagrangians().unwrap()[3];
        let (image, r) = pullback_matrix(&id, l, 1).unwrap();
        assert_eq!(&image, l);
        assert!(r.is_identity());
    }

    #[test]
    fn egorov_on_generators() {
        let v = SymplecticSpace::standard(5, 1).unwrap();
        let c = CanonicalSpace::new(&v).unwrap();
        let model = c.base_model();
        let crate::symplectic::SpOutput::Elements(gs) = crate::symplectic::sp_elements(&v, SpMode::Sample { count: 4, seed: 1 }).unwrap() else {
            unreachable!()
        };
        for g in gs {
            let rho = weil_rep(&c, &g).unwrap().mat;
            for h in heis_generators(&v) {
                let lhs = rho.mul(&model.pi_matrix(&h));
                let rhs = model.pi_matrix(&sp_act_heis(&g, &h)).mul(&rho);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn distinguished_vector_is_invariant() {
        let v = SymplecticSpace::standard(3, 1).unwrap();
        let c = CanonicalSpace::new(&v).unwrap();
        let l = v.oriented_lagrangians().unwrap()[5].clone();
        let d = distinguished_vector(&c, &l).unwrap();
        let inv = invariant_subspace(&c, l.sub()).unwrap();
        assert_eq!(inv.cols(), 1);
        let with = inv.select_columns(&[0]).transpose().vstack(&CycMatrix::from_rows(3, vec![d.value_at_base().values().to_vec()]).unwrap());
        assert_eq!(with.rank(), 1);
        assert_eq!(d.component(&l).unwrap().values(), ModelVector::delta(c.model(&l).unwrap()).values());
    }
}
