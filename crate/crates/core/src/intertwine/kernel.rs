use std::sync::Arc;

use rayon::prelude::*;
use serde_json::json;

use crate::cyclotomic::CycNum;
use crate::error::{Error, Result};
use crate::heisenberg::{heis_elements, heis_inverse, mul_unchecked, HeisElement, Model, ModelVector};
use crate::matrix::CycMatrix;

use super::{normalization_with, Intertwiner, WedgeConvention};

/// A function `K` on `H(V)` with `K(z·h) = ψ(z)K(h)` and `K(m·h·l) = K(h)`
/// for `m ∈ M`, `l ∈ L`, stored densely in the order `lex(v)·p + z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kernel {
    target: Arc<Model>,
    source: Arc<Model>,
    values: Vec<CycNum>,
}

impl Kernel {
    /// Validates length, center character and two-sided invariance on
    /// generators.
    pub fn new(target: Arc<Model>, source: Arc<Model>, values: Vec<CycNum>) -> Result<Self> {
        let space = target.space();
        if space != source.space() || target.chi() != source.chi() {
            return Err(Error::ModelMismatch("kernel models over different spaces".into()));
        }
        let p = space.p();
        let size = (p as usize).pow(space.dim() as u32 + 1);
        if values.len() != size {
            return Err(Error::DimensionMismatch {
                expected: size,
                found: values.len(),
            });
        }
        let k = Kernel { target, source, values };
        k.check_equivariance()?;
        Ok(k)
    }

    pub fn from_fn(target: Arc<Model>, source: Arc<Model>, f: impl Fn(&HeisElement) -> CycNum + Sync + Send) -> Result<Self> {
        let values = heis_elements(target.space()).par_iter().map(f).collect();
        Self::new(target, source, values)
    }

    fn check_equivariance(&self) -> Result<()> {
        let space = self.target.space();
        let p = space.p();
        let dim = space.dim();
        let z = HeisElement::central(dim, 1);
        let left: Vec<HeisElement> = self
            .target
            .label()
            .sub()
            .rows()
            .iter()
            .map(|m| HeisElement::section(m.clone()))
            .collect();
        let right: Vec<HeisElement> = self
            .source
            .label()
            .sub()
            .rows()
            .iter()
            .map(|l| HeisElement::section(l.clone()))
            .collect();
        let chi = self.target.chi();
        let bad = heis_elements(space).into_par_iter().find_any(|h| {
            let k = self.value(h);
            let zh = mul_unchecked(space, &z, h);
            if self.values[zh.dense_index(p)] != k.mul_root(chi) {
                return true;
            }
            left.iter().any(|m| self.values[mul_unchecked(space, m, h).dense_index(p)] != *k)
                || right.iter().any(|l| self.values[mul_unchecked(space, h, l).dense_index(p)] != *k)
        });
        match bad {
            Some(h) => Err(Error::Equivariance(format!("fails at {h}"))),
            None => Ok(()),
        }
    }

    pub fn target(&self) -> &Arc<Model> {
        &self.target
    }

    pub fn source(&self) -> &Arc<Model> {
        &self.source
    }

    pub fn values(&self) -> &[CycNum] {
        &self.values
    }

    pub fn value(&self, h: &HeisElement) -> &CycNum {
        &self.values[h.dense_index(self.target.p())]
    }

    pub fn to_json(&self) -> serde_json::Value {
        let dim = self.target.space().dim();
        let p = self.target.p();
        let support: Vec<serde_json::Value> = self
            .values
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| json!({"h": HeisElement::from_dense_index(i, dim, p).to_string(), "value": x}))
            .collect();
        json!({
            "p": p,
            "n": self.target.space().n(),
            "target": self.target.label().to_string(),
            "source": self.source.label().to_string(),
            "size": self.values.len(),
            "support": support,
        })
    }
}

/// Matrix of `I[K]: H_{L°} → H_{M°}`,
/// `(K∗f)(h) = Σ_{v ∈ V/L} K((v,0))·f((−v,0)·h)`: one term per `Z·L`-orbit of
/// factorizations `h = h₁h₂`.
pub fn transform_matrix(k: &Kernel) -> CycMatrix {
    let (target, source) = (&k.target, &k.source);
    let space = target.space();
    let p = space.p();
    let rows: Vec<Vec<CycNum>> = target
        .reps()
        .par_iter()
        .map(|r| {
            let h = HeisElement::section(r.clone());
            let mut row = vec![CycNum::zero(p); source.dim()];
            for v in source.reps() {
                let kv = k.value(&HeisElement::section(v.clone()));
                if kv.is_zero() {
                    continue;
                }
                let inv = heis_inverse(space, &HeisElement::section(v.clone()));
                let (j, e) = source.locate(&mul_unchecked(space, &inv, &h));
                row[j] = &row[j] + &kv.mul_root(e);
            }
            row
        })
        .collect();
    CycMatrix::from_rows(p, rows).expect("rectangular")
}

pub fn transform(k: &Kernel, f: &ModelVector) -> Result<ModelVector> {
    if !k.source.same_functions(f.model()) {
        return Err(Error::ModelMismatch("vector is not in the kernel's source model".into()));
    }
    ModelVector::new(k.target.clone(), transform_matrix(k).apply(f.values()))
}

/// `K₁∗K₂(h) = Σ_{v ∈ V/M} K₁((v,0))·K₂((−v,0)·h)` for
/// `K₁ ∈ C(N\H/M)`, `K₂ ∈ C(M\H/L)`.
pub fn convolve(k1: &Kernel, k2: &Kernel) -> Result<Kernel> {
    if !k1.source.same_functions(&k2.target) {
        return Err(Error::ModelMismatch("middle Lagrangians differ".into()));
    }
    let middle = &k1.source;
    let space = middle.space();
    let p = space.p();
    let terms: Vec<(CycNum, HeisElement)> = middle
        .reps()
        .iter()
        .map(|v| {
            let h = HeisElement::section(v.clone());
            (k1.value(&h).clone(), heis_inverse(space, &h))
        })
        .filter(|(c, _)| !c.is_zero())
        .collect();
    let values = heis_elements(space)
        .par_iter()
        .map(|h| {
            terms.iter().fold(CycNum::zero(p), |acc, (c, inv)| {
                let x = &k2.values[mul_unchecked(space, inv, h).dense_index(p)];
                if x.is_zero() {
                    acc
                } else {
                    &acc + &(c * x)
                }
            })
        })
        .collect();
    Kernel::new(k1.target.clone(), k2.source.clone(), values)
}

/// `T(δ_L)` viewed as a function on `H(V)`; its transform is `T`.
pub fn kernel_of(t: &Intertwiner) -> Result<Kernel> {
    let column = t.matrix().column(0);
    let target = t.target().clone();
    Kernel::from_fn(target.clone(), t.source().clone(), |h| target.evaluate(&column, h))
}

/// `A_{M°,L°}·(τ^{-1})^*ψ` for a transverse pair: writing `v = m + l`,
/// `(v, z) = (m,0)·(0, z − ½ω(m,l))·(l,0)` and the kernel takes the value
/// `A·ψ(z − ½ω(m,l))`.
pub fn ansatz_kernel(target: &Arc<Model>, source: &Arc<Model>) -> Result<Kernel> {
    let space = target.space().clone();
    let (m, l) = (target.label().sub(), source.label().sub());
    if !space.in_general_position(m, l) {
        return Err(Error::NotTransverse("ansatz kernel needs a transverse pair".into()));
    }
    let a = normalization_with(&space, target.label(), source.label(), source.chi(), WedgeConvention::Signed)?;
    let f = space.field();
    let basis: Vec<Vec<u64>> = m.rows().iter().chain(l.rows()).cloned().collect();
    let k = m.dim();
    let chi = target.chi();
    Kernel::from_fn(target.clone(), source.clone(), |h| {
        let x = f.coords(&basis, &h.v).expect("M ⊕ L = V");
        let mut mv = vec![0; space.dim()];
        let mut lv = vec![0; space.dim()];
        for (c, b) in x[..k].iter().zip(m.rows()) {
            f.axpy(&mut mv, *c, b);
        }
        for (c, b) in x[k..].iter().zip(l.rows()) {
            f.axpy(&mut lv, *c, b);
        }
        let z = f.sub(h.z, f.mul(f.half(), space.form(&mv, &lv)));
        a.mul_root(f.mul(chi, z))
    })
}

pub enum KernelOp<'a> {
    Transform(&'a Kernel, &'a ModelVector),
    Convolve(&'a Kernel, &'a Kernel),
    Ansatz(&'a Arc<Model>, &'a Arc<Model>),
    KernelOf(&'a Intertwiner),
}

#[derive(Debug)]
pub enum KernelOutput {
    Vector(ModelVector),
    Kernel(Kernel),
}

pub fn kernel_ops(op: KernelOp<'_>) -> Result<KernelOutput> {
    match op {
        KernelOp::Transform(k, f) => transform(k, f).map(KernelOutput::Vector),
        KernelOp::Convolve(k1, k2) => convolve(k1, k2).map(KernelOutput::Kernel),
        KernelOp::Ansatz(m, l) => ansatz_kernel(m, l).map(KernelOutput::Kernel),
        KernelOp::KernelOf(t) => kernel_of(t).map(KernelOutput::Kernel),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intertwine::{canonical_t, TMethod};
    use crate::symplectic::{OrientedSubspace, SymplecticSpace};

    fn lag(space: &SymplecticSpace, rows: &[Vec<u64>], o: u64) -> OrientedSubspace {
        OrientedSubspace::new(space.subspace(rows).unwrap(), o).unwrap()
    }

    #[test]
    fn ansatz_transform_is_t() {
        let v = SymplecticSpace::standard(3, 1).unwrap();
        let l = lag(&v, &[vec![1, 0]], 1);
        let m = lag(&v, &[vec![1, 1]], 2);
        let t = canonical_t(&v, &m, &l, TMethod::ClosedForm).unwrap();
        let k = ansatz_kernel(t.target(), t.source()).unwrap();
        assert_eq!(&transform_matrix(&k), t.matrix());
        assert_eq!(k, kernel_of(&t).unwrap());
    }

    #[test]
    fn identity_kernel() {
        let v = SymplecticSpace::standard(3, 1).unwrap();
        let l = lag(&v, &[vec![0, 1]], 1);
        let t = canonical_t(&v, &l, &l, TMethod::ClosedForm).unwrap();
        let k = kernel_of(&t).unwrap();
        for h in heis_elements(&v) {
            let expected = if l.sub().contains(&h.v) { CycNum::root(3, h.z) } else { CycNum::zero(3) };
            assert_eq!(k.value(&h), &expected);
        }
        assert!(transform_matrix(&k).is_identity());
    }

    #[test]
    fn equivariance_is_enforced() {
        let v = SymplecticSpace::standard(3, 1).unwrap();
        let l = Arc::new(Model::new(&v, &lag(&v, &[vec![1, 0]], 1)).unwrap());
        let ones = vec![CycNum::one(3); 27];
        assert!(matches!(Kernel::new(l.clone(), l.clone(), ones), Err(Error::Equivariance(_))));
        assert!(ansatz_kernel(&l, &l).is_err());
    }
}
