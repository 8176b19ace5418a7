use crate::error::{Error, Result};
use crate::field::{FMat, FVec};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{OrientedSubspace, SpElement, Subspace, SymplecticMap, SymplecticSpace};

/// The reduction `I^⊥/I` of `V` along an oriented isotropic `I°`.
///
/// A symplectic basis `e_1..e_m, f_1..f_m` of `I^⊥/I` is lifted into `I^⊥`,
/// so the reduced space carries the standard form.
#[derive(Clone, Debug)]
pub struct SymplecticReduction {
    space: SymplecticSpace,
    iso: OrientedSubspace,
    perp: Subspace,
    es: FMat,
    fs: FMat,
    reduced: SymplecticSpace,
}

impl SymplecticReduction {
    pub fn new(space: &SymplecticSpace, iso: &OrientedSubspace) -> Result<Self> {
        if iso.sub().ambient() != space.dim() || iso.sub().p() != space.p() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: iso.sub().ambient(),
            });
        }
        if !space.is_isotropic(iso.sub()) {
            return Err(Error::NotIsotropic);
        }
        let f = space.field();
        let perp = space.perp(iso.sub());
        let mut pool = perp.quotient_by(iso.sub())?.complement().clone();
        let (mut es, mut fs) = (Vec::new(), Vec::new());
        while let Some(e) = pool.first().cloned() {
            let k = (1..pool.len())
                .find(|&k| space.form(&e, &pool[k]) != 0)
                .ok_or(Error::Internal("reduced form is degenerate".into()))?;
            let c = f.inv(space.form(&e, &pool[k])).expect("nonzero");
            let fv = f.scale_vec(c, &pool[k]);
            pool.remove(k);
            pool.remove(0);
            for w in pool.iter_mut() {
                let (wf, we) = (space.form(w, &fv), space.form(w, &e));
                f.axpy(w, f.neg(wf), &e);
                f.axpy(w, we, &fv);
            }
            es.push(e);
            fs.push(fv);
        }
        let reduced = SymplecticSpace::standard(space.p(), es.len())?;
        Ok(SymplecticReduction {
            space: space.clone(),
            iso: iso.clone(),
            perp,
            es,
            fs,
            reduced,
        })
    }

    pub fn space(&self) -> &SymplecticSpace {
        &self.space
    }

    pub fn isotropic(&self) -> &OrientedSubspace {
        &self.iso
    }

    /// `I^⊥`.
    pub fn perp(&self) -> &Subspace {
        &self.perp
    }

    pub fn reduced(&self) -> &SymplecticSpace {
        &self.reduced
    }

    /// Lifts of the symplectic basis, `e_1..e_m` then `f_1..f_m`.
    pub fn basis(&self) -> FMat {
        self.es.iter().chain(&self.fs).cloned().collect()
    }

    /// `pr: I^⊥ → I^⊥/I` in reduced coordinates.
    pub fn project(&self, v: &[u64]) -> Result<FVec> {
        if !self.perp.contains(v) {
            return Err(Error::NotContained);
        }
        let s = &self.space;
        let a = self.fs.iter().map(|fv| s.form(v, fv));
        let b = self.es.iter().map(|e| s.form(e, v));
        Ok(a.chain(b).collect())
    }

    /// The chosen lift `I^⊥/I → I^⊥`.
    pub fn lift(&self, x: &[u64]) -> FVec {
        let f = self.space.field();
        let mut out = vec![0; self.space.dim()];
        for (c, b) in x.iter().zip(self.es.iter().chain(&self.fs)) {
            f.axpy(&mut out, *c, b);
        }
        out
    }

    /// `s(L°) = (pr^{-1}(L), o_I ∧ o_L)`.
    pub fn lift_lagrangian(&self, l: &OrientedSubspace) -> Result<OrientedSubspace> {
        if l.sub().ambient() != self.reduced.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.reduced.dim(),
                found: l.sub().ambient(),
            });
        }
        let f = self.space.field();
        let mut frame = self.iso.sub().rows().clone();
        frame.extend(l.sub().rows().iter().map(|r| self.lift(r)));
        OrientedSubspace::from_frame(
            self.space.p(),
            self.space.dim(),
            &frame,
            f.mul(self.iso.orient(), l.orient()),
        )
    }
}

impl SymplecticReduction {
    /// `g_I = pr_J ∘ g ∘ lift_I: I^⊥/I → J^⊥/J` for `g` carrying `I°` onto `J°`.
    pub fn induced(&self, g: &SymplecticMap, target: &SymplecticReduction) -> Result<SymplecticMap> {
        if g.source() != &self.space || g.target() != &target.space {
            return Err(Error::DimensionMismatch {
                expected: self.space.dim(),
                found: g.source().dim(),
            });
        }
        if &g.act_on_lagrangian(&self.iso)? != target.isotropic() {
            return Err(Error::NotContained);
        }
        let m = self.reduced.dim();
        let cols = (0..m)
            .map(|i| target.project(&g.apply(&self.lift(&self.reduced.basis_vector(i)))))
            .collect::<Result<Vec<FVec>>>()?;
        let mat = (0..target.reduced.dim())
            .map(|a| cols.iter().map(|c| c[a]).collect())
            .collect();
        SymplecticMap::new(&self.reduced, &target.reduced, mat)
    }

    /// Seeded words of 20 transvections `v ↦ v + aω(v,u)u` with `u ∈ I^⊥`;
    /// these fix `I` pointwise, so they lie in the stabilizer of `I°`.
    pub fn sample_stabilizer(&self, count: usize, seed: u64) -> Vec<SpElement> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = self.space.field();
        let p = self.space.p();
        (0..count)
            .map(|_| {
                let mut g = SymplecticMap::identity(&self.space);
                for _ in 0..20 {
                    let mut u = vec![0; self.space.dim()];
                    for row in self.perp.rows() {
                        f.axpy(&mut u, rng.random_range(0..p), row);
                    }
                    let a = rng.random_range(1..p);
                    g = SymplecticMap::transvection(&self.space, &u, a).compose(&g).expect("same space");
                }
                g
            })
            .collect()
    }
}

pub fn symplectic_reduction(space: &SymplecticSpace, iso: &OrientedSubspace) -> Result<SymplecticReduction> {
    SymplecticReduction::new(space, iso)
}
