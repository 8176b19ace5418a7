use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{lex_vector, FMat, FVec};

use super::{parse_scalars, OrientedSubspace, SymplecticSpace};

/// A linear isomorphism `f: V₁ → V₂` preserving the forms, acting on column
/// vectors: `f(v) = mat·v`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SymplecticMap {
    source: SymplecticSpace,
    target: SymplecticSpace,
    mat: FMat,
}

/// An element of `Sp(V)`.
pub type SpElement = SymplecticMap;

impl SymplecticMap {
    pub fn new(source: &SymplecticSpace, target: &SymplecticSpace, mat: FMat) -> Result<Self> {
        let (d1, d2) = (source.dim(), target.dim());
        if d1 != d2 || source.p() != target.p() {
            return Err(Error::DimensionMismatch {
                expected: d1,
                found: d2,
            });
        }
        if mat.len() != d2 || mat.iter().any(|r| r.len() != d1) {
            return Err(Error::DimensionMismatch {
                expected: d1,
                found: mat.len(),
            });
        }
        let f = source.field();
        let mat: FMat = mat.iter().map(|r| r.iter().map(|x| x % f.p()).collect()).collect();
        // matᵀ·G₂·mat = G₁
        let pulled = f.mat_mul(&f.transpose(&mat), &f.mat_mul(target.gram(), &mat));
        if &pulled != source.gram() {
            return Err(Error::NotSymplectic);
        }
        Ok(SymplecticMap {
            source: source.clone(),
            target: target.clone(),
            mat,
        })
    }

    /// An element of `Sp(space)`.
    pub fn on(space: &SymplecticSpace, mat: FMat) -> Result<Self> {
        Self::new(space, space, mat)
    }

    pub fn identity(space: &SymplecticSpace) -> Self {
        SymplecticMap {
            source: space.clone(),
            target: space.clone(),
            mat: space.field().identity(space.dim()),
        }
    }

    /// `v ↦ v + a·ω(v, u)·u`.
    pub fn transvection(space: &SymplecticSpace, u: &[u64], a: u64) -> Self {
        let f = space.field();
        let d = space.dim();
        let mut mat = vec![vec![0; d]; d];
        for j in 0..d {
            let e = space.basis_vector(j);
            let mut col = e.clone();
            f.axpy(&mut col, f.mul(a, space.form(&e, u)), u);
            for i in 0..d {
                mat[i][j] = col[i];
            }
        }
        SymplecticMap {
            source: space.clone(),
            target: space.clone(),
            mat,
        }
    }

    /// Parses `g=a,b;c,d` (row-major).
    pub fn parse(text: &str, space: &SymplecticSpace) -> Result<Self> {
        let body = text
            .trim()
            .strip_prefix("g=")
            .ok_or_else(|| Error::Parse(format!("expected 'g=..', got '{text}'")))?;
        let rows = body
            .split(';')
            .map(|r| parse_scalars(r, space.p()))
            .collect::<Result<FMat>>()?;
        Self::on(space, rows)
    }

    pub fn source(&self) -> &SymplecticSpace {
        &self.source
    }

    pub fn target(&self) -> &SymplecticSpace {
        &self.target
    }

    pub fn mat(&self) -> &FMat {
        &self.mat
    }

    pub fn is_identity(&self) -> bool {
        self.mat == self.source.field().identity(self.source.dim())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SymplecticMap) -> Result<Self> {
        if other.target != self.source {
            return Err(Error::InvalidForm("composition of incompatible maps".into()));
        }
        let f = self.source.field();
        Ok(SymplecticMap {
            source: other.source.clone(),
            target: self.target.clone(),
            mat: f.mat_mul(&self.mat, &other.mat),
        })
    }

    pub fn inverse(&self) -> Self {
        let f = self.source.field();
        SymplecticMap {
            source: self.target.clone(),
            target: self.source.clone(),
            mat: f.inverse(&self.mat).expect("symplectic maps are invertible"),
        }
    }

    pub fn apply(&self, v: &[u64]) -> FVec {
        self.source.field().mat_vec(&self.mat, v)
    }

    /// `f × g` on the product spaces.
    pub fn product(&self, other: &SymplecticMap) -> Result<Self> {
        let source = self.source.product(&other.source)?;
        let target = self.target.product(&other.target)?;
        let (d1, d2) = (self.source.dim(), other.source.dim());
        let mut mat = vec![vec![0; d1 + d2]; d1 + d2];
        for i in 0..d1 {
            mat[i][..d1].copy_from_slice(&self.mat[i]);
        }
        for i in 0..d2 {
            mat[d1 + i][d1..].copy_from_slice(&other.mat[i]);
        }
        Ok(SymplecticMap { source, target, mat })
    }

    /// `g·L°`: the image subspace with the orientation transported by `g`.
    pub fn act_on_lagrangian(&self, l: &OrientedSubspace) -> Result<OrientedSubspace> {
        if l.sub().ambient() != self.source.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.source.dim(),
                found: l.sub().ambient(),
            });
        }
        let images: FMat = l.sub().rows().iter().map(|b| self.apply(b)).collect();
        OrientedSubspace::from_frame(self.source.p(), self.target.dim(), &images, l.orient())
    }
}

/// All of `Sp(V)` for `2n = 2`, in lexicographic order of the matrix entries.
pub fn enumerate(space: &SymplecticSpace) -> Result<Vec<SpElement>> {
    if space.dim() != 2 {
        return Err(Error::ScaleGuard {
            what: "Sp enumeration (only 2n = 2 is supported)".into(),
            cells: (space.p() as u128).pow((space.dim() * space.dim()) as u32),
            limit: (space.p() as u128).pow(4),
        });
    }
    let p = space.p();
    Ok((0..(p as usize).pow(4))
        .filter_map(|i| {
            let e = lex_vector(i, 4, p);
            SymplecticMap::on(space, vec![vec![e[0], e[1]], vec![e[2], e[3]]]).ok()
        })
        .collect())
}

/// Seeded random words of 20 symplectic transvections.
pub fn sample(space: &SymplecticSpace, count: usize, seed: u64) -> Vec<SpElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_element(space, &mut rng)).collect()
}

pub(crate) fn random_element(space: &SymplecticSpace, rng: &mut impl Rng) -> SpElement {
    let p = space.p();
    let mut g = SymplecticMap::identity(space);
    if space.dim() == 0 {
        return g;
    }
    for _ in 0..20 {
        let u = loop {
            let u: FVec = (0..space.dim()).map(|_| rng.random_range(0..p)).collect();
            if u.iter().any(|&x| x != 0) {
                break u;
            }
        };
        let a = rng.random_range(1..p);
        g = SymplecticMap::transvection(space, &u, a)
            .compose(&g)
            .expect("same space");
    }
    g
}

#[derive(Clone, Debug)]
pub enum SpMode {
    Enumerate,
    Sample { count: usize, seed: u64 },
    ActOnLagrangian(SpElement, OrientedSubspace),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpOutput {
    Elements(Vec<SpElement>),
    Lagrangian(OrientedSubspace),
}

pub fn sp_elements(space: &SymplecticSpace, mode: SpMode) -> Result<SpOutput> {
    match mode {
        SpMode::Enumerate => enumerate(space).map(SpOutput::Elements),
        SpMode::Sample { count, seed } => Ok(SpOutput::Elements(sample(space, count, seed))),
        SpMode::ActOnLagrangian(g, l) => g.act_on_lagrangian(&l).map(SpOutput::Lagrangian),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_orders() {
        for (p, order) in [(3, 24), (5, 120)] {
            let v = SymplecticSpace::standard(p, 1).unwrap();
            let all = enumerate(&v).unwrap();
            assert_eq!(all.len(), order);
            // oracle: determinant-one filter
            let det_one = (0..(p as usize).pow(4))
                .map(|i| lex_vector(i, 4, p))
                .filter(|e| (e[0] * e[3] + p * p - e[1] * e[2] % p) % p == 1)
                .count();
            assert_eq!(det_one, order);
        }
        assert!(enumerate(&SymplecticSpace::standard(3, 2).unwrap()).is_err());
    }

    #[test]
    fn sampled_elements_preserve_form() {
        let v = SymplecticSpace::standard(3, 2).unwrap();
        let gs = sample(&v, 30, 7);
        for g in &gs {
            assert!(SymplecticMap::on(&v, g.mat().clone()).is_ok());
        }
        assert_eq!(gs, sample(&v, 30, 7));
    }

    #[test]
    fn minus_identity_on_orientation() {
        for n in [1, 2] {
            let v = SymplecticSpace::standard(5, n).unwrap();
            let minus = SymplecticMap::on(&v, v.field().identity(2 * n).iter().map(|r| v.field().neg_vec(r)).collect()).unwrap();
            for l in v.oriented_lagrangians().unwrap().iter().step_by(7) {
                let image = minus.act_on_lagrangian(l).unwrap();
                assert_eq!(image.sub(), l.sub());
                assert_eq!(image.orient(), v.field().mul(l.orient(), v.field().sign(n as u64)));
                assert_eq!(&SymplecticMap::identity(&v).act_on_lagrangian(l).unwrap(), l);
            }
        }
    }

    #[test]
    fn parse_and_inverse() {
        let v = SymplecticSpace::standard(3, 1).unwrap();
        let g = SymplecticMap::parse("g=1,1;0,1", &v).unwrap();
        assert!(g.compose(&g.inverse()).unwrap().is_identity());
        assert_eq!(SymplecticMap::parse("g=1,1;1,1", &v), Err(Error::NotSymplectic));
        assert!(SymplecticMap::parse("1,0;0,1", &v).is_err());
    }
}
