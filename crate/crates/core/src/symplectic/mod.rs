//! The symplectic space `(V, ω)` over `F_p`, its (oriented) Lagrangian
//! subspaces, the symplectic group, and the orientation calculus.

mod group;
mod orientation;
mod reduction;
mod subspace;

pub use group::{enumerate as enumerate_sp, sample as sample_sp, sp_elements, SpElement, SpMode, SpOutput, SymplecticMap};
pub use orientation::{
    det_pairing, discriminant, discriminant_by_diagonalization, orientation_decompose,
    residue_map, wedge_pairing, wedge_pairing_frames, wedge_sign, Frame, OrientationSplit,
    ResidueMap,
};
pub use reduction::{symplectic_reduction, SymplecticReduction};
pub use subspace::{
    subspace_ops, OrientedSubspace, Quotient, Subspace, SubspaceJson, SubspaceOp,
    SubspaceOpOutput,
};
pub(crate) use subspace::parse_scalars;

use crate::error::{Error, Result};
use crate::field::{FMat, FVec, PrimeField};

/// Enumerations are refused when `p^{2n}` exceeds this many cells.
pub const DEFAULT_MAX_CELLS: u128 = 10_000;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SymplecticSpace {
    field: PrimeField,
    n: usize,
    gram: FMat,
}

impl SymplecticSpace {
    /// `F_p^{2n}` with `ω(e_i, e_{n+i}) = 1`.
    pub fn standard(p: u64, n: usize) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let mut gram = vec![vec![0; 2 * n]; 2 * n];
        for i in 0..n {
            gram[i][n + i] = 1;
            gram[n + i][i] = p - 1;
        }
        Ok(SymplecticSpace { field, n, gram })
    }

    pub fn with_gram(p: u64, gram: FMat) -> Result<Self> {
        let field = PrimeField::new(p)?;
        let d = gram.len();
        if !d.is_multiple_of(2) || gram.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidForm("gram must be square of even size".into()));
        }
        let gram: FMat = gram.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
        for i in 0..d {
            if gram[i][i] != 0 {
                return Err(Error::InvalidForm("nonzero diagonal".into()));
            }
            for j in 0..d {
                if gram[i][j] != field.neg(gram[j][i]) {
                    return Err(Error::InvalidForm("not antisymmetric".into()));
                }
            }
        }
        if d > 0 && field.det(&gram) == 0 {
            return Err(Error::InvalidForm("degenerate".into()));
        }
        Ok(SymplecticSpace { field, n: d / 2, gram })
    }

    /// The same vector space with form `−ω`.
    pub fn dual(&self) -> Self {
        SymplecticSpace {
            field: self.field,
            n: self.n,
            gram: self.gram.iter().map(|r| self.field.neg_vec(r)).collect(),
        }
    }

    /// `V₁ × V₂` with block-diagonal form; coordinates of `V₁` come first.
    pub fn product(&self, other: &SymplecticSpace) -> Result<Self> {
        if self.p() != other.p() {
            return Err(Error::InvalidForm("product of spaces over different fields".into()));
        }
        let (d1, d2) = (self.dim(), other.dim());
        let mut gram = vec![vec![0; d1 + d2]; d1 + d2];
        for i in 0..d1 {
            gram[i][..d1].copy_from_slice(&self.gram[i]);
        }
        for i in 0..d2 {
            gram[d1 + i][d1..].copy_from_slice(&other.gram[i]);
        }
        Ok(SymplecticSpace {
            field: self.field,
            n: self.n + other.n,
            gram,
        })
    }

    pub fn p(&self) -> u64 {
        self.field.p()
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Half-dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn gram(&self) -> &FMat {
        &self.gram
    }

    pub fn is_standard(&self) -> bool {
        *self == Self::standard(self.p(), self.n).expect("prime already validated")
    }

    /// `ω(v, w) = vᵀ·G·w` without length checks.
    #[inline]
    pub fn form(&self, v: &[u64], w: &[u64]) -> u64 {
        let f = self.field;
        let mut acc = 0;
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            acc = (acc + vi * f.dot(&self.gram[i], w)) % f.p();
        }
        acc
    }

    pub fn omega(&self, v: &[u64], w: &[u64]) -> Result<u64> {
        for x in [v, w] {
            if x.len() != self.dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.dim(),
                    found: x.len(),
                });
            }
        }
        Ok(self.form(v, w))
    }

    pub fn basis_vector(&self, i: usize) -> FVec {
        (0..self.dim()).map(|j| u64::from(i == j)).collect()
    }

    pub fn is_isotropic(&self, sub: &Subspace) -> bool {
        let rows = sub.rows();
        rows.iter()
            .enumerate()
            .all(|(i, a)| rows[i + 1..].iter().all(|b| self.form(a, b) == 0))
    }

    pub fn is_lagrangian(&self, sub: &Subspace) -> bool {
        sub.ambient() == self.dim() && sub.dim() == self.n && self.is_isotropic(sub)
    }

    /// `{v : ω(v, s) = 0 for all s ∈ sub}`.
    pub fn perp(&self, sub: &Subspace) -> Subspace {
        // ω(v, s) = v·(G s)
        let cols: FMat = sub.rows().iter().map(|s| self.field.mat_vec(&self.gram, s)).collect();
        let ns = self.field.nullspace(&cols, self.dim());
        Subspace::span(self.p(), self.dim(), &ns).expect("consistent dimensions")
    }

    pub fn subspace(&self, vectors: &[FVec]) -> Result<Subspace> {
        Subspace::span(self.p(), self.dim(), vectors)
    }

    pub fn full(&self) -> Subspace {
        Subspace::full(self.p(), self.dim())
    }

    fn guard(&self, what: &str, limit: u128) -> Result<()> {
        let cells = (self.p() as u128).pow(self.dim() as u32);
        if cells > limit {
            return Err(Error::ScaleGuard {
                what: what.to_string(),
                cells,
                limit,
            });
        }
        Ok(())
    }

    /// All Lagrangian subspaces in RREF-lexicographic order.
    pub fn lagrangians(&self) -> Result<Vec<Subspace>> {
        self.lagrangians_with_limit(DEFAULT_MAX_CELLS)
    }

    pub fn lagrangians_with_limit(&self, limit: u128) -> Result<Vec<Subspace>> {
        self.guard("Lagrangian enumeration", limit)?;
        let mut out: Vec<Subspace> = subspaces_of_dim(self.p(), self.dim(), self.n)
            .into_iter()
            .filter(|s| self.is_isotropic(s))
            .collect();
        out.sort();
        Ok(out)
    }

    /// Every Lagrangian paired with every orientation, orientation ascending.
    pub fn oriented_lagrangians(&self) -> Result<Vec<OrientedSubspace>> {
        self.oriented_lagrangians_with_limit(DEFAULT_MAX_CELLS)
    }

    pub fn oriented_lagrangians_with_limit(&self, limit: u128) -> Result<Vec<OrientedSubspace>> {
        let lags = self.lagrangians_with_limit(limit)?;
        let p = self.p();
        Ok(lags
            .into_iter()
            .flat_map(|l| (1..p).map(move |o| OrientedSubspace::new(l.clone(), o).expect("o ≠ 0")))
            .collect())
    }

    pub fn in_general_position(&self, l: &Subspace, m: &Subspace) -> bool {
        l.sum(m).map(|s| s.dim() == self.dim()).unwrap_or(false)
    }

    /// The first Lagrangian (canonical order) transverse to every subspace in
    /// `others`, with orientation 1.
    pub fn transverse_lagrangian(&self, others: &[&Subspace]) -> Result<OrientedSubspace> {
        self.lagrangians()?
            .into_iter()
            .find(|s| others.iter().all(|o| self.in_general_position(s, o)))
            .map(|s| OrientedSubspace::new(s, 1).expect("1 ≠ 0"))
            .ok_or_else(|| Error::Internal("no transverse Lagrangian exists".into()))
    }

    /// All Lagrangians transverse to every subspace in `others`.
    pub fn transverse_lagrangians(&self, others: &[&Subspace]) -> Result<Vec<Subspace>> {
        Ok(self
            .lagrangians()?
            .into_iter()
            .filter(|s| others.iter().all(|o| self.in_general_position(s, o)))
            .collect())
    }
}

/// Enumerates every `k`-dimensional subspace of `F_p^d` through its RREF shape.
pub fn subspaces_of_dim(p: u64, d: usize, k: usize) -> Vec<Subspace> {
    let mut out = Vec::new();
    for pivots in combinations(d, k) {
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(i, &pc)| {
                let pivots = &pivots;
                (pc + 1..d).filter(move |c| !pivots.contains(c)).map(move |c| (i, c))
            })
            .collect();
        let count = (p as usize).pow(free.len() as u32);
        for idx in 0..count {
            let mut rows = vec![vec![0u64; d]; k];
            for (i, &pc) in pivots.iter().enumerate() {
                rows[i][pc] = 1;
            }
            let mut t = idx;
            for &(i, c) in &free {
                rows[i][c] = (t % p as usize) as u64;
                t /= p as usize;
            }
            out.push(Subspace::from_rref(p, d, rows));
        }
    }
    out
}

fn combinations(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            go(i + 1, d, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, d, k, &mut Vec::new(), &mut out);
    out
}

/// Whether `(L°, M°)` are transverse (`L + M = V`).
pub fn in_general_position(space: &SymplecticSpace, l: &OrientedSubspace, m: &OrientedSubspace) -> bool {
    space.in_general_position(l.sub(), m.sub())
}

/// Enumerates oriented Lagrangians of `space`, honoring the scale guard.
pub fn enumerate_oriented_lagrangians(space: &SymplecticSpace) -> Result<Vec<OrientedSubspace>> {
    space.oriented_lagrangians()
}
