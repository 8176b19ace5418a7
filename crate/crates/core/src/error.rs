use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),

    #[error("cyclotomic orders differ: {0} vs {1}")]
    OrderMismatch(u64, u64),

    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid symplectic form: {0}")]
    InvalidForm(String),

    #[error("subspace is not contained in the ambient subspace")]
    NotContained,

    #[error("subspace is not isotropic")]
    NotIsotropic,

    #[error("subspace is not Lagrangian")]
    NotLagrangian,

    #[error("subspaces are not transverse: {0}")]
    NotTransverse(String),

    #[error("degenerate form")]
    Degenerate,

    #[error("orientation must be a nonzero scalar")]
    ZeroOrientation,

    #[error("matrix does not preserve the symplectic form")]
    NotSymplectic,

    #[error("scale guard: {what} needs {cells} cells, limit is {limit}")]
    ScaleGuard {
        what: String,
        cells: u128,
        limit: u128,
    },

    #[error("model mismatch: {0}")]
    ModelMismatch(String),

    #[error("kernel violates equivariance: {0}")]
    Equivariance(String),

    #[error("vector is not invariant under the isotropic subspace")]
    NotInvariant,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
