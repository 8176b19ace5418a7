//! Exact Heisenberg and Weil representations over `F_p` for small odd primes.
//!
//! Scalars live in `Q(ζ_p)` with big-rational coefficients, so every identity
//! is checked by equality rather than within a tolerance. The main pieces:
//!
//! - [`symplectic`]: the space `(F_p^{2n}, ω)`, oriented Lagrangians,
//!   `Sp(V)`, top-wedge pairings and symplectic reduction;
//! - [`heisenberg`]: `H(V)` and its models `H_{L°}`;
//! - [`intertwine`]: the canonical operators `T_{M°,L°}` and the kernel
//!   calculus;
//! - [`canonical`]: the canonical space `H(V)` and the Weil representation;
//! - [`verify`]: the verification suites used by the command-line tool.

// Index loops read closer to the matrix formulas than iterator chains.
#![allow(clippy::needless_range_loop)]

pub mod canonical;
pub mod cyclotomic;
pub mod error;
pub mod field;
pub mod heisenberg;
pub mod intertwine;
pub mod matrix;
pub mod symplectic;
pub mod verify;

pub use canonical::{weil_rep, CanonicalSpace, CanonicalVector, WeilMatrix};
pub use cyclotomic::{gauss_sum, CycNum, Rational};
pub use error::{Error, Result};
pub use heisenberg::{HeisElement, Model, ModelVector};
pub use intertwine::{canonical_t, Intertwiner, Kernel, TMethod, Transport};
pub use matrix::CycMatrix;
pub use symplectic::{OrientedSubspace, SpElement, Subspace, SymplecticMap, SymplecticSpace};
pub use verify::{run_suite, Suite, SuiteReport, VerifyConfig};
