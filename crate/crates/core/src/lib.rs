//! Linear algebra over the dual numbers `a + bε`, `ε² = 0`.
//!
//! Square dual matrices admit spectral decompositions (symmetric and
//! Hermitian), two flavors of singular value decomposition (`M = UΣVᵀ`
//! with T-orthogonal factors, `M = UΣV*` with unitary factors), a polar
//! decomposition and, when it exists, a Moore–Penrose pseudoinverse.
//! Invertible `2×2` dual matrices, viewed as Laguerre transformations,
//! are classified into their two normal forms.

// `!(x > tol)` is kept so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dual;
pub mod error;
pub mod laguerre;
pub mod linalg;
pub mod real_spectral;
pub mod spectral;
pub mod svd;

pub use dual::{poly_eval, DualScalar};
pub use error::{Error, Result};
pub use linalg::{DualMatrix, DualVector, Flavor, Structure};
