//! Dual vectors and matrices, the two inner-product forms, structural
//! predicates and orthonormalization.

mod gram_schmidt;
mod matrix;
mod vector;

pub(crate) use gram_schmidt::reorthonormalize_columns as reorthonormalize;
pub use gram_schmidt::{extend_orthonormal, gram_schmidt, INDEPENDENCE_TOL};
pub use matrix::{DualMatrix, Structure};
pub use vector::{star_form, t_form, DualVector};

use crate::dual::DualScalar;
use crate::error::Result;

/// Which adjoint a decomposition is built around: the transpose (`T`) or
/// the conjugate transpose (`*`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Flavor {
    T,
    Star,
}

impl Flavor {
    /// `(u, v)` for `T`, `⟨u, v⟩` for `Star`.
    pub fn form(self, u: &DualVector, v: &DualVector) -> Result<DualScalar> {
        match self {
            Flavor::T => t_form(u, v),
            Flavor::Star => star_form(u, v),
        }
    }

    /// `Mᵀ` or `M*`.
    pub fn adjoint(self, m: &DualMatrix) -> DualMatrix {
        match self {
            Flavor::T => m.transpose(),
            Flavor::Star => m.star(),
        }
    }

    /// The structure an isometry of this flavor must have.
    pub fn isometry(self) -> Structure {
        match self {
            Flavor::T => Structure::TOrthogonal,
            Flavor::Star => Structure::Unitary,
        }
    }

    /// The structure a self-adjoint matrix of this flavor must have.
    pub fn self_adjoint(self) -> Structure {
        match self {
            Flavor::T => Structure::Symmetric,
            Flavor::Star => Structure::Hermitian,
        }
    }
}
