//! Laguerre transformations `z ↦ (az + b)/(cz + d)` over the dual numbers
//! and Yaglom's two normal forms of an invertible `2×2` dual matrix.
//!
//! Every such matrix is either `U Σ V*` with `U`, `V` unitary and `Σ` real
//! diagonal (form 1), or `U (σ, −εσ′; εσ′, σ)` with `U` unitary and
//! `σ′ ≠ 0` (form 2).

use crate::dual::DualScalar;
use crate::error::{Error, Result};
use crate::linalg::{DualMatrix, Flavor};
use crate::real_spectral::real_svd;
use crate::svd::{svd_invertible, SigmaBlock, INVERTIBILITY_TOL};

/// A `2×2` dual matrix `(a, b; c, d)` whose determinant is appreciable.
#[derive(Debug, Clone, PartialEq)]
pub struct LaguerreTransform {
    m: DualMatrix,
}

impl LaguerreTransform {
    /// Rejects matrices whose standard part is singular, judged by the
    /// ratio of its singular values against [`INVERTIBILITY_TOL`].
    pub fn new(m: DualMatrix) -> Result<Self> {
        if m.shape() != (2, 2) {
            return Err(Error::DimensionMismatch(format!(
                "a Laguerre transformation needs a 2×2 matrix, got {}×{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let s = real_svd(m.std())?.singular_values;
        if !(s[1] > INVERTIBILITY_TOL * s[0]) {
            return Err(Error::NotInvertible(format!("determinant {} is not appreciable", det(&m))));
        }
        Ok(LaguerreTransform { m })
    }

    pub fn matrix(&self) -> &DualMatrix {
        &self.m
    }

    pub fn determinant(&self) -> DualScalar {
        det(&self.m)
    }

    /// The transformation `self ∘ other`, i.e. the matrix product.
    pub fn compose(&self, other: &LaguerreTransform) -> Result<LaguerreTransform> {
        LaguerreTransform::new(&self.m * &other.m)
    }
}

fn det(m: &DualMatrix) -> DualScalar {
    m.get(0, 0) * m.get(1, 1) - m.get(0, 1) * m.get(1, 0)
}

/// `(az + b)/(cz + d)`.
pub fn apply_transform(t: &LaguerreTransform, z: DualScalar) -> Result<DualScalar> {
    let m = &t.m;
    let den = m.get(1, 0) * z + m.get(1, 1);
    if den.std == 0.0 {
        return Err(Error::PoleAt(format!("cz + d = {den} at z = {z}")));
    }
    Ok((m.get(0, 0) * z + m.get(0, 1)) * den.inv()?)
}

#[derive(Debug, Clone, PartialEq)]
pub enum LaguerreForm {
    /// `M = U diag(σ₁, σ₂) V*`.
    Form1 { u: DualMatrix, v: DualMatrix, sigma: [f64; 2] },
    /// `M = U (σ, −εσ′; εσ′, σ)`.
    Form2 { u: DualMatrix, sigma: f64, sigma_prime: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct LaguerreClassification {
    pub form: LaguerreForm,
    /// Reconstruction error relative to `max(1, ‖M‖)`.
    pub residual: f64,
}

impl LaguerreClassification {
    pub fn reconstruct(&self) -> DualMatrix {
        match &self.form {
            LaguerreForm::Form1 { u, v, sigma } => {
                let s = DualMatrix::from_diagonal(&[DualScalar::real(sigma[0]), DualScalar::real(sigma[1])]);
                &(u * &s) * &v.star()
            }
            LaguerreForm::Form2 { u, sigma, sigma_prime } => {
                let block = SigmaBlock::Rotation { sigma: *sigma, sigma_prime: *sigma_prime };
                u * &block.matrix()
            }
        }
    }

    pub fn form_number(&self) -> u8 {
        match self.form {
            LaguerreForm::Form1 { .. } => 1,
            LaguerreForm::Form2 { .. } => 2,
        }
    }
}

/// Classifies `t` from its *-SVD.
///
/// A rotation block `σI + εσ′J` with `J = (0, −1; 1, 0)` commutes past a
/// unitary `V` up to the sign `det(st V)`: `V(σI + εσ′J)V* = σI + ε det(st V) σ′J`.
/// So `M = UΣV* = (UV*)·(σI + ε det(st V) σ′J)`, and `σ′` keeps that sign.
pub fn classify_transform(t: &LaguerreTransform) -> Result<LaguerreClassification> {
    let s = svd_invertible(&t.m, Flavor::Star)?;
    let form = match s.blocks.as_slice() {
        [SigmaBlock::Rotation { sigma, sigma_prime }] => {
            let orientation = s.v.std().determinant().signum();
            LaguerreForm::Form2 { u: &s.u * &s.v.star(), sigma: *sigma, sigma_prime: orientation * sigma_prime }
        }
        [SigmaBlock::Scalar(a), SigmaBlock::Scalar(b)] => LaguerreForm::Form1 { u: s.u, v: s.v, sigma: [a.std, b.std] },
        other => unreachable!("2×2 *-SVD produced blocks {other:?}"),
    };
    let mut out = LaguerreClassification { form, residual: 0.0 };
    out.residual = out.reconstruct().max_abs_diff(&t.m) / t.m.norm().max(1.0);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn transform(e: &[(f64, f64)]) -> Result<LaguerreTransform> {
        LaguerreTransform::new(DualMatrix::from_row_slice(2, 2, e).unwrap())
    }

    #[test]
    fn identity_fixes_every_point() {
        let t = transform(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]).unwrap();
        for z in [DualScalar::new(2.0, 1.0), DualScalar::new(-0.5, 3.0), DualScalar::EPSILON] {
            assert_eq!(apply_transform(&t, z).unwrap(), z);
        }
    }

    #[test]
    fn translation_and_inversion() {
        let shift = transform(&[(1.0, 0.0), (1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]).unwrap();
        assert_eq!(apply_transform(&shift, DualScalar::new(2.0, 1.0)).unwrap(), DualScalar::new(3.0, 1.0));

        let flip = transform(&[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)]).unwrap();
        assert_eq!(apply_transform(&flip, DualScalar::new(2.0, 4.0)).unwrap(), DualScalar::new(0.5, -1.0));
        assert!(matches!(apply_transform(&flip, DualScalar::EPSILON), Err(Error::PoleAt(_))));
    }

    #[test]
    fn real_diagonal_is_form_one() {
        let t = transform(&[(2.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]).unwrap();
        let c = classify_transform(&t).unwrap();
        assert_eq!(
            c.form,
            LaguerreForm::Form1 { u: DualMatrix::identity(2), v: DualMatrix::identity(2), sigma: [2.0, 1.0] }
        );
        assert_eq!(c.residual, 0.0);

        let id = transform(&[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]).unwrap();
        let c = classify_transform(&id).unwrap();
        assert!(matches!(c.form, LaguerreForm::Form1 { sigma: [1.0, 1.0], .. }));
    }

    #[test]
    fn rotation_generator_is_form_two() {
        let t = transform(&[(1.0, 0.0), (0.0, -1.0), (0.0, 1.0), (1.0, 0.0)]).unwrap();
        let c = classify_transform(&t).unwrap();
        match c.form {
            LaguerreForm::Form2 { ref u, sigma, sigma_prime } => {
                assert_eq!((sigma, sigma_prime), (1.0, 1.0));
                assert!(u.max_abs_diff(&DualMatrix::identity(2)) < 1e-15);
            }
            ref f => panic!("expected form 2, got {f:?}"),
        }
        assert!(c.residual < 1e-15);
    }

    #[test]
    fn reflected_rotation_keeps_its_orientation() {
        // (1, ε; ε, −1) = diag(1, −1)·(1, ε; −ε, 1): σ′ = −1 after the flip.
        let t = transform(&[(1.0, 0.0), (0.0, 1.0), (0.0, 1.0), (-1.0, 0.0)]).unwrap();
        let c = classify_transform(&t).unwrap();
        assert_eq!(c.form_number(), 2);
        assert!(c.residual < 1e-12, "{}", c.residual);
    }

    #[test]
    fn infinitesimal_determinant_is_rejected() {
        assert!(matches!(transform(&[(0.0, 1.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]), Err(Error::NotInvertible(_))));
        assert!(matches!(LaguerreTransform::new(DualMatrix::identity(3)), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn composition_is_the_matrix_product() {
        let a = transform(&[(1.0, 0.5), (2.0, 0.0), (0.5, -1.0), (3.0, 0.25)]).unwrap();
        let b = transform(&[(0.0, 1.0), (1.0, 0.0), (-1.0, 0.0), (0.5, 2.0)]).unwrap();
        let z = DualScalar::new(0.3, -0.7);
        let direct = apply_transform(&a.compose(&b).unwrap(), z).unwrap();
        let nested = apply_transform(&a, apply_transform(&b, z).unwrap()).unwrap();
        assert!((direct - nested).max_abs() < 1e-12);
    }
}
