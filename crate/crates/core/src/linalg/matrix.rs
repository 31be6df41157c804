use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;

use super::vector::DualVector;
use crate::dual::DualScalar;
use crate::error::{Error, Result};

/// A dual matrix `A + εB`, stored as its two real parts.
#[derive(Debug, Clone, PartialEq)]
pub struct DualMatrix {
    std: DMatrix<f64>,
    inf: DMatrix<f64>,
}

/// Structural predicates checked by [`DualMatrix::structure_residual`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structure {
    /// `M = Mᵀ`
    Symmetric,
    /// `M = M*`
    Hermitian,
    /// `MᵀM = MMᵀ = I`
    TOrthogonal,
    /// `MM* = M*M = I`
    Unitary,
}

impl DualMatrix {
    pub fn new(std: DMatrix<f64>, inf: DMatrix<f64>) -> Result<Self> {
        if std.shape() != inf.shape() {
            return Err(Error::DimensionMismatch(format!(
                "standard part is {:?}, infinitesimal part {:?}",
                std.shape(),
                inf.shape()
            )));
        }
        Ok(DualMatrix { std, inf })
    }

    pub fn from_real(std: DMatrix<f64>) -> Self {
        let inf = DMatrix::zeros(std.nrows(), std.ncols());
        DualMatrix { std, inf }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        DualMatrix { std: DMatrix::zeros(rows, cols), inf: DMatrix::zeros(rows, cols) }
    }

    pub fn identity(n: usize) -> Self {
        DualMatrix::from_real(DMatrix::identity(n, n))
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> DualScalar) -> Self {
        let mut m = DualMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Row-major construction from `(std, inf)` pairs.
    pub fn from_row_slice(rows: usize, cols: usize, entries: &[(f64, f64)]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
        }
        Ok(DualMatrix::from_fn(rows, cols, |i, j| {
            let (a, b) = entries[i * cols + j];
            DualScalar::new(a, b)
        }))
    }

    pub fn from_diagonal(diag: &[DualScalar]) -> Self {
        let n = diag.len();
        DualMatrix::from_fn(n, n, |i, j| if i == j { diag[i] } else { DualScalar::ZERO })
    }

    /// Assembles a matrix from column vectors of equal length `rows`.
    pub fn from_columns(rows: usize, columns: &[DualVector]) -> Result<Self> {
        let mut m = DualMatrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch(format!("column {j} has length {}, expected {rows}", c.len())));
            }
            for i in 0..rows {
                m.set(i, j, c[i]);
            }
        }
        Ok(m)
    }

    pub fn std(&self) -> &DMatrix<f64> {
        &self.std
    }

    pub fn inf(&self) -> &DMatrix<f64> {
        &self.inf
    }

    pub fn into_parts(self) -> (DMatrix<f64>, DMatrix<f64>) {
        (self.std, self.inf)
    }

    pub fn nrows(&self) -> usize {
        self.std.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.std.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.std.shape()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    pub fn ensure_square(&self) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.nrows(), cols: self.ncols() });
        }
        Ok(self.nrows())
    }

    pub fn get(&self, i: usize, j: usize) -> DualScalar {
        DualScalar::new(self.std[(i, j)], self.inf[(i, j)])
    }

    pub fn set(&mut self, i: usize, j: usize, x: DualScalar) {
        self.std[(i, j)] = x.std;
        self.inf[(i, j)] = x.inf;
    }

    pub fn column(&self, j: usize) -> DualVector {
        DualVector::new((0..self.nrows()).map(|i| self.get(i, j)).collect())
    }

    pub fn columns(&self) -> Vec<DualVector> {
        (0..self.ncols()).map(|j| self.column(j)).collect()
    }

    /// Square submatrix with the given rows and columns.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> DualMatrix {
        DualMatrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }

    pub fn transpose(&self) -> DualMatrix {
        DualMatrix { std: self.std.transpose(), inf: self.inf.transpose() }
    }

    /// Entrywise conjugate `M̄`.
    pub fn conj(&self) -> DualMatrix {
        DualMatrix { std: self.std.clone(), inf: -&self.inf }
    }

    /// Conjugate transpose `M* = M̄ᵀ`.
    pub fn star(&self) -> DualMatrix {
        DualMatrix { std: self.std.transpose(), inf: -self.inf.transpose() }
    }

    pub fn scale(&self, k: DualScalar) -> DualMatrix {
        DualMatrix { std: &self.std * k.std, inf: &self.inf * k.std + &self.std * k.inf }
    }

    pub fn checked_add(&self, other: &DualMatrix) -> Result<DualMatrix> {
        self.check_same_shape(other)?;
        Ok(DualMatrix { std: &self.std + &other.std, inf: &self.inf + &other.inf })
    }

    pub fn checked_sub(&self, other: &DualMatrix) -> Result<DualMatrix> {
        self.check_same_shape(other)?;
        Ok(DualMatrix { std: &self.std - &other.std, inf: &self.inf - &other.inf })
    }

    /// `(A + εB)(C + εD) = AC + ε(AD + BC)`.
    pub fn checked_mul(&self, other: &DualMatrix) -> Result<DualMatrix> {
        if self.ncols() != other.nrows() {
            return Err(Error::DimensionMismatch(format!("cannot multiply {:?} by {:?}", self.shape(), other.shape())));
        }
        Ok(DualMatrix { std: &self.std * &other.std, inf: &self.std * &other.inf + &self.inf * &other.std })
    }

    pub fn mul_vec(&self, v: &DualVector) -> Result<DualVector> {
        if self.ncols() != v.len() {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {:?} by a vector of length {}",
                self.shape(),
                v.len()
            )));
        }
        let (vs, vi) = (v.std_part(), v.inf_part());
        let std = &self.std * &vs;
        let inf = &self.std * &vi + &self.inf * &vs;
        DualVector::from_parts(&std, &inf)
    }

    fn check_same_shape(&self, other: &DualMatrix) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(format!("shapes {:?} and {:?} differ", self.shape(), other.shape())));
        }
        Ok(())
    }

    /// `(A + εB)⁻¹ = A⁻¹ − εA⁻¹BA⁻¹`; requires an invertible standard part.
    pub fn try_inverse(&self) -> Result<DualMatrix> {
        self.ensure_square()?;
        let a_inv =
            self.std.clone().try_inverse().ok_or_else(|| Error::NotInvertible("standard part is singular".into()))?;
        let inf = -(&a_inv * &self.inf * &a_inv);
        Ok(DualMatrix { std: a_inv, inf })
    }

    /// Entrywise max norm, taken over both real parts.
    pub fn norm(&self) -> f64 {
        self.std.amax().max(self.inf.amax())
    }

    pub fn std_norm(&self) -> f64 {
        self.std.amax()
    }

    /// Largest entrywise difference over both parts.
    ///
    /// # Panics
    ///
    /// Panics if the shapes differ.
    pub fn max_abs_diff(&self, other: &DualMatrix) -> f64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        (&self.std - &other.std).amax().max((&self.inf - &other.inf).amax())
    }

    /// Block-diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &DualMatrix) -> DualMatrix {
        let (r1, c1) = self.shape();
        let (r2, c2) = other.shape();
        let mut m = DualMatrix::zeros(r1 + r2, c1 + c2);
        m.std.view_mut((0, 0), (r1, c1)).copy_from(&self.std);
        m.inf.view_mut((0, 0), (r1, c1)).copy_from(&self.inf);
        m.std.view_mut((r1, c1), (r2, c2)).copy_from(&other.std);
        m.inf.view_mut((r1, c1), (r2, c2)).copy_from(&other.inf);
        m
    }

    /// Residual of a structural predicate, using the max norm over both parts.
    ///
    /// Scaled by `max(1, ‖M‖)`. For the orthogonality predicates it is the
    /// larger of the two one-sided defects against the identity.
    pub fn structure_residual(&self, kind: Structure) -> Result<f64> {
        let n = self.ensure_square()?;
        let scale = self.norm().max(1.0);
        let id = DualMatrix::identity(n);
        let r = match kind {
            Structure::Symmetric => self.max_abs_diff(&self.transpose()) / scale,
            Structure::Hermitian => self.max_abs_diff(&self.star()) / scale,
            // rounding in the products grows with the infinitesimal part
            Structure::TOrthogonal => {
                let t = self.transpose();
                (&t * self).max_abs_diff(&id).max((self * &t).max_abs_diff(&id)) / scale
            }
            Structure::Unitary => {
                let s = self.star();
                (&s * self).max_abs_diff(&id).max((self * &s).max_abs_diff(&id)) / scale
            }
        };
        Ok(r)
    }

    pub fn structure_check(&self, kind: Structure, tol: f64) -> Result<bool> {
        Ok(self.structure_residual(kind)? <= tol)
    }
}

/// # Panics
///
/// Panics on a dimension mismatch; [`DualMatrix::checked_mul`] reports it instead.
impl Mul for &DualMatrix {
    type Output = DualMatrix;
    fn mul(self, rhs: &DualMatrix) -> DualMatrix {
        self.checked_mul(rhs).expect("dual matrix product dimension mismatch")
    }
}

impl Add for &DualMatrix {
    type Output = DualMatrix;
    fn add(self, rhs: &DualMatrix) -> DualMatrix {
        self.checked_add(rhs).expect("dual matrix sum dimension mismatch")
    }
}

impl Sub for &DualMatrix {
    type Output = DualMatrix;
    fn sub(self, rhs: &DualMatrix) -> DualMatrix {
        self.checked_sub(rhs).expect("dual matrix difference dimension mismatch")
    }
}
