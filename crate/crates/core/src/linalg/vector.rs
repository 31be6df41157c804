use std::ops::{Index, IndexMut};

use nalgebra::DVector;

use crate::dual::DualScalar;
use crate::error::{Error, Result};

/// A column vector over the dual numbers.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DualVector {
    pub entries: Vec<DualScalar>,
}

impl DualVector {
    pub fn new(entries: Vec<DualScalar>) -> Self {
        DualVector { entries }
    }

    pub fn zeros(n: usize) -> Self {
        DualVector { entries: vec![DualScalar::ZERO; n] }
    }

    /// The `i`-th standard basis vector of length `n`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = DualVector::zeros(n);
        v.entries[i] = DualScalar::ONE;
        v
    }

    pub fn from_parts(std: &DVector<f64>, inf: &DVector<f64>) -> Result<Self> {
        if std.len() != inf.len() {
            return Err(Error::DimensionMismatch(format!(
                "standard part has length {}, infinitesimal part {}",
                std.len(),
                inf.len()
            )));
        }
        Ok(DualVector { entries: std.iter().zip(inf.iter()).map(|(&a, &b)| DualScalar::new(a, b)).collect() })
    }

    pub fn from_real(std: &[f64]) -> Self {
        DualVector { entries: std.iter().map(|&a| DualScalar::real(a)).collect() }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn std_part(&self) -> DVector<f64> {
        DVector::from_iterator(self.len(), self.entries.iter().map(|x| x.std))
    }

    pub fn inf_part(&self) -> DVector<f64> {
        DVector::from_iterator(self.len(), self.entries.iter().map(|x| x.inf))
    }

    /// Euclidean norm of the standard part, `|st(v)|`.
    pub fn std_norm(&self) -> f64 {
        self.entries.iter().map(|x| x.std * x.std).sum::<f64>().sqrt()
    }

    /// Largest absolute component over both parts.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|x| x.max_abs()).fold(0.0, f64::max)
    }

    pub fn conj(&self) -> Self {
        DualVector { entries: self.entries.iter().map(|x| x.conj()).collect() }
    }

    pub fn scale(&self, k: DualScalar) -> Self {
        DualVector { entries: self.entries.iter().map(|&x| x * k).collect() }
    }

    /// `self − k·other`, in place.
    pub(crate) fn sub_scaled(&mut self, k: DualScalar, other: &DualVector) {
        for (x, &y) in self.entries.iter_mut().zip(&other.entries) {
            *x -= k * y;
        }
    }

    fn check_len(&self, other: &DualVector) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!("vectors of length {} and {}", self.len(), other.len())));
        }
        Ok(())
    }

    pub fn checked_sub(&self, other: &DualVector) -> Result<DualVector> {
        self.check_len(other)?;
        Ok(DualVector { entries: self.entries.iter().zip(&other.entries).map(|(&a, &b)| a - b).collect() })
    }
}

impl Index<usize> for DualVector {
    type Output = DualScalar;
    fn index(&self, i: usize) -> &DualScalar {
        &self.entries[i]
    }
}

impl IndexMut<usize> for DualVector {
    fn index_mut(&mut self, i: usize) -> &mut DualScalar {
        &mut self.entries[i]
    }
}

impl From<Vec<DualScalar>> for DualVector {
    fn from(entries: Vec<DualScalar>) -> Self {
        DualVector { entries }
    }
}

/// The symmetric bilinear form `(u, v) = uᵀv`.
pub fn t_form(u: &DualVector, v: &DualVector) -> Result<DualScalar> {
    u.check_len(v)?;
    Ok(u.entries.iter().zip(&v.entries).map(|(&a, &b)| a * b).sum())
}

/// The sesquilinear form `⟨u, v⟩ = uᵀ·v̄`, linear in its first argument.
pub fn star_form(u: &DualVector, v: &DualVector) -> Result<DualScalar> {
    u.check_len(v)?;
    Ok(u.entries.iter().zip(&v.entries).map(|(&a, &b)| a * b.conj()).sum())
}
