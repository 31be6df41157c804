use super::{DualMatrix, DualVector, Flavor};
use crate::dual::DualScalar;
use crate::error::{Error, Result};

/// Relative threshold below which a residual's standard part counts as zero.
pub const INDEPENDENCE_TOL: f64 = 1e-10;

/// Removes the components of `v` along the orthonormal `basis`, twice.
///
/// The coefficient is `form(v, e)` so that the residual is exactly
/// orthogonal to each `e` under a form that is linear in its first slot.
fn project_out(v: &mut DualVector, basis: &[DualVector], flavor: Flavor) -> Result<()> {
    for _ in 0..2 {
        for e in basis {
            let c = flavor.form(v, e)?;
            v.sub_scaled(c, e);
        }
    }
    Ok(())
}

/// Scales a residual with appreciable standard part to unit length.
///
/// `Star` divides by `|st(r)|`, which is exact because `⟨r, r⟩ = |st(r)|²`.
/// `T` divides by `√(r, r)`, since `(r, r)` generally has an infinitesimal part.
fn normalize(r: &DualVector, flavor: Flavor) -> Result<DualVector> {
    match flavor {
        Flavor::Star => Ok(r.scale(DualScalar::real(1.0 / r.std_norm()))),
        Flavor::T => {
            let norm = flavor.form(r, r)?.sqrt()?;
            Ok(r.scale(norm.inv()?))
        }
    }
}

/// Dual Gram–Schmidt under the chosen form.
///
/// Succeeds iff the standard parts of the inputs are linearly independent
/// (relative threshold [`INDEPENDENCE_TOL`]); the output spans the same
/// submodule and is orthonormal.
pub fn gram_schmidt(vectors: &[DualVector], flavor: Flavor) -> Result<Vec<DualVector>> {
    let Some(first) = vectors.first() else {
        return Ok(Vec::new());
    };
    let n = first.len();
    if let Some(bad) = vectors.iter().find(|v| v.len() != n) {
        return Err(Error::DimensionMismatch(format!("vectors of length {n} and {}", bad.len())));
    }
    let scale = vectors.iter().map(DualVector::std_norm).fold(0.0, f64::max);
    let mut out: Vec<DualVector> = Vec::with_capacity(vectors.len());
    for (k, v) in vectors.iter().enumerate() {
        let mut r = v.clone();
        project_out(&mut r, &out, flavor)?;
        let norm = r.std_norm();
        if !(norm > INDEPENDENCE_TOL * scale) {
            return Err(Error::DegenerateInput(format!(
                "vector {k} has standard-part residual {norm:e} after projection \
                 (scale {scale:e}); inputs are linearly dependent"
            )));
        }
        out.push(normalize(&r, flavor)?);
    }
    Ok(out)
}

/// Largest deviation of the Gram matrix of `vectors` from the identity.
pub(crate) fn orthonormality_residual(vectors: &[DualVector], flavor: Flavor) -> Result<f64> {
    let mut worst = 0.0_f64;
    for (i, u) in vectors.iter().enumerate() {
        for (j, v) in vectors.iter().enumerate() {
            let target = if i == j { DualScalar::ONE } else { DualScalar::ZERO };
            worst = worst.max((flavor.form(u, v)? - target).max_abs());
        }
    }
    Ok(worst)
}

/// Completes an orthonormal list to an orthonormal basis of length `n`.
///
/// The inputs are returned unchanged in front. Standard basis vectors are
/// orthogonalized against the current list, taking at each step the one
/// with the largest standard-part residual and skipping dependent ones.
pub fn extend_orthonormal(partial: &[DualVector], n: usize, flavor: Flavor) -> Result<Vec<DualVector>> {
    if let Some(bad) = partial.iter().find(|v| v.len() != n) {
        return Err(Error::DimensionMismatch(format!("vector of length {} in a basis of dimension {n}", bad.len())));
    }
    if partial.len() > n {
        return Err(Error::DegenerateInput(format!(
            "{} vectors cannot be independent in dimension {n}",
            partial.len()
        )));
    }
    // large infinitesimal parts carry proportionally large rounding
    let scale = partial.iter().map(DualVector::max_abs).fold(1.0, f64::max);
    let residual = orthonormality_residual(partial, flavor)? / scale;
    if residual > 1e-8 {
        return Err(Error::NotOrthonormal { residual });
    }

    let mut out = partial.to_vec();
    let mut unused: Vec<usize> = (0..n).collect();
    while out.len() < n {
        let mut best: Option<(usize, DualVector, f64)> = None;
        for (slot, &i) in unused.iter().enumerate() {
            let mut r = DualVector::basis(n, i);
            project_out(&mut r, &out, flavor)?;
            let norm = r.std_norm();
            if best.as_ref().is_none_or(|b| norm > b.2) {
                best = Some((slot, r, norm));
            }
        }
        // Some basis vector always has residual² ≥ (n − k)/n.
        let (slot, r, norm) = best.expect("candidate basis vectors exhausted");
        if !(norm > INDEPENDENCE_TOL) {
            return Err(Error::DegenerateInput("standard parts of the partial basis are linearly dependent".into()));
        }
        unused.remove(slot);
        out.push(normalize(&r, flavor)?);
    }
    Ok(out)
}

/// Re-orthonormalizes the columns of a nearly orthonormal matrix.
pub(crate) fn reorthonormalize_columns(m: &DualMatrix, flavor: Flavor) -> Result<DualMatrix> {
    let cols = gram_schmidt(&m.columns(), flavor)?;
    DualMatrix::from_columns(m.nrows(), &cols)
}
