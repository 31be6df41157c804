//! Singular value decompositions of square dual matrices, the T-polar
//! decomposition and the Moore–Penrose pseudoinverse.
//!
//! The invertible case takes the square root of the spectral decomposition
//! of `MᵃM`. A general matrix is reduced to it by splitting the spectral
//! basis of `MᵃM` into `V^L` (vectors sent to appreciable images) and `V^R`
//! (vectors sent to infinitesimal images). An isometry `U₀` carries the
//! image of `V^L` back onto `V^L`; in the basis `V^L ⊕ V^R` the matrix
//! `U₀M` is then block diagonal, with an invertible block on `V^L` and a
//! purely infinitesimal block `εT′` on `V^R`.

use nalgebra::{DMatrix, DVector};

use crate::dual::DualScalar;
use crate::error::{Error, Result};
use crate::linalg::{extend_orthonormal, gram_schmidt, DualMatrix, DualVector, Flavor};
use crate::real_spectral::{real_svd, sym_eig};
use crate::spectral::{clusters, correct, Eigenvalues, SpectralDecomposition, DEFAULT_CLUSTER_TOL};

/// Relative threshold for `svd_invertible`'s condition check on `st(M)`.
pub const INVERTIBILITY_TOL: f64 = 1e-10;

/// Default appreciability threshold for the `V^L / V^R` split.
pub const DEFAULT_SPLIT_TOL: f64 = 1e-8;

/// Penrose identities must hold to this residual, as scaled by [`penrose_residuals`].
pub const PENROSE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvdOptions {
    /// A basis vector `b` belongs to `V^L` iff `|st(Mb)| > split_tol·max(1, ‖st(M)‖)`.
    pub split_tol: f64,
    /// Singular values closer than `cluster_tol·max(1, σ_max)` are merged.
    pub cluster_tol: f64,
}

impl Default for SvdOptions {
    fn default() -> Self {
        SvdOptions { split_tol: DEFAULT_SPLIT_TOL, cluster_tol: DEFAULT_CLUSTER_TOL }
    }
}

/// A diagonal block of `Σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaBlock {
    /// `1×1`: any dual entry for `T`; `(σ)` or `(εσ′)` for `*`.
    Scalar(DualScalar),
    /// `(σ, −εσ′; εσ′, σ)`.
    Rotation { sigma: f64, sigma_prime: f64 },
}

impl SigmaBlock {
    pub fn size(&self) -> usize {
        match self {
            SigmaBlock::Scalar(_) => 1,
            SigmaBlock::Rotation { .. } => 2,
        }
    }

    pub fn matrix(&self) -> DualMatrix {
        match *self {
            SigmaBlock::Scalar(x) => DualMatrix::from_diagonal(&[x]),
            SigmaBlock::Rotation { sigma, sigma_prime } => {
                let mut b = DualMatrix::from_diagonal(&[DualScalar::real(sigma); 2]);
                b.set(0, 1, DualScalar::infinitesimal(-sigma_prime));
                b.set(1, 0, DualScalar::infinitesimal(sigma_prime));
                b
            }
        }
    }

    /// `(σ, σ′)` summary: the standard and infinitesimal parts of a scalar
    /// block, or the two block parameters.
    pub fn parameters(&self) -> (f64, f64) {
        match *self {
            SigmaBlock::Scalar(x) => (x.std, x.inf),
            SigmaBlock::Rotation { sigma, sigma_prime } => (sigma, sigma_prime),
        }
    }
}

/// `M = U Σ Vᵀ` (`T`) or `M = U Σ V*` (`Star`).
#[derive(Debug, Clone, PartialEq)]
pub struct SvdResult {
    pub u: DualMatrix,
    pub sigma: DualMatrix,
    pub v: DualMatrix,
    pub flavor: Flavor,
    pub blocks: Vec<SigmaBlock>,
    /// `‖UΣVᵃ − M‖ / max(1, ‖M‖)`, max over both parts.
    pub residual: f64,
}

impl SvdResult {
    pub fn reconstruct(&self) -> DualMatrix {
        &(&self.u * &self.sigma) * &self.flavor.adjoint(&self.v)
    }

    fn empty(flavor: Flavor) -> Self {
        SvdResult {
            u: DualMatrix::zeros(0, 0),
            sigma: DualMatrix::zeros(0, 0),
            v: DualMatrix::zeros(0, 0),
            flavor,
            blocks: Vec::new(),
            residual: 0.0,
        }
    }
}

fn assemble_blocks(blocks: &[SigmaBlock]) -> DualMatrix {
    blocks.iter().fold(DualMatrix::zeros(0, 0), |acc, b| acc.direct_sum(&b.matrix()))
}

fn relative_residual(m: &DualMatrix, approx: &DualMatrix) -> f64 {
    approx.max_abs_diff(m) / m.norm().max(1.0)
}

/// The spectral decomposition of `MᵃM`, computed without forming it.
///
/// With `st(M) = A = UΣ₀Vᵀ`, the standard part of `MᵃM` is `AᵀA = VΣ₀²Vᵀ`,
/// and for `inf(M) = B` and `W = UᵀBV` its rotated infinitesimal part is
/// `Vᵀ(AᵀB ± BᵀA)V = Σ₀W ± WᵀΣ₀` (`+` for `T`, `−` for `*`). Working from
/// the real SVD of `A` keeps the accuracy of small singular values that
/// an eigensolver on `AᵀA` would lose.
///
/// Singular values at or below `floor` form a single trailing cluster, so
/// that no cluster straddles the `V^L / V^R` threshold; its first column
/// is returned alongside.
fn spectral_of_gram(
    m: &DualMatrix,
    flavor: Flavor,
    opts: &SvdOptions,
    floor: f64,
) -> Result<(SpectralDecomposition, usize)> {
    let base = real_svd(m.std())?;
    let s = &base.singular_values;
    let s0 = DMatrix::from_diagonal(&DVector::from_column_slice(s));
    let w = base.u.transpose() * m.inf() * &base.v;
    let c = match flavor {
        Flavor::T => &s0 * &w + w.transpose() * &s0,
        Flavor::Star => &s0 * &w - w.transpose() * &s0,
    };
    let lambda: Vec<f64> = s.iter().map(|x| x * x).collect();
    let small = s.iter().position(|&x| x <= floor).unwrap_or(s.len());
    let mut groups = clusters(&s[..small], opts.cluster_tol * s.first().copied().unwrap_or(0.0).max(1.0));
    if small < s.len() {
        groups.push(small..s.len());
    }
    let d = correct(flavor, &base.v, &lambda, &c, &groups, |i, j| (s[i] - s[j]) * (s[i] + s[j]), opts.cluster_tol)?;
    Ok((d, small))
}

/// SVD of a matrix whose standard part is invertible.
///
/// With `MᵃM = V Λ Vᵃ`, the standard part of `Λ` is positive and
/// `√(MᵃM) = V √Λ Vᵃ`; then `M = (M V √Λ⁻¹) √Λ Vᵃ`. The root of a block
/// `(σ, −εσ′; εσ′, σ)` is `(√σ, −εσ′/(2√σ); εσ′/(2√σ), √σ)`.
pub fn svd_invertible(m: &DualMatrix, flavor: Flavor) -> Result<SvdResult> {
    svd_invertible_with(m, flavor, &SvdOptions::default())
}

pub fn svd_invertible_with(m: &DualMatrix, flavor: Flavor, opts: &SvdOptions) -> Result<SvdResult> {
    let n = m.ensure_square()?;
    if n == 0 {
        return Ok(SvdResult::empty(flavor));
    }
    let s = real_svd(m.std())?.singular_values;
    if !(s[n - 1] > INVERTIBILITY_TOL * s[0]) {
        return Err(Error::NotInvertible(format!("standard part has singular value ratio {:e}", s[n - 1] / s[0])));
    }

    let (spectral, _) = spectral_of_gram(m, flavor, opts, 0.0)?;
    let blocks: Vec<SigmaBlock> = match &spectral.eigenvalues {
        Eigenvalues::T(diag) => diag.iter().map(|d| d.sqrt().map(SigmaBlock::Scalar)).collect::<Result<_>>()?,
        Eigenvalues::Star(blocks) => blocks
            .iter()
            .map(|b| {
                let root = DualScalar::real(b.sigma).sqrt()?.std;
                Ok(if b.size == 2 {
                    SigmaBlock::Rotation { sigma: root, sigma_prime: b.sigma_prime / (2.0 * root) }
                } else {
                    SigmaBlock::Scalar(DualScalar::real(root))
                })
            })
            .collect::<Result<_>>()?,
    };
    let sigma = assemble_blocks(&blocks);
    let v = spectral.v;
    let mut u = &(m * &v) * &sigma.try_inverse()?;
    // columns come in decreasing σ, so the sweep corrects the small-σ ones
    if u.structure_residual(flavor.isometry())? > 1e-14 {
        u = crate::linalg::reorthonormalize(&u, flavor)?;
    }
    let mut out = SvdResult { u, sigma, v, flavor, blocks, residual: 0.0 };
    out.residual = relative_residual(m, &out.reconstruct());
    Ok(out)
}

/// Orthonormal bases of `V^L` and `V^R` drawn from the spectral basis of `MᵃM`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceSplit {
    pub flavor: Flavor,
    pub vl_basis: Vec<DualVector>,
    pub vr_basis: Vec<DualVector>,
}

impl SubspaceSplit {
    /// `V^L` basis followed by `V^R` basis, as columns.
    pub fn basis_matrix(&self) -> DualMatrix {
        let n = self.vl_basis.first().or(self.vr_basis.first()).map_or(0, DualVector::len);
        let cols: Vec<DualVector> = self.vl_basis.iter().chain(&self.vr_basis).cloned().collect();
        DualMatrix::from_columns(n, &cols).expect("basis vectors share one length")
    }

    /// Smallest eigenvalue of the standard part of the Gram matrix of the
    /// images `M·b`, `b ∈ V^L`. Positive iff `M` is injective on `V^L`.
    pub fn injectivity_margin(&self, m: &DualMatrix) -> Result<f64> {
        if self.vl_basis.is_empty() {
            return Ok(f64::INFINITY);
        }
        let images = self.images(m, &self.vl_basis)?;
        let k = images.len();
        let mut gram = DMatrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                gram[(i, j)] = self.flavor.form(&images[i], &images[j])?.std;
            }
        }
        let e = sym_eig(&gram, f64::INFINITY)?;
        Ok(e.eigenvalues[k - 1])
    }

    /// Largest `|form(M·b_l, M·b_r)|` over `b_l ∈ V^L`, `b_r ∈ V^R`.
    pub fn image_orthogonality(&self, m: &DualMatrix) -> Result<f64> {
        let left = self.images(m, &self.vl_basis)?;
        let right = self.images(m, &self.vr_basis)?;
        let mut worst = 0.0_f64;
        for l in &left {
            for r in &right {
                worst = worst.max(self.flavor.form(l, r)?.max_abs());
            }
        }
        Ok(worst)
    }

    /// The isometry `U₀` with `U₀(c_i) = b_i`, where `c` is an orthonormal
    /// basis of `M(V^L)` obtained by Gram–Schmidt and then extended, and
    /// `b` is the `V^L` basis followed by the `V^R` basis.
    pub fn isometry(&self, m: &DualMatrix) -> Result<DualMatrix> {
        let n = m.ensure_square()?;
        let images = self.images(m, &self.vl_basis)?;
        // the second pass restores the orthonormality that small images lose
        let c = gram_schmidt(&gram_schmidt(&images, self.flavor)?, self.flavor)?;
        let c = extend_orthonormal(&c, n, self.flavor)?;
        let c = DualMatrix::from_columns(n, &c)?;
        Ok(&self.basis_matrix() * &self.flavor.adjoint(&c))
    }

    fn images(&self, m: &DualMatrix, basis: &[DualVector]) -> Result<Vec<DualVector>> {
        basis.iter().map(|b| m.mul_vec(b)).collect()
    }
}

/// Splits the spectral basis of `MᵃM` by whether `M` maps each vector to an
/// appreciable image, judged by `|st(Mb)| > tol·max(1, ‖st(M)‖)`.
///
/// Singular values at or below the threshold are clustered together in
/// the spectral step, so a `2×2` block never straddles the split.
pub fn split_subspaces(m: &DualMatrix, flavor: Flavor, tol: f64) -> Result<SubspaceSplit> {
    split_subspaces_with(m, flavor, &SvdOptions { split_tol: tol, ..SvdOptions::default() })
}

pub fn split_subspaces_with(m: &DualMatrix, flavor: Flavor, opts: &SvdOptions) -> Result<SubspaceSplit> {
    let n = m.ensure_square()?;
    let mut split = SubspaceSplit { flavor, vl_basis: Vec::new(), vr_basis: Vec::new() };
    if n == 0 {
        return Ok(split);
    }
    let threshold = opts.split_tol * m.std_norm().max(1.0);
    let (spectral, small) = spectral_of_gram(m, flavor, opts, threshold)?;
    // |st(M v_i)| is the singular value σ_i, so the columns from `small` on
    // are exactly those with images at or below the threshold
    let basis = spectral.v.columns();
    split.vl_basis = basis[..small].to_vec();
    split.vr_basis = basis[small..].to_vec();
    Ok(split)
}

/// SVD of an arbitrary square dual matrix with default tolerances.
pub fn svd(m: &DualMatrix, flavor: Flavor) -> Result<SvdResult> {
    svd_with(m, flavor, &SvdOptions::default())
}

/// SVD of an arbitrary square dual matrix.
///
/// `Σ` lists the blocks of the invertible part first (standard part
/// descending), then the infinitesimal entries `εσ′` (`σ′ ≥ 0` descending),
/// ending with zeros.
pub fn svd_with(m: &DualMatrix, flavor: Flavor, opts: &SvdOptions) -> Result<SvdResult> {
    let n = m.ensure_square()?;
    if n == 0 {
        return Ok(SvdResult::empty(flavor));
    }
    let original = m;
    let truncated = truncate_standard(m, opts.split_tol * m.std_norm().max(1.0))?;
    let m = truncated.as_ref().unwrap_or(m);
    let split = split_subspaces_with(m, flavor, opts)?;
    if split.vr_basis.is_empty() {
        // nothing to split off; U₀ would only add rounding
        if let Ok(s) = svd_invertible_with(m, flavor, opts) {
            return Ok(s);
        }
    }
    let k = split.vl_basis.len();
    let basis = split.basis_matrix();
    let u0 = split.isometry(m)?;

    // U₀M in the basis V^L ⊕ V^R; off-diagonal blocks vanish.
    let reduced = &(&flavor.adjoint(&basis) * &(&u0 * m)) * &basis;
    let left: Vec<usize> = (0..k).collect();
    let right: Vec<usize> = (k..n).collect();

    let invertible = if k > 0 {
        svd_invertible_with(&reduced.select(&left, &left), flavor, opts)?
    } else {
        SvdResult::empty(flavor)
    };

    // On V^R the map is εT′, which depends only on st(T′).
    let infinitesimal = reduced.select(&right, &right);
    let t_prime = real_svd(infinitesimal.inf())?;

    let mut blocks = invertible.blocks;
    blocks.extend(t_prime.singular_values.iter().map(|&s| SigmaBlock::Scalar(DualScalar::infinitesimal(s))));
    let sigma = assemble_blocks(&blocks);

    let inner_u = invertible.u.direct_sum(&DualMatrix::from_real(t_prime.u));
    let inner_v = invertible.v.direct_sum(&DualMatrix::from_real(t_prime.v));
    let u = &(&flavor.adjoint(&u0) * &basis) * &inner_u;
    let v = &basis * &inner_v;

    let mut out = SvdResult { u, sigma, v, flavor, blocks, residual: 0.0 };
    out.residual = relative_residual(original, &out.reconstruct());
    Ok(out)
}

/// `M` with the singular values of `st(M)` in `(0, threshold]` set to zero,
/// or `None` if there are none. The split counts those directions as
/// infinitesimal; decomposing the truncated matrix keeps the error at the
/// size of the dropped values instead of amplifying it through `U₀`.
fn truncate_standard(m: &DualMatrix, threshold: f64) -> Result<Option<DualMatrix>> {
    let base = real_svd(m.std())?;
    let s = &base.singular_values;
    if s.iter().all(|&x| x > threshold || x == 0.0) {
        return Ok(None);
    }
    let kept = DVector::from_iterator(s.len(), s.iter().map(|&x| if x > threshold { x } else { 0.0 }));
    let std = &base.u * DMatrix::from_diagonal(&kept) * base.v.transpose();
    Ok(Some(DualMatrix::new(std, m.inf().clone())?))
}

/// `M = UP` with `UᵀU = I` and `P` symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarResult {
    pub u: DualMatrix,
    pub p: DualMatrix,
}

/// T-polar decomposition from the T-SVD: `U = U_s V_sᵀ`, `P = V_s Σ V_sᵀ`.
pub fn t_polar(m: &DualMatrix) -> Result<PolarResult> {
    t_polar_with(m, &SvdOptions::default())
}

pub fn t_polar_with(m: &DualMatrix, opts: &SvdOptions) -> Result<PolarResult> {
    let s = svd_with(m, Flavor::T, opts)?;
    let vt = s.v.transpose();
    let u = &s.u * &vt;
    let p = &(&s.v * &s.sigma) * &vt;
    // symmetric up to rounding; make it exact
    let p = DualMatrix::new((p.std() + p.std().transpose()) * 0.5, (p.inf() + p.inf().transpose()) * 0.5)?;
    Ok(PolarResult { u, p })
}

/// Outcome of [`pinv_t`]: absence of a pseudoinverse is an answer, not a fault.
#[derive(Debug, Clone, PartialEq)]
pub enum Pseudoinverse {
    Exists(DualMatrix),
    NonExistent,
}

/// Residuals of `MXM = M`, `XMX = X`, `(MX)ᵀ = MX`, `(XM)ᵀ = XM`, each
/// divided by `max(1, ‖·‖)` of the product of the norms of its factors
/// (`‖M‖²‖X‖`, `‖M‖‖X‖²`, `‖M‖‖X‖`, `‖M‖‖X‖`). That is the size of the
/// rounding error in forming the products, so a correctly rounded `X`
/// scores near machine precision however ill-conditioned `M` is.
pub fn penrose_residuals(m: &DualMatrix, x: &DualMatrix) -> Result<[f64; 4]> {
    let mx = m.checked_mul(x)?;
    let xm = x.checked_mul(m)?;
    let mxm = mx.checked_mul(m)?;
    let xmx = xm.checked_mul(x)?;
    if mxm.shape() != m.shape() || xmx.shape() != x.shape() {
        return Err(Error::DimensionMismatch("pseudoinverse has the wrong shape".into()));
    }
    let (nm, nx) = (m.norm(), x.norm());
    Ok([
        mxm.max_abs_diff(m) / (nm * nm * nx).max(1.0),
        xmx.max_abs_diff(x) / (nm * nx * nx).max(1.0),
        mx.max_abs_diff(&mx.transpose()) / (nm * nx).max(1.0),
        xm.max_abs_diff(&xm.transpose()) / (nm * nx).max(1.0),
    ])
}

/// Moore–Penrose pseudoinverse with respect to the transpose.
///
/// From `M = UΣVᵀ`, appreciable diagonal entries are inverted and zero
/// entries kept; a nonzero purely infinitesimal entry `εσ′` admits no
/// pseudoinverse. A returned `X = VΣ†Uᵀ` has passed all four Penrose
/// identities at [`PENROSE_TOL`].
pub fn pinv_t(m: &DualMatrix) -> Result<Pseudoinverse> {
    pinv_t_with(m, &SvdOptions::default())
}

pub fn pinv_t_with(m: &DualMatrix, opts: &SvdOptions) -> Result<Pseudoinverse> {
    let s = svd_with(m, Flavor::T, opts)?;
    let threshold = opts.split_tol * m.norm().max(1.0);
    let mut diag = Vec::with_capacity(s.blocks.len());
    for block in &s.blocks {
        let SigmaBlock::Scalar(d) = *block else {
            unreachable!("T-SVD has a diagonal Σ");
        };
        if d.std.abs() > threshold {
            diag.push(d.inv()?);
        } else if d.inf.abs() <= threshold {
            diag.push(DualScalar::ZERO);
        } else {
            return Ok(Pseudoinverse::NonExistent);
        }
    }
    let x = &(&s.v * &DualMatrix::from_diagonal(&diag)) * &s.u.transpose();
    let residuals = penrose_residuals(m, &x)?;
    if let Some((i, &r)) = residuals.iter().enumerate().find(|(_, &r)| !(r <= PENROSE_TOL)) {
        return Err(Error::PenroseViolation { identity: i + 1, residual: r });
    }
    Ok(Pseudoinverse::Exists(x))
}

/// Whether `Σ` consists only of blocks `(σ)`, `(σ, −εσ′; εσ′, σ)` with
/// `σ′ ≠ 0`, and `(εσ′)`, each within `tol`.
pub fn is_star_block_form(blocks: &[SigmaBlock], tol: f64) -> bool {
    blocks.iter().all(|b| match *b {
        SigmaBlock::Scalar(x) => x.inf.abs() <= tol || x.std.abs() <= tol,
        SigmaBlock::Rotation { sigma_prime, .. } => sigma_prime.abs() > tol,
    })
}

/// Largest departure of the structural invariants of an SVD: isometry of
/// both factors and the reconstruction residual.
pub fn svd_defect(s: &SvdResult) -> Result<f64> {
    let iso = s.flavor.isometry();
    Ok(s.residual.max(s.u.structure_residual(iso)?).max(s.v.structure_residual(iso)?))
}
