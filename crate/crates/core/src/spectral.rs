//! Spectral decompositions of symmetric (`M = V D Vᵀ`) and Hermitian
//! (`M = V Σ V*`) dual matrices.
//!
//! Both follow the same pipeline. The standard part is diagonalized by a
//! real orthogonal `Q`, giving `QᵀMQ = D + εC` with `D = diag(λ)`. Eigenvalues
//! are grouped into clusters, and the correction `P = I + εK` with
//! `K_ij = C_ij / (λ_i − λ_j)` across clusters removes every off-cluster
//! entry of `C`: `P (D + εC) Pᵃ = D + ε·⊕C_cc`, where `Pᵃ = I − εK` is
//! the transpose (`K` skew) or conjugate transpose (`K` symmetric). Each
//! cluster block `λ_c I + εC_cc` is then finished by a real orthogonal
//! `R_c`: `C_cc` is symmetric for `T` and skew for `*`. Altogether
//! `V = Q (I − εK) R`.

use nalgebra::DMatrix;

use crate::dual::DualScalar;
use crate::error::{Error, Result};
use crate::linalg::{DualMatrix, Flavor};
use crate::real_spectral::{skew_block_diag, sym_eig};

/// Default relative gap under which standard eigenvalues are merged.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-8;

/// Tolerances for the spectral routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralOptions {
    /// Admissible symmetric/Hermitian defect, relative to `max(1, ‖M‖)`.
    pub tol: f64,
    /// Eigenvalues closer than `cluster_tol·max(1, ‖st(M)‖)` are merged;
    /// skew blocks with `σ′` below the same relative bound are dropped.
    pub cluster_tol: f64,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions { tol: 1e-8, cluster_tol: DEFAULT_CLUSTER_TOL }
    }
}

/// A `1×1` block `(σ)` or a `2×2` block `(σ, −εσ′; εσ′, σ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralBlock {
    pub sigma: f64,
    /// Zero for `1×1` blocks, positive for `2×2` blocks.
    pub sigma_prime: f64,
    pub size: usize,
}

impl SpectralBlock {
    pub fn scalar(sigma: f64) -> Self {
        SpectralBlock { sigma, sigma_prime: 0.0, size: 1 }
    }

    pub fn rotation(sigma: f64, sigma_prime: f64) -> Self {
        SpectralBlock { sigma, sigma_prime, size: 2 }
    }

    pub fn matrix(&self) -> DualMatrix {
        match self.size {
            1 => DualMatrix::from_diagonal(&[DualScalar::real(self.sigma)]),
            _ => {
                let mut b = DualMatrix::from_diagonal(&[DualScalar::real(self.sigma); 2]);
                b.set(0, 1, DualScalar::infinitesimal(-self.sigma_prime));
                b.set(1, 0, DualScalar::infinitesimal(self.sigma_prime));
                b
            }
        }
    }
}

/// The middle factor of a spectral decomposition.
#[derive(Debug, Clone, PartialEq)]
pub enum Eigenvalues {
    /// Dual diagonal of a `T` decomposition.
    T(Vec<DualScalar>),
    /// Blocks of a `*` decomposition.
    Star(Vec<SpectralBlock>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    /// T-orthogonal (`T`) or unitary (`*`) transform.
    pub v: DualMatrix,
    pub eigenvalues: Eigenvalues,
}

impl SpectralDecomposition {
    pub fn flavor(&self) -> Flavor {
        match self.eigenvalues {
            Eigenvalues::T(_) => Flavor::T,
            Eigenvalues::Star(_) => Flavor::Star,
        }
    }

    /// Assembled `D` or `Σ`.
    pub fn sigma(&self) -> DualMatrix {
        match &self.eigenvalues {
            Eigenvalues::T(diag) => DualMatrix::from_diagonal(diag),
            Eigenvalues::Star(blocks) => {
                blocks.iter().fold(DualMatrix::zeros(0, 0), |acc, b| acc.direct_sum(&b.matrix()))
            }
        }
    }

    /// `V Σ Vᵃ`.
    pub fn reconstruct(&self) -> DualMatrix {
        let flavor = self.flavor();
        &(&self.v * &self.sigma()) * &flavor.adjoint(&self.v)
    }

    /// The dual eigenvalues as `(standard, infinitesimal)` pairs, sorted
    /// descending. A `2×2` block contributes its conjugate pair `(σ, ±σ′)`.
    pub fn eigenvalue_multiset(&self) -> Vec<(f64, f64)> {
        eigenvalue_multiset(self)
    }
}

/// See [`SpectralDecomposition::eigenvalue_multiset`].
pub fn eigenvalue_multiset(d: &SpectralDecomposition) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = match &d.eigenvalues {
        Eigenvalues::T(diag) => diag.iter().map(|x| (x.std, x.inf)).collect(),
        Eigenvalues::Star(blocks) => blocks
            .iter()
            .flat_map(|b| {
                if b.size == 2 {
                    vec![(b.sigma, b.sigma_prime), (b.sigma, -b.sigma_prime)]
                } else {
                    vec![(b.sigma, 0.0)]
                }
            })
            .collect(),
    };
    out.sort_by(|x, y| y.0.total_cmp(&x.0).then(y.1.total_cmp(&x.1)));
    out
}

/// `M = V Σ V*` for Hermitian `M`, with default clustering.
pub fn star_spectral(m: &DualMatrix, tol: f64) -> Result<SpectralDecomposition> {
    star_spectral_with(m, &SpectralOptions { tol, ..SpectralOptions::default() })
}

pub fn star_spectral_with(m: &DualMatrix, opts: &SpectralOptions) -> Result<SpectralDecomposition> {
    decompose(m, Flavor::Star, opts)
}

/// `M = V D Vᵀ` for symmetric `M`, with default clustering.
pub fn t_spectral(m: &DualMatrix, tol: f64) -> Result<SpectralDecomposition> {
    t_spectral_with(m, &SpectralOptions { tol, ..SpectralOptions::default() })
}

pub fn t_spectral_with(m: &DualMatrix, opts: &SpectralOptions) -> Result<SpectralDecomposition> {
    decompose(m, Flavor::T, opts)
}

/// Groups sorted eigenvalues into contiguous runs with gaps `≤ gap`.
pub(crate) fn clusters(values: &[f64], gap: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || values[i - 1] - values[i] > gap {
            out.push(start..i);
            start = i;
        }
    }
    out
}

fn decompose(m: &DualMatrix, flavor: Flavor, opts: &SpectralOptions) -> Result<SpectralDecomposition> {
    let n = m.ensure_square()?;
    let residual = m.structure_residual(flavor.self_adjoint())?;
    if residual > opts.tol {
        return Err(match flavor {
            Flavor::T => Error::NotSymmetric { residual },
            Flavor::Star => Error::NotHermitian { residual },
        });
    }
    let empty = match flavor {
        Flavor::T => Eigenvalues::T(Vec::new()),
        Flavor::Star => Eigenvalues::Star(Vec::new()),
    };
    if n == 0 {
        return Ok(SpectralDecomposition { v: DualMatrix::zeros(0, 0), eigenvalues: empty });
    }

    let a = (m.std() + m.std().transpose()) * 0.5;
    let b = match flavor {
        Flavor::T => (m.inf() + m.inf().transpose()) * 0.5,
        Flavor::Star => (m.inf() - m.inf().transpose()) * 0.5,
    };

    let base = sym_eig(&a, f64::INFINITY)?;
    let q = &base.q;
    let lambda = &base.eigenvalues;
    let c = q.transpose() * &b * q;
    let c = match flavor {
        Flavor::T => (&c + c.transpose()) * 0.5,
        Flavor::Star => (&c - c.transpose()) * 0.5,
    };

    let groups = clusters(lambda, opts.cluster_tol * a.amax().max(1.0));
    correct(flavor, q, lambda, &c, &groups, |i, j| lambda[i] - lambda[j], opts.cluster_tol)
}

/// Finishes a decomposition from `QᵀMQ = diag(λ) + εC`: removes the
/// off-cluster part of `C` and diagonalizes each cluster block. `gap(i, j)`
/// is `λ_i − λ_j`, supplied by the caller so it can be formed accurately.
pub(crate) fn correct(
    flavor: Flavor,
    q: &DMatrix<f64>,
    lambda: &[f64],
    c: &DMatrix<f64>,
    groups: &[std::ops::Range<usize>],
    gap: impl Fn(usize, usize) -> f64,
    cluster_tol: f64,
) -> Result<SpectralDecomposition> {
    let n = lambda.len();
    let mut cluster_of = vec![0; n];
    for (k, g) in groups.iter().enumerate() {
        for i in g.clone() {
            cluster_of[i] = k;
        }
    }

    let mut k = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if cluster_of[i] != cluster_of[j] {
                k[(i, j)] = c[(i, j)] / gap(i, j);
            }
        }
    }

    let mut r = DMatrix::zeros(n, n);
    let mut diag = Vec::new();
    let mut blocks = Vec::new();
    for g in groups {
        let len = g.len();
        let sigma = lambda[g.clone()].iter().sum::<f64>() / len as f64;
        let cc = c.view((g.start, g.start), (len, len)).into_owned();
        match flavor {
            Flavor::T => {
                let e = sym_eig(&cc, f64::INFINITY)?;
                r.view_mut((g.start, g.start), (len, len)).copy_from(&e.q);
                diag.extend(e.eigenvalues.iter().map(|&mu| DualScalar::new(sigma, mu)));
            }
            Flavor::Star => {
                let f = skew_block_diag(&cc, cluster_tol)?;
                r.view_mut((g.start, g.start), (len, len)).copy_from(&f.q);
                blocks.extend(f.blocks.iter().map(|&mu| SpectralBlock::rotation(sigma, mu)));
                blocks.extend((0..f.zero_count).map(|_| SpectralBlock::scalar(sigma)));
            }
        }
    }

    let v_std = q * &r;
    let v_inf = -(q * &k * &r);
    let mut v = DualMatrix::new(v_std, v_inf)?;
    if v.structure_residual(flavor.isometry())? > 1e-11 {
        v = crate::linalg::reorthonormalize(&v, flavor)?;
    }

    let eigenvalues = match flavor {
        Flavor::T => Eigenvalues::T(diag),
        Flavor::Star => Eigenvalues::Star(blocks),
    };
    Ok(SpectralDecomposition { v, eigenvalues })
}
