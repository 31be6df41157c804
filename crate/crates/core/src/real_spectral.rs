//! Real backends: orthogonal diagonalization of symmetric matrices,
//! orthogonal block-diagonalization of skew-symmetric matrices, and a
//! one-sided Jacobi SVD.

use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// `A = q · diag(eigenvalues) · qᵀ` with eigenvalues in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSpectral {
    pub q: DMatrix<f64>,
    pub eigenvalues: Vec<f64>,
}

impl RealSpectral {
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let d = DMatrix::from_diagonal(&DVector::from_vec(self.eigenvalues.clone()));
        &self.q * d * self.q.transpose()
    }
}

/// `A = q · Σ · qᵀ` where `Σ` is a direct sum of `[[0, −μ], [μ, 0]]`
/// blocks (descending `μ > 0`) followed by `zero_count` zero entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewBlockForm {
    pub q: DMatrix<f64>,
    pub blocks: Vec<f64>,
    pub zero_count: usize,
}

impl SkewBlockForm {
    /// The block-diagonal middle factor.
    pub fn block_matrix(&self) -> DMatrix<f64> {
        let n = 2 * self.blocks.len() + self.zero_count;
        let mut s = DMatrix::zeros(n, n);
        for (k, &mu) in self.blocks.iter().enumerate() {
            s[(2 * k, 2 * k + 1)] = -mu;
            s[(2 * k + 1, 2 * k)] = mu;
        }
        s
    }

    pub fn reconstruct(&self) -> DMatrix<f64> {
        &self.q * self.block_matrix() * self.q.transpose()
    }
}

pub(crate) fn max_abs(a: &DMatrix<f64>) -> f64 {
    a.amax()
}

fn ensure_square(a: &DMatrix<f64>) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare { rows: a.nrows(), cols: a.ncols() });
    }
    Ok(a.nrows())
}

/// Flips `v` so that its first entry of non-negligible magnitude is positive.
pub(crate) fn canonical_sign(v: &mut DVector<f64>) {
    let scale = v.amax();
    if let Some(x) = v.iter().find(|x| x.abs() > 1e-12 * scale) {
        if *x < 0.0 {
            v.neg_mut();
        }
    }
}

fn lexicographic(a: &DVector<f64>, b: &DVector<f64>) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.total_cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    Ordering::Equal
}

/// Cyclic Jacobi on a symmetric matrix.
///
/// Sweeps until every off-diagonal entry is below `1e-16·‖A‖_F` (well
/// under the `1e-12` needed), at most 100 sweeps.
fn jacobi_eigen(a: &DMatrix<f64>) -> (DMatrix<f64>, Vec<f64>) {
    let n = a.nrows();
    let mut a = a.clone();
    let mut q = DMatrix::<f64>::identity(n, n);
    let threshold = 1e-16 * a.norm();
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for r in (p + 1)..n {
                let apr = a[(p, r)];
                if apr.abs() <= threshold {
                    continue;
                }
                rotated = true;
                let theta = (a[(r, r)] - a[(p, p)]) / (2.0 * apr);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (kp, kr) = (a[(k, p)], a[(k, r)]);
                    a[(k, p)] = c * kp - s * kr;
                    a[(k, r)] = s * kp + c * kr;
                }
                for k in 0..n {
                    let (pk, rk) = (a[(p, k)], a[(r, k)]);
                    a[(p, k)] = c * pk - s * rk;
                    a[(r, k)] = s * pk + c * rk;
                }
                a[(p, r)] = 0.0;
                a[(r, p)] = 0.0;
                for k in 0..n {
                    let (kp, kr) = (q[(k, p)], q[(k, r)]);
                    q[(k, p)] = c * kp - s * kr;
                    q[(k, r)] = s * kp + c * kr;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let eigenvalues = (0..n).map(|i| a[(i, i)]).collect();
    (q, eigenvalues)
}

/// Orthogonal diagonalization of a real symmetric matrix.
///
/// Eigenvalues are sorted descending; every eigenvector has its first
/// non-negligible entry positive, and exact ties are ordered by eigenvector
/// lexicographically (largest first).
pub fn sym_eig(a: &DMatrix<f64>, tol: f64) -> Result<RealSpectral> {
    let n = ensure_square(a)?;
    let scale = max_abs(a).max(1.0);
    let residual = (a - a.transpose()).amax() / scale;
    if residual > tol {
        return Err(Error::NotSymmetric { residual });
    }
    let sym = (a + a.transpose()) * 0.5;
    let (q, values) = jacobi_eigen(&sym);

    let mut pairs: Vec<(f64, DVector<f64>)> = (0..n)
        .map(|j| {
            let mut v = q.column(j).into_owned();
            canonical_sign(&mut v);
            (values[j], v)
        })
        .collect();
    pairs.sort_by(|x, y| y.0.total_cmp(&x.0).then_with(|| lexicographic(&y.1, &x.1)));

    let mut q = DMatrix::zeros(n, n);
    for (j, (_, v)) in pairs.iter().enumerate() {
        q.set_column(j, v);
    }
    Ok(RealSpectral { q, eigenvalues: pairs.into_iter().map(|p| p.0).collect() })
}

/// Two passes of projection against an orthonormal list.
fn orthogonalize(mut v: DVector<f64>, against: &[DVector<f64>]) -> DVector<f64> {
    for _ in 0..2 {
        for e in against {
            let c = e.dot(&v);
            v.axpy(-c, e, 1.0);
        }
    }
    v
}

/// Orthogonal block-diagonalization of a real skew-symmetric matrix.
///
/// Eigenvectors of the positive semidefinite `−A² = AᵀA` are taken in
/// order of decreasing eigenvalue, choosing at each step the candidate with
/// the largest component outside the span built so far. A unit vector `v`
/// with `μ = |Av| > tol·max(1, ‖A‖)` is paired with `w = Av/μ`, giving
/// the block `[[0, −μ], [μ, 0]]` on `(v, w)`; otherwise `v` is a kernel
/// direction.
pub fn skew_block_diag(a: &DMatrix<f64>, tol: f64) -> Result<SkewBlockForm> {
    let n = ensure_square(a)?;
    let scale = max_abs(a).max(1.0);
    let residual = (a + a.transpose()).amax() / scale;
    if residual > tol {
        return Err(Error::NotSkewSymmetric { residual });
    }
    let a = (a - a.transpose()) * 0.5;
    let threshold = tol * scale;

    let gram = a.transpose() * &a;
    let gram = (&gram + gram.transpose()) * 0.5;
    let candidates = sym_eig(&gram, f64::INFINITY)?.q;

    let mut chosen: Vec<DVector<f64>> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    let mut pairs: Vec<(f64, DVector<f64>, DVector<f64>)> = Vec::new();
    let mut kernel: Vec<DVector<f64>> = Vec::new();

    while chosen.len() < n {
        let mut best: Option<(usize, DVector<f64>, f64)> = None;
        for j in (0..n).filter(|&j| !used[j]) {
            let r = orthogonalize(candidates.column(j).into_owned(), &chosen);
            let norm = r.norm();
            if best.as_ref().is_none_or(|b| norm > b.2) {
                best = Some((j, r, norm));
            }
        }
        let Some((j, r, norm)) = best else { break };
        used[j] = true;
        if norm < 1e-8 {
            continue;
        }
        let v = r / norm;
        let image = &a * &v;
        let mu = image.norm();
        if mu > threshold && chosen.len() + 2 <= n {
            let mut w = orthogonalize(image / mu, &chosen);
            w.axpy(-v.dot(&w), &v, 1.0);
            let w = w.normalize();
            let mu = 0.5 * (w.dot(&(&a * &v)) - v.dot(&(&a * &w)));
            chosen.push(v.clone());
            chosen.push(w.clone());
            pairs.push((mu, v, w));
        } else {
            chosen.push(v.clone());
            kernel.push(v);
        }
    }
    debug_assert_eq!(chosen.len(), n);

    pairs.sort_by(|x, y| y.0.total_cmp(&x.0));
    let mut q = DMatrix::zeros(n, n);
    let mut col = 0;
    for (_, v, w) in &pairs {
        q.set_column(col, v);
        q.set_column(col + 1, w);
        col += 2;
    }
    for v in &kernel {
        q.set_column(col, v);
        col += 1;
    }
    Ok(SkewBlockForm { q, blocks: pairs.into_iter().map(|p| p.0).collect(), zero_count: kernel.len() })
}

/// Real SVD `A = u · diag(s) · vᵀ` of a square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RealSvd {
    pub u: DMatrix<f64>,
    pub singular_values: Vec<f64>,
    pub v: DMatrix<f64>,
}

/// Completes orthonormal columns to a basis of `Rⁿ` from the standard basis.
fn complete_basis(mut cols: Vec<DVector<f64>>, n: usize) -> Vec<DVector<f64>> {
    let mut unused: Vec<usize> = (0..n).collect();
    while cols.len() < n {
        let (slot, r) = unused
            .iter()
            .enumerate()
            .map(|(slot, &i)| (slot, orthogonalize(DVector::from_fn(n, |k, _| f64::from(k == i)), &cols)))
            .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
            .expect("standard basis exhausted");
        unused.remove(slot);
        cols.push(r.normalize());
    }
    cols
}

/// One-sided (Hestenes) Jacobi SVD of a square real matrix.
///
/// Singular values are sorted descending. Left vectors of numerically zero
/// singular values are completed from the standard basis.
pub fn real_svd(a: &DMatrix<f64>) -> Result<RealSvd> {
    let n = ensure_square(a)?;
    let mut g = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for r in (p + 1)..n {
                let alpha = g.column(p).norm_squared();
                let beta = g.column(r).norm_squared();
                let gamma = g.column(p).dot(&g.column(r));
                if gamma == 0.0 || gamma.abs() <= 1e-16 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for m in [&mut g, &mut v] {
                    for k in 0..n {
                        let (kp, kr) = (m[(k, p)], m[(k, r)]);
                        m[(k, p)] = c * kp - s * kr;
                        m[(k, r)] = s * kp + c * kr;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let norms: Vec<f64> = (0..n).map(|j| g.column(j).norm()).collect();
    order.sort_by(|&x, &y| norms[y].total_cmp(&norms[x]));
    let largest = order.first().map_or(0.0, |&j| norms[j]);
    let cutoff = f64::EPSILON * n as f64 * largest;

    let mut u_cols = Vec::with_capacity(n);
    let mut singular_values = Vec::with_capacity(n);
    let mut v_sorted = DMatrix::zeros(n, n);
    for (k, &j) in order.iter().enumerate() {
        v_sorted.set_column(k, &v.column(j));
        if norms[j] > cutoff && norms[j] > 0.0 {
            u_cols.push(g.column(j) / norms[j]);
            singular_values.push(norms[j]);
        } else {
            singular_values.push(0.0);
        }
    }
    let u_cols = complete_basis(u_cols, n);
    let mut u = DMatrix::zeros(n, n);
    for (k, c) in u_cols.iter().enumerate() {
        u.set_column(k, c);
    }
    Ok(RealSvd { u, singular_values, v: v_sorted })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn orth_residual(q: &DMatrix<f64>) -> f64 {
        (q.transpose() * q - DMatrix::identity(q.nrows(), q.ncols())).amax()
    }

    #[test]
    fn diagonal_input_is_already_decomposed() {
        let a = DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 0.0, 1.0]);
        let e = sym_eig(&a, 1e-12).unwrap();
        assert_eq!(e.eigenvalues, vec![3.0, 1.0]);
        assert_eq!(e.q, DMatrix::identity(2, 2));
    }

    #[test]
    fn swap_matrix_has_roots_of_lambda_squared_minus_one() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let e = sym_eig(&a, 1e-12).unwrap();
        // char poly λ² − 1
        assert!((e.eigenvalues[0] - 1.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] + 1.0).abs() < 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = DMatrix::from_row_slice(2, 2, &[h, h, h, -h]);
        assert!((e.q - expected).amax() < 1e-15);
    }

    #[test]
    fn zero_matrix_keeps_identity_basis() {
        let e = sym_eig(&DMatrix::zeros(3, 3), 1e-12).unwrap();
        assert_eq!(e.eigenvalues, vec![0.0; 3]);
        assert_eq!(e.q, DMatrix::identity(3, 3));
    }

    #[test]
    fn asymmetric_input_is_rejected() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(matches!(sym_eig(&a, 1e-9), Err(Error::NotSymmetric { .. })));
        assert!(matches!(sym_eig(&DMatrix::zeros(2, 3), 1e-9), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn canonical_skew_block() {
        let a = DMatrix::from_row_slice(2, 2, &[0.0, -2.0, 2.0, 0.0]);
        let f = skew_block_diag(&a, 1e-8).unwrap();
        assert_eq!(f.blocks, vec![2.0]);
        assert_eq!(f.zero_count, 0);
        assert_eq!(f.q, DMatrix::identity(2, 2));
    }

    #[test]
    fn zero_skew_matrix() {
        let f = skew_block_diag(&DMatrix::zeros(3, 3), 1e-8).unwrap();
        assert!(f.blocks.is_empty());
        assert_eq!(f.zero_count, 3);
        assert_eq!(f.q, DMatrix::identity(3, 3));
    }

    #[test]
    fn skew_with_kernel() {
        // eigenvalues ±i, 0
        let a = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let f = skew_block_diag(&a, 1e-8).unwrap();
        assert_eq!(f.blocks.len(), 1);
        assert!((f.blocks[0] - 1.0).abs() < 1e-15);
        assert_eq!(f.zero_count, 1);
        assert!((f.reconstruct() - &a).amax() < 1e-15);
        assert!(orth_residual(&f.q) < 1e-15);
    }

    #[test]
    fn non_skew_input_is_rejected() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(skew_block_diag(&a, 1e-9), Err(Error::NotSkewSymmetric { .. })));
    }

    #[test]
    fn svd_of_rank_one() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 4.0]);
        let s = real_svd(&a).unwrap();
        assert!((s.singular_values[0] - 5.0).abs() < 1e-14);
        assert_eq!(s.singular_values[1], 0.0);
        let d = DMatrix::from_diagonal(&DVector::from_vec(s.singular_values.clone()));
        assert!((&s.u * d * s.v.transpose() - &a).amax() < 1e-14);
        assert!(orth_residual(&s.u) < 1e-15);
        assert!(orth_residual(&s.v) < 1e-15);
    }

    #[test]
    fn svd_of_zero() {
        let s = real_svd(&DMatrix::zeros(3, 3)).unwrap();
        assert_eq!(s.singular_values, vec![0.0; 3]);
        assert!(orth_residual(&s.u) < 1e-15);
    }
}
