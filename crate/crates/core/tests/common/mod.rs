#![allow(dead_code)]

use dualsvd::svd::{SigmaBlock, SvdResult};
use dualsvd::{DualMatrix, DualScalar, DualVector, Flavor};
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Haar-ish real orthogonal matrix from the QR of a Gaussian matrix.
pub fn random_orthogonal(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let qr = gaussian(rng, n, n).qr();
    let (q, r) = (qr.q(), qr.r());
    let mut q = q;
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// `W₀(I + εK)` with `K` skew (`T`) or symmetric (`*`): an isometry of the
/// flavor up to rounding in `W₀`.
pub fn random_isometry(rng: &mut impl Rng, n: usize, flavor: Flavor) -> DualMatrix {
    let w0 = random_orthogonal(rng, n);
    let g = gaussian(rng, n, n);
    let k = match flavor {
        Flavor::T => &g - g.transpose(),
        Flavor::Star => &g + g.transpose(),
    };
    let inf = &w0 * k;
    DualMatrix::new(w0, inf).unwrap()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Generic,
    RankDeficient,
    PureInfinitesimal,
    ZeroRowsCols,
}

pub const REGIMES: [Regime; 4] =
    [Regime::Generic, Regime::RankDeficient, Regime::PureInfinitesimal, Regime::ZeroRowsCols];

pub fn random_dual(rng: &mut impl Rng, n: usize, regime: Regime) -> DualMatrix {
    let inf = gaussian(rng, n, n);
    let std = match regime {
        Regime::Generic | Regime::ZeroRowsCols => gaussian(rng, n, n),
        Regime::RankDeficient => {
            let r = rng.random_range(0..n);
            gaussian(rng, n, r) * gaussian(rng, r, n)
        }
        Regime::PureInfinitesimal => DMatrix::zeros(n, n),
    };
    let mut m = DualMatrix::new(std, inf).unwrap();
    if regime == Regime::ZeroRowsCols {
        for i in 0..n {
            let zero_row = rng.random_bool(0.3);
            let zero_col = rng.random_bool(0.3);
            for j in 0..n {
                if zero_row {
                    m.set(i, j, DualScalar::ZERO);
                }
                if zero_col {
                    m.set(j, i, DualScalar::ZERO);
                }
            }
        }
    }
    m
}

/// Random real symmetric matrix; with `repeated`, eigenvalues come in
/// groups of equal values.
pub fn random_real_symmetric(rng: &mut impl Rng, n: usize, repeated: bool) -> DMatrix<f64> {
    if !repeated {
        let g = gaussian(rng, n, n);
        return (&g + g.transpose()) * 0.5;
    }
    let distinct = rng.random_range(1..=n.div_ceil(2));
    let values: Vec<f64> = (0..distinct).map(|_| rng.sample(StandardNormal)).collect();
    let diag: Vec<f64> = (0..n).map(|i| values[i % distinct]).collect();
    let q = random_orthogonal(rng, n);
    let a = &q * DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag)) * q.transpose();
    (&a + a.transpose()) * 0.5
}

/// Symmetric (`T`) or Hermitian (`*`) dual matrix.
pub fn random_self_adjoint(rng: &mut impl Rng, n: usize, flavor: Flavor, regime: u8) -> DualMatrix {
    let std = match regime {
        0 => random_real_symmetric(rng, n, false),
        1 => random_real_symmetric(rng, n, true),
        _ => DMatrix::zeros(n, n),
    };
    let g = gaussian(rng, n, n);
    let inf = match flavor {
        Flavor::T => (&g + g.transpose()) * 0.5,
        Flavor::Star => (&g - g.transpose()) * 0.5,
    };
    DualMatrix::new(std, inf).unwrap()
}

pub fn random_vectors(rng: &mut impl Rng, n: usize, k: usize) -> Vec<DualVector> {
    (0..k)
        .map(|_| {
            let s = gaussian(rng, n, 1);
            let i = gaussian(rng, n, 1);
            DualVector::from_parts(&s.column(0).into_owned(), &i.column(0).into_owned()).unwrap()
        })
        .collect()
}

pub fn scale(m: &DualMatrix) -> f64 {
    m.norm().max(1.0)
}

/// Every structural invariant of an SVD at relative tolerance `tol`.
pub fn svd_invariants(m: &DualMatrix, s: &SvdResult, tol: f64) -> Result<(), String> {
    let scale = scale(m);
    let recon = s.reconstruct().max_abs_diff(m) / scale;
    if recon.is_nan() || recon > tol {
        return Err(format!("reconstruction {recon:e}"));
    }
    let iso = s.flavor.isometry();
    for (name, f) in [("u", &s.u), ("v", &s.v)] {
        let r = f.structure_residual(iso).unwrap();
        if r.is_nan() || r > tol {
            return Err(format!("{name} isometry {r:e}"));
        }
    }
    let assembled = s.blocks.iter().fold(DualMatrix::zeros(0, 0), |acc, b| acc.direct_sum(&b.matrix()));
    if assembled != s.sigma {
        return Err("sigma differs from its blocks".into());
    }
    let cut = 1e-8 * scale;
    let mut last = (0u8, f64::INFINITY);
    for b in &s.blocks {
        let (sigma, sigma_prime) = b.parameters();
        match (*b, s.flavor) {
            (SigmaBlock::Rotation { .. }, Flavor::T) => return Err("rotation block in a T-SVD".into()),
            (SigmaBlock::Rotation { .. }, Flavor::Star) if sigma_prime.is_nan() || sigma_prime.abs() <= cut => {
                return Err(format!("rotation block with σ′ = {sigma_prime:e}"))
            }
            (SigmaBlock::Scalar(x), Flavor::Star) if x.std != 0.0 && x.inf != 0.0 => {
                return Err(format!("mixed scalar block {x} in a *-SVD"))
            }
            _ => {}
        }
        if sigma < -cut {
            return Err(format!("negative σ = {sigma:e}"));
        }
        let key = if sigma > cut {
            (0, sigma)
        } else if sigma_prime.abs() > cut {
            (1, sigma_prime.abs())
        } else {
            (2, 0.0)
        };
        if key.0 < last.0 || (key.0 == last.0 && key.1 > last.1 + cut) {
            return Err(format!("blocks out of order: {:?}", s.blocks));
        }
        last = key;
    }
    Ok(())
}

pub fn dual_matrix(rows: usize, entries: &[(f64, f64)]) -> DualMatrix {
    DualMatrix::from_row_slice(rows, entries.len() / rows, entries).unwrap()
}
