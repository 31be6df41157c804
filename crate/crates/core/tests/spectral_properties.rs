mod common;

use common::*;
use dualsvd::spectral::{star_spectral, t_spectral, Eigenvalues, SpectralBlock};
use dualsvd::{DualMatrix, Flavor, Structure};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    /// `sI + ε(0, −b; b, 0)` is already a block: `σ = s`, `σ′ = |b|`.
    #[test]
    fn scalar_plus_skew_is_one_block(s in -5.0..5.0_f64, b in prop_oneof![-5.0..-0.01_f64, 0.01..5.0_f64]) {
        let m = dual_matrix(2, &[(s, 0.0), (0.0, -b), (0.0, b), (s, 0.0)]);
        let d = star_spectral(&m, 1e-10).unwrap();
        let Eigenvalues::Star(blocks) = &d.eigenvalues else { unreachable!() };
        prop_assert_eq!(blocks.len(), 1);
        prop_assert!((blocks[0].sigma - s).abs() < 1e-12);
        prop_assert!((blocks[0].sigma_prime - b.abs()).abs() < 1e-12);
        prop_assert!(d.reconstruct().max_abs_diff(&m) < 1e-12);
    }

    /// `diag(a + εb)` is its own decomposition up to order.
    #[test]
    fn dual_diagonal_sorts(entries in prop::collection::vec((-5.0..5.0_f64, -5.0..5.0_f64), 1..6)) {
        let m = DualMatrix::from_diagonal(&entries.iter().map(|&(a, b)| dualsvd::DualScalar::new(a, b)).collect::<Vec<_>>());
        let d = t_spectral(&m, 1e-10).unwrap();
        prop_assert!(d.reconstruct().max_abs_diff(&m) <= 1e-9 * scale(&m));
        let mut expected: Vec<(f64, f64)> = entries.clone();
        expected.sort_by(|x, y| y.0.total_cmp(&x.0).then(y.1.total_cmp(&x.1)));
        let got = d.eigenvalue_multiset();
        // distinct standard parts keep their own infinitesimal parts
        let distinct = expected.windows(2).all(|w| (w[0].0 - w[1].0).abs() > 1e-6);
        if distinct {
            for (g, e) in got.iter().zip(&expected) {
                prop_assert!((g.0 - e.0).abs() < 1e-12 && (g.1 - e.1).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn star_sigma_is_exactly_hermitian_with_positive_blocks() {
    let mut rng = rng(30);
    for trial in 0..300 {
        let n = rng.random_range(1..=8);
        let m = random_self_adjoint(&mut rng, n, Flavor::Star, (trial % 3) as u8);
        let d = star_spectral(&m, 1e-8).unwrap();
        assert_eq!(d.sigma().structure_residual(Structure::Hermitian).unwrap(), 0.0);
        let Eigenvalues::Star(blocks) = &d.eigenvalues else { unreachable!() };
        assert!(blocks.iter().filter(|b| b.size == 2).all(|b: &SpectralBlock| b.sigma_prime > 0.0));
        assert!(d.reconstruct().max_abs_diff(&m) <= 1e-9 * scale(&m));
    }
}

#[test]
fn real_symmetric_input_reduces_to_real_eigen() {
    let mut rng = rng(31);
    for trial in 0..200 {
        let n = rng.random_range(1..=8);
        let a = random_real_symmetric(&mut rng, n, trial % 2 == 0);
        let d = t_spectral(&DualMatrix::from_real(a.clone()), 1e-8).unwrap();
        let e = dualsvd::real_spectral::sym_eig(&a, 1e-12).unwrap();
        for (x, y) in d.eigenvalue_multiset().iter().zip(&e.eigenvalues) {
            assert!((x.0 - y).abs() <= 1e-9 && x.1.abs() <= 1e-9);
        }
    }
}

#[test]
fn conjugation_preserves_the_multiset() {
    let mut rng = rng(32);
    for trial in 0..300 {
        let flavor = if trial % 2 == 0 { Flavor::T } else { Flavor::Star };
        let n = rng.random_range(1..=6);
        let m = random_self_adjoint(&mut rng, n, flavor, (trial % 3) as u8);
        let w = random_isometry(&mut rng, n, flavor);
        let c = &(&w * &m) * &flavor.adjoint(&w);
        let run = |x: &DualMatrix| match flavor {
            Flavor::T => t_spectral(x, 1e-8),
            Flavor::Star => star_spectral(x, 1e-8),
        };
        let (a, b) = (run(&m).unwrap().eigenvalue_multiset(), run(&c).unwrap().eigenvalue_multiset());
        for (x, y) in a.iter().zip(&b) {
            assert!((x.0 - y.0).abs() <= 1e-8 && (x.1 - y.1).abs() <= 1e-8, "{a:?} vs {b:?}");
        }
    }
}
