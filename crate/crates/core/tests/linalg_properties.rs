mod common;

use common::*;
use dualsvd::linalg::{extend_orthonormal, gram_schmidt, star_form};
use dualsvd::{DualMatrix, DualScalar, DualVector, Flavor};
use rand::Rng;

fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> DualMatrix {
    DualMatrix::new(gaussian(rng, rows, cols), gaussian(rng, rows, cols)).unwrap()
}

#[test]
fn adjoints_reverse_products() {
    let mut rng = rng(10);
    for _ in 0..300 {
        let (a, b, c) = (rng.random_range(1..=6), rng.random_range(1..=6), rng.random_range(1..=6));
        let m = random_matrix(&mut rng, a, b);
        let n = random_matrix(&mut rng, b, c);
        let mn = &m * &n;
        let tol = 1e-10 * mn.norm().max(1.0);
        assert!(mn.transpose().max_abs_diff(&(&n.transpose() * &m.transpose())) <= tol);
        assert!(mn.star().max_abs_diff(&(&n.star() * &m.star())) <= tol);
    }
}

#[test]
fn star_form_of_a_vector_with_itself_is_real() {
    let mut rng = rng(11);
    for _ in 0..300 {
        let n = rng.random_range(1..=8);
        let u = random_vectors(&mut rng, n, 1).remove(0);
        let s = star_form(&u, &u).unwrap();
        assert_eq!(s.inf, 0.0);
        assert!((s.std - u.std_norm().powi(2)).abs() <= 1e-12 * s.std.max(1.0));
    }
}

fn gram_defect(vs: &[DualVector], flavor: Flavor) -> f64 {
    let mut worst = 0.0_f64;
    for (i, a) in vs.iter().enumerate() {
        for (j, b) in vs.iter().enumerate() {
            let target = if i == j { DualScalar::ONE } else { DualScalar::ZERO };
            worst = worst.max((flavor.form(a, b).unwrap() - target).max_abs());
        }
    }
    worst
}

/// Each input `v_k` is rebuilt from the outputs `e_1..e_k` alone with the
/// coefficients `form(v_k, e_i)`, so the change of basis is triangular.
#[test]
fn gram_schmidt_is_triangular_in_span() {
    let mut rng = rng(12);
    for trial in 0..400 {
        let flavor = if trial % 2 == 0 { Flavor::T } else { Flavor::Star };
        let n = rng.random_range(1..=8);
        let k = rng.random_range(1..=n);
        let vs = random_vectors(&mut rng, n, k);
        let es = gram_schmidt(&vs, flavor).unwrap();
        assert_eq!(es.len(), k);
        assert!(gram_defect(&es, flavor) <= 1e-9);
        for (idx, v) in vs.iter().enumerate() {
            let mut rebuilt = DualVector::zeros(n);
            for e in &es[..=idx] {
                let c = flavor.form(v, e).unwrap();
                for r in 0..n {
                    rebuilt[r] += c * e[r];
                }
            }
            let err = rebuilt.checked_sub(v).unwrap().max_abs() / v.max_abs().max(1.0);
            assert!(err <= 1e-9, "{flavor:?} vector {idx}: {err:e}");
        }
    }
}

#[test]
fn extension_is_a_full_isometry() {
    let mut rng = rng(13);
    for trial in 0..300 {
        let flavor = if trial % 2 == 0 { Flavor::T } else { Flavor::Star };
        let n = rng.random_range(1..=8);
        let k = rng.random_range(0..=n);
        let partial = gram_schmidt(&random_vectors(&mut rng, n, k), flavor).unwrap();
        let full = extend_orthonormal(&partial, n, flavor).unwrap();
        assert_eq!(&full[..k], &partial[..]);
        let m = DualMatrix::from_columns(n, &full).unwrap();
        assert!(m.structure_check(flavor.isometry(), 1e-9).unwrap());
        assert!(m.transpose().structure_check(flavor.isometry(), 1e-9).unwrap());
    }
}
