mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use sicsep::gellmann::gellmann_basis;
use sicsep::matcore::{hermitian_eigenvalues, hs_inner, tensor_product};
use sicsep::states::random_density;
use sicsep::{ComplexMatrix, DensityMatrix};

fn int_matrix(rows: usize, cols: usize, vals: &[i8]) -> ComplexMatrix {
    ComplexMatrix::from_vec(
        rows,
        cols,
        vals.iter()
            .map(|&v| Complex64::new(v as f64, (v as f64) * 0.5))
            .collect(),
    )
    .unwrap()
}

proptest! {
    #[test]
    fn kron_is_associative_on_integers(
        a in prop::collection::vec(-5i8..5, 4),
        b in prop::collection::vec(-5i8..5, 6),
        c in prop::collection::vec(-5i8..5, 2),
    ) {
        let a = int_matrix(2, 2, &a);
        let b = int_matrix(2, 3, &b);
        let c = int_matrix(1, 2, &c);
        let left = tensor_product(&tensor_product(&a, &b), &c);
        let right = tensor_product(&a, &tensor_product(&b, &c));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn kron_trace_is_multiplicative(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let a = common::random_hermitian(3, &mut rng);
        let b = common::random_hermitian(2, &mut rng);
        let lhs = tensor_product(&a, &b).trace();
        let rhs = a.trace() * b.trace();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * rhs.norm().max(1.0));
    }

    #[test]
    fn partial_transpose_is_an_involution(seed in any::<u64>(), block in 0usize..3) {
        let rho: DensityMatrix = random_density(&[2, 3, 2], 5, seed).unwrap();
        let once = rho.partial_transpose(block).unwrap();
        let twice = sicsep::matcore::partial_transpose_matrix(&once, rho.dims(), block).unwrap();
        prop_assert_eq!(&twice, rho.matrix());
        prop_assert!(once.hermiticity_deviation() == 0.0);
    }

    #[test]
    fn permutation_preserves_spectrum(seed in any::<u64>(), perm_id in 0usize..6) {
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let rho: DensityMatrix = random_density(&[2, 3, 2], 12, seed).unwrap();
        let moved = rho.permute_subsystems(&perms[perm_id]).unwrap();
        let want: Vec<usize> = perms[perm_id].iter().map(|&p| rho.dims()[p]).collect();
        prop_assert_eq!(moved.dims(), want.as_slice());
        for (x, y) in rho.eigenvalues().iter().zip(moved.eigenvalues()) {
            prop_assert!((x - y).abs() < 1e-10);
        }
        prop_assert!((moved.matrix().trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigenvalue_power_sums_match_traces(seed in any::<u64>(), n in 1usize..9) {
        // Σλ = Tr A, Σλ² = Tr A², Σλ³ = Tr A³ pin down small spectra independently
        let mut rng = common::rng(seed);
        let a = common::random_hermitian(n, &mut rng);
        let e = hermitian_eigenvalues(&a).unwrap();
        prop_assert!(e.windows(2).all(|w| w[0] <= w[1]));
        let a2 = &a * &a;
        let a3 = &a2 * &a;
        let p1: f64 = e.iter().sum();
        let p2: f64 = e.iter().map(|x| x * x).sum();
        let p3: f64 = e.iter().map(|x| x * x * x).sum();
        prop_assert!((p1 - a.trace().re).abs() < 1e-9 * n as f64);
        prop_assert!((p2 - a2.trace().re).abs() < 1e-10 * (1.0 + p2.abs()));
        prop_assert!((p3 - a3.trace().re).abs() < 1e-10 * (1.0 + a3.trace().re.abs()));
    }

    #[test]
    fn accepted_states_have_unit_spectrum_sum(seed in any::<u64>(), rank in 1usize..=6) {
        let rho: DensityMatrix = random_density(&[2, 3], rank, seed).unwrap();
        let s: f64 = rho.eigenvalues().iter().sum();
        prop_assert!((s - 1.0).abs() < 1e-8);
    }
}

#[test]
fn gellmann_basis_is_complete() {
    let mut rng = common::rng(99);
    for d in 2..=8 {
        let basis = gellmann_basis::<f64>(d).unwrap();
        for _ in 0..5 {
            let h = common::random_hermitian(d, &mut rng);
            let mut rebuilt = ComplexMatrix::identity(d).scale(h.trace().re / d as f64);
            for f in basis.elements() {
                let coeff = hs_inner(f, &h).unwrap();
                assert!(coeff.im.abs() < 1e-12);
                rebuilt = &rebuilt + &f.scale(coeff.re);
            }
            assert!(rebuilt.max_abs_diff(&h) < 1e-10, "d = {d}");
        }
    }
}

#[test]
fn basis_sum_is_entrywise_sum() {
    let basis = gellmann_basis::<f64>(4).unwrap();
    let mut sum = ComplexMatrix::zeros(4, 4);
    for f in basis.elements() {
        sum = &sum + f;
    }
    assert_eq!(&sum, basis.sum());
}

#[test]
fn hermitian_inner_products_are_real() {
    let mut rng = common::rng(5);
    for _ in 0..20 {
        let a = common::random_hermitian(5, &mut rng);
        let b = common::random_hermitian(5, &mut rng);
        assert!(hs_inner(&a, &b).unwrap().im.abs() <= 1e-12);
    }
}
