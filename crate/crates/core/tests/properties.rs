//! Cross-module invariant batteries.
//!
//! Structural identities that must hold for every valid input: tensor
//! algebra, eigendecomposition round-trips, matrix-function inverses,
//! state-construction validation, metric inequalities, and spectrum
//! preservation along integrated trajectories. Counted sweeps use fixed
//! seeds so a failure is a defect, never a flake.

use proptest::prelude::*;

use rhodyn_core::{
    density_from_mixture, density_from_pure, embed, evolve, fidelity, haar_unitary,
    hermitian_eig, hermitian_power, partial_trace, purification, purity, random_decomposition,
    random_density, random_hermitian, random_pure_state, tensor_product, unitary_exponential,
    von_neumann_entropy, ComplexMatrix64, DensityMatrix64, Dynamics64, EnsembleMixture64,
    IntegratorConfig64,
};

fn matrix_strategy(max_dim: usize) -> impl Strategy<Value = ComplexMatrix64> {
    (1..=max_dim).prop_flat_map(|n| {
        proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n * n)
            .prop_map(move |entries| ComplexMatrix64::from_real_im(n, n, &entries))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kronecker_products_associate(
        a in matrix_strategy(3),
        b in matrix_strategy(3),
        c in matrix_strategy(2),
    ) {
        let left = tensor_product(&tensor_product(&a, &b), &c);
        let right = tensor_product(&a, &tensor_product(&b, &c));
        prop_assert!(left.max_abs_diff(&right) < 1e-14);
    }

    #[test]
    fn partial_trace_undoes_tensor_products(
        x in matrix_strategy(3),
        y in matrix_strategy(3),
    ) {
        let dims = [x.rows(), y.rows()];
        let product = tensor_product(&x, &y);
        let kept_x = partial_trace(&product, &dims, 0).unwrap();
        prop_assert!(kept_x.max_abs_diff(&x.scale(y.trace())) < 1e-12);
        let kept_y = partial_trace(&product, &dims, 1).unwrap();
        prop_assert!(kept_y.max_abs_diff(&y.scale(x.trace())) < 1e-12);
    }
}

#[test]
fn eigendecompositions_hold_up_over_a_thousand_hermitians() {
    for trial in 0..1000u64 {
        let dim = 2 + (trial as usize) % 7;
        let m = random_hermitian::<f64>(dim, 9000 + trial);
        let eig = hermitian_eig(&m).unwrap();
        assert!(
            eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]),
            "trial {trial}: eigenvalues not ascending"
        );
        assert!(
            eig.eigenvectors.is_unitary(1e-12),
            "trial {trial}: eigenvector basis lost orthonormality"
        );
        let back = eig.apply_real(|w| w);
        assert!(
            back.max_abs_diff(&m) < 1e-12,
            "trial {trial}: recomposition error {}",
            back.max_abs_diff(&m)
        );
    }
}

#[test]
fn matrix_powers_invert_on_positive_matrices() {
    for trial in 0..50u64 {
        let dim = 2 + (trial as usize) % 5;
        let h = random_hermitian::<f64>(dim, 300 + trial);
        // spectrum of h^2 + I/2 lies in [0.5, 1.5]: strictly positive
        let m = &h.matmul(&h) + &ComplexMatrix64::identity(dim).scale_re(0.5);
        assert!(hermitian_power(&m, 1.0).unwrap().max_abs_diff(&m) < 1e-12);
        for q in [0.5, 2.0] {
            let forward = hermitian_power(&m, q).unwrap();
            let back = hermitian_power(&forward, 1.0 / q).unwrap();
            assert!(
                back.max_abs_diff(&m) < 1e-10,
                "trial {trial}, q = {q}: round trip error {}",
                back.max_abs_diff(&m)
            );
        }
    }
}

#[test]
fn unitary_exponentials_are_unitary_and_fix_their_generator() {
    for trial in 0..100u64 {
        let dim = 2 + (trial as usize) % 6;
        let g = random_hermitian::<f64>(dim, 40_000 + trial);
        let s = 0.1 + trial as f64 * 0.037;
        let u = unitary_exponential(&g, s).unwrap();
        assert!(u.is_unitary(1e-12), "trial {trial}");
        // u is a function of g, so conjugation by u leaves g alone
        assert!(g.conjugate_by(&u).max_abs_diff(&g) < 1e-12, "trial {trial}");
    }
}

#[test]
fn conjugation_by_a_unitary_preserves_the_spectrum() {
    for trial in 0..50u64 {
        let dim = 2 + (trial as usize) % 5;
        let m = random_hermitian::<f64>(dim, 7000 + trial);
        let u = haar_unitary::<f64>(dim, 7100 + trial);
        let before = hermitian_eig(&m).unwrap().eigenvalues;
        let after = hermitian_eig(&m.conjugate_by(&u).symmetrize()).unwrap().eigenvalues;
        for (x, y) in before.iter().zip(&after) {
            assert!((x - y).abs() < 1e-12, "trial {trial}: {x} vs {y}");
        }
    }
}

#[test]
fn mixture_densities_validate_over_a_thousand_trials() {
    for trial in 0..1000u64 {
        let dim = 2 + (trial as usize) % 3;
        let count = 1 + (trial as usize) % 4;
        let states: Vec<_> = (0..count)
            .map(|k| random_pure_state::<f64>(dim, 50_000 + trial * 7 + k as u64))
            .collect();
        let raw: Vec<f64> = (0..count).map(|k| 1.0 + ((trial as usize + k) % 5) as f64).collect();
        let total: f64 = raw.iter().sum();
        let members: Vec<_> = raw
            .iter()
            .zip(states.iter().cloned())
            .map(|(w, s)| (w / total, s))
            .collect();
        let mixture = EnsembleMixture64::new(members.clone()).unwrap();
        let rho = density_from_mixture(&mixture);
        let m = rho.matrix();
        assert!((m.trace().re - 1.0).abs() < 1e-12, "trial {trial}: trace");
        assert!(m.hermiticity_defect() < 1e-12, "trial {trial}: hermiticity");
        let min = hermitian_eig(m).unwrap().eigenvalues[0];
        assert!(min > -1e-12, "trial {trial}: negative weight {min}");
        let manual = members.iter().fold(
            ComplexMatrix64::zeros(dim, dim),
            |acc, (w, psi)| &acc + &psi.outer().scale_re(*w),
        );
        assert!(m.max_abs_diff(&manual) < 1e-12, "trial {trial}: reassembly");
    }
}

#[test]
fn purity_pins_pure_and_maximally_mixed_states() {
    for dim in 2..=6usize {
        let psi = random_pure_state::<f64>(dim, 123 + dim as u64);
        assert!((purity(&density_from_pure(&psi)) - 1.0).abs() < 1e-12);
        let flat = ComplexMatrix64::identity(dim).scale_re(1.0 / dim as f64);
        let mixed = DensityMatrix64::new(flat, None).unwrap();
        assert!((purity(&mixed) - 1.0 / dim as f64).abs() < 1e-12);
    }
}

#[test]
fn entropy_is_invariant_under_unitary_conjugation() {
    for trial in 0..50u64 {
        let dim = 2 + (trial as usize) % 4;
        let rho = random_density::<f64>(dim, dim, 5000 + trial).unwrap();
        let u = haar_unitary::<f64>(dim, 5100 + trial);
        let rotated =
            DensityMatrix64::new(rho.matrix().conjugate_by(&u).symmetrize(), None).unwrap();
        let s0 = von_neumann_entropy(&rho).unwrap();
        let s1 = von_neumann_entropy(&rotated).unwrap();
        assert!((s0 - s1).abs() < 1e-10, "trial {trial}: {s0} vs {s1}");
    }
}

#[test]
fn fidelity_and_trace_distance_obey_the_fuchs_van_de_graaff_bounds() {
    for trial in 0..100u64 {
        let dim = 2 + (trial as usize) % 4;
        let rank_a = 1 + (trial as usize) % dim;
        let a = random_density::<f64>(dim, rank_a, 2000 + trial).unwrap();
        let b = random_density::<f64>(dim, dim, 3000 + trial).unwrap();
        let f = fidelity(&a, &b).unwrap();
        let t = a.trace_distance(&b).unwrap();
        assert!(1.0 - f.sqrt() <= t + 1e-10, "trial {trial}: lower bound");
        assert!(t <= (1.0 - f).sqrt() + 1e-10, "trial {trial}: upper bound");
        // coincident states: unit fidelity exactly when distance vanishes;
        // the square root halves the roundoff exponent at zero modes, so a
        // rank-deficient state resolves its own fidelity only to ~sqrt(eps)
        assert!((fidelity(&a, &a).unwrap() - 1.0).abs() < 1e-7, "trial {trial}");
        assert!((fidelity(&b, &b).unwrap() - 1.0).abs() < 1e-10, "trial {trial}");
        assert!(a.trace_distance(&a).unwrap() < 1e-12, "trial {trial}");
    }
}

#[test]
fn random_decompositions_reassemble_their_state() {
    for trial in 0..100u64 {
        let dim = 2 + (trial as usize) % 3;
        let rank = 1 + (trial as usize) % dim;
        let rho = random_density::<f64>(dim, rank, 600 + trial).unwrap();
        let members = rank + (trial as usize) % 3;
        let mixture = random_decomposition(&rho, members, 700 + trial).unwrap();
        let rebuilt = density_from_mixture(&mixture);
        assert!(
            rebuilt.matrix().max_abs_diff(rho.matrix()) < 1e-10,
            "trial {trial}: reassembly error {}",
            rebuilt.matrix().max_abs_diff(rho.matrix())
        );
    }
}

#[test]
fn purifications_reduce_back_and_differ_across_seeds() {
    for trial in 0..50u64 {
        let dim = 2 + (trial as usize) % 3;
        let rho = random_density::<f64>(dim, dim, 800 + trial).unwrap();
        let first = purification(&rho, dim, 900 + trial * 2).unwrap();
        let second = purification(&rho, dim, 901 + trial * 2).unwrap();
        for psi in [&first, &second] {
            let total = density_from_pure(psi)
                .with_structure(vec![dim, dim])
                .unwrap();
            let reduced = total.reduce(0).unwrap();
            assert!(
                reduced.matrix().max_abs_diff(rho.matrix()) < 1e-12,
                "trial {trial}: reduction error {}",
                reduced.matrix().max_abs_diff(rho.matrix())
            );
        }
        // same reduction, genuinely different global states
        let gap = density_from_pure(&first)
            .matrix()
            .max_abs_diff(density_from_pure(&second).matrix());
        assert!(gap > 1e-3, "trial {trial}: extensions coincide ({gap})");
    }
}

#[test]
fn embedded_operators_assemble_like_tensor_products() {
    let a = random_hermitian::<f64>(2, 11);
    let b = random_hermitian::<f64>(3, 12);
    let dims = [2usize, 3];
    let ea = embed(&a, &dims, 0).unwrap();
    let eb = embed(&b, &dims, 1).unwrap();
    assert!(ea.max_abs_diff(&tensor_product(&a, &ComplexMatrix64::identity(3))) < 1e-15);
    assert!(eb.max_abs_diff(&tensor_product(&ComplexMatrix64::identity(2), &b)) < 1e-15);
    assert!(ea.matmul(&eb).max_abs_diff(&tensor_product(&a, &b)) < 1e-13);
}

#[test]
fn midpoint_flow_keeps_rank_deficient_states_on_the_cone_for_fractional_q() {
    let h = random_hermitian::<f64>(3, 4242);
    let psi = random_pure_state::<f64>(3, 4243);
    let dynamics = Dynamics64::single_nonlinear(h, 0.5).unwrap();
    let config = IntegratorConfig64::new(1e-3, 2.0).with_sample_every(100);
    let trajectory = evolve(&dynamics, &density_from_pure(&psi), &config).unwrap();
    assert!(trajectory.len() > 10);
    for state in &trajectory.states {
        let eigenvalues = hermitian_eig(state.matrix()).unwrap().eigenvalues;
        // the propagator conjugates by a unitary, so {0, 0, 1} is exact
        assert!(eigenvalues[0] > -1e-12);
        assert!(eigenvalues[0].abs() < 1e-9 && eigenvalues[1].abs() < 1e-9);
        assert!((eigenvalues[2] - 1.0).abs() < 1e-9);
    }
}
