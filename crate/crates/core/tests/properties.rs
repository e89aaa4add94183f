use approx::assert_abs_diff_eq;
use monogamy_core::convexroof::{roof_upper_bound, RoofConfig};
use monogamy_core::linalg::random::{haar_unitary, random_psd};
use monogamy_core::linalg::{haar_random_pure, kron, partial_trace, partial_trace_pure, DensityMatrix, StateVector};
use monogamy_core::measures::{
    ghz_sym_coords, ghz_sym_three_tangle, ghz_symmetrize, hyperdet_three_tangle, one_tangle, pure_three_tangle,
    two_qubit_tangle_mixed, GhzSymCoords,
};
use monogamy_core::monogamy::{ckw_report, residual_report, ResidualBudget, ResidualKind, Verdict};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_density(n: usize, rank: usize, seed: u64) -> DensityMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    DensityMatrix::new(random_psd(&mut rng, 1 << n, rank)).unwrap()
}

fn small_budget() -> ResidualBudget {
    let cfg = RoofConfig {
        restarts: 4,
        iterations: 40,
        tol: 1e-5,
        ..RoofConfig::default()
    };
    ResidualBudget {
        top: cfg.clone(),
        nested: cfg,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn one_tangle_in_unit_interval_and_complement_symmetric(seed in any::<u64>(), n in 2usize..=5) {
        let psi = haar_random_pure(n, seed).unwrap();
        let t = one_tangle(&psi, &[0]).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&t));
        let rest: Vec<usize> = (1..n).collect();
        let t_rest = one_tangle(&psi, &rest).unwrap();
        prop_assert!((t - t_rest).abs() < 1e-10);
    }

    #[test]
    fn ckw_holds_for_random_states(seed in any::<u64>(), n in 3usize..=5, focus in 0usize..3) {
        let psi = haar_random_pure(n, seed).unwrap();
        let r = ckw_report(&psi, focus).unwrap();
        prop_assert!(r.slack >= -1e-9, "slack {}", r.slack);
        prop_assert_eq!(r.status, Verdict::Certified);
    }

    #[test]
    fn three_tangle_is_permutation_invariant(seed in any::<u64>(), perm in Just([0usize, 1, 2]).prop_shuffle()) {
        let psi = haar_random_pure(3, seed).unwrap();
        let permuted = psi.permute_qubits(&perm).unwrap();
        let a = pure_three_tangle(&psi).unwrap();
        let b = pure_three_tangle(&permuted).unwrap();
        let c = hyperdet_three_tangle(permuted.amplitudes());
        prop_assert!((a - b).abs() < 1e-9);
        prop_assert!((a - c).abs() < 1e-9);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&a));
    }

    #[test]
    fn three_tangle_is_local_unitary_invariant(seed in any::<u64>()) {
        let psi = haar_random_pure(3, seed).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
        let u = kron(&kron(&haar_unitary(&mut rng, 2), &haar_unitary(&mut rng, 2)), &haar_unitary(&mut rng, 2));
        let rotated = StateVector::new(u.mul_vec(psi.amplitudes())).unwrap();
        prop_assert!((hyperdet_three_tangle(psi.amplitudes()) - hyperdet_three_tangle(rotated.amplitudes())).abs() < 1e-9);
    }

    #[test]
    fn two_qubit_tangle_is_convex(s1 in any::<u64>(), s2 in any::<u64>(), t in 0.0f64..=1.0) {
        let a = random_density(2, 2, s1);
        let b = random_density(2, 3, s2);
        let mix = a.blend(&b, t).unwrap();
        let lhs = two_qubit_tangle_mixed(&mix).unwrap();
        let rhs = t * two_qubit_tangle_mixed(&a).unwrap() + (1.0 - t) * two_qubit_tangle_mixed(&b).unwrap();
        prop_assert!(lhs <= rhs + 1e-9, "{lhs} > {rhs}");
        prop_assert!((0.0..=1.0 + 1e-12).contains(&lhs));
    }

    #[test]
    fn kron_trace_factorizes(s1 in any::<u64>(), s2 in any::<u64>()) {
        let a = random_density(1, 2, s1);
        let b = random_density(2, 2, s2);
        let k = kron(a.matrix(), b.matrix());
        let expected = a.matrix().trace() * b.matrix().trace();
        prop_assert!((k.trace() - expected).norm() < 1e-12);
        let back = partial_trace(&DensityMatrix::new(k).unwrap(), &[1, 2]).unwrap();
        prop_assert!(back.matrix().distance(b.matrix()) < 1e-12);
    }

    #[test]
    fn partial_trace_composes(seed in any::<u64>()) {
        let psi = haar_random_pure(4, seed).unwrap();
        let direct = partial_trace_pure(&psi, &[1, 3]).unwrap();
        let staged = partial_trace(&partial_trace_pure(&psi, &[1, 2, 3]).unwrap(), &[0, 2]).unwrap();
        prop_assert!(direct.matrix().distance(staged.matrix()) < 1e-12);
        prop_assert!((direct.matrix().trace().re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ghz_symmetrization_is_idempotent(seed in any::<u64>()) {
        let rho = random_density(3, 4, seed);
        let once = ghz_symmetrize(&rho).unwrap();
        let twice = ghz_symmetrize(&once).unwrap();
        prop_assert!(once.matrix().distance(twice.matrix()) < 1e-12);
        let c = ghz_sym_coords(&once).unwrap();
        prop_assert!(c.in_triangle(1e-9));
        let tau = ghz_sym_three_tangle(c).unwrap();
        prop_assert!((0.0..=1.0).contains(&tau));
    }

    #[test]
    fn ghz_sym_tangle_grows_toward_vertex(t1 in 0.0f64..=1.0, t2 in 0.0f64..=1.0) {
        let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        let at = |t: f64| {
            let c = GhzSymCoords::new(0.5 * t, (3f64.sqrt() / 4.0 + 1.0 / (4.0 * 3f64.sqrt())) * t - 1.0 / (4.0 * 3f64.sqrt())).unwrap();
            ghz_sym_three_tangle(c).unwrap()
        };
        prop_assert!(at(lo) <= at(hi) + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn roof_bounds_wootters_from_above(seed in any::<u64>()) {
        let rho = random_density(2, 2, seed);
        let est = roof_upper_bound(
            &rho,
            |psi| one_tangle(psi, &[0]).unwrap(),
            &RoofConfig { restarts: 4, iterations: 60, ..RoofConfig::default() },
        )
        .unwrap();
        let exact = two_qubit_tangle_mixed(&rho).unwrap();
        prop_assert!(est.value >= exact - 1e-9);
        prop_assert!(est.value <= exact + 5e-3, "{} vs {exact}", est.value);
        prop_assert!((est.best.average(|psi| one_tangle(psi, &[0]).unwrap()) - est.value).abs() < 1e-12);
    }

    #[test]
    fn mrsm_higher_term_dominates_wsm(seed in any::<u64>()) {
        let psi = haar_random_pure(4, seed).unwrap();
        let budget = small_budget();
        let w = residual_report(&psi, 0, &ResidualKind::Wsm, &budget).unwrap();
        let m = residual_report(&psi, 0, &ResidualKind::Mrsm, &budget).unwrap();
        prop_assert!(m.higher_term >= w.higher_term - 1e-12);
        prop_assert_eq!(w.lhs, m.lhs);
        prop_assert_eq!(w.pair_sum, m.pair_sum);
    }

    #[test]
    fn product_states_have_zero_mrsm_residual(seed in any::<u64>(), k in 1usize..=4) {
        let n = 5;
        let mut psi = haar_random_pure(k, seed).unwrap();
        for q in k..n {
            psi = psi.tensor(&haar_random_pure(1, seed.wrapping_add(q as u64)).unwrap());
        }
        let r = residual_report(&psi, 0, &ResidualKind::Mrsm, &small_budget()).unwrap();
        prop_assert!(r.slack.abs() <= 1e-6, "k={k} residual {}", r.slack);
    }
}

#[test]
fn three_qubit_residual_is_three_tangle_for_every_kind() {
    let budget = small_budget();
    for seed in 0..5 {
        let psi = haar_random_pure(3, seed).unwrap();
        let oracle = hyperdet_three_tangle(psi.amplitudes());
        for kind in [ResidualKind::Wsm, ResidualKind::Mrsm, ResidualKind::sm_default(3)] {
            let r = residual_report(&psi, 0, &kind, &budget).unwrap();
            assert_abs_diff_eq!(r.slack, oracle, epsilon = 1e-9);
        }
    }
}
