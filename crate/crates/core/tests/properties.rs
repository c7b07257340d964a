use bellkit_core::bounds::{classical_bound_bruteforce, ns_bound_and_behavior, DeterministicStrategy};
use bellkit_core::coefficients::CoefficientSet;
use bellkit_core::expression::{evaluate_correlator_form, evaluate_probability_form, functional_table, ResidueFunctional};
use bellkit_core::quantum::{observable_from_basis, ObservableSet};
use bellkit_core::scenario::{to_behavior, to_correlators};
use bellkit_core::sos::{quantum_bound_probability, sos_residual};
use bellkit_core::{Behavior, Complex64, Scenario};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn scenario() -> impl Strategy<Value = Scenario> {
    (2usize..=3, 2usize..=3, 2usize..=4).prop_map(|(n, m, d)| Scenario::new(n, m, d).unwrap())
}

fn behavior_from_seed(s: &Scenario, seed: u64) -> Behavior {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = s.outcome_tuples();
    let mut table = Vec::with_capacity(s.table_len());
    for _ in 0..s.setting_tuples() {
        // sparse rows reach the boundary of the simplex
        let raw: Vec<f64> = (0..n)
            .map(|_| if rng.random_bool(0.3) { 0.0 } else { rng.random::<f64>() })
            .collect();
        let total: f64 = raw.iter().sum();
        if total == 0.0 {
            table.extend((0..n).map(|i| (i == 0) as u8 as f64));
        } else {
            table.extend(raw.into_iter().map(|v| v / total));
        }
    }
    Behavior::new(*s, table).unwrap()
}

fn observables_from_seed(s: &Scenario, seed: u64) -> ObservableSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = s.n_outcomes();
    let ops = (0..s.n_parties())
        .map(|_| {
            (0..s.n_settings())
                .map(|_| {
                    let z = DMatrix::from_fn(d, d, |_, _| {
                        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                    });
                    let e: Vec<usize> = (0..d).map(|_| rng.random_range(0..d)).collect();
                    observable_from_basis(&z, &e).unwrap()
                })
                .collect()
        })
        .collect();
    ObservableSet::new(*s, ops).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fourier_roundtrip(s in scenario(), seed in any::<u64>()) {
        let b = behavior_from_seed(&s, seed);
        let back = to_behavior(&to_correlators(&b)).unwrap();
        let err = b.table().iter().zip(back.table()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn functional_is_affine(s in scenario(), seed in any::<u64>(), lambda in 0.0f64..=1.0) {
        let c = CoefficientSet::new(&s);
        let (b1, b2) = (behavior_from_seed(&s, seed), behavior_from_seed(&s, seed ^ 0x9e37));
        let mixed = b1.mix(&b2, lambda).unwrap();
        let lhs = evaluate_probability_form(&mixed, &c).unwrap();
        let rhs = lambda * evaluate_probability_form(&b1, &c).unwrap()
            + (1.0 - lambda) * evaluate_probability_form(&b2, &c).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-11);
    }

    #[test]
    fn pictures_differ_by_offset(s in scenario(), seed in any::<u64>()) {
        let c = CoefficientSet::new(&s);
        let b = behavior_from_seed(&s, seed);
        let i = evaluate_probability_form(&b, &c).unwrap();
        let it = evaluate_correlator_form(&to_correlators(&b), &c).unwrap();
        prop_assert!((i - it - c.picture_offset()).abs() < 1e-10);
    }

    #[test]
    fn residue_and_table_agree(s in scenario(), seed in any::<u64>()) {
        let c = CoefficientSet::new(&s);
        let b = behavior_from_seed(&s, seed);
        let a = ResidueFunctional::from_coefficients(&c).evaluate(&b).unwrap();
        let t = functional_table(&c).evaluate(&b).unwrap();
        prop_assert!((a - t).abs() < 1e-11);
    }

    #[test]
    fn deterministic_values_respect_bounds(s in scenario(), index in any::<u64>()) {
        let c = CoefficientSet::new(&s);
        let count = bellkit_core::bounds::strategy_count(&s);
        let st = DeterministicStrategy::from_index(s, index as u128 % count);
        let v = ResidueFunctional::from_coefficients(&c).evaluate_strategy(&st).unwrap();
        let classical = classical_bound_bruteforce(&s, &c).unwrap().value;
        prop_assert!(v <= classical + 1e-12);
        prop_assert!(classical <= quantum_bound_probability(&c) + 1e-12);
        prop_assert!(quantum_bound_probability(&c) <= ns_bound_and_behavior(&s, &c).unwrap().0 + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sos_identity_holds_for_random_observables(s in scenario(), seed in any::<u64>()) {
        let r = sos_residual(&observables_from_seed(&s, seed), &CoefficientSet::new(&s)).unwrap();
        prop_assert!(r.residual < 1e-8, "{}", r.residual);
        prop_assert!(r.min_eigenvalue > -1e-9);
    }
}
