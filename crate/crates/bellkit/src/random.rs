//! Seeded sampling of observables and behaviors.

use bellkit_core::linalg::DenseOperator;
use bellkit_core::quantum::{observable_from_basis, ObservableSet};
use bellkit_core::{Behavior, Complex64, Scenario};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};

/// Independent stream `trial` of the generator seeded with `seed`, so that
/// results do not depend on how trials are scheduled across threads.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Complex Ginibre matrix with unit-variance entries.
pub fn ginibre(d: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(d, d, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * s, im * s)
    })
}

/// `V diag(ω^{e_j}) V†` with Haar-random `V` and independent uniform `e_j`.
pub fn random_observable(d: usize, rng: &mut impl Rng) -> DenseOperator {
    let z = ginibre(d, rng);
    let exponents: Vec<usize> = (0..d).map(|_| rng.random_range(0..d)).collect();
    observable_from_basis(&z, &exponents).expect("square basis and matching exponents")
}

pub fn random_observable_set(s: &Scenario, rng: &mut impl Rng) -> ObservableSet {
    let d = s.n_outcomes();
    let ops = (0..s.n_parties())
        .map(|_| (0..s.n_settings()).map(|_| random_observable(d, rng)).collect())
        .collect();
    ObservableSet::new(*s, ops).expect("sampled observables are unitary with A^d = 1")
}

/// Each conditional distribution drawn uniformly from the simplex.
pub fn random_behavior(s: &Scenario, rng: &mut impl Rng) -> Behavior {
    let n = s.outcome_tuples();
    let mut table = Vec::with_capacity(s.table_len());
    for _ in 0..s.setting_tuples() {
        let raw: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = raw.iter().sum();
        table.extend(raw.into_iter().map(|v| v / total));
    }
    Behavior::new(*s, table).expect("normalized rows")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = trial_rng(7, 3).random();
        let b: u64 = trial_rng(7, 3).random();
        let c: u64 = trial_rng(7, 4).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn sampled_objects_are_valid() {
        let mut rng = trial_rng(1, 0);
        let s = Scenario::new(3, 2, 4).unwrap();
        let obs = random_observable_set(&s, &mut rng);
        assert!(obs.observable(2, 1).unitarity_deviation() < 1e-12);
        let b = random_behavior(&s, &mut rng);
        assert_eq!(b.table().len(), s.table_len());
    }
}
