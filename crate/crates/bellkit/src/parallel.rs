//! Rayon drivers over the pure block APIs of the core crate.

use bellkit_core::bounds::{reduce_in_order, BoundReport, ClassicalSearch, DEFAULT_BUDGET};
use bellkit_core::coefficients::CoefficientSet;
use bellkit_core::expression::ResidueFunctional;
use bellkit_core::quantum::ObservableSet;
use bellkit_core::sos::sos_residual;
use bellkit_core::tilted::{scan_point, TiltedPoint};
use bellkit_core::Scenario;
use rayon::prelude::*;
use serde::Serialize;

use crate::random::{random_observable_set, trial_rng};
use crate::{BellkitError, Result};

pub const BUDGET_ENV: &str = "BELLKIT_BUDGET";

/// `BELLKIT_BUDGET` if set (integer or e.g. `1e9`).
pub fn budget_override() -> Result<Option<u128>> {
    match std::env::var(BUDGET_ENV) {
        Err(_) => Ok(None),
        Ok(v) => parse_budget(&v).map(Some),
    }
}

/// Classical enumeration budget, overridable through the environment.
pub fn budget_from_env() -> Result<u128> {
    Ok(budget_override()?.unwrap_or(DEFAULT_BUDGET))
}

pub fn parse_budget(v: &str) -> Result<u128> {
    let v = v.trim();
    if let Ok(n) = v.parse::<u128>() {
        return Ok(n);
    }
    match v.parse::<f64>() {
        Ok(f) if f.is_finite() && f >= 0.0 && f.fract() == 0.0 => Ok(f as u128),
        _ => Err(BellkitError::Input(format!("{BUDGET_ENV}={v:?} is not a non-negative integer"))),
    }
}

/// A pool with `threads` workers, or rayon's default when `None`.
pub fn thread_pool(threads: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(BellkitError::Input("--threads must be positive".into()));
        }
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| BellkitError::Input(format!("thread pool: {e}")))
}

/// Parallel map over blocks, ordered reduction: the result matches the
/// sequential search exactly.
pub fn classical_search(functional: ResidueFunctional, budget: u128) -> Result<BoundReport> {
    let search = ClassicalSearch::new(functional, budget)?;
    let blocks: Vec<_> = (0..search.block_count())
        .into_par_iter()
        .map(|b| search.search_block(b))
        .collect();
    let best = blocks
        .into_iter()
        .fold(None, reduce_in_order)
        .expect("at least one block");
    Ok(search.report(best)?)
}

pub fn classical_bound(s: &Scenario, c: &CoefficientSet, budget: u128) -> Result<BoundReport> {
    classical_search({ let _ = s; ResidueFunctional::from_coefficients(c) }, budget)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SosCheck {
    pub residual_max: f64,
    pub min_eig: f64,
    pub trials: usize,
}

/// SOS residual over `trials` random observable sets (trial `t` uses stream
/// `t` of `seed`).
pub fn sos_check(s: &Scenario, trials: usize, seed: u64) -> Result<SosCheck> {
    let c = CoefficientSet::new(s);
    let results: Vec<_> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            sos_residual(&random_observable_set(s, &mut rng), &c)
        })
        .collect::<std::result::Result<_, _>>()?;
    Ok(fold_sos(&results, trials))
}

/// Same report for the optimal observables.
pub fn sos_check_optimal(s: &Scenario) -> Result<SosCheck> {
    let r = sos_residual(&ObservableSet::optimal(s), &CoefficientSet::new(s))?;
    Ok(fold_sos(&[r], 1))
}

fn fold_sos(results: &[bellkit_core::sos::SosResidual], trials: usize) -> SosCheck {
    SosCheck {
        residual_max: results.iter().map(|r| r.residual).fold(0.0, f64::max),
        min_eig: results.iter().map(|r| r.min_eigenvalue).fold(f64::INFINITY, f64::min),
        trials,
    }
}

pub fn tilted_scan(n_parties: usize, xis: &[f64]) -> Result<Vec<TiltedPoint>> {
    Ok(xis
        .par_iter()
        .map(|&xi| scan_point(n_parties, xi))
        .collect::<std::result::Result<_, _>>()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use bellkit_core::bounds::classical_bound_bruteforce;

    #[test]
    fn parallel_matches_sequential() {
        for (nn, m, d) in [(2, 3, 3), (3, 2, 3), (4, 2, 2)] {
            let s = Scenario::new(nn, m, d).unwrap();
            let c = CoefficientSet::new(&s);
            let seq = classical_bound_bruteforce(&s, &c).unwrap();
            let par = thread_pool(Some(3))
                .unwrap()
                .install(|| classical_bound(&s, &c, DEFAULT_BUDGET))
                .unwrap();
            assert_eq!(seq, par);
        }
    }

    #[test]
    fn budget_parsing() {
        assert_eq!(parse_budget("1000").unwrap(), 1000);
        assert_eq!(parse_budget("1e9").unwrap(), 1_000_000_000);
        assert!(parse_budget("-3").is_err());
        assert!(parse_budget("abc").is_err());
    }

    #[test]
    fn sos_check_is_thread_independent() {
        let s = Scenario::new(2, 3, 3).unwrap();
        let a = thread_pool(Some(1)).unwrap().install(|| sos_check(&s, 6, 9)).unwrap();
        let b = thread_pool(Some(4)).unwrap().install(|| sos_check(&s, 6, 9)).unwrap();
        assert_eq!(a, b);
        assert!(a.residual_max < 1e-8);
    }
}
