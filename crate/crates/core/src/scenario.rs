//! Bell scenarios, behaviors and generalized correlators.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::{Error, Result};

/// Numerical tolerances shared by all checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Identities that hold exactly up to rounding.
    pub exact: f64,
    /// Results of accumulated linear algebra.
    pub linalg: f64,
    /// Marginal (no-signaling) comparisons.
    pub marginal: f64,
}

pub const TOL: Tolerances = Tolerances {
    exact: 1e-12,
    linalg: 1e-10,
    marginal: 1e-9,
};

/// `ω^e = exp(2πi e / d)` for a real exponent `e`.
pub fn omega_pow(d: usize, e: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * e / d as f64)
}

/// The `(N, m, d)` triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Scenario {
    n_parties: usize,
    n_settings: usize,
    n_outcomes: usize,
}

impl Scenario {
    pub fn new(n_parties: usize, n_settings: usize, n_outcomes: usize) -> Result<Self> {
        if n_parties < 2 || n_settings < 2 || n_outcomes < 2 {
            return Err(Error::InvalidScenario {
                n_parties,
                n_settings,
                n_outcomes,
            });
        }
        Ok(Scenario {
            n_parties,
            n_settings,
            n_outcomes,
        })
    }

    #[inline]
    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    #[inline]
    pub fn n_settings(&self) -> usize {
        self.n_settings
    }

    #[inline]
    pub fn n_outcomes(&self) -> usize {
        self.n_outcomes
    }

    /// `m^N`, the number of setting tuples.
    pub fn setting_tuples(&self) -> usize {
        self.n_settings.pow(self.n_parties as u32)
    }

    /// `d^N`, the number of outcome tuples (and the joint Hilbert space dimension).
    pub fn outcome_tuples(&self) -> usize {
        self.n_outcomes.pow(self.n_parties as u32)
    }

    /// `(m d)^N`.
    pub fn table_len(&self) -> usize {
        self.setting_tuples() * self.outcome_tuples()
    }

    /// Flat index of a 1-based setting tuple.
    pub fn settings_index(&self, settings: &[usize]) -> usize {
        debug_assert_eq!(settings.len(), self.n_parties);
        settings
            .iter()
            .fold(0, |acc, &x| acc * self.n_settings + (x - 1))
    }

    /// Flat index of an outcome (or Fourier-index) tuple.
    pub fn outcomes_index(&self, outcomes: &[usize]) -> usize {
        debug_assert_eq!(outcomes.len(), self.n_parties);
        outcomes.iter().fold(0, |acc, &a| acc * self.n_outcomes + a)
    }

    /// Flat table index of `(x, a)`.
    pub fn entry_index(&self, settings: &[usize], outcomes: &[usize]) -> usize {
        self.settings_index(settings) * self.outcome_tuples() + self.outcomes_index(outcomes)
    }

    /// Inverse of [`Scenario::settings_index`].
    pub fn settings_of(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.n_parties];
        for slot in out.iter_mut().rev() {
            *slot = index % self.n_settings + 1;
            index /= self.n_settings;
        }
        out
    }

    /// Inverse of [`Scenario::outcomes_index`].
    pub fn outcomes_of(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.n_parties];
        for slot in out.iter_mut().rev() {
            *slot = index % self.n_outcomes;
            index /= self.n_outcomes;
        }
        out
    }

    pub(crate) fn check_same(&self, other: &Scenario) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ScenarioMismatch)
        }
    }
}

/// A full table of conditional probabilities `p(a|x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Behavior {
    scenario: Scenario,
    table: Vec<f64>,
}

impl Behavior {
    /// Validates entries in `[0,1]` (1e-12) and per-setting normalization (1e-10).
    pub fn new(scenario: Scenario, table: Vec<f64>) -> Result<Self> {
        Self::with_tolerances(scenario, table, &TOL)
    }

    pub fn with_tolerances(scenario: Scenario, table: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        if table.len() != scenario.table_len() {
            return Err(Error::TableLength {
                expected: scenario.table_len(),
                found: table.len(),
            });
        }
        let block = scenario.outcome_tuples();
        for (xi, chunk) in table.chunks(block).enumerate() {
            for (ai, &p) in chunk.iter().enumerate() {
                if !p.is_finite() || p < -tol.exact || p > 1.0 + tol.exact {
                    return Err(Error::InvalidProbability {
                        settings: scenario.settings_of(xi),
                        outcomes: scenario.outcomes_of(ai),
                        value: p,
                    });
                }
            }
            let sum: f64 = chunk.iter().sum();
            if (sum - 1.0).abs() > tol.linalg {
                return Err(Error::Unnormalized {
                    settings: scenario.settings_of(xi),
                    sum,
                });
            }
        }
        Ok(Behavior { scenario, table })
    }

    /// Builds a table from `f(x, a)`, then validates it.
    pub fn from_fn(scenario: Scenario, mut f: impl FnMut(&[usize], &[usize]) -> f64) -> Result<Self> {
        let block = scenario.outcome_tuples();
        let mut table = Vec::with_capacity(scenario.table_len());
        for xi in 0..scenario.setting_tuples() {
            let x = scenario.settings_of(xi);
            for ai in 0..block {
                table.push(f(&x, &scenario.outcomes_of(ai)));
            }
        }
        Self::new(scenario, table)
    }

    pub fn uniform(scenario: Scenario) -> Self {
        let p = 1.0 / scenario.outcome_tuples() as f64;
        Behavior {
            scenario,
            table: vec![p; scenario.table_len()],
        }
    }

    /// Product of deterministic local responses `outcome(party, setting)`
    /// (both 1-based party and setting).
    pub fn deterministic(scenario: Scenario, mut outcome: impl FnMut(usize, usize) -> usize) -> Self {
        let block = scenario.outcome_tuples();
        let mut table = vec![0.0; scenario.table_len()];
        for xi in 0..scenario.setting_tuples() {
            let x = scenario.settings_of(xi);
            let a: Vec<usize> = x
                .iter()
                .enumerate()
                .map(|(i, &xs)| outcome(i + 1, xs) % scenario.n_outcomes)
                .collect();
            table[xi * block + scenario.outcomes_index(&a)] = 1.0;
        }
        Behavior { scenario, table }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn table(&self) -> &[f64] {
        &self.table
    }

    pub fn into_table(self) -> Vec<f64> {
        self.table
    }

    pub fn prob(&self, settings: &[usize], outcomes: &[usize]) -> f64 {
        self.table[self.scenario.entry_index(settings, outcomes)]
    }

    /// `p(·|x)` for the setting tuple with flat index `settings_index`.
    pub fn block(&self, settings_index: usize) -> &[f64] {
        let n = self.scenario.outcome_tuples();
        &self.table[settings_index * n..(settings_index + 1) * n]
    }

    /// Convex combination `λ self + (1-λ) other`.
    pub fn mix(&self, other: &Behavior, lambda: f64) -> Result<Behavior> {
        self.scenario.check_same(&other.scenario)?;
        let table = self
            .table
            .iter()
            .zip(&other.table)
            .map(|(p, q)| lambda * p + (1.0 - lambda) * q)
            .collect();
        Behavior::new(self.scenario, table)
    }

    /// Marginal on all parties except `party` (1-based), reading the dropped
    /// party at setting 1. Meaningful for no-signaling behaviors.
    pub fn marginal(&self, party: usize) -> Result<Behavior> {
        let s = &self.scenario;
        if party == 0 || party > s.n_parties {
            return Err(Error::IndexOutOfRange {
                what: "party",
                value: party,
                max: s.n_parties,
            });
        }
        let reduced = Scenario::new(s.n_parties - 1, s.n_settings, s.n_outcomes)?;
        Behavior::from_fn(reduced, |x, a| {
            let mut full_x = x.to_vec();
            full_x.insert(party - 1, 1);
            let mut full_a = a.to_vec();
            full_a.insert(party - 1, 0);
            (0..s.n_outcomes)
                .map(|ai| {
                    full_a[party - 1] = ai;
                    self.prob(&full_x, &full_a)
                })
                .sum()
        })
    }
}

/// Table of generalized correlators `⟨A_1^{(k_1)} … A_N^{(k_N)}⟩` indexed by
/// `(x, k)` in the behavior layout.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelatorTensor {
    scenario: Scenario,
    table: Vec<Complex64>,
}

impl CorrelatorTensor {
    /// Checks the table length and `|entry| <= 1 + 1e-10`.
    pub fn new(scenario: Scenario, table: Vec<Complex64>) -> Result<Self> {
        if table.len() != scenario.table_len() {
            return Err(Error::TableLength {
                expected: scenario.table_len(),
                found: table.len(),
            });
        }
        if table.iter().any(|z| z.norm().is_nan() || z.norm() > 1.0 + TOL.linalg) {
            return Err(Error::InvalidCorrelators("entry modulus exceeds 1"));
        }
        Ok(CorrelatorTensor { scenario, table })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn table(&self) -> &[Complex64] {
        &self.table
    }

    pub fn get(&self, settings: &[usize], fourier: &[usize]) -> Complex64 {
        self.table[self.scenario.entry_index(settings, fourier)]
    }

    /// Largest violation of `entry(x, k) = conj(entry(x, -k))`.
    pub fn conjugation_defect(&self) -> f64 {
        let s = &self.scenario;
        let d = s.n_outcomes;
        let n = s.outcome_tuples();
        let mut worst = 0.0f64;
        for xi in 0..s.setting_tuples() {
            for ki in 0..n {
                let neg: Vec<usize> = s.outcomes_of(ki).iter().map(|&k| (d - k) % d).collect();
                let z = self.table[xi * n + ki];
                let w = self.table[xi * n + s.outcomes_index(&neg)];
                worst = worst.max((z - w.conj()).norm());
            }
        }
        worst
    }
}

/// Applies `out[k] = Σ_a ω^{sign·a·k} in[a]` along every party axis of each
/// setting block.
fn dft_blocks(s: &Scenario, data: &mut [Complex64], sign: f64) {
    let d = s.n_outcomes;
    let n = s.outcome_tuples();
    let twiddle: Vec<Complex64> = (0..d).map(|j| omega_pow(d, sign * j as f64)).collect();
    let mut fiber = vec![Complex64::new(0.0, 0.0); d];
    for block in data.chunks_mut(n) {
        for party in 0..s.n_parties {
            let stride = d.pow((s.n_parties - 1 - party) as u32);
            for outer in (0..n).step_by(stride * d) {
                for inner in 0..stride {
                    let base = outer + inner;
                    for (a, slot) in fiber.iter_mut().enumerate() {
                        *slot = block[base + a * stride];
                    }
                    for k in 0..d {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for (a, v) in fiber.iter().enumerate() {
                            acc += twiddle[(a * k) % d] * v;
                        }
                        block[base + k * stride] = acc;
                    }
                }
            }
        }
    }
}

/// Generalized correlators `Σ_a ω^{a·k} p(a|x)`.
pub fn to_correlators(b: &Behavior) -> CorrelatorTensor {
    let mut table: Vec<Complex64> = b.table.iter().map(|&p| Complex64::new(p, 0.0)).collect();
    dft_blocks(&b.scenario, &mut table, 1.0);
    CorrelatorTensor {
        scenario: b.scenario,
        table,
    }
}

/// Inverse transform `p(a|x) = d^{-N} Σ_k ω^{-a·k} ⟨…⟩`.
pub fn to_behavior(c: &CorrelatorTensor) -> Result<Behavior> {
    let s = c.scenario;
    let n = s.outcome_tuples();
    for block in c.table.chunks(n) {
        if (block[0] - Complex64::new(1.0, 0.0)).norm() > TOL.linalg {
            return Err(Error::InvalidCorrelators("all-zero Fourier index entry differs from 1"));
        }
    }
    if c.conjugation_defect() > TOL.linalg {
        return Err(Error::InvalidCorrelators("conjugation symmetry violated"));
    }
    let mut data = c.table.clone();
    dft_blocks(&s, &mut data, -1.0);
    let scale = 1.0 / n as f64;
    let mut table = Vec::with_capacity(data.len());
    for (i, z) in data.iter().enumerate() {
        let p = z.re * scale;
        if p < -TOL.marginal {
            return Err(Error::NotABehavior {
                settings: s.settings_of(i / n),
                outcomes: s.outcomes_of(i % n),
                value: p,
            });
        }
        table.push(p.max(0.0));
    }
    Behavior::new(s, table)
}

/// One violated marginal constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalingViolation {
    /// Party whose setting changes the marginal of the others.
    pub party: usize,
    /// Settings of the remaining parties (party order, `party` omitted).
    pub other_settings: Vec<usize>,
    /// Outcomes of the remaining parties.
    pub other_outcomes: Vec<usize>,
    /// `max - min` of the marginal over the party's settings.
    pub discrepancy: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct NoSignalingReport {
    pub violations: Vec<SignalingViolation>,
}

impl NoSignalingReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn max_discrepancy(&self) -> f64 {
        self.violations.iter().fold(0.0, |m, v| m.max(v.discrepancy))
    }
}

/// Checks that summing out any single party gives a marginal independent of
/// that party's setting.
pub fn check_no_signaling(b: &Behavior) -> NoSignalingReport {
    check_no_signaling_with(b, TOL.marginal)
}

pub fn check_no_signaling_with(b: &Behavior, tol: f64) -> NoSignalingReport {
    let s = &b.scenario;
    let (nn, m, d) = (s.n_parties, s.n_settings, s.n_outcomes);
    let reduced_settings = m.pow(nn as u32 - 1);
    let reduced_outcomes = d.pow(nn as u32 - 1);
    let mut report = NoSignalingReport::default();
    let mut x = vec![0usize; nn];
    let mut a = vec![0usize; nn];
    for party in 0..nn {
        for xr in 0..reduced_settings {
            let others_x = mixed_radix(xr, nn - 1, m, 1);
            for ar in 0..reduced_outcomes {
                let others_a = mixed_radix(ar, nn - 1, d, 0);
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for xp in 1..=m {
                    fill_with(&mut x, &others_x, party, xp);
                    let mut marginal = 0.0;
                    for ap in 0..d {
                        fill_with(&mut a, &others_a, party, ap);
                        marginal += b.prob(&x, &a);
                    }
                    lo = lo.min(marginal);
                    hi = hi.max(marginal);
                }
                if hi - lo > tol {
                    report.violations.push(SignalingViolation {
                        party: party + 1,
                        other_settings: others_x.clone(),
                        other_outcomes: others_a,
                        discrepancy: hi - lo,
                    });
                }
            }
        }
    }
    report
}

fn mixed_radix(mut index: usize, len: usize, radix: usize, base: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = index % radix + base;
        index /= radix;
    }
    out
}

fn fill_with(full: &mut [usize], others: &[usize], slot: usize, value: usize) {
    let mut it = others.iter();
    for (i, v) in full.iter_mut().enumerate() {
        *v = if i == slot { value } else { *it.next().unwrap() };
    }
}
