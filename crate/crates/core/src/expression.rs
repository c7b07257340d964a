//! The Bell functional: `X`/`X̄` bookkeeping and evaluation in both pictures.
//!
//! For `α = (α_1, …, α_{N−1})` with `α_N = 1`, party 1 reads setting `α_1`
//! (`α_1 + 1` in `X̄`) and party `j ≥ 2` reads setting `α_{j−1} + α_j − 1`.
//! A setting index `m + γ` refers to setting `γ` with the outcome shifted by
//! one; in the correlator picture the same shift is the phase `ω^{±k}`. Both
//! pictures derive the shift from [`AssignmentContext`].

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::bounds::DeterministicStrategy;
use crate::coefficients::CoefficientSet;
use crate::scenario::{omega_pow, Behavior, CorrelatorTensor, Scenario, TOL};
use crate::{Error, Result};

/// Coefficient of party `j` (1-based) in `X`: `+1` for party 1, `(−1)^{j−1}`
/// otherwise. In `X̄` every coefficient flips sign.
#[inline]
pub fn party_sign(j: usize) -> i64 {
    if j == 1 || j % 2 == 1 {
        1
    } else {
        -1
    }
}

/// All `α` tuples in lexicographic order, each entry in `1..=m`.
pub fn alpha_tuples(s: &Scenario) -> impl Iterator<Item = Vec<usize>> + '_ {
    let len = s.n_parties() - 1;
    let m = s.n_settings();
    (0..m.pow(len as u32)).map(move |mut idx| {
        let mut out = vec![0; len];
        for slot in out.iter_mut().rev() {
            *slot = idx % m + 1;
            idx /= m;
        }
        out
    })
}

/// Resolved setting indices and wrap offsets for one `α` tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AssignmentContext {
    alpha: Vec<usize>,
    x_settings: Vec<usize>,
    wraps: Vec<u8>,
    xbar_first: usize,
    xbar_wrap: u8,
}

impl AssignmentContext {
    pub fn new(s: &Scenario, alpha: &[usize]) -> Result<Self> {
        let (nn, m) = (s.n_parties(), s.n_settings());
        if alpha.len() != nn - 1 {
            return Err(Error::DimensionMismatch {
                expected: nn - 1,
                found: alpha.len(),
            });
        }
        if let Some(&bad) = alpha.iter().find(|&&a| a == 0 || a > m) {
            return Err(Error::IndexOutOfRange {
                what: "alpha",
                value: bad,
                max: m,
            });
        }
        let mut ext = alpha.to_vec();
        ext.push(1);
        let mut x_settings = vec![alpha[0]];
        let mut wraps = vec![0u8];
        for j in 2..=nn {
            let raw = ext[j - 2] + ext[j - 1] - 1;
            let (x, w) = if raw > m { (raw - m, 1) } else { (raw, 0) };
            x_settings.push(x);
            wraps.push(w);
        }
        let (xbar_first, xbar_wrap) = if alpha[0] + 1 > m { (1, 1) } else { (alpha[0] + 1, 0) };
        Ok(AssignmentContext {
            alpha: alpha.to_vec(),
            x_settings,
            wraps,
            xbar_first,
            xbar_wrap,
        })
    }

    pub fn alpha(&self) -> &[usize] {
        &self.alpha
    }

    /// Setting tuple entering `X_α`.
    pub fn x_settings(&self) -> &[usize] {
        &self.x_settings
    }

    /// Setting tuple entering `X̄_α` (party 1 advanced by one).
    pub fn xbar_settings(&self) -> Vec<usize> {
        let mut x = self.x_settings.clone();
        x[0] = self.xbar_first;
        x
    }

    /// Wrap offset (0 or 1) of each party in `X_α`; party 1 never wraps there.
    pub fn wraps(&self) -> &[u8] {
        &self.wraps
    }

    pub fn xbar_wrap(&self) -> u8 {
        self.xbar_wrap
    }

    /// `Σ_{j≥2} (−1)^{j−1} w_j`, the constant the wraps add to `X_α`.
    pub fn x_offset(&self) -> i64 {
        self.wraps
            .iter()
            .enumerate()
            .map(|(i, &w)| party_sign(i + 1) * w as i64)
            .sum()
    }

    /// `X_α mod d` for outcomes `a` measured at [`Self::x_settings`].
    pub fn x_residue(&self, d: usize, outcomes: &[usize]) -> usize {
        let signed: i64 = outcomes
            .iter()
            .enumerate()
            .map(|(i, &a)| party_sign(i + 1) * a as i64)
            .sum();
        (signed + self.x_offset()).rem_euclid(d as i64) as usize
    }

    /// `X̄_α mod d` for outcomes measured at [`Self::xbar_settings`].
    pub fn xbar_residue(&self, d: usize, outcomes: &[usize]) -> usize {
        let signed: i64 = outcomes
            .iter()
            .enumerate()
            .map(|(i, &a)| party_sign(i + 1) * a as i64)
            .sum();
        (-(signed + self.xbar_wrap as i64 + self.x_offset())).rem_euclid(d as i64) as usize
    }
}

/// `(X_α mod d, X̄_α mod d)` for a deterministic assignment.
pub fn x_values(strategy: &DeterministicStrategy, alpha: &[usize]) -> Result<(usize, usize)> {
    let s = strategy.scenario();
    let ctx = AssignmentContext::new(s, alpha)?;
    let a: Vec<usize> = ctx
        .x_settings()
        .iter()
        .enumerate()
        .map(|(i, &x)| strategy.get(i + 1, x))
        .collect();
    let abar: Vec<usize> = ctx
        .xbar_settings()
        .iter()
        .enumerate()
        .map(|(i, &x)| strategy.get(i + 1, x))
        .collect();
    let d = s.n_outcomes();
    Ok((ctx.x_residue(d, &a), ctx.xbar_residue(d, &abar)))
}

/// A functional of the form `Σ_α Σ_n w_n [P(X_α = n) + P(X̄_α = n)]`.
///
/// The family uses `w = α̂`; the tilted classes use `w = (1, 0, …, −ξ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueFunctional {
    scenario: Scenario,
    weights: Vec<f64>,
}

impl ResidueFunctional {
    pub fn new(scenario: Scenario, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != scenario.n_outcomes() {
            return Err(Error::DimensionMismatch {
                expected: scenario.n_outcomes(),
                found: weights.len(),
            });
        }
        Ok(ResidueFunctional { scenario, weights })
    }

    pub fn from_coefficients(c: &CoefficientSet) -> Self {
        ResidueFunctional {
            scenario: c.scenario,
            weights: c.alpha_hat.clone(),
        }
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn contexts(&self) -> Vec<AssignmentContext> {
        alpha_tuples(&self.scenario)
            .map(|a| AssignmentContext::new(&self.scenario, &a).expect("alpha tuples are in range"))
            .collect()
    }

    /// `Σ_i c_i a_i mod d` for every outcome tuple, in table order.
    fn signed_sums(&self) -> Vec<i64> {
        let s = &self.scenario;
        (0..s.outcome_tuples())
            .map(|ai| {
                s.outcomes_of(ai)
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| party_sign(i + 1) * a as i64)
                    .sum()
            })
            .collect()
    }

    pub fn evaluate(&self, b: &Behavior) -> Result<f64> {
        self.scenario.check_same(b.scenario())?;
        let s = &self.scenario;
        let d = s.n_outcomes() as i64;
        let sums = self.signed_sums();
        // ℙ_n = Σ_α [P(X_α = n) + P(X̄_α = n)] first, then Σ_n w_n ℙ_n.
        let mut residue_mass = vec![0.0; d as usize];
        for ctx in self.contexts() {
            let off = ctx.x_offset();
            let px = b.block(s.settings_index(ctx.x_settings()));
            let pxb = b.block(s.settings_index(&ctx.xbar_settings()));
            for (ai, &sig) in sums.iter().enumerate() {
                residue_mass[(sig + off).rem_euclid(d) as usize] += px[ai];
                residue_mass[(-(sig + off + ctx.xbar_wrap() as i64)).rem_euclid(d) as usize] += pxb[ai];
            }
        }
        Ok(self.weights.iter().zip(&residue_mass).map(|(w, p)| w * p).sum())
    }

    /// Value on a deterministic strategy, via the residues directly.
    pub fn evaluate_strategy(&self, strategy: &DeterministicStrategy) -> Result<f64> {
        self.scenario.check_same(strategy.scenario())?;
        let mut total = 0.0;
        for alpha in alpha_tuples(&self.scenario) {
            let (x, xb) = x_values(strategy, &alpha)?;
            total += self.weights[x] + self.weights[xb];
        }
        Ok(total)
    }

    /// Materializes the dense `T_{a,x}` table.
    pub fn table(&self) -> BellFunctional {
        let s = &self.scenario;
        let n = s.outcome_tuples();
        let d = s.n_outcomes() as i64;
        let sums = self.signed_sums();
        let mut entries = vec![0.0; s.table_len()];
        let mut covered = vec![false; s.setting_tuples()];
        for ctx in self.contexts() {
            let off = ctx.x_offset();
            let xi = s.settings_index(ctx.x_settings());
            let xbi = s.settings_index(&ctx.xbar_settings());
            covered[xi] = true;
            covered[xbi] = true;
            for (ai, &sig) in sums.iter().enumerate() {
                let rx = (sig + off).rem_euclid(d) as usize;
                let rxb = (-(sig + off + ctx.xbar_wrap() as i64)).rem_euclid(d) as usize;
                entries[xi * n + ai] += self.weights[rx];
                entries[xbi * n + ai] += self.weights[rxb];
            }
        }
        BellFunctional {
            scenario: *s,
            entries,
            covered,
        }
    }
}

/// `I_{N,m,d}(b) = Σ_n α̂_n ℙ_n`.
pub fn evaluate_probability_form(b: &Behavior, c: &CoefficientSet) -> Result<f64> {
    ResidueFunctional::from_coefficients(c).evaluate(b)
}

/// `Ĩ_{N,m,d}` from generalized correlators (the `k = 0` term excluded).
pub fn evaluate_correlator_form(t: &CorrelatorTensor, c: &CoefficientSet) -> Result<f64> {
    let s = t.scenario();
    s.check_same(&c.scenario)?;
    let d = s.n_outcomes();
    let nn = s.n_parties();
    let mut total = Complex64::new(0.0, 0.0);
    let mut kvec = vec![0usize; nn];
    for alpha in alpha_tuples(s) {
        let ctx = AssignmentContext::new(s, &alpha)?;
        let xs = ctx.x_settings();
        let xbs = ctx.xbar_settings();
        let off = ctx.x_offset();
        for k in 1..d {
            for (i, slot) in kvec.iter_mut().enumerate() {
                *slot = (party_sign(i + 1) * k as i64).rem_euclid(d as i64) as usize;
            }
            let phase_x = omega_pow(d, (k as i64 * off) as f64);
            let phase_xb = omega_pow(d, (k as i64 * (off + ctx.xbar_wrap() as i64)) as f64);
            total += c.a_k(k) * phase_x * t.get(xs, &kvec) + c.a_k(k).conj() * phase_xb * t.get(&xbs, &kvec);
        }
    }
    total /= d as f64;
    if total.im.abs() > TOL.linalg {
        return Err(Error::ImaginaryResidue(total.im));
    }
    Ok(total.re)
}

/// Dense coefficient table of a generic functional `Σ T_{a,x} p(a|x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BellFunctional {
    scenario: Scenario,
    entries: Vec<f64>,
    covered: Vec<bool>,
}

/// One nonzero coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalEntry {
    pub settings: Vec<usize>,
    pub outcomes: Vec<usize>,
    pub value: f64,
}

impl BellFunctional {
    /// Wraps a dense table; a setting tuple counts as covered when any of its
    /// coefficients is nonzero.
    pub fn from_dense(scenario: Scenario, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != scenario.table_len() {
            return Err(Error::TableLength {
                expected: scenario.table_len(),
                found: entries.len(),
            });
        }
        let covered = entries
            .chunks(scenario.outcome_tuples())
            .map(|block| block.iter().any(|&t| t != 0.0))
            .collect();
        Ok(BellFunctional {
            scenario,
            entries,
            covered,
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    /// Dense entries in the behavior layout.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, settings: &[usize], outcomes: &[usize]) -> f64 {
        self.entries[self.scenario.entry_index(settings, outcomes)]
    }

    pub fn evaluate(&self, b: &Behavior) -> Result<f64> {
        self.scenario.check_same(b.scenario())?;
        Ok(self.entries.iter().zip(b.table()).map(|(t, p)| t * p).sum())
    }

    /// Number of `(x, a)` entries on setting tuples the functional touches.
    pub fn support_len(&self) -> usize {
        self.covered.iter().filter(|&&c| c).count() * self.scenario.outcome_tuples()
    }

    /// Setting tuples that carry coefficients.
    pub fn covered_settings(&self) -> impl Iterator<Item = usize> + '_ {
        self.covered.iter().enumerate().filter(|(_, &c)| c).map(|(i, _)| i)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FunctionalEntry> + '_ {
        let n = self.scenario.outcome_tuples();
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, &t)| t != 0.0)
            .map(move |(i, &t)| FunctionalEntry {
                settings: self.scenario.settings_of(i / n),
                outcomes: self.scenario.outcomes_of(i % n),
                value: t,
            })
    }

    /// Maximum over all normalized tables, `Σ_x max_a T_{a,x}`.
    pub fn algebraic_max(&self) -> f64 {
        let n = self.scenario.outcome_tuples();
        self.entries
            .chunks(n)
            .map(|block| block.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
            .sum()
    }

    /// Largest entrywise difference from another table of the same scenario.
    pub fn max_difference(&self, other: &BellFunctional) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn scaled(&self, factor: f64) -> BellFunctional {
        BellFunctional {
            scenario: self.scenario,
            entries: self.entries.iter().map(|t| t * factor).collect(),
            covered: self.covered.clone(),
        }
    }
}

/// `T` table of the family member for `c`.
pub fn functional_table(c: &CoefficientSet) -> BellFunctional {
    ResidueFunctional::from_coefficients(c).table()
}
