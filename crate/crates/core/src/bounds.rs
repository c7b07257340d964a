//! Classical, Svetlichny and nonsignaling bounds.
//!
//! Classical bounds are exact: every deterministic strategy is visited. The
//! search space is split into `d^m` blocks by party 1's assignment so that a
//! parallel driver can map over blocks and reduce in block order;
//! [`reduce_in_order`] is the reduction every driver must use. Maxima within
//! [`TIE_TOLERANCE`] count as ties, and ties go to the lexicographically
//! smallest strategy.

use crate::prelude::*;
use core::f64::consts::PI;


use crate::coefficients::{g, CoefficientSet};
use crate::expression::{alpha_tuples, party_sign, AssignmentContext, BellFunctional, ResidueFunctional};
use crate::scenario::{check_no_signaling, Behavior, Scenario, TOL};
use crate::{Error, Result};

/// Default cap on the number of strategies visited by one enumeration.
pub const DEFAULT_BUDGET: u128 = 100_000_000;
/// Default cap on hybrid vertices per bipartition in Svetlichny enumeration.
pub const DEFAULT_HYBRID_BUDGET: u128 = 10_000_000;
/// Two values closer than this are treated as equal when picking a witness.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// `A_{i,x} ∈ 0..d` for every party and setting.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DeterministicStrategy {
    scenario: Scenario,
    outcomes: Vec<usize>,
}

impl DeterministicStrategy {
    /// `outcomes[(i−1)·m + (x−1)] = A_{i,x}`.
    pub fn new(scenario: Scenario, outcomes: Vec<usize>) -> Result<Self> {
        let expected = scenario.n_parties() * scenario.n_settings();
        if outcomes.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: outcomes.len(),
            });
        }
        let d = scenario.n_outcomes();
        if let Some(&bad) = outcomes.iter().find(|&&a| a >= d) {
            return Err(Error::IndexOutOfRange {
                what: "outcome",
                value: bad,
                max: d - 1,
            });
        }
        Ok(DeterministicStrategy { scenario, outcomes })
    }

    pub fn constant(scenario: Scenario, outcome: usize) -> Self {
        let len = scenario.n_parties() * scenario.n_settings();
        DeterministicStrategy::new(scenario, vec![outcome; len]).expect("constant outcome in range")
    }

    /// Strategy number `index` in lexicographic order of the outcome list.
    pub fn from_index(scenario: Scenario, mut index: u128) -> Self {
        let len = scenario.n_parties() * scenario.n_settings();
        let d = scenario.n_outcomes() as u128;
        let mut outcomes = vec![0; len];
        for slot in outcomes.iter_mut().rev() {
            *slot = (index % d) as usize;
            index /= d;
        }
        DeterministicStrategy { scenario, outcomes }
    }

    pub fn index(&self) -> u128 {
        let d = self.scenario.n_outcomes() as u128;
        self.outcomes.iter().fold(0, |acc, &a| acc * d + a as u128)
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn outcomes(&self) -> &[usize] {
        &self.outcomes
    }

    /// `A_{party, setting}`, both 1-based.
    pub fn get(&self, party: usize, setting: usize) -> usize {
        self.outcomes[(party - 1) * self.scenario.n_settings() + setting - 1]
    }

    pub fn behavior(&self) -> Behavior {
        Behavior::deterministic(self.scenario, |i, x| self.get(i, x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Classical,
    Svetlichny,
    Nonsignaling,
    Quantum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Enumeration,
    ClosedForm,
    Construction,
}

/// Whether a reported value is known to be attained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tightness {
    Exact,
    UpperBound,
}

/// A bilocal vertex: parties in `group` answer with a deterministic function
/// of their joint settings, as do the remaining parties.
///
/// `group_answers[j]` is the outcome-tuple index the group returns for its
/// `j`-th joint setting (row-major, lowest party most significant); likewise
/// `rest_answers` for the complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HybridStrategy {
    pub scenario: Scenario,
    pub group: Vec<usize>,
    pub group_answers: Vec<usize>,
    pub rest_answers: Vec<usize>,
}

impl HybridStrategy {
    pub fn rest(&self) -> Vec<usize> {
        (1..=self.scenario.n_parties()).filter(|p| !self.group.contains(p)).collect()
    }

    pub fn behavior(&self) -> Behavior {
        let s = self.scenario;
        let rest = self.rest();
        let (m, d) = (s.n_settings(), s.n_outcomes());
        let sub_index = |parties: &[usize], v: &[usize], base: usize, offset: usize| {
            parties.iter().fold(0, |acc, &p| acc * base + v[p - 1] - offset)
        };
        Behavior::from_fn(s, |x, a| {
            let g_ok = self.group_answers[sub_index(&self.group, x, m, 1)] == sub_index(&self.group, a, d, 0);
            let r_ok = self.rest_answers[sub_index(&rest, x, m, 1)] == sub_index(&rest, a, d, 0);
            (g_ok && r_ok) as u8 as f64
        })
        .expect("hybrid strategies are deterministic")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Strategy(DeterministicStrategy),
    Hybrid(HybridStrategy),
    Behavior(Behavior),
}

impl Witness {
    pub fn behavior(&self) -> Behavior {
        match self {
            Witness::Strategy(st) => st.behavior(),
            Witness::Hybrid(h) => h.behavior(),
            Witness::Behavior(b) => b.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub kind: BoundKind,
    pub value: f64,
    pub method: Method,
    pub tightness: Tightness,
    pub witness: Option<Witness>,
}

impl BoundReport {
    /// Largest gap between `value` and the witness evaluated on `functional`.
    pub fn witness_gap(&self, functional: &BellFunctional) -> Option<f64> {
        let w = self.witness.as_ref()?;
        let v = functional.evaluate(&w.behavior()).ok()?;
        Some((v - self.value).abs())
    }
}

/// Best value found in one block of the classical search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockBest {
    pub value: f64,
    pub index: u128,
}

/// Keeps `acc` unless `next` is larger by more than [`TIE_TOLERANCE`].
pub fn reduce_in_order(acc: Option<BlockBest>, next: BlockBest) -> Option<BlockBest> {
    match acc {
        Some(a) if next.value <= a.value + TIE_TOLERANCE => Some(a),
        _ => Some(next),
    }
}

#[derive(Debug, Clone)]
struct Context {
    first: usize,
    xbar_first: usize,
    xbar_wrap: i64,
    offset: i64,
    middle: Vec<usize>,
    last: usize,
}

/// Exhaustive search over deterministic strategies of a residue functional.
#[derive(Debug, Clone)]
pub struct ClassicalSearch {
    functional: ResidueFunctional,
    contexts: Vec<Context>,
}

impl ClassicalSearch {
    pub fn new(functional: ResidueFunctional, budget: u128) -> Result<Self> {
        let s = *functional.scenario();
        let total = strategy_count(&s);
        if total > budget {
            return Err(Error::BudgetExceeded { required: total, budget });
        }
        let nn = s.n_parties();
        let contexts = alpha_tuples(&s)
            .map(|alpha| {
                let ctx = AssignmentContext::new(&s, &alpha).expect("alpha tuples are in range");
                let x = ctx.x_settings();
                Context {
                    first: x[0],
                    xbar_first: ctx.xbar_settings()[0],
                    xbar_wrap: ctx.xbar_wrap() as i64,
                    offset: ctx.x_offset(),
                    middle: x[1..nn - 1].to_vec(),
                    last: x[nn - 1],
                }
            })
            .collect();
        Ok(ClassicalSearch { functional, contexts })
    }

    pub fn scenario(&self) -> &Scenario {
        self.functional.scenario()
    }

    /// Number of blocks (party 1's `d^m` assignments).
    pub fn block_count(&self) -> usize {
        let s = self.scenario();
        s.n_outcomes().pow(s.n_settings() as u32)
    }

    /// Best strategy whose party-1 assignment has index `block`.
    pub fn search_block(&self, block: usize) -> BlockBest {
        let s = self.scenario();
        let (nn, m, d) = (s.n_parties(), s.n_settings(), s.n_outcomes());
        let di = d as i64;
        let w = self.functional.weights();
        let first = digits(block, d, m);
        let per_party = d.pow(m as u32);
        let n_middle = per_party.pow((nn - 2) as u32);
        let c_last = party_sign(nn);
        let mut best: Option<BlockBest> = None;
        let mut table = vec![0.0; m * d];
        let mut middle = vec![0usize; (nn - 2) * m];
        for mid in 0..n_middle {
            fill_digits(mid, d, &mut middle);
            table.iter_mut().for_each(|t| *t = 0.0);
            for ctx in &self.contexts {
                let mut base = ctx.offset;
                for (j, &x) in ctx.middle.iter().enumerate() {
                    base += party_sign(j + 2) * middle[j * m + x - 1] as i64;
                }
                let rx = first[ctx.first - 1] as i64 + base;
                let rxb = first[ctx.xbar_first - 1] as i64 + ctx.xbar_wrap + base;
                let row = &mut table[(ctx.last - 1) * d..ctx.last * d];
                for (v, slot) in row.iter_mut().enumerate() {
                    let cv = c_last * v as i64;
                    *slot += w[(rx + cv).rem_euclid(di) as usize] + w[(-(rxb + cv)).rem_euclid(di) as usize];
                }
            }
            let prefix = ((block * n_middle + mid) * per_party) as u128;
            let mut last = vec![0usize; m];
            for li in 0..per_party {
                let value: f64 = last.iter().enumerate().map(|(y, &v)| table[y * d + v]).sum();
                best = reduce_in_order(
                    best,
                    BlockBest {
                        value,
                        index: prefix + li as u128,
                    },
                );
                increment(&mut last, d);
            }
        }
        best.expect("blocks are non-empty")
    }

    /// Turns the reduced best into a report, re-evaluating the witness.
    pub fn report(&self, best: BlockBest) -> Result<BoundReport> {
        let st = DeterministicStrategy::from_index(*self.scenario(), best.index);
        let check = self.functional.evaluate_strategy(&st)?;
        if (check - best.value).abs() > TOL.linalg {
            return Err(Error::Construction {
                settings: Vec::new(),
                reason: "witness does not reproduce the enumerated value",
            });
        }
        Ok(BoundReport {
            kind: BoundKind::Classical,
            value: best.value,
            method: Method::Enumeration,
            tightness: Tightness::Exact,
            witness: Some(Witness::Strategy(st)),
        })
    }

    /// Sequential search over all blocks.
    pub fn run(&self) -> Result<BoundReport> {
        let best = (0..self.block_count())
            .map(|b| self.search_block(b))
            .fold(None, reduce_in_order)
            .expect("at least one block");
        self.report(best)
    }
}

/// `d^{Nm}`.
pub fn strategy_count(s: &Scenario) -> u128 {
    (s.n_outcomes() as u128).pow((s.n_parties() * s.n_settings()) as u32)
}

fn digits(mut index: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
    out
}

fn fill_digits(mut index: usize, base: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = index % base;
        index /= base;
    }
}

/// Next tuple in lexicographic order (last digit fastest).
fn increment(digits: &mut [usize], base: usize) {
    for slot in digits.iter_mut().rev() {
        *slot += 1;
        if *slot < base {
            return;
        }
        *slot = 0;
    }
}

/// Exact classical bound of `I_{N,m,d}` with the default budget.
pub fn classical_bound_bruteforce(s: &Scenario, c: &CoefficientSet) -> Result<BoundReport> {
    classical_bound_bruteforce_with_budget(s, c, DEFAULT_BUDGET)
}

pub fn classical_bound_bruteforce_with_budget(s: &Scenario, c: &CoefficientSet, budget: u128) -> Result<BoundReport> {
    s.check_same(&c.scenario)?;
    ClassicalSearch::new(ResidueFunctional::from_coefficients(c), budget)?.run()
}

/// Closed-form classical bound of `I_{2,m,d}`:
/// `tan(π/2m)/(2d) · [(2m−1) g(0) − g(1 − 1/m) − 2m g(⌊d/2⌋)]`.
pub fn classical_bound_bipartite(m: usize, d: usize) -> f64 {
    let pre = (PI / (2.0 * m as f64)).tan() / (2.0 * d as f64);
    let mf = m as f64;
    pre * ((2.0 * mf - 1.0) * g(m, d, 0.0) - g(m, d, 1.0 - 1.0 / mf) - 2.0 * mf * g(m, d, (d / 2) as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SvetlichnyMode {
    Formula,
    Enumeration,
    /// Enumerate when within budget, else fall back to the formula.
    Auto,
}

/// `m^{N−2} β_L^{2,m,d}`, an upper bound on bilocal models.
pub fn svetlichny_formula(s: &Scenario) -> f64 {
    (s.n_settings() as f64).powi(s.n_parties() as i32 - 2) * classical_bound_bipartite(s.n_settings(), s.n_outcomes())
}

pub fn svetlichny_bound(s: &Scenario, c: &CoefficientSet, mode: SvetlichnyMode) -> Result<BoundReport> {
    svetlichny_bound_with_budget(s, c, mode, DEFAULT_HYBRID_BUDGET)
}

pub fn svetlichny_bound_with_budget(
    s: &Scenario,
    c: &CoefficientSet,
    mode: SvetlichnyMode,
    budget: u128,
) -> Result<BoundReport> {
    s.check_same(&c.scenario)?;
    let formula = || BoundReport {
        kind: BoundKind::Svetlichny,
        value: svetlichny_formula(s),
        method: Method::ClosedForm,
        tightness: Tightness::UpperBound,
        witness: None,
    };
    match mode {
        SvetlichnyMode::Formula => Ok(formula()),
        SvetlichnyMode::Enumeration => svetlichny_enumeration(&ResidueFunctional::from_coefficients(c).table(), budget),
        SvetlichnyMode::Auto => match svetlichny_enumeration(&ResidueFunctional::from_coefficients(c).table(), budget) {
            Err(Error::BudgetExceeded { .. }) => Ok(formula()),
            other => other,
        },
    }
}

/// Number of deterministic joint functions `[m]^k → [d]^k` for `k` parties.
fn joint_function_count(m: usize, d: usize, k: usize) -> u128 {
    (d as u128).checked_pow((k * m.pow(k as u32)) as u32).unwrap_or(u128::MAX)
}

/// Maximum of a functional over bilocal vertices, all bipartitions.
pub fn svetlichny_enumeration(t: &BellFunctional, budget: u128) -> Result<BoundReport> {
    let s = *t.scenario();
    let nn = s.n_parties();
    let (m, d) = (s.n_settings(), s.n_outcomes());
    let mut best: Option<(f64, HybridStrategy)> = None;
    // Bipartitions with party 1 in the group, each counted once.
    for mask in 0..(1usize << (nn - 1)) - 1 {
        let group: Vec<usize> = core::iter::once(1)
            .chain((2..=nn).filter(|p| mask >> (p - 2) & 1 == 1))
            .collect();
        let rest: Vec<usize> = (1..=nn).filter(|p| !group.contains(p)).collect();
        let (count_g, count_r) = (
            joint_function_count(m, d, group.len()),
            joint_function_count(m, d, rest.len()),
        );
        let (enum_side, max_side, swapped) = if count_g <= count_r {
            (&group, &rest, false)
        } else {
            (&rest, &group, true)
        };
        let required = count_g.min(count_r);
        if required > budget {
            return Err(Error::BudgetExceeded { required, budget });
        }
        let (value, enum_answers, max_answers) = best_hybrid(t, enum_side, max_side, required as usize);
        let (group_answers, rest_answers) = if swapped {
            (max_answers, enum_answers)
        } else {
            (enum_answers, max_answers)
        };
        if best.as_ref().is_none_or(|(v, _)| value > v + TIE_TOLERANCE) {
            best = Some((
                value,
                HybridStrategy {
                    scenario: s,
                    group: group.clone(),
                    group_answers,
                    rest_answers,
                },
            ));
        }
    }
    let (value, hybrid) = best.expect("N ≥ 2 has a bipartition");
    let check = t.evaluate(&hybrid.behavior())?;
    if (check - value).abs() > TOL.linalg {
        return Err(Error::Construction {
            settings: Vec::new(),
            reason: "hybrid witness does not reproduce the enumerated value",
        });
    }
    Ok(BoundReport {
        kind: BoundKind::Svetlichny,
        value,
        method: Method::Enumeration,
        tightness: Tightness::Exact,
        witness: Some(Witness::Hybrid(hybrid)),
    })
}

/// Enumerates joint functions of `enum_side` and maximizes `max_side` per
/// joint setting, which is exact because the objective separates.
fn best_hybrid(t: &BellFunctional, enum_side: &[usize], max_side: &[usize], count: usize) -> (f64, Vec<usize>, Vec<usize>) {
    let s = t.scenario();
    let (m, d) = (s.n_settings(), s.n_outcomes());
    let (ke, km) = (enum_side.len(), max_side.len());
    let (se, sm) = (m.pow(ke as u32), m.pow(km as u32));
    let (oe, om) = (d.pow(ke as u32), d.pow(km as u32));
    // Full setting / outcome index from the two sub-indices.
    let scatter = |parties_a: &[usize], ia: usize, parties_b: &[usize], ib: usize, base: usize, offset: usize| {
        let mut v = vec![0; s.n_parties()];
        let mut ia = ia;
        for &p in parties_a.iter().rev() {
            v[p - 1] = ia % base + offset;
            ia /= base;
        }
        let mut ib = ib;
        for &p in parties_b.iter().rev() {
            v[p - 1] = ib % base + offset;
            ib /= base;
        }
        v
    };
    let mut xidx = vec![0usize; se * sm];
    for xe in 0..se {
        for xm in 0..sm {
            xidx[xe * sm + xm] = s.settings_index(&scatter(enum_side, xe, max_side, xm, m, 1));
        }
    }
    let mut aidx = vec![0usize; oe * om];
    for ae in 0..oe {
        for am in 0..om {
            aidx[ae * om + am] = s.outcomes_index(&scatter(enum_side, ae, max_side, am, d, 0));
        }
    }
    let n_out = s.outcome_tuples();
    let entries = t.entries();
    let mut best = (f64::NEG_INFINITY, Vec::new(), Vec::new());
    let mut answers = vec![0usize; se];
    let mut choice = vec![0usize; sm];
    for _ in 0..count {
        let mut total = 0.0;
        for (xm, slot) in choice.iter_mut().enumerate() {
            let mut top = f64::NEG_INFINITY;
            for am in 0..om {
                let v: f64 = (0..se)
                    .map(|xe| entries[xidx[xe * sm + xm] * n_out + aidx[answers[xe] * om + am]])
                    .sum();
                if v > top + TIE_TOLERANCE {
                    top = v;
                    *slot = am;
                }
            }
            total += top;
        }
        if total > best.0 + TIE_TOLERANCE {
            best = (total, answers.clone(), choice.clone());
        }
        increment(&mut answers, oe);
    }
    best
}

/// `β_N = 2 m^{N−1} α_0` and a nonsignaling behavior attaining it.
///
/// On the setting tuples of `X_α` (resp. `X̄_α`) the behavior is uniform over
/// the outcome tuples where the residue is zero; elsewhere it is uniform.
pub fn ns_bound_and_behavior(s: &Scenario, c: &CoefficientSet) -> Result<(f64, Behavior)> {
    s.check_same(&c.scenario)?;
    let (nn, d) = (s.n_parties(), s.n_outcomes());
    let n_out = s.outcome_tuples();
    // residue class required on each setting tuple, if constrained
    let mut condition: Vec<Option<i64>> = vec![None; s.setting_tuples()];
    let mut assign = |xi: usize, r: i64, settings: &[usize]| -> Result<()> {
        match condition[xi] {
            Some(prev) if prev != r => Err(Error::Construction {
                settings: settings.to_vec(),
                reason: "setting tuple constrained by two residue classes",
            }),
            _ => {
                condition[xi] = Some(r);
                Ok(())
            }
        }
    };
    for alpha in alpha_tuples(s) {
        let ctx = AssignmentContext::new(s, &alpha)?;
        let di = d as i64;
        // X = Σ c_i a_i + off ≡ 0 and X̄ = −(Σ c_i a_i + off + w̄) ≡ 0.
        assign(s.settings_index(ctx.x_settings()), (-ctx.x_offset()).rem_euclid(di), ctx.x_settings())?;
        let xb = ctx.xbar_settings();
        assign(
            s.settings_index(&xb),
            (-(ctx.x_offset() + ctx.xbar_wrap() as i64)).rem_euclid(di),
            &xb,
        )?;
    }
    let constrained = 1.0 / (d as f64).powi(nn as i32 - 1);
    let free = 1.0 / n_out as f64;
    let mut table = vec![0.0; s.table_len()];
    for (xi, cond) in condition.iter().enumerate() {
        for ai in 0..n_out {
            table[xi * n_out + ai] = match cond {
                None => free,
                Some(r) => {
                    let a = s.outcomes_of(ai);
                    let sig: i64 = a.iter().enumerate().map(|(i, &v)| party_sign(i + 1) * v as i64).sum();
                    if sig.rem_euclid(d as i64) == *r {
                        constrained
                    } else {
                        0.0
                    }
                }
            };
        }
    }
    let b = Behavior::new(*s, table)?;
    let bound = 2.0 * (s.n_settings() as f64).powi(nn as i32 - 1) * c.alpha[0];
    Ok((bound, b))
}

/// Nonsignaling bound with the construction attached, after checking that
/// the behavior is nonsignaling and attains the bound.
pub fn ns_bound_report(s: &Scenario, c: &CoefficientSet) -> Result<BoundReport> {
    let (bound, b) = ns_bound_and_behavior(s, c)?;
    if !check_no_signaling(&b).is_empty() {
        return Err(Error::Construction {
            settings: Vec::new(),
            reason: "constructed behavior signals",
        });
    }
    let value = ResidueFunctional::from_coefficients(c).evaluate(&b)?;
    if (value - bound).abs() > TOL.exact {
        return Err(Error::Construction {
            settings: Vec::new(),
            reason: "constructed behavior misses the bound",
        });
    }
    Ok(BoundReport {
        kind: BoundKind::Nonsignaling,
        value: bound,
        method: Method::Construction,
        tightness: Tightness::Exact,
        witness: Some(Witness::Behavior(b)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expression::x_values;

    // Independent route: the last party's choice separates per setting.
    fn separable_oracle(s: &Scenario, c: &CoefficientSet) -> f64 {
        let (nn, m, d) = (s.n_parties(), s.n_settings(), s.n_outcomes());
        let f = ResidueFunctional::from_coefficients(c);
        let prefix_count = d.pow(((nn - 1) * m) as u32);
        let mut best = f64::NEG_INFINITY;
        for p in 0..prefix_count {
            let mut total = 0.0;
            let mut outs = digits(p * d.pow(m as u32), d, nn * m);
            for y in 1..=m {
                let mut top = f64::NEG_INFINITY;
                for v in 0..d {
                    outs[(nn - 1) * m + y - 1] = v;
                    let st = DeterministicStrategy::new(*s, outs.clone()).unwrap();
                    let mut val = 0.0;
                    for alpha in alpha_tuples(s).filter(|a| a[nn - 2] == y) {
                        let (x, xb) = x_values(&st, &alpha).unwrap();
                        val += f.weights()[x] + f.weights()[xb];
                    }
                    top = top.max(val);
                }
                outs[(nn - 1) * m + y - 1] = 0;
                total += top;
            }
            best = best.max(total);
        }
        best
    }

    fn naive_max(s: &Scenario, c: &CoefficientSet) -> (f64, u128) {
        let f = ResidueFunctional::from_coefficients(c);
        let mut best = (f64::NEG_INFINITY, 0);
        for i in 0..strategy_count(s) {
            let v = f.evaluate_strategy(&DeterministicStrategy::from_index(*s, i)).unwrap();
            if v > best.0 + TIE_TOLERANCE {
                best = (v, i);
            }
        }
        best
    }

    #[test]
    fn strategy_index_roundtrip() {
        let s = Scenario::new(3, 2, 3).unwrap();
        for i in [0u128, 1, 17, 728] {
            assert_eq!(DeterministicStrategy::from_index(s, i).index(), i);
        }
        let st = DeterministicStrategy::from_index(s, 1);
        assert_eq!(st.get(3, 2), 1);
        assert!(DeterministicStrategy::new(s, vec![0; 5]).is_err());
        assert!(DeterministicStrategy::new(s, vec![3; 6]).is_err());
    }

    #[test]
    fn enumeration_matches_naive_scan_and_witness() {
        for (nn, m, d) in [(2, 2, 2), (2, 3, 3), (3, 2, 2), (3, 2, 3), (4, 2, 2)] {
            let s = Scenario::new(nn, m, d).unwrap();
            let c = CoefficientSet::new(&s);
            let r = classical_bound_bruteforce(&s, &c).unwrap();
            let (v, idx) = naive_max(&s, &c);
            assert!((r.value - v).abs() < 1e-12);
            match r.witness {
                Some(Witness::Strategy(ref st)) => assert_eq!(st.index(), idx, "lex-smallest witness"),
                _ => panic!("missing witness"),
            }
            assert!(r.witness_gap(&ResidueFunctional::from_coefficients(&c).table()).unwrap() < 1e-10);
        }
    }

    #[test]
    fn enumeration_matches_separable_oracle() {
        for (nn, m, d) in [(2, 3, 4), (3, 3, 2), (3, 2, 4), (2, 4, 3)] {
            let s = Scenario::new(nn, m, d).unwrap();
            let c = CoefficientSet::new(&s);
            let r = classical_bound_bruteforce(&s, &c).unwrap();
            assert!((r.value - separable_oracle(&s, &c)).abs() < 1e-10, "{nn} {m} {d}");
        }
    }

    #[test]
    fn bipartite_closed_form() {
        assert!((classical_bound_bipartite(2, 2) - 3.0 / 2f64.sqrt()).abs() < 1e-12);
        assert!((classical_bound_bipartite(3, 2) - 5.0 / 3f64.sqrt()).abs() < 1e-12);
        for m in 2..=3 {
            for d in 2..=5 {
                let s = Scenario::new(2, m, d).unwrap();
                let r = classical_bound_bruteforce(&s, &CoefficientSet::new(&s)).unwrap();
                assert!((r.value - classical_bound_bipartite(m, d)).abs() < 1e-10, "m={m} d={d}");
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let s = Scenario::new(4, 3, 4).unwrap();
        let c = CoefficientSet::new(&s);
        match classical_bound_bruteforce_with_budget(&s, &c, 1000) {
            Err(Error::BudgetExceeded { required, budget }) => {
                assert_eq!(required, 1 << 24);
                assert_eq!(budget, 1000);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn svetlichny_enumeration_matches_formula() {
        for (m, d) in [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3)] {
            let s = Scenario::new(3, m, d).unwrap();
            let c = CoefficientSet::new(&s);
            let e = svetlichny_bound(&s, &c, SvetlichnyMode::Enumeration).unwrap();
            assert_eq!(e.method, Method::Enumeration);
            assert!((e.value - svetlichny_formula(&s)).abs() < 1e-8, "m={m} d={d}: {}", e.value);
            assert!(e.witness_gap(&functional(&c)).unwrap() < 1e-10);
        }
    }

    fn functional(c: &CoefficientSet) -> BellFunctional {
        ResidueFunctional::from_coefficients(c).table()
    }

    #[test]
    fn svetlichny_auto_falls_back() {
        let s = Scenario::new(4, 3, 3).unwrap();
        let c = CoefficientSet::new(&s);
        let r = svetlichny_bound(&s, &c, SvetlichnyMode::Auto).unwrap();
        assert_eq!(r.method, Method::ClosedForm);
        assert_eq!(r.tightness, Tightness::UpperBound);
        assert!(matches!(
            svetlichny_bound(&s, &c, SvetlichnyMode::Enumeration),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn product_strategy_attains_svetlichny_bound() {
        // p_A(0|x) = p_B(0|y) = p_C(0|z) = 1
        for d in 2..=5 {
            let s = Scenario::new(3, 2, d).unwrap();
            let c = CoefficientSet::new(&s);
            let v = ResidueFunctional::from_coefficients(&c)
                .evaluate_strategy(&DeterministicStrategy::constant(s, 0))
                .unwrap();
            assert!((v - svetlichny_formula(&s)).abs() < 1e-10, "d={d}");
        }
    }

    #[test]
    fn ordering_of_bounds() {
        for (nn, m, d) in [(2, 2, 3), (3, 2, 2), (3, 2, 3), (3, 3, 2)] {
            let s = Scenario::new(nn, m, d).unwrap();
            let c = CoefficientSet::new(&s);
            let l = classical_bound_bruteforce(&s, &c).unwrap().value;
            let sv = svetlichny_bound(&s, &c, SvetlichnyMode::Auto).unwrap().value;
            let (ns, _) = ns_bound_and_behavior(&s, &c).unwrap();
            assert!(l <= sv + 1e-10 && sv <= ns + 1e-10);
        }
    }

    #[test]
    fn ns_construction() {
        for nn in 2..=4 {
            for m in 2..=3 {
                for d in 2..=4 {
                    let s = Scenario::new(nn, m, d).unwrap();
                    let c = CoefficientSet::new(&s);
                    let r = ns_bound_report(&s, &c).unwrap();
                    let expected = 2.0 * (m as f64).powi(nn as i32 - 1) * c.alpha[0];
                    assert!((r.value - expected).abs() < 1e-12);
                    let b = r.witness.unwrap().behavior();
                    for xi in 0..s.setting_tuples() {
                        for p in 0..nn {
                            let mut single = vec![0.0; d];
                            for (ai, v) in b.block(xi).iter().enumerate() {
                                single[s.outcomes_of(ai)[p]] += v;
                            }
                            assert!(single.iter().all(|&v| (v - 1.0 / d as f64).abs() < 1e-12));
                        }
                    }
                }
            }
        }
        let s = Scenario::new(3, 2, 2).unwrap();
        let (bound, _) = ns_bound_and_behavior(&s, &CoefficientSet::new(&s)).unwrap();
        assert!((bound - 8.0 / 2f64.sqrt()).abs() < 1e-12);
    }

    // The Heaviside form with 0-based α: on the X tuple the constraint is
    // Σ (−1)^{i−1} a_i = −f(α) with f counting wrapped middle indices.
    #[test]
    fn ns_support_matches_heaviside_form() {
        let s = Scenario::new(4, 3, 3).unwrap();
        let c = CoefficientSet::new(&s);
        let (_, b) = ns_bound_and_behavior(&s, &c).unwrap();
        let m = 3i64;
        let heaviside = |v: i64| (v >= 0) as i64;
        for alpha in alpha_tuples(&s) {
            let ctx = AssignmentContext::new(&s, &alpha).unwrap();
            let z: Vec<i64> = alpha.iter().map(|&a| a as i64 - 1).chain([0]).collect();
            let mut f = 0;
            for j in 2..=4 {
                f += party_sign(j) * heaviside(z[j - 2] + z[j - 1] - m);
            }
            for ai in 0..s.outcome_tuples() {
                let a = s.outcomes_of(ai);
                let sig: i64 = a.iter().enumerate().map(|(i, &v)| party_sign(i + 1) * v as i64).sum();
                let on = (sig + f).rem_euclid(3) == 0;
                let p = b.prob(ctx.x_settings(), &a);
                assert_eq!(p > 0.0, on);
            }
        }
    }

    #[test]
    fn n2_ns_is_algebraic_max() {
        let s = Scenario::new(2, 2, 2).unwrap();
        let c = CoefficientSet::new(&s);
        let (bound, _) = ns_bound_and_behavior(&s, &c).unwrap();
        assert!((bound - functional(&c).algebraic_max()).abs() < 1e-12);
    }
}
