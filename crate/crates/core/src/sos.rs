//! The Bell operator and its sum-of-squares decomposition.
//!
//! For any observables with `𝒜^d = 1`,
//!
//! `β_Q 1 − B = (1/2d) Σ_{α,k} P†P + (m^{N−2}/2d) Σ_{α=1}^{m−2} Σ_k T†T`
//!
//! with `P^{(k)}_α = 1 − Ā^{(k)}_{α_1} ⊗ Π_{j≥2} 𝒜_j^{(−1)^{j−1}k}` and `T^{(k)}_α`
//! acting on party 1 only, so `β_Q = m^{N−1}(d−1)/d` bounds `Ĩ` in quantum
//! theory.

use crate::prelude::*;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::coefficients::CoefficientSet;
use crate::expression::{alpha_tuples, party_sign, AssignmentContext};
use crate::linalg::{kron_all, DenseOperator};
use crate::quantum::ObservableSet;
use crate::scenario::{omega_pow, Scenario};
use crate::Result;

/// `β_Q = m^{N−1}(d−1)/d`, the quantum bound of `Ĩ`.
pub fn quantum_bound(s: &Scenario) -> f64 {
    let (m, d) = (s.n_settings() as f64, s.n_outcomes() as f64);
    m.powi(s.n_parties() as i32 - 1) * (d - 1.0) / d
}

/// Quantum bound of `I`, i.e. `β_Q` plus the picture offset.
pub fn quantum_bound_probability(c: &CoefficientSet) -> f64 {
    quantum_bound(&c.scenario) + c.picture_offset()
}

/// `Ā^{(k)}_{α_1} ⊗ Π_{j≥2} 𝒜_{j,x_j}^{(−1)^{j−1}k}` with the wrap phases.
pub fn correlator_term(obs: &ObservableSet, c: &CoefficientSet, ctx: &AssignmentContext, k: usize) -> DenseOperator {
    let d = obs.scenario().n_outcomes();
    let nn = obs.scenario().n_parties();
    let ki = k as i64;
    let xs = ctx.x_settings();
    let wrap_x = omega_pow(d, (ki * ctx.x_offset()) as f64);
    let wrap_xb = omega_pow(d, (ki * (ctx.x_offset() + ctx.xbar_wrap() as i64)) as f64);
    let first = obs
        .power(1, xs[0], ki)
        .scale(c.a_k(k) * wrap_x)
        .add(&obs.power(1, ctx.xbar_settings()[0], ki).scale(c.a_k(k).conj() * wrap_xb));
    let mut factors: Vec<&DenseOperator> = Vec::with_capacity(nn);
    factors.push(&first);
    for j in 2..=nn {
        factors.push(obs.power(j, xs[j - 1], party_sign(j) * ki));
    }
    kron_all(&factors)
}

/// `B = (1/d) Σ_α Σ_{k=1}^{d−1} correlator_term(α, k)`.
pub fn bell_operator(obs: &ObservableSet, c: &CoefficientSet) -> Result<DenseOperator> {
    let s = *obs.scenario();
    s.check_same(&c.scenario)?;
    let d = s.n_outcomes();
    let dim = d.pow(s.n_parties() as u32);
    let mut b = DenseOperator::zeros(dim);
    for alpha in alpha_tuples(&s) {
        let ctx = AssignmentContext::new(&s, &alpha)?;
        for k in 1..d {
            b = b.add(&correlator_term(obs, c, &ctx, k));
        }
    }
    Ok(b.scale(Complex64::new(1.0 / d as f64, 0.0)))
}

/// `(μ_{α,k}, ν_{α,k}, τ_{α,k})` for `α = 1..m−2`, `k = 1..d−1`.
pub fn t_coefficients(m: usize, d: usize, alpha: usize, k: usize) -> (Complex64, Complex64, f64) {
    let c = (PI / (2.0 * m as f64)).cos();
    let theta = (d as f64 - 2.0 * k as f64) / (2.0 * m as f64);
    let s = |j: usize| (PI * j as f64 / m as f64).sin();
    if alpha + 3 <= m {
        let mu = omega_pow(d, (alpha + 1) as f64 * theta) * ((PI / m as f64).sin() / (2.0 * c * (s(alpha) * s(alpha + 1)).sqrt()));
        let nu = -omega_pow(d, theta) * ((s(alpha + 1) / s(alpha)).sqrt() / (2.0 * c));
        let tau = (s(alpha) / s(alpha + 1)).sqrt() / (2.0 * c);
        (mu, nu, tau)
    } else {
        let cm = (PI / m as f64).cos().sqrt();
        let scale = 1.0 / (2.0 * 2f64.sqrt() * c * cm);
        let mu = -omega_pow(d, -theta) * scale;
        let nu = -omega_pow(d, k as f64 + theta) * scale;
        let tau = cm / (2f64.sqrt() * c);
        (mu, nu, tau)
    }
}

/// The squared operators of the decomposition.
#[derive(Debug, Clone)]
pub struct SosTerms {
    /// `P^{(k)}_α` on the full space, `m^{N−1}(d−1)` of them.
    pub p_terms: Vec<DenseOperator>,
    /// `T^{(k)}_α` on party 1 alone, `(m−2)(d−1)` of them.
    pub t_terms: Vec<DenseOperator>,
    /// `(1/2d, m^{N−2}/2d)`.
    pub weights: (f64, f64),
}

impl SosTerms {
    pub fn new(obs: &ObservableSet, c: &CoefficientSet) -> Result<Self> {
        let s = *obs.scenario();
        s.check_same(&c.scenario)?;
        let (nn, m, d) = (s.n_parties(), s.n_settings(), s.n_outcomes());
        let dim = d.pow(nn as u32);
        let id = DenseOperator::identity(dim);
        let mut p_terms = Vec::new();
        for alpha in alpha_tuples(&s) {
            let ctx = AssignmentContext::new(&s, &alpha)?;
            for k in 1..d {
                p_terms.push(id.sub(&correlator_term(obs, c, &ctx, k)));
            }
        }
        let mut t_terms = Vec::new();
        for alpha in 1..=m.saturating_sub(2) {
            for k in 1..d {
                let ki = k as i64;
                let (mu, nu, tau) = t_coefficients(m, d, alpha, k);
                // For α = m−2 the third operator is A_{1,1}^k itself.
                let third = if alpha + 3 <= m { alpha + 3 } else { 1 };
                let t = obs
                    .power(1, 2, ki)
                    .scale(mu.conj())
                    .add(&obs.power(1, alpha + 2, ki).scale(nu.conj()))
                    .add(&obs.power(1, third, ki).scale(Complex64::new(tau, 0.0)));
                t_terms.push(t);
            }
        }
        let two_d = 2.0 * d as f64;
        Ok(SosTerms {
            p_terms,
            t_terms,
            weights: (1.0 / two_d, (m as f64).powi(nn as i32 - 2) / two_d),
        })
    }

    /// `(1/2d) Σ P†P + (m^{N−2}/2d) Σ (T†T ⊗ 1)`.
    pub fn assemble(&self) -> DenseOperator {
        let dim = self.p_terms[0].dim();
        let mut acc = DenseOperator::zeros(dim);
        for p in &self.p_terms {
            acc = acc.add(&p.adjoint().mul(p).scale(Complex64::new(self.weights.0, 0.0)));
        }
        if !self.t_terms.is_empty() {
            let local_dim = self.t_terms[0].dim();
            let mut local = DenseOperator::zeros(local_dim);
            for t in &self.t_terms {
                local = local.add(&t.adjoint().mul(t));
            }
            let rest = DenseOperator::identity(dim / local_dim);
            acc = acc.add(&local.kron(&rest).scale(Complex64::new(self.weights.1, 0.0)));
        }
        acc
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SosResidual {
    /// `max |(β_Q 1 − B) − Σ squares|` entrywise.
    pub residual: f64,
    /// Smallest eigenvalue of `β_Q 1 − B`.
    pub min_eigenvalue: f64,
}

pub fn sos_residual(obs: &ObservableSet, c: &CoefficientSet) -> Result<SosResidual> {
    let s = *obs.scenario();
    let b = bell_operator(obs, c)?;
    let dim = b.dim();
    let gap = DenseOperator::identity(dim)
        .scale(Complex64::new(quantum_bound(&s), 0.0))
        .sub(&b);
    let squares = SosTerms::new(obs, c)?.assemble();
    Ok(SosResidual {
        residual: gap.max_abs_diff(&squares),
        min_eigenvalue: gap.min_eigenvalue(),
    })
}
