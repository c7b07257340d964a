//! GHZ states, the optimal observables and Born-rule behaviors.

use crate::prelude::*;
use core::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;

use crate::coefficients::CoefficientSet;
use crate::expression::{alpha_tuples, party_sign, AssignmentContext};
use crate::linalg::{apply_local, check_state, state_from_amplitudes, DenseOperator, StateVector};
use crate::scenario::{omega_pow, Behavior, Scenario, TOL};
use crate::{Error, Result};

/// `|GHZ_{N,d}⟩ = Σ_q |q…q⟩ / √d`.
pub fn ghz(n_parties: usize, d: usize) -> StateVector {
    diagonal_state(n_parties, &vec![1.0; d])
}

/// `(|0…0⟩ + γ|1…1⟩ + |2…2⟩) / √(2 + γ²)`, qutrits.
pub fn ghz_tilted(n_parties: usize, gamma: f64) -> Result<StateVector> {
    if gamma < 0.0 || !gamma.is_finite() {
        return Err(Error::NegativeGamma(gamma));
    }
    Ok(diagonal_state(n_parties, &[1.0, gamma, 1.0]))
}

fn diagonal_state(n_parties: usize, weights: &[f64]) -> StateVector {
    let d = weights.len();
    let dim = d.pow(n_parties as u32);
    let norm = weights.iter().map(|w| w * w).sum::<f64>().sqrt();
    // |q…q⟩ sits at q·(1 + d + … + d^{N−1}).
    let stride = (0..n_parties).map(|i| d.pow(i as u32)).sum::<usize>();
    let mut amps = vec![Complex64::zero(); dim];
    for (q, w) in weights.iter().enumerate() {
        amps[q * stride] = Complex64::new(w / norm, 0.0);
    }
    state_from_amplitudes(amps)
}

/// `F_d = Σ ω^{ij} |i⟩⟨j| / √d`.
pub fn fourier(d: usize) -> DenseOperator {
    let s = 1.0 / (d as f64).sqrt();
    DenseOperator::from_fn(d, |i, j| omega_pow(d, (i * j) as f64) * s)
}

/// `Ω_d = diag(1, ω, …, ω^{d−1})`.
pub fn clock(d: usize) -> DenseOperator {
    let diag: Vec<Complex64> = (0..d).map(|j| omega_pow(d, j as f64)).collect();
    DenseOperator::diagonal(&diag)
}

/// `Σ_j ω^{j·e} |j⟩⟨j|`.
fn phase_diag(d: usize, e: f64) -> DenseOperator {
    let diag: Vec<Complex64> = (0..d).map(|j| omega_pow(d, j as f64 * e)).collect();
    DenseOperator::diagonal(&diag)
}

pub fn gamma_phase(m: usize, x: usize) -> f64 {
    (x as f64 - 0.5) / m as f64
}

pub fn zeta_phase(m: usize, x: usize) -> f64 {
    x as f64 / m as f64
}

pub fn theta_phase(m: usize, x: usize) -> f64 {
    (x as f64 - 1.0) / m as f64
}

/// `𝒜_{i,x}` for party `i` and setting `x` (both 1-based).
///
/// Parties from 3 on alternate between the `W F Ω F† W†` form (odd `i`) and
/// `W† F† Ω F W` (even `i`).
pub fn optimal_observable(party: usize, setting: usize, s: &Scenario) -> Result<DenseOperator> {
    let (nn, m, d) = (s.n_parties(), s.n_settings(), s.n_outcomes());
    if party == 0 || party > nn {
        return Err(Error::IndexOutOfRange {
            what: "party",
            value: party,
            max: nn,
        });
    }
    if setting == 0 || setting > m {
        return Err(Error::IndexOutOfRange {
            what: "setting",
            value: setting,
            max: m,
        });
    }
    let f = fourier(d);
    let omega = clock(d);
    let fwd = f.mul(&omega).mul(&f.adjoint());
    let bwd = f.adjoint().mul(&omega).mul(&f);
    let conj = |u: &DenseOperator, core: &DenseOperator| u.mul(core).mul(&u.adjoint());
    Ok(match party {
        1 => conj(&phase_diag(d, -gamma_phase(m, setting)), &fwd),
        2 => conj(&phase_diag(d, zeta_phase(m, setting)), &bwd),
        i if i % 2 == 1 => conj(&phase_diag(d, -theta_phase(m, setting)), &fwd),
        _ => conj(&phase_diag(d, theta_phase(m, setting)), &bwd),
    })
}

/// Builds `V diag(ω^{e_j}) V†` with `V` the unitary factor of `z`'s QR
/// decomposition (column phases fixed so that `R` has a positive diagonal).
///
/// With `z` drawn from the complex Ginibre ensemble, `V` is Haar distributed.
pub fn observable_from_basis(z: &DMatrix<Complex64>, exponents: &[usize]) -> Result<DenseOperator> {
    let d = z.nrows();
    if z.ncols() != d || exponents.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: exponents.len(),
        });
    }
    let qr = z.clone().qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..d {
            q[(i, j)] *= phase;
        }
    }
    let v = DenseOperator(q);
    let diag: Vec<Complex64> = exponents.iter().map(|&e| omega_pow(d, e as f64)).collect();
    Ok(v.mul(&DenseOperator::diagonal(&diag)).mul(&v.adjoint()))
}

/// A complete set of `N·m` observables with cached powers and projectors.
#[derive(Debug, Clone)]
pub struct ObservableSet {
    scenario: Scenario,
    // [party][setting][k], k = 0..d
    powers: Vec<Vec<Vec<DenseOperator>>>,
    // [party][setting][a]
    projectors: Vec<Vec<Vec<DenseOperator>>>,
}

impl ObservableSet {
    /// `ops[i][x]` is the observable of party `i + 1`, setting `x + 1`.
    pub fn new(scenario: Scenario, ops: Vec<Vec<DenseOperator>>) -> Result<Self> {
        let (nn, m, d) = (scenario.n_parties(), scenario.n_settings(), scenario.n_outcomes());
        if ops.len() != nn {
            return Err(Error::DimensionMismatch {
                expected: nn,
                found: ops.len(),
            });
        }
        let mut powers = Vec::with_capacity(nn);
        let mut projectors = Vec::with_capacity(nn);
        for (i, row) in ops.into_iter().enumerate() {
            if row.len() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: row.len(),
                });
            }
            let mut pw_row = Vec::with_capacity(m);
            let mut pr_row = Vec::with_capacity(m);
            for (x, op) in row.into_iter().enumerate() {
                if op.dim() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        found: op.dim(),
                    });
                }
                let dev = op.unitarity_deviation();
                if dev > TOL.linalg {
                    return Err(Error::NonUnitary {
                        party: i + 1,
                        setting: x + 1,
                        deviation: dev,
                    });
                }
                let mut pw = vec![DenseOperator::identity(d)];
                for k in 1..=d {
                    let next = pw[k - 1].mul(&op);
                    pw.push(next);
                }
                let dev = pw[d].max_abs_diff(&DenseOperator::identity(d));
                if dev > TOL.linalg {
                    return Err(Error::NotRootOfUnity {
                        party: i + 1,
                        setting: x + 1,
                        deviation: dev,
                    });
                }
                pw.truncate(d);
                pr_row.push(spectral_projectors(&pw));
                pw_row.push(pw);
            }
            powers.push(pw_row);
            projectors.push(pr_row);
        }
        Ok(ObservableSet {
            scenario,
            powers,
            projectors,
        })
    }

    /// The optimal observables of every party.
    pub fn optimal(s: &Scenario) -> Self {
        let ops = (1..=s.n_parties())
            .map(|i| {
                (1..=s.n_settings())
                    .map(|x| optimal_observable(i, x, s).expect("indices in range"))
                    .collect()
            })
            .collect();
        ObservableSet::new(*s, ops).expect("optimal observables are valid")
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn observable(&self, party: usize, setting: usize) -> &DenseOperator {
        &self.powers[party - 1][setting - 1][1]
    }

    /// `𝒜_{i,x}^k` for any integer `k` (reduced mod `d`).
    pub fn power(&self, party: usize, setting: usize, k: i64) -> &DenseOperator {
        let d = self.scenario.n_outcomes() as i64;
        &self.powers[party - 1][setting - 1][k.rem_euclid(d) as usize]
    }

    /// Projector onto the `ω^a` eigenspace of `𝒜_{i,x}`.
    pub fn projector(&self, party: usize, setting: usize, outcome: usize) -> &DenseOperator {
        &self.projectors[party - 1][setting - 1][outcome]
    }
}

/// `M^a = (1/d) Σ_k ω^{−ak} A^k`, exact for unitary `A` with `A^d = 1`.
fn spectral_projectors(powers: &[DenseOperator]) -> Vec<DenseOperator> {
    let d = powers.len();
    (0..d)
        .map(|a| {
            let mut acc = DenseOperator::zeros(d);
            for (k, pk) in powers.iter().enumerate() {
                acc = acc.add(&pk.scale(omega_pow(d, -((a * k) as f64)) / d as f64));
            }
            acc
        })
        .collect()
}

/// `p(a|x) = ‖(M^{a_1}_{x_1} ⊗ … ⊗ M^{a_N}_{x_N}) ψ‖²`.
pub fn born_behavior(psi: &StateVector, obs: &ObservableSet) -> Result<Behavior> {
    let s = *obs.scenario();
    let (nn, d) = (s.n_parties(), s.n_outcomes());
    check_state(psi, d.pow(nn as u32), TOL.exact * 100.0)?;
    let n_out = s.outcome_tuples();
    let mut table = vec![0.0; s.table_len()];
    for xi in 0..s.setting_tuples() {
        let x = s.settings_of(xi);
        let block = &mut table[xi * n_out..(xi + 1) * n_out];
        born_tree(psi, obs, &x, 1, 0, block);
    }
    Behavior::new(s, table)
}

fn born_tree(phi: &StateVector, obs: &ObservableSet, x: &[usize], party: usize, prefix: usize, out: &mut [f64]) {
    let nn = x.len();
    let d = obs.scenario().n_outcomes();
    for a in 0..d {
        let next = apply_local(obs.projector(party, x[party - 1], a), party, nn, phi);
        let idx = prefix * d + a;
        if party == nn {
            out[idx] = next.iter().map(|z| z.norm_sqr()).sum();
        } else {
            born_tree(&next, obs, x, party + 1, idx, out);
        }
    }
}

/// Closed-form GHZ statistics of the optimal observables,
/// `p(a|x) = d^{−(N+1)} |Σ_q ω^{q(s − c)}|²` with `s = Σ (−1)^{i+1} a_i` and
/// `c = γ(x_1) − ζ(x_2) + Σ_{i≥3} (−1)^{i+1} θ(x_i)`.
pub fn ghz_closed_form_behavior(s: &Scenario) -> Behavior {
    let (nn, m, d) = (s.n_parties(), s.n_settings(), s.n_outcomes());
    let norm = (d as f64).powi(-(nn as i32 + 1));
    Behavior::from_fn(*s, |x, a| {
        let sum_a: f64 = a
            .iter()
            .enumerate()
            .map(|(i, &ai)| party_sign(i + 1) as f64 * ai as f64)
            .sum();
        let mut c = gamma_phase(m, x[0]);
        if nn >= 2 {
            c -= zeta_phase(m, x[1]);
        }
        for (i, &xi) in x.iter().enumerate().skip(2) {
            c += party_sign(i + 1) as f64 * theta_phase(m, xi);
        }
        let total: Complex64 = (0..d).map(|q| omega_pow(d, q as f64 * (sum_a - c))).sum();
        norm * total.norm_sqr()
    })
    .expect("closed form yields a distribution")
}

/// Largest `‖O ψ − ψ‖` over the stabilizing operators
/// `Ā^{(k)}_{α_1} ⊗ Π_{j≥2} 𝒜_j^{(−1)^{j−1}k}` for all `α`, `k = 1..d−1`.
pub fn stabilizer_deviation(
    psi: &StateVector,
    obs: &ObservableSet,
    a_k: impl Fn(usize) -> Complex64,
) -> Result<f64> {
    let s = *obs.scenario();
    let (nn, d) = (s.n_parties(), s.n_outcomes());
    check_state(psi, d.pow(nn as u32), TOL.exact * 100.0)?;
    let mut worst = 0.0f64;
    for alpha in alpha_tuples(&s) {
        let ctx = AssignmentContext::new(&s, &alpha)?;
        let xs = ctx.x_settings();
        let xbar1 = ctx.xbar_settings()[0];
        for k in 1..d {
            let ki = k as i64;
            let mut tail = psi.clone();
            for j in 2..=nn {
                tail = apply_local(obs.power(j, xs[j - 1], party_sign(j) * ki), j, nn, &tail);
            }
            let wrap_x = omega_pow(d, (ki * ctx.x_offset()) as f64);
            let wrap_xb = omega_pow(d, (ki * (ctx.x_offset() + ctx.xbar_wrap() as i64)) as f64);
            let first = apply_local(obs.power(1, xs[0], ki), 1, nn, &tail) * (a_k(k) * wrap_x);
            let second = apply_local(obs.power(1, xbar1, ki), 1, nn, &tail) * (a_k(k).conj() * wrap_xb);
            let diff = first + second - psi;
            worst = worst.max(diff.norm());
        }
    }
    Ok(worst)
}

/// Stabilizer check for the GHZ state and the optimal observables.
pub fn verify_stabilizer(s: &Scenario) -> f64 {
    let c = CoefficientSet::new(s);
    verify_stabilizer_with(s, |k| c.a_k(k))
}

pub fn verify_stabilizer_with(s: &Scenario, a_k: impl Fn(usize) -> Complex64) -> f64 {
    let obs = ObservableSet::optimal(s);
    stabilizer_deviation(&ghz(s.n_parties(), s.n_outcomes()), &obs, a_k).expect("GHZ has the right dimension")
}

/// Per-`α` distributions of `X_α` and `X̄_α` (mod `d`).
pub fn residue_distributions(b: &Behavior) -> Vec<(Vec<f64>, Vec<f64>)> {
    let s = *b.scenario();
    let d = s.n_outcomes();
    alpha_tuples(&s)
        .map(|alpha| {
            let ctx = AssignmentContext::new(&s, &alpha).expect("alpha tuples are in range");
            let px = b.block(s.settings_index(ctx.x_settings()));
            let pxb = b.block(s.settings_index(&ctx.xbar_settings()));
            let mut x = vec![0.0; d];
            let mut xb = vec![0.0; d];
            for ai in 0..s.outcome_tuples() {
                let a = s.outcomes_of(ai);
                x[ctx.x_residue(d, &a)] += px[ai];
                xb[ctx.xbar_residue(d, &a)] += pxb[ai];
            }
            (x, xb)
        })
        .collect()
}

/// `max_n (max − min)` of `{P(X_α = n), P(X̄_α = n)}` over all `α`.
pub fn uniformity_spread(b: &Behavior) -> f64 {
    let dists = residue_distributions(b);
    let d = b.scenario().n_outcomes();
    (0..d)
        .map(|n| {
            let vals = dists.iter().flat_map(|(x, xb)| [x[n], xb[n]]);
            let (lo, hi) = vals.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
            hi - lo
        })
        .fold(0.0, f64::max)
}

/// Common value of `P(X_α = n)` for the optimal realization,
/// `d^{−2} |Σ_q ω^{q(n + 1/2m)}|²`.
pub fn ghz_residue_probability(m: usize, d: usize, n: usize) -> f64 {
    let shift = n as f64 + 1.0 / (2.0 * m as f64);
    let x = PI * shift / d as f64;
    // |Σ_q e^{2iqx}|² = sin²(dx) / sin²(x)
    let ratio = (d as f64 * x).sin() / x.sin();
    ratio * ratio / (d * d) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expression::{evaluate_correlator_form, evaluate_probability_form};
    use crate::scenario::to_correlators;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid() -> impl Iterator<Item = Scenario> {
        [2usize, 3, 4].into_iter().flat_map(|nn| {
            [2usize, 3]
                .into_iter()
                .flat_map(move |m| (2..=5).map(move |d| Scenario::new(nn, m, d).unwrap()))
        })
    }

    #[test]
    fn ghz_states() {
        let g = ghz(2, 2);
        let r = 1.0 / 2f64.sqrt();
        let expected = [r, 0.0, 0.0, r];
        for (z, e) in g.iter().zip(expected) {
            assert!((z - Complex64::new(e, 0.0)).norm() < 1e-15);
        }
        let t = ghz_tilted(2, 1.0).unwrap();
        assert!((t - ghz(2, 3)).norm() < 1e-15);
        assert!(matches!(ghz_tilted(2, -0.1), Err(Error::NegativeGamma(_))));
        let g4 = ghz_tilted(4, 0.7).unwrap();
        assert!((g4.norm() - 1.0).abs() < 1e-14);
        assert!((g4[40].re - 0.7 / (2.0f64 + 0.49).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn observables_have_root_of_unity_spectrum() {
        let s = Scenario::new(5, 3, 4).unwrap();
        for i in 1..=5 {
            for x in 1..=3 {
                let a = optimal_observable(i, x, &s).unwrap();
                assert!(a.unitarity_deviation() < 1e-12);
                assert!(a.pow(4).max_abs_diff(&DenseOperator::identity(4)) < 1e-12);
                // Trace of A^k vanishes for 0 < k < d iff each root appears once.
                for k in 1..4 {
                    assert!(a.pow(k).trace().norm() < 1e-12);
                }
            }
        }
        assert!(optimal_observable(6, 1, &s).is_err());
        assert!(optimal_observable(1, 0, &s).is_err());
    }

    #[test]
    fn kth_powers_match_shift_forms() {
        // A^k = ω^{−(d−k)φ} Σ_{n<k} |d−k+n⟩⟨n| + ω^{kφ} Σ_{n≥k} |n−k⟩⟨n|.
        // For B^{−k} the phase is φ = −ζ: both blocks carry ω^{(d−k)ζ}
        // and ω^{−kζ}, so the second block's sign is flipped relative to
        // the form with ω^{kζ}.
        let shift_form = |d: usize, k: usize, phi: f64| {
            DenseOperator::from_fn(d, |r, c| {
                if c < k && r == d - k + c {
                    omega_pow(d, -((d - k) as f64) * phi)
                } else if c >= k && r == c - k {
                    omega_pow(d, k as f64 * phi)
                } else {
                    Complex64::zero()
                }
            })
        };
        for m in 2..=4 {
            for d in 2..=5 {
                let s = Scenario::new(3, m, d).unwrap();
                let obs = ObservableSet::optimal(&s);
                for x in 1..=m {
                    for k in 1..d {
                        let a = shift_form(d, k, gamma_phase(m, x));
                        assert!(obs.power(1, x, k as i64).max_abs_diff(&a) < 1e-12);
                        let b = shift_form(d, k, -zeta_phase(m, x));
                        assert!(obs.power(2, x, -(k as i64)).max_abs_diff(&b) < 1e-12);
                        let c = shift_form(d, k, theta_phase(m, x));
                        assert!(obs.power(3, x, k as i64).max_abs_diff(&c) < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn cglmp_pair() {
        // For N = m = 2 party 1 uses phases 1/4, 3/4 and party 2 uses 1/2, 1.
        let s = Scenario::new(2, 2, 3).unwrap();
        let f = fourier(3);
        let w = clock(3);
        let expected_a = |g: f64| {
            let u = phase_diag(3, -g);
            u.mul(&f).mul(&w).mul(&f.adjoint()).mul(&u.adjoint())
        };
        assert!(optimal_observable(1, 1, &s).unwrap().max_abs_diff(&expected_a(0.25)) < 1e-14);
        assert!(optimal_observable(1, 2, &s).unwrap().max_abs_diff(&expected_a(0.75)) < 1e-14);
    }

    #[test]
    fn stabilizer_on_grid() {
        for s in grid() {
            let dev = verify_stabilizer(&s);
            assert!(dev <= 1e-10, "{s:?}: {dev}");
        }
        for (nn, m, d) in [(5, 2, 3), (5, 3, 2), (2, 3, 4)] {
            let s = Scenario::new(nn, m, d).unwrap();
            assert!(verify_stabilizer(&s) <= 1e-10);
        }
    }

    #[test]
    fn perturbed_coefficients_break_stabilizer() {
        let s = Scenario::new(3, 2, 3).unwrap();
        let c = CoefficientSet::new(&s);
        let eps = 1e-3;
        let tilt = Complex64::from_polar(1.0, eps);
        let dev = verify_stabilizer_with(&s, |k| c.a_k(k) * tilt);
        assert!(dev > eps * 0.1 && dev < eps * 10.0, "{dev}");
    }

    #[test]
    fn born_matches_closed_form_and_uniformity() {
        for s in grid() {
            let born = born_behavior(&ghz(s.n_parties(), s.n_outcomes()), &ObservableSet::optimal(&s)).unwrap();
            let closed = ghz_closed_form_behavior(&s);
            let diff = born
                .table()
                .iter()
                .zip(closed.table())
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
            assert!(diff < 1e-10, "{s:?}: {diff}");
            assert!(uniformity_spread(&born) < 1e-10);
            let (m, d) = (s.n_settings(), s.n_outcomes());
            let (x, _) = &residue_distributions(&born)[0];
            for (n, &p) in x.iter().enumerate() {
                assert!((p - ghz_residue_probability(m, d, n)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn quantum_value_on_grid() {
        for s in grid() {
            let c = CoefficientSet::new(&s);
            let born = born_behavior(&ghz(s.n_parties(), s.n_outcomes()), &ObservableSet::optimal(&s)).unwrap();
            let it = evaluate_correlator_form(&to_correlators(&born), &c).unwrap();
            let (m, d) = (s.n_settings() as f64, s.n_outcomes() as f64);
            let expected = m.powi(s.n_parties() as i32 - 1) * (d - 1.0) / d;
            assert!((it - expected).abs() < 1e-10, "{s:?}: {it}");
            let i = evaluate_probability_form(&born, &c).unwrap();
            assert!((i - it - c.picture_offset()).abs() < 1e-10);
        }
    }

    #[test]
    fn product_state_in_computational_basis() {
        let s = Scenario::new(3, 2, 3).unwrap();
        let ops = (0..3).map(|_| (0..2).map(|_| clock(3)).collect()).collect();
        let obs = ObservableSet::new(s, ops).unwrap();
        let zero = crate::linalg::basis_state(27, 0);
        let b = born_behavior(&zero, &obs).unwrap();
        let det = Behavior::deterministic(s, |_, _| 0);
        let diff = b.table().iter().zip(det.table()).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        assert!(diff < 1e-15);
    }

    #[test]
    fn rejects_invalid_observables() {
        let s = Scenario::new(2, 2, 2).unwrap();
        let half = DenseOperator::identity(2).scale(Complex64::new(0.5, 0.0));
        let ops = vec![vec![clock(2), half], vec![clock(2), clock(2)]];
        assert!(matches!(
            ObservableSet::new(s, ops),
            Err(Error::NonUnitary { party: 1, setting: 2, .. })
        ));
        // Unitary but A^2 ≠ 1.
        let three = clock(3);
        let s3 = Scenario::new(2, 2, 3).unwrap();
        let rot = DenseOperator::diagonal(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(1.0, 0.0)]);
        let ops = vec![vec![three.clone(), three.clone()], vec![three, rot]];
        assert!(matches!(
            ObservableSet::new(s3, ops),
            Err(Error::NotRootOfUnity { party: 2, setting: 2, .. })
        ));
    }

    #[test]
    fn random_observables_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in 2..=5 {
            let z = DMatrix::from_fn(d, d, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
            let exps: Vec<usize> = (0..d).map(|_| rng.random_range(0..d)).collect();
            let a = observable_from_basis(&z, &exps).unwrap();
            assert!(a.unitarity_deviation() < 1e-12);
            assert!(a.pow(d).max_abs_diff(&DenseOperator::identity(d)) < 1e-11);
        }
    }
}
