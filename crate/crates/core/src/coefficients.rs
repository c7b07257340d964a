//! Coefficients of the inequality family in both pictures.
//!
//! In the probability picture the expression is
//! `I = Σ_{n<⌊d/2⌋} (α_n ℙ_n − β_n ℚ_n) = Σ_{n<d} α̂_n ℙ_n`; in the correlator
//! picture it is fixed by the complex weights `a_k`, `k = 1..d−1`. All
//! coefficients depend only on `(m, d)`.

use crate::prelude::*;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::scenario::{omega_pow, Scenario, TOL};

/// `g_m(x) = cot(π [x + 1/(2m)] / d)`.
pub fn g(m: usize, d: usize, x: f64) -> f64 {
    let theta = PI * (x + 1.0 / (2.0 * m as f64)) / d as f64;
    theta.cos() / theta.sin()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityCoefficients {
    /// `α_n`, `n = 0..⌊d/2⌋`.
    pub alpha: Vec<f64>,
    /// `β_n`, `n = 0..⌊d/2⌋`.
    pub beta: Vec<f64>,
    /// `α̂_n`, `n = 0..d`.
    pub alpha_hat: Vec<f64>,
    /// `S = Σ_n (α_n − β_n)`, closed form.
    pub shift: f64,
}

pub fn probability_coefficients(s: &Scenario) -> ProbabilityCoefficients {
    let (m, d) = (s.n_settings(), s.n_outcomes());
    let half = d / 2;
    let pre = (PI / (2.0 * m as f64)).tan() / (2.0 * d as f64);
    let g_half = g(m, d, half as f64);
    let alpha: Vec<f64> = (0..half).map(|n| pre * (g(m, d, n as f64) - g_half)).collect();
    let beta: Vec<f64> = (0..half)
        .map(|n| pre * (g(m, d, n as f64 + 1.0 - 1.0 / m as f64) + g_half))
        .collect();
    let alpha_hat = (0..d)
        .map(|n| {
            if n < half {
                alpha[n]
            } else if d - 1 - n < half {
                -beta[d - 1 - n]
            } else {
                // middle coefficient for odd d
                0.0
            }
        })
        .collect();
    ProbabilityCoefficients {
        alpha,
        beta,
        alpha_hat,
        shift: shift_closed_form(m, d),
    }
}

/// `S(m, d) = ½ {1 − tan(π/2m) cot[π(⌊d/2⌋ + 1/2m)/d]}`.
pub fn shift_closed_form(m: usize, d: usize) -> f64 {
    0.5 * (1.0 - (PI / (2.0 * m as f64)).tan() * g(m, d, (d / 2) as f64))
}

/// `a_k = ω^{(2k−d)/(4m)} / [2 cos(π/2m)]` for `k = 1..d−1` (entry `k−1`).
pub fn correlator_coefficients(s: &Scenario) -> Vec<Complex64> {
    let (m, d) = (s.n_settings(), s.n_outcomes());
    let denom = 2.0 * (PI / (2.0 * m as f64)).cos();
    (1..d)
        .map(|k| omega_pow(d, (2.0 * k as f64 - d as f64) / (4.0 * m as f64)) / denom)
        .collect()
}

/// Every coefficient defining one inequality of the family.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    pub scenario: Scenario,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub alpha_hat: Vec<f64>,
    /// `a_k` stored at `k − 1`.
    pub a: Vec<Complex64>,
    pub shift: f64,
}

impl CoefficientSet {
    pub fn new(s: &Scenario) -> Self {
        let p = probability_coefficients(s);
        CoefficientSet {
            scenario: *s,
            alpha: p.alpha,
            beta: p.beta,
            alpha_hat: p.alpha_hat,
            a: correlator_coefficients(s),
            shift: p.shift,
        }
    }

    /// `a_k` for `k` taken mod `d`; `a_0 = 0` (the constant term is dropped).
    pub fn a_k(&self, k: usize) -> Complex64 {
        let k = k % self.scenario.n_outcomes();
        if k == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            self.a[k - 1]
        }
    }

    /// `c_k = Σ_n (α_n ω^{−kn} − β_n ω^{k(n+1)})` built from the probability
    /// coefficients.
    pub fn implied_a_k(&self, k: usize) -> Complex64 {
        let d = self.scenario.n_outcomes();
        self.alpha
            .iter()
            .zip(&self.beta)
            .enumerate()
            .map(|(n, (&al, &be))| {
                let (k, n) = (k as f64, n as f64);
                omega_pow(d, -k * n) * al - omega_pow(d, k * (n + 1.0)) * be
            })
            .sum()
    }

    /// `2 m^{N−1} S / d`, the constant separating the two pictures.
    pub fn picture_offset(&self) -> f64 {
        let s = &self.scenario;
        2.0 * (s.n_settings() as f64).powi(s.n_parties() as i32 - 1) * self.shift
            / s.n_outcomes() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConsistencyReport {
    pub ok: bool,
    pub max_residual: f64,
    /// `k` with the largest residual of `c_k = a_k`.
    pub worst_k: usize,
    /// `α̂_0 ≥ α̂_n` for all `n`.
    pub monotone: bool,
}

/// Checks the linear system tying `(α, β)` to `a_k` (all `k = 1..d−1`) and the
/// ordering `α̂_0 ≥ α̂_n`.
pub fn verify_consistency(c: &CoefficientSet) -> ConsistencyReport {
    let d = c.scenario.n_outcomes();
    let (mut worst_k, mut max_residual) = (1, 0.0f64);
    for k in 1..d {
        let r = (c.implied_a_k(k) - c.a_k(k)).norm();
        if r > max_residual {
            max_residual = r;
            worst_k = k;
        }
    }
    let head = c.alpha_hat[0];
    let monotone = c.alpha_hat.iter().all(|&v| v <= head + TOL.exact);
    ConsistencyReport {
        ok: max_residual <= TOL.exact && monotone,
        max_residual,
        worst_k,
        monotone,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

    fn set(m: usize, d: usize) -> CoefficientSet {
        CoefficientSet::new(&Scenario::new(2, m, d).unwrap())
    }

    // cot via a series-free route: cos/sin of the reduced angle, checked
    // against tan at complementary angles.
    fn cot_ref(x: f64) -> f64 {
        (core::f64::consts::FRAC_PI_2 - x).tan()
    }

    #[test]
    fn qubit_two_settings() {
        let c = set(2, 2);
        assert!((c.alpha[0] - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(c.beta[0].abs() < 1e-15);
        assert!((c.a[0].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(c.a[0].im.abs() < 1e-15);
    }

    #[test]
    fn qutrit_two_settings() {
        let c = set(2, 3);
        // α_0 = [cot(π/12) − cot(5π/12)]/6, β_0 = [cot(π/4) + cot(5π/12)]/6
        let a0 = (cot_ref(PI / 12.0) - cot_ref(5.0 * PI / 12.0)) / 6.0;
        let b0 = (cot_ref(PI / 4.0) + cot_ref(5.0 * PI / 12.0)) / 6.0;
        assert!((c.alpha[0] - a0).abs() < 1e-14);
        assert!((c.beta[0] - b0).abs() < 1e-14);
        assert!((c.alpha[0] - 0.577_350_269_189_625_8).abs() < 1e-12);
        assert!((c.beta[0] - 0.211_324_865_405_187_1).abs() < 1e-12);
        assert!((c.beta[0] / c.alpha[0] - (3f64.sqrt() - 1.0) / 2.0).abs() < 1e-12);
        // a_1 = e^{-iπ/12}/√2
        let expected = Complex64::from_polar(FRAC_1_SQRT_2, -PI / 12.0);
        assert!((c.a[0] - expected).norm() < 1e-15);
    }

    #[test]
    fn a1_solves_the_stabilizer_system() {
        // a ω^{-k/2m} + a* ω^{k/2m} = 1 and a ω^{(d-k)/2m} + a* ω^{-(d-k)/2m} = 1,
        // solved as a 2x2 real system in (Re a, Im a).
        for (m, d) in [(2, 3), (3, 5), (4, 4)] {
            let c = set(m, d);
            for k in 1..=d / 2 {
                let t1 = 2.0 * PI * (-(k as f64) / (2.0 * m as f64)) / d as f64;
                let t2 = 2.0 * PI * ((d - k) as f64 / (2.0 * m as f64)) / d as f64;
                // 2(Re a cos t − Im a sin t) = 1
                let (a11, a12, a21, a22) = (2.0 * t1.cos(), -2.0 * t1.sin(), 2.0 * t2.cos(), -2.0 * t2.sin());
                let det = a11 * a22 - a12 * a21;
                let re = (a22 - a12) / det;
                let im = (a11 - a21) / det;
                assert!((c.a_k(k) - Complex64::new(re, im)).norm() < 1e-12, "m={m} d={d} k={k}");
            }
        }
    }

    #[test]
    fn conjugate_pairs() {
        for m in 2..=5 {
            for d in 2..=8 {
                let c = set(m, d);
                for k in 1..d {
                    assert_eq!(c.a_k(d - k), c.a_k(k).conj(), "m={m} d={d} k={k}");
                }
                if d % 2 == 0 {
                    assert!(c.a_k(d / 2).im.abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn consistency_on_grid() {
        for m in 2..=5 {
            for d in 2..=8 {
                let c = set(m, d);
                let r = verify_consistency(&c);
                assert!(r.ok, "m={m} d={d}: {r:?}");
                let termwise: f64 = c.alpha.iter().zip(&c.beta).map(|(a, b)| a - b).sum();
                assert!((c.shift - termwise).abs() < 1e-12);
                assert_eq!(c.alpha_hat[0], c.alpha[0]);
                if d % 2 == 1 {
                    assert_eq!(c.alpha_hat[d / 2], 0.0);
                }
            }
        }
    }

    #[test]
    fn perturbation_breaks_consistency() {
        let mut c = set(3, 5);
        c.alpha[0] += 1e-6;
        let r = verify_consistency(&c);
        assert!(!r.ok);
        assert!((r.max_residual - 1e-6).abs() < 1e-9);
    }

    #[test]
    fn two_outcome_alpha0() {
        for m in 2..=6 {
            let c = set(m, 2);
            let expected = 1.0 / (2.0 * (PI / (2.0 * m as f64)).cos());
            assert!((c.alpha[0] - expected).abs() < 1e-14);
            assert!(c.beta[0].abs() < 1e-14);
        }
        assert!((set(3, 2).alpha[0] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn two_setting_special_case() {
        // α_k = [g_2(k) + (−1)^d tan(π/4d)]/2d, β_k = [g_2(k+½) − (−1)^d tan(π/4d)]/2d
        for d in 2..=9 {
            let c = set(2, d);
            let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
            let t = (PI / (4.0 * d as f64)).tan();
            for k in 0..d / 2 {
                let a = (g(2, d, k as f64) + sign * t) / (2.0 * d as f64);
                let b = (g(2, d, k as f64 + 0.5) - sign * t) / (2.0 * d as f64);
                assert!((c.alpha[k] - a).abs() < 1e-12);
                assert!((c.beta[k] - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn alternative_two_setting_correlator_is_not_the_solution() {
        // The m = 2 line ω^{(2k−8)/d}/√2 disagrees with the closed form, which
        // is the one satisfying the consistency identity.
        let c = set(2, 5);
        let alt = omega_pow(5, (2.0 - 8.0) / 5.0) / SQRT_2;
        assert!((alt - c.implied_a_k(1)).norm() > 1e-3);
        assert!((c.a_k(1) - c.implied_a_k(1)).norm() < 1e-12);
    }
}
