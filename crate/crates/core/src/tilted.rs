//! The one-parameter classes `J_{N,2,3}(ξ) = ℙ_0 − ξ ℚ_0` for `N ∈ {2, 3, 4}`.
//!
//! Quantum values are those realized by the tilted GHZ state
//! `(|0…0⟩ + γ|1…1⟩ + |2…2⟩)/√(2+γ²)` with the optimal observables of
//! `(N, 2, 3)`. Maxima over `γ` are conjectured to be the quantum maxima;
//! nothing here certifies that.

use crate::prelude::*;


use crate::bounds::{ClassicalSearch, DEFAULT_BUDGET};
use crate::coefficients::CoefficientSet;
use crate::expression::{BellFunctional, ResidueFunctional};
use crate::quantum::{born_behavior, ghz_tilted, ObservableSet};
use crate::scenario::Scenario;
use crate::{Error, Result};

/// Search bracket for `γ`; `γ_+(ξ) < 5` on the supported range of `ξ`.
pub const GAMMA_BRACKET: (f64, f64) = (0.0, 5.0);

fn check_parties(n_parties: usize) -> Result<Scenario> {
    if !(2..=4).contains(&n_parties) {
        return Err(Error::UnsupportedParties(n_parties));
    }
    Scenario::new(n_parties, 2, 3)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TiltedClass {
    n_parties: usize,
    xi: f64,
    functional: ResidueFunctional,
}

impl TiltedClass {
    pub fn new(n_parties: usize, xi: f64) -> Result<Self> {
        let s = check_parties(n_parties)?;
        Ok(TiltedClass {
            n_parties,
            xi,
            functional: ResidueFunctional::new(s, vec![1.0, 0.0, -xi])?,
        })
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn scenario(&self) -> &Scenario {
        self.functional.scenario()
    }

    pub fn functional(&self) -> &ResidueFunctional {
        &self.functional
    }

    pub fn table(&self) -> BellFunctional {
        self.functional.table()
    }
}

/// `ξ` at which `J_{N,2,3}(ξ)` is `I_{N,2,3}/α_0`.
pub fn family_xi() -> f64 {
    let c = CoefficientSet::new(&Scenario::new(2, 2, 3).expect("valid scenario"));
    c.beta[0] / c.alpha[0]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TiltedMode {
    ClosedForm,
    BruteForce,
}

pub fn tilted_classical_bound(n_parties: usize, xi: f64, mode: TiltedMode) -> Result<f64> {
    match mode {
        TiltedMode::ClosedForm => {
            check_parties(n_parties)?;
            Ok(match n_parties {
                2 => piecewise(xi, -1.0, 1.0, -4.0 * xi, 3.0 - xi, 2.0),
                3 => piecewise(xi, -1.0, 1.0, -8.0 * xi, 2.0 * (3.0 - xi), 4.0),
                _ => piecewise(xi, -10.0 / 11.0, 2.0 / 5.0, -16.0 * xi, 10.0 - 5.0 * xi, 8.0),
            })
        }
        TiltedMode::BruteForce => {
            let class = TiltedClass::new(n_parties, xi)?;
            Ok(ClassicalSearch::new(class.functional, DEFAULT_BUDGET)?.run()?.value)
        }
    }
}

fn piecewise(xi: f64, lo: f64, hi: f64, left: f64, middle: f64, right: f64) -> f64 {
    if xi <= lo {
        left
    } else if xi <= hi {
        middle
    } else {
        right
    }
}

/// `𝒥(ξ, γ) = (4/3)(3 + γ(2√3 + γ − ξγ)) / (2 + γ²)`, the two-party value.
pub fn bipartite_value(xi: f64, gamma: f64) -> f64 {
    4.0 / 3.0 * (3.0 + gamma * (2.0 * 3f64.sqrt() + gamma - xi * gamma)) / (2.0 + gamma * gamma)
}

/// Realized value: closed form for two parties, Born rule otherwise.
pub fn tilted_quantum_value(n_parties: usize, xi: f64, gamma: f64) -> Result<f64> {
    check_parties(n_parties)?;
    if gamma < 0.0 {
        return Err(Error::NegativeGamma(gamma));
    }
    if n_parties == 2 {
        Ok(bipartite_value(xi, gamma))
    } else {
        tilted_quantum_value_born(n_parties, xi, gamma)
    }
}

pub fn tilted_quantum_value_born(n_parties: usize, xi: f64, gamma: f64) -> Result<f64> {
    let class = TiltedClass::new(n_parties, xi)?;
    let psi = ghz_tilted(n_parties, gamma)?;
    let b = born_behavior(&psi, &ObservableSet::optimal(class.scenario()))?;
    class.functional.evaluate(&b)
}

fn check_regime(xi: f64) -> Result<()> {
    if xi <= -1.0 || !xi.is_finite() {
        Err(Error::TrivialRegime(xi))
    } else {
        Ok(())
    }
}

/// `γ_+(ξ) = [√(4ξ² + 4ξ + 25) − 2ξ − 1] / (2√3)`.
pub fn optimal_gamma(xi: f64) -> Result<f64> {
    check_regime(xi)?;
    Ok(((4.0 * xi * xi + 4.0 * xi + 25.0).sqrt() - 2.0 * xi - 1.0) / (2.0 * 3f64.sqrt()))
}

/// `𝒥_max(ξ) = [5 − 2ξ + √(25 + 4(ξ+1)ξ)] / 3`.
pub fn bipartite_max(xi: f64) -> Result<f64> {
    check_regime(xi)?;
    Ok((5.0 - 2.0 * xi + (25.0 + 4.0 * (xi + 1.0) * xi).sqrt()) / 3.0)
}

/// Conjectured maximum: `𝒥_max`, `2𝒥_max`, `4𝒥_max` for `N = 2, 3, 4`.
pub fn conjectured_max(n_parties: usize, xi: f64) -> Result<f64> {
    check_parties(n_parties)?;
    Ok(bipartite_max(xi)? * (1 << (n_parties - 2)) as f64)
}

/// Maximizes the realized value over `γ` in [`GAMMA_BRACKET`]: a coarse
/// grid, then golden-section refinement around the best grid point.
pub fn maximize_gamma(n_parties: usize, xi: f64) -> Result<(f64, f64)> {
    let f = |g: f64| tilted_quantum_value(n_parties, xi, g);
    let (lo, hi) = GAMMA_BRACKET;
    let steps = 100;
    let h = (hi - lo) / steps as f64;
    let mut best = (lo, f(lo)?);
    for i in 1..=steps {
        let g = lo + h * i as f64;
        let v = f(g)?;
        if v > best.1 {
            best = (g, v);
        }
    }
    let (mut a, mut b) = ((best.0 - h).max(lo), (best.0 + h).min(hi));
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    while b - a > 1e-10 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    let g = (a + b) / 2.0;
    let v = f(g)?;
    Ok(if v >= best.1 { (g, v) } else { best })
}

/// One row of a `ξ` scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltedPoint {
    pub xi: f64,
    pub gamma_opt: f64,
    pub classical_bound: f64,
    pub realized_quantum: f64,
    pub conjectured_max: f64,
    /// `realized_quantum / classical_bound`.
    pub ratio: f64,
}

pub fn scan_point(n_parties: usize, xi: f64) -> Result<TiltedPoint> {
    let gamma_opt = optimal_gamma(xi)?;
    let classical_bound = tilted_classical_bound(n_parties, xi, TiltedMode::ClosedForm)?;
    let realized_quantum = tilted_quantum_value(n_parties, xi, gamma_opt)?;
    Ok(TiltedPoint {
        xi,
        gamma_opt,
        classical_bound,
        realized_quantum,
        conjectured_max: conjectured_max(n_parties, xi)?,
        ratio: realized_quantum / classical_bound,
    })
}

/// `γ = (√11 − √3)/2` of the qutrit state maximizing `J_{2,2,3}(1)`.
pub fn cglmp_gamma() -> f64 {
    (11f64.sqrt() - 3f64.sqrt()) / 2.0
}
