//! File formats.
//!
//! * behavior: `{"N": .., "m": .., "d": .., "p": [..]}` with `p` in the core
//!   table layout (settings-major, outcomes-minor, party 1 most significant);
//! * functional: `{"N", "m", "d", "entries": [{"x": [..], "a": [..], "t": ..}]}`
//!   listing the nonzero coefficients, settings 1-based;
//! * coefficients: both pictures of the family member for `(N, m, d)`.

use std::fs;
use std::path::Path;

use bellkit_core::coefficients::{verify_consistency, CoefficientSet};
use bellkit_core::expression::BellFunctional;
use bellkit_core::{Behavior, Scenario};
use serde::{Deserialize, Serialize};

use crate::report::to_json;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BehaviorFile {
    #[serde(rename = "N")]
    pub n_parties: usize,
    pub m: usize,
    pub d: usize,
    pub p: Vec<f64>,
}

impl BehaviorFile {
    pub fn from_behavior(b: &Behavior) -> Self {
        let s = b.scenario();
        BehaviorFile {
            n_parties: s.n_parties(),
            m: s.n_settings(),
            d: s.n_outcomes(),
            p: b.table().to_vec(),
        }
    }

    /// Validates the scenario, the table length and every probability.
    pub fn into_behavior(self) -> Result<Behavior> {
        let s = Scenario::new(self.n_parties, self.m, self.d)?;
        Ok(Behavior::new(s, self.p)?)
    }
}

pub fn behavior_to_json(b: &Behavior) -> Result<String> {
    Ok(to_json(&BehaviorFile::from_behavior(b))?)
}

pub fn behavior_from_json(text: &str) -> Result<Behavior> {
    serde_json::from_str::<BehaviorFile>(text)?.into_behavior()
}

pub fn read_behavior(path: &Path) -> Result<Behavior> {
    behavior_from_json(&fs::read_to_string(path)?)
}

pub fn write_behavior(path: &Path, b: &Behavior) -> Result<()> {
    fs::write(path, behavior_to_json(b)?)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalEntryFile {
    pub x: Vec<usize>,
    pub a: Vec<usize>,
    pub t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalFile {
    #[serde(rename = "N")]
    pub n_parties: usize,
    pub m: usize,
    pub d: usize,
    pub entries: Vec<FunctionalEntryFile>,
}

impl FunctionalFile {
    pub fn from_functional(f: &BellFunctional) -> Self {
        let s = f.scenario();
        FunctionalFile {
            n_parties: s.n_parties(),
            m: s.n_settings(),
            d: s.n_outcomes(),
            entries: f
                .nonzero()
                .map(|e| FunctionalEntryFile {
                    x: e.settings,
                    a: e.outcomes,
                    t: e.value,
                })
                .collect(),
        }
    }

    /// Rebuilds the dense table; repeated `(x, a)` pairs accumulate.
    pub fn into_functional(self) -> Result<BellFunctional> {
        let s = Scenario::new(self.n_parties, self.m, self.d)?;
        let mut dense = vec![0.0; s.table_len()];
        for e in self.entries {
            check_tuple(&e.x, s.n_parties(), 1, s.n_settings(), "setting")?;
            check_tuple(&e.a, s.n_parties(), 0, s.n_outcomes() - 1, "outcome")?;
            dense[s.entry_index(&e.x, &e.a)] += e.t;
        }
        Ok(BellFunctional::from_dense(s, dense)?)
    }
}

fn check_tuple(v: &[usize], len: usize, lo: usize, hi: usize, what: &str) -> Result<()> {
    if v.len() != len || v.iter().any(|&i| i < lo || i > hi) {
        return Err(crate::BellkitError::Input(format!(
            "{what} tuple {v:?} must have {len} entries in {lo}..={hi}"
        )));
    }
    Ok(())
}

pub fn functional_to_json(f: &BellFunctional) -> Result<String> {
    Ok(to_json(&FunctionalFile::from_functional(f))?)
}

pub fn functional_from_json(text: &str) -> Result<BellFunctional> {
    serde_json::from_str::<FunctionalFile>(text)?.into_functional()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexOut {
    pub k: usize,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientsFile {
    #[serde(rename = "N")]
    pub n_parties: usize,
    pub m: usize,
    pub d: usize,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
    pub alpha_hat: Vec<f64>,
    pub shift: f64,
    pub picture_offset: f64,
    pub a_k: Vec<ComplexOut>,
    pub consistency_max_residual: f64,
}

impl CoefficientsFile {
    pub fn new(c: &CoefficientSet) -> Self {
        let s = c.scenario;
        CoefficientsFile {
            n_parties: s.n_parties(),
            m: s.n_settings(),
            d: s.n_outcomes(),
            alpha: c.alpha.clone(),
            beta: c.beta.clone(),
            alpha_hat: c.alpha_hat.clone(),
            shift: c.shift,
            picture_offset: c.picture_offset(),
            a_k: (1..s.n_outcomes())
                .map(|k| {
                    let z = c.a_k(k);
                    ComplexOut { k, re: z.re, im: z.im }
                })
                .collect(),
            consistency_max_residual: verify_consistency(c).max_residual,
        }
    }
}
