use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid scenario (N={n_parties}, m={n_settings}, d={n_outcomes}): need N >= 2, m >= 2, d >= 2")]
    InvalidScenario {
        n_parties: usize,
        n_settings: usize,
        n_outcomes: usize,
    },
    #[error("table has {found} entries, expected {expected}")]
    TableLength { expected: usize, found: usize },
    #[error("probability {value} out of [0,1] at settings {settings:?}, outcomes {outcomes:?}")]
    InvalidProbability {
        settings: Vec<usize>,
        outcomes: Vec<usize>,
        value: f64,
    },
    #[error("distribution for settings {settings:?} sums to {sum}")]
    Unnormalized { settings: Vec<usize>, sum: f64 },
    #[error("not a behavior: reconstructed probability {value} at settings {settings:?}, outcomes {outcomes:?}")]
    NotABehavior {
        settings: Vec<usize>,
        outcomes: Vec<usize>,
        value: f64,
    },
    #[error("correlator tensor is not the transform of a real distribution: {0}")]
    InvalidCorrelators(&'static str),
    #[error("scenario mismatch")]
    ScenarioMismatch,
    #[error("{what} = {value} out of range 1..={max}")]
    IndexOutOfRange {
        what: &'static str,
        value: usize,
        max: usize,
    },
    #[error("evaluation left an imaginary residue {0}")]
    ImaginaryResidue(f64),
    #[error("observable for party {party}, setting {setting} is not unitary (deviation {deviation})")]
    NonUnitary {
        party: usize,
        setting: usize,
        deviation: f64,
    },
    #[error("observable for party {party}, setting {setting} violates A^d = 1 (deviation {deviation})")]
    NotRootOfUnity {
        party: usize,
        setting: usize,
        deviation: f64,
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),
    #[error("scenario too large: {required} candidates exceeds budget {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("construction failed at settings {settings:?}: {reason}")]
    Construction {
        settings: Vec<usize>,
        reason: &'static str,
    },
    #[error("gamma must be non-negative, got {0}")]
    NegativeGamma(f64),
    #[error("xi = {0} is in the trivial regime (xi <= -1)")]
    TrivialRegime(f64),
    #[error("{0} parties not supported here (expected 2, 3 or 4)")]
    UnsupportedParties(usize),
}
