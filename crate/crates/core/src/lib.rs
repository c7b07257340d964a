//! Multipartite Bell inequalities tailored to qudit GHZ states.
//!
//! The crate builds the family `I_{N,m,d}` in both the probability and the
//! generalized-correlator picture, evaluates it on behaviors, and computes
//! its classical, Svetlichny, quantum and nonsignaling bounds. It is `no_std`
//! and only needs an allocator; parallel drivers, file formats and the CLI
//! live in the `bellkit` crate.
//!
//! Conventions shared by every module:
//!
//! * parties are numbered `1..=N`, settings `1..=m`, outcomes `0..d`;
//! * behavior and correlator tables are flattened settings-major,
//!   outcomes-minor, row-major with party 1 the most significant digit;
//! * operators on `(C^d)^{⊗N}` use the same digit order (party 1 leftmost in
//!   the Kronecker product).
#![no_std]

extern crate alloc;

pub mod bounds;
pub mod coefficients;
mod error;
pub mod expression;
pub mod linalg;
pub mod quantum;
pub mod scenario;
pub mod sos;
pub mod tilted;

/// Collections plus float math (`libm`-backed when there is no `std`).
mod prelude {
    pub use alloc::vec;
    pub use alloc::vec::Vec;
    pub use num_traits::Float as _;
}

pub use error::{Error, Result};
pub use scenario::{Behavior, CorrelatorTensor, Scenario, Tolerances, TOL};

pub use num_complex::Complex64;
