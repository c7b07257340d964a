//! Std companion of `bellkit-core`: parallel enumeration, seeded sampling,
//! JSON/CSV formats, reference tables and the `bellkit` command line.

pub mod cli;
mod error;
pub mod golden;
pub mod io;
pub mod parallel;
pub mod random;
pub mod report;
pub mod verify;

pub use error::{BellkitError, Result};
