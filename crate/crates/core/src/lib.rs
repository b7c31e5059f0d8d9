//! Exact perturbative null bootstrap for anharmonic and PT-symmetric
//! oscillators, with a Rayleigh–Schrödinger cross-check.

pub mod bootstrap;
pub mod cli;
pub mod error;
pub mod moments;
pub mod oracle;
pub mod scalars;
pub mod weyl;

pub use error::{Error, Result};
