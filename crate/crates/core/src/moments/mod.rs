//! Expectation values `⟨x^m p^n⟩` in an energy eigenstate: recursion
//! relations, reduction to a basis, and perturbative tables.

use std::fmt;

use serde::{Deserialize, Serialize};

pub mod problem;
pub mod recursion;
pub mod table;

pub use problem::ProblemSpec;
pub use recursion::{instantiate_recursions, reduce_moment, LinForm, Recursions, ReducedMoment, Relation};
pub use table::{basis_series_by_cancellation, evaluate_expectation, fix_basis_series, MomentTable};

/// The moment ⟨x^m p^n⟩.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MomentKey {
    pub m: u32,
    pub n: u32,
}

impl MomentKey {
    pub fn new(m: u32, n: u32) -> Self {
        MomentKey { m, n }
    }
}

impl fmt::Display for MomentKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<x^{} p^{}>", self.m, self.n)
    }
}
