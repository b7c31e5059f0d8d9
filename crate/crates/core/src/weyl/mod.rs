//! Operator algebra in x and p with `[x, p] = i`.

pub mod graded;
pub mod ladder;
pub mod op;

pub use graded::{graded_conjugate, GradedOp};
pub use ladder::{charge_decompose, diagonal_eigenvalue, from_ladder, ladder_commutator, ladder_product, to_ladder, LadderPoly};
pub use op::{commutator, normal_product, OpMonomial, OpPoly};
