//! Exact arithmetic: Q(i, √2), polynomials in named symbols, Laurent
//! series in g, and linear solving.

pub mod field;
pub mod linsys;
pub mod modp;
pub mod poly;
pub mod series;
pub mod sym;
pub mod univariate;

pub use field::{conjugate, field_inverse, parse_rat, rat, rat_int, rat_to_string, FieldElem, Rat};
pub use linsys::{linsolve, LinEq, LinSolution, LinSys};
pub use poly::{poly_substitute, Monomial, ParamPoly};
pub use series::{laurent_mul, GSeries};
pub use sym::Sym;
pub use univariate::linsolve_univariate;
