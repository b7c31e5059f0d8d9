use thiserror::Error;

use crate::moments::MomentKey;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclic substitution binding involving {0}")]
    CyclicBinding(String),
    #[error("inconsistent linear system: {0}")]
    InconsistentSystem(String),
    #[error("no usable pivot: elimination would divide by a symbol-dependent polynomial ({0})")]
    NonConstantPivot(String),
    #[error("expression is not linear in the unknowns: {0}")]
    Nonlinear(String),
    #[error("moment {0} cannot be reduced to the basis")]
    IrreducibleMoment(MomentKey),
    #[error("basis series cannot be made regular at g = 0: {0}")]
    SingularityNotCancelable(String),
    #[error("basis series underdetermined at order {order} (degree cap {cap} reached)")]
    UnderdeterminedBasis { order: usize, cap: usize },
    #[error("moment {key} requested at order {order}, table covers {available}")]
    OrderExceeded { key: MomentKey, order: usize, available: String },
    #[error("ladder polynomial has off-diagonal terms")]
    NonDiagonal,
    #[error("order-0 branch selection failed: {0}")]
    BranchAmbiguity(String),
    #[error("ground-state condition failed: {0}")]
    InconsistentGroundSystem(String),
    #[error("no polynomial solution of degree <= {0} for the energy recursion")]
    NoPolynomialSolution(usize),
    #[error("unknowns remain free after normalisation: {0}")]
    ResidualFreedom(String),
    #[error("unsupported order {0}")]
    UnsupportedOrder(usize),
    #[error("result is not Hermitian: {0}")]
    NonHermitianResult(String),
    #[error("test-operator set did not stabilise: {0}")]
    Unstable(String),
    #[error("{0}")]
    InvalidProblem(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error at {path}: {message}")]
    Validation { path: String, message: String },
}
