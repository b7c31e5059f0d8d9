//! Equivalent Hermitian Hamiltonians for the PT-symmetric problems.
//!
//! Both conjugations use `e^G H e^(−G)`: `V H V⁻¹` with `V = e^(−Q)` is
//! `G = −Q`, and `H̃ = e^(−Q/2) H e^(Q/2)` is `G = −Q/2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::ProblemSpec;
use crate::scalars::{FieldElem, ParamPoly};
use crate::weyl::{diagonal_eigenvalue, graded_conjugate, to_ladder, GradedOp, OpMonomial, OpPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum PtKind {
    Shifted,
    Cubic,
}

fn kind(problem: &ProblemSpec) -> Result<PtKind> {
    let i = FieldElem::i();
    if problem.perturbation == OpPoly::mono(1, 0, i.clone()) {
        Ok(PtKind::Shifted)
    } else if problem.perturbation == OpPoly::mono(3, 0, i) {
        Ok(PtKind::Cubic)
    } else {
        Err(Error::InvalidProblem(format!("{}: no metric operator data for this perturbation", problem.label)))
    }
}

fn f(n: i64, d: i64) -> FieldElem {
    FieldElem::frac(n, d)
}

/// `x^a p^b x^c` normal ordered.
fn xpx(a: u32, b: u32, c: u32) -> OpPoly {
    &(&OpPoly::x().pow(a) * &OpPoly::p().pow(b)) * &OpPoly::x().pow(c)
}

/// `Q⁽¹⁾ = −(4p³/3 + 2xpx)`
pub fn q1() -> OpPoly {
    -(&OpPoly::mono(0, 3, f(4, 3)) + &xpx(1, 1, 1).scale(&f(2, 1)))
}

/// `Q⁽³⁾ = 128p⁵/15 + 40xp³x/3 + 8x²px² − 32p`
pub fn q3() -> OpPoly {
    let mut q = OpPoly::mono(0, 5, f(128, 15));
    q = &q + &xpx(1, 3, 1).scale(&f(40, 3));
    q = &q + &xpx(2, 1, 2).scale(&f(8, 1));
    &q - &OpPoly::mono(0, 1, f(32, 1))
}

/// `Q = g Q⁽¹⁾ + g³ Q⁽³⁾` for the cubic problem.
pub fn cubic_q() -> GradedOp {
    GradedOp::from_grades([(1, q1()), (3, q3())])
}

/// Generator of `V H V⁻¹` in the `e^G H e^(−G)` convention.
fn metric_generator(k: PtKind) -> GradedOp {
    match k {
        PtKind::Shifted => GradedOp::single(1, OpPoly::mono(0, 1, f(2, 1))),
        PtKind::Cubic => cubic_q().neg(),
    }
}

/// Generator of the similarity map to the equivalent Hermitian form.
fn similarity_generator(k: PtKind) -> GradedOp {
    match k {
        PtKind::Shifted => GradedOp::single(1, OpPoly::p()),
        PtKind::Cubic => cubic_q().scale(&f(-1, 2)),
    }
}

/// `H̃` through `g^order`; errors if the truncation is not Hermitian.
pub fn equiv_hermitian(problem: &ProblemSpec, order: usize) -> Result<GradedOp> {
    let k = kind(problem)?;
    let h = graded_conjugate(&problem.hamiltonian(), &similarity_generator(k), order as i64);
    if h.adjoint() != h {
        return Err(Error::NonHermitianResult(format!("{} at order {order}", problem.label)));
    }
    Ok(h)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjugationReport {
    pub order: usize,
    pub passed: bool,
    /// Nonzero grades of `V H V⁻¹ − H†`.
    pub residual: Vec<(i64, OpPoly)>,
}

/// Checks `V H V⁻¹ = H†` through `g^order`.
pub fn verify_v_conjugation(problem: &ProblemSpec, order: usize) -> Result<ConjugationReport> {
    let k = kind(problem)?;
    let h = problem.hamiltonian();
    let lhs = graded_conjugate(&h, &metric_generator(k), order as i64);
    let diff = lhs.sub(&h.adjoint().truncate(order as i64));
    let residual: Vec<(i64, OpPoly)> = diff.grades().map(|(g, op)| (g, op.clone())).collect();
    Ok(ConjugationReport { order, passed: residual.is_empty(), residual })
}

/// First-order perturbation theory on the leading correction of `H̃`:
/// the g^order coefficient of the energy, valid when `H̃` has no
/// corrections below `g^order`.
pub fn equiv_hermitian_energy_at(problem: &ProblemSpec, order: usize) -> Result<ParamPoly> {
    if order == 0 {
        return Err(Error::UnsupportedOrder(0));
    }
    let h = equiv_hermitian(problem, order)?;
    if (1..order as i64).any(|j| !h.grade(j).is_zero()) {
        return Err(Error::UnsupportedOrder(order));
    }
    diagonal_eigenvalue(&to_ladder(&h.grade(order as i64)).charge_part(0))
}

/// g² energy coefficient from `H̃`.
pub fn equiv_hermitian_energy(problem: &ProblemSpec) -> Result<ParamPoly> {
    equiv_hermitian_energy_at(problem, 2)
}

/// `(−4 − 12ixp + 6x²p² + 3x⁴)/2`
pub fn cubic_equivalent_g2() -> OpPoly {
    OpPoly::from_terms([
        (OpMonomial::new(0, 0), ParamPoly::int(-2)),
        (OpMonomial::new(1, 1), ParamPoly::constant(FieldElem::i().scale(&crate::scalars::rat(-6, 1)))),
        (OpMonomial::new(2, 2), ParamPoly::int(3)),
        (OpMonomial::new(4, 0), ParamPoly::constant(f(3, 2))),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shifted_equivalent_is_constant_shift() {
        let h = equiv_hermitian(&ProblemSpec::shifted(), 2).unwrap();
        assert_eq!(h.grade(2), OpPoly::mono(0, 0, f(1, 2)));
        assert!(h.grade(1).is_zero());
        let h4 = equiv_hermitian(&ProblemSpec::shifted(), 4).unwrap();
        assert_eq!(h4, h);
    }

    #[test]
    fn cubic_equivalent_second_order() {
        let h = equiv_hermitian(&ProblemSpec::cubic(), 2).unwrap();
        assert!(h.grade(1).is_zero());
        assert_eq!(h.grade(2), cubic_equivalent_g2());
    }

    #[test]
    fn shifted_metric_exact() {
        for order in 1..=5 {
            assert!(verify_v_conjugation(&ProblemSpec::shifted(), order).unwrap().passed);
        }
    }

    #[test]
    fn sextic_has_no_metric_data() {
        assert!(equiv_hermitian(&ProblemSpec::sextic(), 2).is_err());
    }

    #[test]
    fn q_operators_are_hermitian() {
        for q in [q1(), q3()] {
            assert_eq!(q.adjoint(), q);
        }
    }
}
