use serde::{Deserialize, Serialize};

use super::ansatz::{test_operators, Branch};
use super::null::{level_in_e0, OrderContext};
use super::BootstrapSolution;
use crate::error::Result;
use crate::moments::MomentTable;
use crate::scalars::FieldElem;
use crate::weyl::{GradedOp, OpPoly};

/// Post-hoc audit of a finished solution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    /// Test-operator degree used for the residual check, per order.
    pub test_degree: Vec<u32>,
    pub residuals_checked: usize,
    /// `"<branch> order <i>, O = <op>: <residual>"` for every failure.
    pub nonzero_residuals: Vec<String>,
    /// `⟨L†L⟩` matches `n` / `n + 1` at each order, lowering then raising.
    pub lower_normalized: Vec<bool>,
    pub raiser_normalized: Vec<bool>,
    /// `L₊⁽ⁱ⁾ = adjoint(L₋⁽ⁱ⁾)` per order.
    pub raiser_is_adjoint: Vec<bool>,
    /// g^i coefficient of `[L₋, L₊] − 1` vanishes, per order.
    pub commutator_is_one: Vec<bool>,
    /// g^i coefficient of `H − L₊L₋` when it is a c-number, per order.
    pub h_minus_raiser_lower: Vec<Option<FieldElem>>,
}

impl VerificationReport {
    /// Residuals and normalisation all hold. The commutator and adjoint
    /// checks are informational.
    pub fn passed(&self) -> bool {
        self.nonzero_residuals.is_empty() && self.lower_normalized.iter().all(|b| *b) && self.raiser_normalized.iter().all(|b| *b)
    }
}

fn scalar_value(op: &OpPoly) -> Option<FieldElem> {
    if op.is_zero() {
        return Some(FieldElem::zero());
    }
    if op.len() == 1 {
        let c = op.coeff(0, 0);
        if !c.is_zero() {
            return c.as_constant();
        }
    }
    None
}

/// Re-checks the null conditions with test operators up to
/// `test_degree[i]` at order i, together with normalisation and the
/// operator identities.
pub fn verify_solution(solution: &BootstrapSolution, table: &MomentTable, test_degree: &[u32]) -> Result<VerificationReport> {
    let k = solution.max_order;
    let problem = &solution.problem;
    let mut nonzero = Vec::new();
    let mut checked = 0;
    let mut normalized = [Vec::new(), Vec::new()];
    let top = test_degree.iter().copied().max().unwrap_or(0);

    for (slot, (branch, ladders)) in [(Branch::Lower, &solution.lower), (Branch::Raise, &solution.raiser)].into_iter().enumerate() {
        let ctx = OrderContext::new(problem, table, k, branch, &solution.energies, ladders);
        let full = GradedOp::from_grades(ladders.iter().enumerate().map(|(u, l)| (u as i64, l.clone())));
        let hml = ctx.h_minus_shifted().mul(&full, k as i64);
        for o in test_operators(top) {
            let deg = o.degree();
            let prod = GradedOp::single(0, o.clone()).mul(&hml, k as i64);
            for (i, cap) in test_degree.iter().enumerate().take(k + 1) {
                if deg > *cap {
                    continue;
                }
                let r = ctx.substitute(&table.graded_coeff(&prod, i)?)?;
                checked += 1;
                if !r.is_zero() {
                    nonzero.push(format!("{branch:?} order {i}, O = {o}: {r}"));
                }
            }
        }
        let norm = full.adjoint().mul(&full, k as i64);
        let target = match branch {
            Branch::Lower => level_in_e0(0),
            Branch::Raise => level_in_e0(1),
        };
        for i in 0..=k {
            let mut v = ctx.substitute(&table.graded_coeff(&norm, i)?)?;
            if i == 0 {
                v = &v - &target;
            }
            normalized[slot].push(v.is_zero());
        }
    }

    let lower = solution.lower_graded();
    let raiser = solution.raiser_graded();
    let comm = lower.commutator(&raiser, k as i64);
    let diff = problem.hamiltonian().sub(&raiser.mul(&lower, k as i64));
    let [lower_normalized, raiser_normalized] = normalized;
    Ok(VerificationReport {
        test_degree: test_degree.to_vec(),
        residuals_checked: checked,
        nonzero_residuals: nonzero,
        lower_normalized,
        raiser_normalized,
        raiser_is_adjoint: solution.lower.iter().zip(&solution.raiser).map(|(l, r)| l.adjoint() == *r).collect(),
        commutator_is_one: (0..=k as i64)
            .map(|i| {
                let c = comm.grade(i);
                if i == 0 {
                    c == OpPoly::one()
                } else {
                    c.is_zero()
                }
            })
            .collect(),
        h_minus_raiser_lower: (0..=k as i64).map(|i| scalar_value(&diff.grade(i))).collect(),
    })
}

/// `true` when no coefficient of `op` carries a symbol.
pub fn is_numeric(op: &OpPoly) -> bool {
    op.terms().all(|(_, c)| c.as_constant().is_some())
}
