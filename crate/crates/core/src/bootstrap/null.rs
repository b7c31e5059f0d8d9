use std::collections::{BTreeMap, BTreeSet};

use super::ansatz::{test_operators_of_degree, Branch, LadderAnsatz};
use crate::error::{Error, Result};
use crate::moments::{MomentTable, ProblemSpec};
use crate::scalars::{linsolve_univariate, poly_substitute, rat, LinSolution, LinSys, ParamPoly, Sym};
use crate::weyl::{GradedOp, OpPoly};

pub(crate) fn e0() -> ParamPoly {
    ParamPoly::sym(Sym::Energy(0))
}

/// `E0 − 1/2 + shift`, the level index `n + shift` written through E0.
pub(crate) fn level_in_e0(shift: i64) -> ParamPoly {
    &e0() + &ParamPoly::rational(rat(2 * shift - 1, 2))
}

/// Everything fixed before a given order of one branch.
///
/// `energies` holds the solved `E⁽ʲ⁾` as polynomials in `n`; for the
/// lowering branch at order i it stops at `i − 1`, for the raising branch
/// it already includes order i. `known` holds the ladder corrections of
/// this branch below order i.
pub struct OrderContext<'a> {
    pub problem: &'a ProblemSpec,
    pub table: &'a MomentTable,
    pub order: usize,
    pub branch: Branch,
    pub energies: &'a [ParamPoly],
    pub known: &'a [OpPoly],
    bindings: BTreeMap<Sym, ParamPoly>,
}

impl<'a> OrderContext<'a> {
    pub fn new(
        problem: &'a ProblemSpec,
        table: &'a MomentTable,
        order: usize,
        branch: Branch,
        energies: &'a [ParamPoly],
        known: &'a [OpPoly],
    ) -> Self {
        let bindings = (1..energies.len()).map(|j| (Sym::Energy(j as u32), energies[j].subst1(Sym::Level, &level_in_e0(0)))).collect();
        OrderContext { problem, table, order, branch, energies, known, bindings }
    }

    /// `E⁽ʲ⁾` of level `n + shift` as a polynomial in E0.
    pub fn level_energy(&self, j: usize, shift: i64) -> ParamPoly {
        match self.energies.get(j) {
            Some(p) => p.subst1(Sym::Level, &level_in_e0(shift)),
            None if j == 0 => &e0() + &ParamPoly::int(shift),
            None => ParamPoly::sym(Sym::ShiftedEnergy(j as u32)),
        }
    }

    /// Replaces every known `E⁽ʲ⁾`, j ≥ 1, by its polynomial in E0.
    pub fn substitute(&self, p: &ParamPoly) -> Result<ParamPoly> {
        if self.bindings.is_empty() {
            return Ok(p.clone());
        }
        poly_substitute(p, &self.bindings)
    }

    /// True when the shifted-level energy at this order is still unknown.
    pub fn shifted_energy_unknown(&self) -> bool {
        self.order >= 1 && self.energies.len() <= self.order
    }

    /// `H − E'` with the known grades of the shifted-level energy.
    pub fn h_minus_shifted(&self) -> GradedOp {
        let mut h = self.problem.hamiltonian();
        let known = self.energies.len().max(1).min(self.order + 1);
        for j in 0..known {
            h.add_at(j as i64, &OpPoly::scalar(-self.level_energy(j, self.branch.step())));
        }
        h
    }

    /// `Σ_{u<i} g^u L⁽ᵘ⁾` from the solved orders.
    pub fn lower_orders(&self) -> GradedOp {
        GradedOp::from_grades(self.known.iter().take(self.order).enumerate().map(|(u, l)| (u as i64, l.clone())))
    }
}

/// Builds null-condition equations one test operator at a time.
///
/// The g^i coefficient of `⟨O (H − E') L⟩` is affine in the order-i
/// unknowns: each ansatz monomial `M_k` enters only through
/// `⟨O (H₀ − E'₀) M_k⟩` at order zero, and `E'⁽ⁱ⁾` only through
/// `−⟨O L⁽⁰⁾⟩` at order zero.
pub struct NullAssembler<'a> {
    ctx: &'a OrderContext<'a>,
    columns: Vec<(Sym, OpPoly)>,
    energy_column: Option<OpPoly>,
    constant: GradedOp,
}

impl<'a> NullAssembler<'a> {
    pub fn new(ctx: &'a OrderContext<'a>, ansatz: &LadderAnsatz) -> Self {
        let hme = ctx.h_minus_shifted();
        let h0 = hme.grade(0);
        let columns = ansatz.monomials().into_iter().map(|(s, m)| (s, &h0 * &m)).collect();
        let energy_column = ctx.shifted_energy_unknown().then(|| ctx.known[0].clone());
        let constant = hme.mul(&ctx.lower_orders(), ctx.order as i64);
        NullAssembler { ctx, columns, energy_column, constant }
    }

    pub fn unknowns(&self) -> Vec<Sym> {
        let mut u: Vec<Sym> = self.columns.iter().map(|(s, _)| *s).collect();
        if self.energy_column.is_some() {
            u.push(Sym::ShiftedEnergy(self.ctx.order as u32));
        }
        u
    }

    /// The null condition for one test operator, as an expression `= 0`.
    pub fn expr(&self, o: &OpPoly) -> Result<ParamPoly> {
        let table = self.ctx.table;
        let mut acc = ParamPoly::zero();
        for (s, col) in &self.columns {
            let c = table.expectation_coeff(&(o * col), 0)?;
            if !c.is_zero() {
                acc.add_assign_poly(&(&c * &ParamPoly::sym(*s)));
            }
        }
        if let Some(l0) = &self.energy_column {
            let c = table.expectation_coeff(&(o * l0), 0)?;
            acc.sub_assign_poly(&(&c * &ParamPoly::sym(Sym::ShiftedEnergy(self.ctx.order as u32))));
        }
        if !self.constant.is_zero() {
            let prod = GradedOp::single(0, o.clone()).mul(&self.constant, self.ctx.order as i64);
            acc.add_assign_poly(&table.graded_coeff(&prod, self.ctx.order)?);
        }
        self.ctx.substitute(&acc)
    }
}

/// Null system for the given test operators.
pub fn assemble_null_system(ansatz: &LadderAnsatz, ctx: &OrderContext, test_ops: &[OpPoly]) -> Result<LinSys> {
    let asm = NullAssembler::new(ctx, ansatz);
    let mut sys = LinSys::new(asm.unknowns());
    for o in test_ops {
        sys.push_expr(&asm.expr(o)?)?;
    }
    Ok(sys)
}

/// Result of solving the null system at one order, before the ground,
/// energy-independence and normalisation steps.
#[derive(Clone, Debug)]
pub struct PartialOrder {
    pub order: usize,
    pub branch: Branch,
    pub k: u32,
    /// Largest test-operator degree used.
    pub test_degree: u32,
    /// The ladder correction in the remaining free unknowns.
    pub body: OpPoly,
    pub free: BTreeSet<Sym>,
    /// `E'⁽ⁱ⁾` as a polynomial in E0 and `E⁽ⁱ⁾` (lowering branch only).
    pub recursion: Option<ParamPoly>,
}

/// Solves the null system, enlarging the test-operator set from degree
/// `K + 1` until two consecutive degrees give the same solution.
pub fn solve_null_stable(ctx: &OrderContext, ansatz: &LadderAnsatz, max_extra: u32) -> Result<(LinSolution, u32)> {
    let asm = NullAssembler::new(ctx, ansatz);
    let mut sys = LinSys::new(asm.unknowns());
    let start = ansatz.k + 1;
    let mut prev: Option<LinSolution> = None;
    let mut lo = 0;
    for m in start..=start + max_extra {
        for o in test_operators_of_degree(lo, m) {
            sys.push_expr(&asm.expr(&o)?)?;
        }
        lo = m + 1;
        let sol = linsolve_univariate(&sys, Sym::Energy(0))?;
        if prev.as_ref() == Some(&sol) {
            return Ok((sol, m));
        }
        prev = Some(sol);
    }
    Err(Error::Unstable(format!("order {} after test degree {}", ctx.order, start + max_extra)))
}

/// Step 2 for one branch and order.
pub fn solve_order(ctx: &OrderContext, ansatz: &LadderAnsatz, max_extra: u32) -> Result<PartialOrder> {
    let (sol, test_degree) = solve_null_stable(ctx, ansatz, max_extra)?;
    let body = ansatz.body.try_map_coeffs(|c| poly_substitute(c, &sol.solution))?;
    let mut free = sol.free.clone();
    let i = ctx.order;
    let recursion = if ctx.shifted_energy_unknown() {
        let ep = Sym::ShiftedEnergy(i as u32);
        free.remove(&ep);
        let rec = sol.solution.get(&ep).ok_or_else(|| Error::InconsistentSystem(format!("{ep} is not fixed by the null conditions")))?;
        if rec.symbols().iter().any(|s| free.contains(s)) {
            return Err(Error::InconsistentSystem(format!("{ep} depends on free ansatz coefficients")));
        }
        Some(rec.clone())
    } else if i == 0 {
        match free.len() {
            0 => return Err(Error::BranchAmbiguity(format!("no nontrivial solution with step {}", ctx.branch.step()))),
            1 => {}
            n => return Err(Error::BranchAmbiguity(format!("{n}-dimensional solution space"))),
        }
        Some(ctx.level_energy(0, ctx.branch.step()))
    } else {
        None
    };
    Ok(PartialOrder { order: i, branch: ctx.branch, k: ansatz.k, test_degree, body, free, recursion })
}
