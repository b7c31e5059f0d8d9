use std::collections::{BTreeMap, BTreeSet};

use super::ansatz::{test_operators, Branch};
use super::null::{level_in_e0, OrderContext, PartialOrder};
use crate::error::{Error, Result};
use crate::moments::ProblemSpec;
use crate::scalars::{linsolve, poly_substitute, rat, FieldElem, LinSys, Monomial, ParamPoly, Sym};
use crate::weyl::{GradedOp, OpPoly};

fn unit_values(free: &BTreeSet<Sym>) -> BTreeMap<Sym, FieldElem> {
    free.iter().map(|s| (*s, FieldElem::one())).collect()
}

fn join(syms: impl IntoIterator<Item = Sym>) -> String {
    syms.into_iter().map(|s| s.name()).collect::<Vec<_>>().join(", ")
}

/// Ground-state value `E₀⁽ⁱ⁾` from `⟨0|O L₋|0⟩ = 0`.
pub fn ground_condition(ctx: &OrderContext, partial: &PartialOrder) -> Result<FieldElem> {
    if partial.branch != Branch::Lower {
        return Err(Error::InconsistentGroundSystem("ground condition needs the lowering operator".into()));
    }
    let table = ctx.table;
    if partial.order == 0 {
        let body = partial.body.map_coeffs(|c| c.eval_syms(&unit_values(&partial.free)));
        let mut polys = Vec::new();
        for o in test_operators(partial.test_degree) {
            let p = table.expectation_coeff(&(&o * &body), 0)?;
            if !p.is_zero() {
                polys.push(p);
            }
        }
        let e = Sym::Energy(0);
        let root = polys
            .iter()
            .find(|p| p.degree_in(e) == 1 && p.symbols().len() == 1)
            .map(|p| {
                let c1 = p.coeff(&Monomial::var(e, 1));
                -&(&p.constant_term() * &c1.inverse().expect("nonzero leading coefficient"))
            })
            .ok_or_else(|| Error::InconsistentGroundSystem("no condition linear in E0".into()))?;
        let at = BTreeMap::from([(e, root.clone())]);
        if polys.iter().any(|p| !p.eval_syms(&at).is_zero()) {
            return Err(Error::InconsistentGroundSystem(format!("conditions disagree at E0 = {root}")));
        }
        return Ok(root);
    }

    let i = partial.order;
    let ei = Sym::Energy(i as u32);
    let mut full = ctx.lower_orders();
    full.add_at(i as i64, &partial.body);
    let mut unknowns: Vec<Sym> = partial.free.iter().copied().collect();
    unknowns.push(ei);
    let mut sys = LinSys::new(unknowns);
    let half = BTreeMap::from([(Sym::Energy(0), FieldElem::frac(1, 2))]);
    for o in test_operators(partial.test_degree) {
        let prod = GradedOp::single(0, o).mul(&full, i as i64);
        let expr = ctx.substitute(&table.graded_coeff(&prod, i)?)?.eval_syms(&half);
        sys.push_expr(&expr)?;
    }
    let sol = linsolve(&sys).map_err(|e| Error::InconsistentGroundSystem(e.to_string()))?;
    sol.solution.get(&ei).and_then(ParamPoly::as_constant).ok_or_else(|| Error::InconsistentGroundSystem(format!("{ei} not fixed")))
}

/// Polynomial `P(n)` with `P(n − 1) = recursion(E0 = n + 1/2, E⁽ⁱ⁾ = P(n))`
/// and `P(0) = ground`. At order 0 the recursion is in E0 alone, which
/// then stands for `P(n)`.
pub fn solve_energy_recursion(recursion: &ParamPoly, order: usize, ground: &FieldElem, degree_bound: usize) -> Result<ParamPoly> {
    let n = ParamPoly::sym(Sym::Level);
    let n_minus_1 = &n - &ParamPoly::one();
    for bound in degree_bound..=degree_bound + 3 {
        let coeff = |d: usize| Sym::Aux(d as u32);
        let p = (0..=bound).fold(ParamPoly::zero(), |acc, d| &acc + &(&ParamPoly::sym(coeff(d)) * &n.pow(d as u32)));
        let lhs = p.subst1(Sym::Level, &n_minus_1);
        let rhs = if order == 0 {
            recursion.subst1(Sym::Energy(0), &p)
        } else {
            let half = &n + &ParamPoly::rational(rat(1, 2));
            recursion.subst1(Sym::Energy(order as u32), &p).subst1(Sym::Energy(0), &half)
        };
        let mut sys = LinSys::new((0..=bound).map(coeff).collect());
        for (_, c) in (&lhs - &rhs).split_by(Sym::Level) {
            sys.push_expr(&c)?;
        }
        sys.push_expr(&(&ParamPoly::sym(coeff(0)) - &ParamPoly::constant(ground.clone())))?;
        let Ok(sol) = linsolve(&sys) else { continue };
        if !sol.free.is_empty() {
            continue;
        }
        let mut out = ParamPoly::zero();
        for d in 0..=bound {
            let c = sol.solution[&coeff(d)].as_constant().ok_or(Error::NoPolynomialSolution(bound))?;
            out.add_term(Monomial::var(Sym::Level, d as u32), c);
        }
        return Ok(out);
    }
    Err(Error::NoPolynomialSolution(degree_bound + 3))
}

/// Step 4: the ladder coefficients may not depend on the level energy.
///
/// `energies` must include order i. Returns the refined partial solution
/// and the unknowns fixed here.
pub fn impose_energy_independence(partial: &PartialOrder, energies: &[ParamPoly]) -> Result<(PartialOrder, Vec<Sym>)> {
    let bindings: BTreeMap<Sym, ParamPoly> =
        (1..energies.len()).map(|j| (Sym::Energy(j as u32), energies[j].subst1(Sym::Level, &level_in_e0(0)))).collect();
    let body = partial.body.try_map_coeffs(|c| poly_substitute(c, &bindings))?;
    let mut sys = LinSys::new(partial.free.iter().copied().collect());
    for (_, c) in body.terms() {
        for (e, part) in c.split_by(Sym::Energy(0)) {
            if e >= 1 {
                sys.push_expr(&part)?;
            }
        }
    }
    let mut out = partial.clone();
    if sys.equations.is_empty() {
        out.body = body;
        return Ok((out, Vec::new()));
    }
    let sol = linsolve(&sys)?;
    out.body = body.try_map_coeffs(|c| poly_substitute(c, &sol.solution))?;
    out.free = sol.free.clone();
    Ok((out, sol.solution.keys().copied().collect()))
}

type Antiunitary = fn(&OpPoly) -> OpPoly;

/// The antiunitary symmetry of H (PT preferred, else T) and the sign σ
/// with `Θ(L⁽⁰⁾) = σ L⁽⁰⁾`.
pub fn ladder_covariance(problem: &ProblemSpec, l0: &OpPoly) -> Option<(Antiunitary, FieldElem)> {
    let h = problem.hamiltonian();
    let invariant = |f: Antiunitary| h.grades().all(|(_, op)| f(op) == *op);
    let theta: Antiunitary = if invariant(OpPoly::pt_apply) {
        OpPoly::pt_apply
    } else if invariant(OpPoly::t_apply) {
        OpPoly::t_apply
    } else {
        return None;
    };
    let image = theta(l0);
    if image == *l0 {
        Some((theta, FieldElem::one()))
    } else if image == -l0 {
        Some((theta, FieldElem::from_int(-1)))
    } else {
        None
    }
}

fn norm_target(branch: Branch) -> ParamPoly {
    match branch {
        Branch::Lower => level_in_e0(0),
        Branch::Raise => level_in_e0(1),
    }
}

/// Step 5: fixes the remaining unknowns by `⟨L†L⟩ = n` (lowering) or
/// `n + 1` (raising). `ctx.energies` must include order i.
pub fn impose_normalization(ctx: &OrderContext, partial: &PartialOrder) -> Result<OpPoly> {
    if partial.order == 0 {
        normalize_order_zero(ctx, partial)
    } else {
        normalize_correction(ctx, partial)
    }
}

fn normalize_order_zero(ctx: &OrderContext, partial: &PartialOrder) -> Result<OpPoly> {
    let b = partial.body.map_coeffs(|c| c.eval_syms(&unit_values(&partial.free)));
    let norm = ctx.table.expectation_coeff(&(&b.adjoint() * &b), 0)?;
    let lambda = norm
        .div_exact(&norm_target(partial.branch))
        .and_then(|q| q.as_constant())
        .filter(|q| q.is_rational() && !q.is_zero())
        .ok_or_else(|| Error::ResidualFreedom(format!("⟨L†L⟩ = {norm} is not a constant multiple of the target")))?;
    let lead = b
        .coeff(1, 0)
        .as_constant()
        .filter(|c| !c.is_zero())
        .or_else(|| b.terms().find_map(|(_, c)| c.as_constant()))
        .ok_or_else(|| Error::ResidualFreedom("order-0 ladder is zero".into()))?;
    let abs2 = &lead * &lead.conj();
    let q = &abs2 * &lambda;
    let root = q
        .as_rational()
        .and_then(FieldElem::sqrt_of_rational)
        .ok_or_else(|| Error::ResidualFreedom(format!("normalisation constant √({q}) is outside Q(i, √2)")))?;
    let c = &lead.conj() * &root.inverse()?;
    Ok(b.scale(&c))
}

fn normalize_correction(ctx: &OrderContext, partial: &PartialOrder) -> Result<OpPoly> {
    let i = partial.order;
    let mut parts = Vec::new();
    let mut split = BTreeMap::new();
    for &u in &partial.free {
        let Sym::Ansatz { order, m, n } = u else {
            return Err(Error::ResidualFreedom(format!("unexpected free symbol {u}")));
        };
        let re = Sym::AnsatzPart { imag: false, order, m, n };
        let im = Sym::AnsatzPart { imag: true, order, m, n };
        parts.push(re);
        parts.push(im);
        split.insert(u, &ParamPoly::sym(re) + &ParamPoly::sym(im).scale(&FieldElem::i()));
    }
    let body = partial.body.try_map_coeffs(|c| poly_substitute(c, &split))?;
    if parts.is_empty() {
        return finish(body);
    }

    let mut full = ctx.lower_orders();
    full.add_at(i as i64, &body);
    let norm = ctx.substitute(&ctx.table.graded_coeff(&full.adjoint().mul(&full, i as i64), i)?)?;
    let mut sys = LinSys::new(parts);
    for (_, c) in norm.split_by(Sym::Energy(0)) {
        sys.push_expr(&c.re())?;
        sys.push_expr(&c.im())?;
    }
    if let Some((theta, sigma)) = ladder_covariance(ctx.problem, &ctx.known[0]) {
        let diff = &theta(&body) - &body.scale(&sigma);
        for (_, c) in diff.terms() {
            sys.push_expr(&c.re())?;
            sys.push_expr(&c.im())?;
        }
    }
    let sol = linsolve(&sys)?;
    if !sol.free.is_empty() {
        return Err(Error::ResidualFreedom(join(sol.free.iter().copied())));
    }
    finish(body.try_map_coeffs(|c| poly_substitute(c, &sol.solution))?)
}

fn finish(body: OpPoly) -> Result<OpPoly> {
    let left: BTreeSet<Sym> = body.terms().flat_map(|(_, c)| c.symbols()).collect();
    if left.is_empty() {
        Ok(body)
    } else {
        Err(Error::ResidualFreedom(join(left)))
    }
}
