//! Linear systems whose coefficients are polynomials in one symbol.
//!
//! Elimination over rational functions is planned modulo a prime (pivot
//! order and solution degree), then carried out exactly at sample values
//! of the symbol and interpolated.

use std::collections::{BTreeMap, BTreeSet};

use super::field::FieldElem;
use super::linsys::{LinSolution, LinSys};
use super::modp::{RatFnP, UPolyP};
use super::poly::{Monomial, ParamPoly};
use super::sym::Sym;
use crate::error::{Error, Result};

struct PlanRow {
    id: usize,
    coeffs: BTreeMap<usize, RatFnP>,
    rhs: BTreeMap<Monomial, RatFnP>,
}

impl PlanRow {
    fn axpy(&mut self, f: &RatFnP, pivot: &PlanRow) {
        for (j, c) in &pivot.coeffs {
            let e = self.coeffs.entry(*j).or_insert_with(RatFnP::zero);
            *e = e.sub(&f.mul(c));
        }
        self.coeffs.retain(|_, c| !c.is_zero());
        for (m, c) in &pivot.rhs {
            let e = self.rhs.entry(m.clone()).or_insert_with(RatFnP::zero);
            *e = e.sub(&f.mul(c));
        }
        self.rhs.retain(|_, c| !c.is_zero());
    }
}

/// Pivot sequence `(unknown index, equation index)` and the largest
/// degree in the variable over all solution entries.
struct Plan {
    pivots: Vec<(usize, usize)>,
    degree: usize,
}

fn unreducible(what: &str) -> Error {
    Error::NonConstantPivot(format!("{what} does not reduce modulo the planning prime"))
}

fn plan(sys: &LinSys, var: Sym) -> Result<Plan> {
    let mut rows = Vec::with_capacity(sys.equations.len());
    for (id, eq) in sys.equations.iter().enumerate() {
        let mut coeffs = BTreeMap::new();
        for (j, c) in &eq.coeffs {
            if c.symbols().iter().any(|s| *s != var) {
                return Err(Error::NonConstantPivot(format!("{} has coefficient {c}", sys.unknowns[*j])));
            }
            let u = UPolyP::from_param(c, var).ok_or_else(|| unreducible("a coefficient"))?;
            if !u.is_zero() {
                coeffs.insert(*j, RatFnP::from_poly(u));
            }
        }
        let mut others = eq.constant.symbols();
        others.remove(&var);
        let mut rhs = BTreeMap::new();
        for (m, c) in eq.constant.split_by_syms(&others) {
            let u = UPolyP::from_param(&c, var).ok_or_else(|| unreducible("a constant"))?;
            if !u.is_zero() {
                rhs.insert(m, RatFnP::from_poly(u));
            }
        }
        rows.push(PlanRow { id, coeffs, rhs });
    }

    let mut pivots: Vec<(usize, PlanRow)> = Vec::new();
    loop {
        rows.retain(|r| !(r.coeffs.is_empty() && r.rhs.is_empty()));
        if let Some(bad) = rows.iter().find(|r| r.coeffs.is_empty()) {
            return Err(Error::InconsistentSystem(format!("equation {} reduces to a nonzero constant", bad.id)));
        }
        if rows.is_empty() {
            break;
        }
        let (_, _, col, r) = rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.coeffs.iter().map(move |(j, c)| (!c.is_constant(), c.weight(), *j, r)))
            .min()
            .expect("rows with coefficients");
        let mut row = rows.remove(r);
        let p = row.coeffs[&col].clone();
        for c in row.coeffs.values_mut().chain(row.rhs.values_mut()) {
            *c = c.div(&p);
        }
        for other in rows.iter_mut().chain(pivots.iter_mut().map(|p| &mut p.1)) {
            if let Some(f) = other.coeffs.get(&col).cloned() {
                other.axpy(&f, &row);
            }
        }
        pivots.push((col, row));
    }

    let mut degree = 0;
    for (col, row) in &pivots {
        for c in row.coeffs.values().chain(row.rhs.values()) {
            if !c.is_polynomial() {
                return Err(Error::NonConstantPivot(format!("{} is rational in {var}", sys.unknowns[*col])));
            }
            degree = degree.max(c.num.degree());
        }
    }
    Ok(Plan { pivots: pivots.iter().map(|(c, r)| (*c, r.id)).collect(), degree })
}

type NumRow = (BTreeMap<usize, FieldElem>, ParamPoly);

fn eval_univariate(p: &ParamPoly, var: Sym, x: &FieldElem) -> FieldElem {
    p.eval_syms(&BTreeMap::from([(var, x.clone())])).constant_term()
}

/// Exact Gauss–Jordan at `var = x` along the planned pivots. `None` when
/// the point is degenerate for that pivot order.
fn solve_at(sys: &LinSys, var: Sym, plan: &Plan, x: &FieldElem) -> Option<Vec<NumRow>> {
    let at = BTreeMap::from([(var, x.clone())]);
    let mut rows: Vec<NumRow> = sys
        .equations
        .iter()
        .map(|eq| {
            let coeffs = eq.coeffs.iter().map(|(j, c)| (*j, eval_univariate(c, var, x))).filter(|(_, c)| !c.is_zero()).collect();
            (coeffs, eq.constant.eval_syms(&at))
        })
        .collect();
    for &(col, r) in &plan.pivots {
        let piv = rows[r].0.get(&col)?.clone();
        let inv = piv.inverse().ok()?;
        let (coeffs, rhs) = &mut rows[r];
        for c in coeffs.values_mut() {
            *c = &*c * &inv;
        }
        *rhs = rhs.scale(&inv);
        let pivot = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k == r {
                continue;
            }
            let Some(f) = row.0.get(&col).cloned() else { continue };
            for (j, c) in &pivot.0 {
                let e = row.0.entry(*j).or_default();
                *e -= &(&f * c);
            }
            row.0.retain(|_, c| !c.is_zero());
            row.1.sub_assign_poly(&pivot.1.scale(&f));
        }
    }
    let used: BTreeSet<usize> = plan.pivots.iter().map(|p| p.1).collect();
    let consistent = rows.iter().enumerate().all(|(k, (c, rhs))| used.contains(&k) || (c.is_empty() && rhs.is_zero()));
    consistent.then(|| plan.pivots.iter().map(|&(_, r)| rows[r].clone()).collect())
}

/// Lagrange basis polynomials in `var` for the nodes `xs`.
fn lagrange_basis(xs: &[FieldElem], var: Sym) -> Vec<ParamPoly> {
    let v = ParamPoly::sym(var);
    xs.iter()
        .enumerate()
        .map(|(k, xk)| {
            let mut b = ParamPoly::one();
            for (l, xl) in xs.iter().enumerate() {
                if l != k {
                    let inv = (xk - xl).inverse().expect("distinct nodes");
                    b = &b * &(&v - &ParamPoly::constant(xl.clone())).scale(&inv);
                }
            }
            b
        })
        .collect()
}

fn interpolate(basis: &[ParamPoly], ys: &[ParamPoly]) -> ParamPoly {
    let mut acc = ParamPoly::zero();
    for (b, y) in basis.iter().zip(ys) {
        if !y.is_zero() {
            acc.add_assign_poly(&(b * y));
        }
    }
    acc
}

/// Gauss–Jordan elimination over rational functions in `var`.
///
/// Every unknown coefficient must be a polynomial in `var` alone; the
/// constants may carry further symbols. Pivots prefer constant entries,
/// then entries of least degree, then the lowest unknown index. The
/// solution must be polynomial in `var`, otherwise the solve fails with
/// [`Error::NonConstantPivot`].
pub fn linsolve_univariate(sys: &LinSys, var: Sym) -> Result<LinSolution> {
    let plan = plan(sys, var)?;
    // One node beyond the planned degree: the interpolant must not use it.
    let needed = plan.degree + 2;
    let mut xs = Vec::new();
    let mut samples: Vec<Vec<NumRow>> = Vec::new();
    let mut x = 2;
    while xs.len() < needed {
        if x > needed as i64 + 40 {
            return Err(Error::NonConstantPivot(format!("no regular sample point for {var}")));
        }
        let pt = FieldElem::from_int(x);
        if let Some(rows) = solve_at(sys, var, &plan, &pt) {
            xs.push(pt);
            samples.push(rows);
        }
        x += 1;
    }
    let basis = lagrange_basis(&xs, var);
    let pivot_cols: BTreeSet<usize> = plan.pivots.iter().map(|p| p.0).collect();
    let free: BTreeSet<Sym> = (0..sys.unknowns.len()).filter(|j| !pivot_cols.contains(j)).map(|j| sys.unknowns[j]).collect();
    let mut solution = BTreeMap::new();
    for (k, &(col, _)) in plan.pivots.iter().enumerate() {
        let u = sys.unknowns[col];
        let rhs: Vec<ParamPoly> = samples.iter().map(|s| s[k].1.clone()).collect();
        let mut value = interpolate(&basis, &rhs);
        let cols: BTreeSet<usize> = samples.iter().flat_map(|s| s[k].0.keys().copied()).filter(|j| *j != col).collect();
        for j in cols {
            let ys: Vec<ParamPoly> = samples.iter().map(|s| ParamPoly::constant(s[k].0.get(&j).cloned().unwrap_or_default())).collect();
            let c = interpolate(&basis, &ys);
            value.sub_assign_poly(&(&c * &ParamPoly::sym(sys.unknowns[j])));
        }
        if value.degree_in(var) as usize > plan.degree {
            return Err(Error::NonConstantPivot(format!("interpolation of {u} exceeded the planned degree")));
        }
        solution.insert(u, value);
    }
    Ok(LinSolution { solution, free })
}
