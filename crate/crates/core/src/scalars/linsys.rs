//! Exact linear systems with polynomial coefficients.

use std::collections::{BTreeMap, BTreeSet};

use super::poly::{Monomial, ParamPoly};
use super::sym::Sym;
use crate::error::{Error, Result};

/// One equation `Σ_j coeffs[j] · unknowns[j] = constant`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct LinEq {
    pub coeffs: BTreeMap<usize, ParamPoly>,
    pub constant: ParamPoly,
}

impl LinEq {
    fn is_trivial(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn normalize(&mut self) {
        self.coeffs.retain(|_, c| !c.is_zero());
    }
}

/// Linear system over polynomials in the non-unknown symbols.
#[derive(Clone, Debug, Default)]
pub struct LinSys {
    pub unknowns: Vec<Sym>,
    pub equations: Vec<LinEq>,
}

/// Result of [`linsolve`]: pivot unknowns expressed through the free ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinSolution {
    pub solution: BTreeMap<Sym, ParamPoly>,
    pub free: BTreeSet<Sym>,
}

impl LinSys {
    pub fn new(unknowns: Vec<Sym>) -> Self {
        LinSys { unknowns, equations: Vec::new() }
    }

    /// Adds the equation `expr = 0`, where `expr` must be affine in the unknowns.
    pub fn push_expr(&mut self, expr: &ParamPoly) -> Result<()> {
        let index: BTreeMap<Sym, usize> = self.unknowns.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let mut eq = LinEq::default();
        for (m, c) in expr.terms() {
            let mut hit: Option<usize> = None;
            let mut rest = Vec::new();
            for &(s, e) in m.pairs() {
                if let Some(&j) = index.get(&s) {
                    if e > 1 || hit.is_some() {
                        return Err(Error::Nonlinear(format!("term {m} in {s}")));
                    }
                    hit = Some(j);
                } else {
                    rest.push((s, e));
                }
            }
            let rest = Monomial::from_pairs(rest);
            match hit {
                Some(j) => eq.coeffs.entry(j).or_default().add_term(rest, c.clone()),
                None => eq.constant.add_term(rest, -c),
            }
        }
        eq.normalize();
        if !eq.coeffs.is_empty() || !eq.constant.is_zero() {
            self.equations.push(eq);
        }
        Ok(())
    }
}

fn pivot_candidate(eq: &LinEq) -> Option<usize> {
    eq.coeffs.iter().find(|(_, c)| c.is_constant()).map(|(j, _)| *j)
}

/// Divides an equation through by one of its coefficients when that
/// coefficient divides every other entry exactly. This keeps the
/// elimination polynomial when every candidate pivot carries a common
/// symbolic factor.
fn remove_content(eq: &LinEq) -> Option<LinEq> {
    for c in eq.coeffs.values() {
        let mut out = LinEq::default();
        let mut ok = true;
        for (j, v) in &eq.coeffs {
            match v.div_exact(c) {
                Some(q) => {
                    out.coeffs.insert(*j, q);
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        if let Some(q) = eq.constant.div_exact(c) {
            out.constant = q;
            return Some(out);
        }
    }
    None
}

/// Gauss–Jordan elimination keeping every result polynomial.
///
/// Pivots are taken from the lowest-index unknown that has a constant
/// coefficient in some remaining equation (lowest equation first). When no
/// such pivot exists, an equation whose entries share a factor equal to one
/// of its coefficients is divided through by it; otherwise the solve fails
/// with [`Error::NonConstantPivot`].
pub fn linsolve(sys: &LinSys) -> Result<LinSolution> {
    let mut rows: Vec<LinEq> = sys
        .equations
        .iter()
        .map(|e| {
            let mut e = e.clone();
            e.normalize();
            e
        })
        .collect();
    for e in &rows {
        if let Some(j) = e.coeffs.keys().find(|j| **j >= sys.unknowns.len()) {
            return Err(Error::InvalidProblem(format!("equation references unknown index {j}")));
        }
    }
    let mut pivots: Vec<(usize, LinEq)> = Vec::new();

    loop {
        rows.retain(|e| !(e.is_trivial() && e.constant.is_zero()));
        if let Some(bad) = rows.iter().find(|e| e.is_trivial()) {
            return Err(Error::InconsistentSystem(format!("0 = {}", bad.constant)));
        }
        if rows.is_empty() {
            break;
        }
        let best = rows.iter().enumerate().filter_map(|(r, e)| pivot_candidate(e).map(|j| (j, r))).min();
        let (col, r) = match best {
            Some(b) => b,
            None => {
                let (r, reduced) = rows.iter().enumerate().find_map(|(r, e)| remove_content(e).map(|x| (r, x))).ok_or_else(|| {
                    let e = &rows[0];
                    let (j, c) = e.coeffs.iter().next().unwrap();
                    Error::NonConstantPivot(format!("{} has coefficient {c}", sys.unknowns[*j]))
                })?;
                rows[r] = reduced;
                continue;
            }
        };
        let mut row = rows.remove(r);
        let inv = row.coeffs[&col].as_constant().unwrap().inverse()?;
        if !inv.is_one() {
            for c in row.coeffs.values_mut() {
                *c = c.scale(&inv);
            }
            row.constant = row.constant.scale(&inv);
        }
        for other in rows.iter_mut().chain(pivots.iter_mut().map(|p| &mut p.1)) {
            eliminate(other, &row, col);
        }
        pivots.push((col, row));
    }

    let pivot_cols: BTreeSet<usize> = pivots.iter().map(|p| p.0).collect();
    let free: BTreeSet<Sym> = (0..sys.unknowns.len()).filter(|j| !pivot_cols.contains(j)).map(|j| sys.unknowns[j]).collect();
    let mut solution = BTreeMap::new();
    for (col, row) in pivots {
        let mut value = row.constant.clone();
        for (j, c) in &row.coeffs {
            if *j != col {
                value.sub_assign_poly(&(c * &ParamPoly::sym(sys.unknowns[*j])));
            }
        }
        solution.insert(sys.unknowns[col], value);
    }
    Ok(LinSolution { solution, free })
}

fn eliminate(target: &mut LinEq, pivot: &LinEq, col: usize) {
    let Some(factor) = target.coeffs.get(&col).cloned() else { return };
    for (j, c) in &pivot.coeffs {
        let entry = target.coeffs.entry(*j).or_default();
        entry.sub_assign_poly(&(c * &factor));
    }
    target.constant.sub_assign_poly(&(&pivot.constant * &factor));
    target.normalize();
}

/// `Σ coeffs[j]·u_j − constant` after substituting the solution.
pub fn residual(sys: &LinSys, eq: &LinEq, sol: &LinSolution) -> ParamPoly {
    let mut acc = -&eq.constant;
    for (j, c) in &eq.coeffs {
        let s = sys.unknowns[*j];
        let v = sol.solution.get(&s).cloned().unwrap_or_else(|| ParamPoly::sym(s));
        acc.add_assign_poly(&(c * &v));
    }
    acc
}

/// Convenience: value of `u` in a solution, or `u` itself when free.
pub fn value_of(sol: &LinSolution, u: Sym) -> ParamPoly {
    sol.solution.get(&u).cloned().unwrap_or_else(|| ParamPoly::sym(u))
}
