//! Independent checks: Rayleigh–Schrödinger theory for Hermitian problems
//! and the equivalent Hermitian Hamiltonian for the PT-symmetric ones.

mod pt;
mod rs;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub use pt::{
    cubic_equivalent_g2, cubic_q, equiv_hermitian, equiv_hermitian_energy, equiv_hermitian_energy_at, q1, q3, verify_v_conjugation,
    ConjugationReport,
};
pub use rs::{rs_energy, rs_expectation_first_order, rs_ladder, rs_state_correction, StateCorrection};

use crate::bootstrap::{coeffs_in_n, BootstrapSolution};
use crate::error::Result;
use crate::moments::{MomentKey, MomentTable, ProblemSpec};
use crate::scalars::{rat, ParamPoly, Sym};
use crate::weyl::OpPoly;

/// Highest order the perturbation-theory oracle covers.
pub const ORACLE_MAX_ORDER: usize = 2;

/// Order through which the metric operator data is known.
pub const METRIC_ORDER: usize = 3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonEntry {
    pub quantity: String,
    pub oracle: Value,
    /// `null` for checks with no bootstrap counterpart.
    pub bootstrap: Value,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub problem: String,
    pub max_order: usize,
    pub entries: Vec<ComparisonEntry>,
    pub all_match: bool,
}

fn energy_value(p: &ParamPoly) -> Value {
    Value::from(coeffs_in_n(p).iter().map(|c| c.to_string()).collect::<Vec<_>>())
}

fn op_value(op: &OpPoly) -> Value {
    serde_json::to_value(op).unwrap_or(Value::Null)
}

struct Builder(Vec<ComparisonEntry>);

impl Builder {
    fn energy(&mut self, quantity: String, oracle: &ParamPoly, boot: &ParamPoly) {
        self.0.push(ComparisonEntry { quantity, oracle: energy_value(oracle), bootstrap: energy_value(boot), matches: oracle == boot });
    }

    fn op(&mut self, quantity: String, oracle: &OpPoly, boot: &OpPoly) {
        self.0.push(ComparisonEntry { quantity, oracle: op_value(oracle), bootstrap: op_value(boot), matches: oracle == boot });
    }
}

/// `⟨x²⟩⁽¹⁾` from the moment table, as a polynomial in n, using the
/// bootstrap energies through order 1.
pub fn table_x2_first_order(problem: &ProblemSpec, energies: &[ParamPoly]) -> Result<ParamPoly> {
    let table = MomentTable::build(problem, 1, &[2, 2])?;
    let v = table.coeff(MomentKey::new(2, 0), 1)?;
    let n = ParamPoly::sym(Sym::Level);
    let bindings = BTreeMap::from([(Sym::Energy(0), &n + &ParamPoly::rational(rat(1, 2))), (Sym::Energy(1), energies[1].clone())]);
    crate::scalars::poly_substitute(v, &bindings)
}

/// Compares a bootstrap solution against the oracle, quantity by quantity.
pub fn compare(solution: &BootstrapSolution) -> Result<ComparisonReport> {
    let problem = &solution.problem;
    let top = solution.max_order.min(ORACLE_MAX_ORDER);
    let mut b = Builder(Vec::new());
    if problem.hermitian {
        for i in 1..=top {
            b.energy(format!("E^({i})"), &rs_energy(problem, i)?, &solution.energies[i]);
            let (l, r) = rs_ladder(problem, i)?;
            b.op(format!("L-^({i})"), &l, &solution.lower[i]);
            b.op(format!("L+^({i})"), &r, &solution.raiser[i]);
        }
        if top >= 1 {
            let x2 = OpPoly::mono(2, 0, crate::scalars::FieldElem::one());
            let oracle = rs_expectation_first_order(problem, &x2)?;
            b.energy("<x^2>^(1)".into(), &oracle, &table_x2_first_order(problem, &solution.energies)?);
        }
    } else {
        for i in 1..=top {
            b.energy(format!("E^({i})"), &equiv_hermitian_energy_at(problem, i)?, &solution.energies[i]);
        }
        let v = verify_v_conjugation(problem, METRIC_ORDER)?;
        b.0.push(ComparisonEntry {
            quantity: format!("V H V^-1 = H^dagger through g^{METRIC_ORDER}"),
            oracle: Value::from(v.passed),
            bootstrap: Value::Null,
            matches: v.passed,
        });
    }
    let all_match = b.0.iter().all(|e| e.matches);
    Ok(ComparisonReport { problem: problem.label.clone(), max_order: solution.max_order, entries: b.0, all_match })
}
