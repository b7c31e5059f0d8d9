use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::scalars::{FieldElem, ParamPoly, Sym};
use crate::weyl::OpPoly;

/// Which ladder operator is being bootstrapped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Lower,
    Raise,
}

impl Branch {
    /// Level step of the operator: −1 for lowering, +1 for raising.
    pub fn step(self) -> i64 {
        match self {
            Branch::Lower => -1,
            Branch::Raise => 1,
        }
    }
}

/// `Σ A(i,m,n) x^m (ip)^n` over `m + n ≤ K`.
#[derive(Clone, Debug, PartialEq)]
pub struct LadderAnsatz {
    pub order: u32,
    pub k: u32,
    pub branch: Branch,
    pub unknowns: BTreeSet<Sym>,
    pub body: OpPoly,
}

impl LadderAnsatz {
    /// The ansatz monomials `x^m (ip)^n` paired with their unknowns.
    pub fn monomials(&self) -> Vec<(Sym, OpPoly)> {
        self.unknowns
            .iter()
            .map(|&s| match s {
                Sym::Ansatz { m, n, .. } => (s, x_ip(m, n)),
                _ => unreachable!("ansatz unknowns are Ansatz symbols"),
            })
            .collect()
    }
}

/// `x^m (ip)^n` as a normal-ordered operator.
pub fn x_ip(m: u32, n: u32) -> OpPoly {
    OpPoly::mono(m, n, FieldElem::i().pow(n))
}

pub fn build_ansatz(order: u32, k: u32, branch: Branch) -> LadderAnsatz {
    let mut unknowns = BTreeSet::new();
    let mut body = OpPoly::zero();
    for deg in 0..=k {
        for m in 0..=deg {
            let n = deg - m;
            let s = Sym::Ansatz { order, m, n };
            unknowns.insert(s);
            body = &body + &x_ip(m, n).mul_poly(&ParamPoly::sym(s));
        }
    }
    LadderAnsatz { order, k, branch, unknowns, body }
}

/// Test operators `x^m (ip)^n` with `m + n ≤ max_degree`, in degree order.
pub fn test_operators(max_degree: u32) -> Vec<OpPoly> {
    test_operators_of_degree(0, max_degree)
}

pub(crate) fn test_operators_of_degree(lo: u32, hi: u32) -> Vec<OpPoly> {
    let mut out = Vec::new();
    for deg in lo..=hi {
        for m in (0..=deg).rev() {
            out.push(x_ip(m, deg - m));
        }
    }
    out
}
