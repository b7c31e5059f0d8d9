//! Rayleigh–Schrödinger perturbation theory in the ladder basis.
//!
//! Sums over intermediate states become charge sectors: a charge-k term
//! maps `|n⟩` to `|n + k⟩`, whose energy denominator is `E_n − E_{n+k} = −k`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::ProblemSpec;
use crate::scalars::{FieldElem, ParamPoly};
use crate::weyl::{charge_decompose, diagonal_eigenvalue, from_ladder, ladder_commutator, ladder_product, to_ladder, LadderPoly, OpPoly};

/// `|E_n⟩⁽ⁱ⁾ = f |E_n⟩⁽⁰⁾`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateCorrection {
    pub order: usize,
    #[serde(with = "ladder_serde")]
    pub f: LadderPoly,
}

mod ladder_serde {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::scalars::ParamPoly;
    use crate::weyl::LadderPoly;

    #[derive(Serialize, Deserialize)]
    struct Term {
        adag: u32,
        a: u32,
        coeff: ParamPoly,
    }

    pub fn serialize<S: Serializer>(l: &LadderPoly, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<Term> = l.terms().map(|(&(p, q), c)| Term { adag: p, a: q, coeff: c.clone() }).collect();
        terms.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<LadderPoly, D::Error> {
        let terms = Vec::<Term>::deserialize(d)?;
        let mut l = LadderPoly::zero();
        for t in terms {
            l.add_term(t.adag, t.a, t.coeff);
        }
        Ok(l)
    }
}

fn hermitian_perturbation(problem: &ProblemSpec) -> Result<LadderPoly> {
    if !problem.hermitian {
        return Err(Error::InvalidProblem(format!("{}: perturbation theory oracle needs a hermitian problem", problem.label)));
    }
    Ok(to_ladder(&problem.perturbation))
}

/// `Σ_{k≠0} A_k / (−k)`
fn resolvent(a: &LadderPoly) -> LadderPoly {
    let mut out = LadderPoly::zero();
    for (k, part) in charge_decompose(a) {
        if k != 0 {
            out = &out + &part.scale(&FieldElem::frac(-1, k));
        }
    }
    out
}

fn first_order_f(hp: &LadderPoly) -> LadderPoly {
    resolvent(hp)
}

fn second_order_f(hp: &LadderPoly, f1: &LadderPoly) -> LadderPoly {
    let d1 = hp.charge_part(0);
    let source = &ladder_product(hp, f1) - &ladder_product(f1, &d1);
    let norm = ladder_product(&f1.adjoint(), f1).charge_part(0);
    &resolvent(&source) - &norm.scale(&FieldElem::frac(1, 2))
}

/// `E_n⁽ⁱ⁾` for i = 1, 2 as a polynomial in n.
pub fn rs_energy(problem: &ProblemSpec, order: usize) -> Result<ParamPoly> {
    let hp = hermitian_perturbation(problem)?;
    match order {
        1 => diagonal_eigenvalue(&hp.charge_part(0)),
        2 => diagonal_eigenvalue(&ladder_product(&hp, &first_order_f(&hp)).charge_part(0)),
        _ => Err(Error::UnsupportedOrder(order)),
    }
}

/// State corrections with the norm of `|E_n⟩` fixed to 1 through `g^order`.
pub fn rs_state_correction(problem: &ProblemSpec, order: usize) -> Result<StateCorrection> {
    let hp = hermitian_perturbation(problem)?;
    let f1 = first_order_f(&hp);
    let f = match order {
        1 => f1,
        2 => second_order_f(&hp, &f1),
        _ => return Err(Error::UnsupportedOrder(order)),
    };
    Ok(StateCorrection { order, f })
}

/// `(L₋⁽ⁱ⁾, L₊⁽ⁱ⁾)` in the x, p basis from the state corrections.
pub fn rs_ladder(problem: &ProblemSpec, order: usize) -> Result<(OpPoly, OpPoly)> {
    let hp = hermitian_perturbation(problem)?;
    let f1 = first_order_f(&hp);
    let pair = |l0: LadderPoly| -> Result<LadderPoly> {
        let l1 = ladder_commutator(&f1, &l0);
        match order {
            1 => Ok(l1),
            2 => {
                let f2 = second_order_f(&hp, &f1);
                Ok(&ladder_commutator(&f2, &l0) - &ladder_product(&l1, &f1))
            }
            _ => Err(Error::UnsupportedOrder(order)),
        }
    };
    let lower = pair(LadderPoly::a())?;
    let raiser = pair(LadderPoly::adag())?;
    Ok((from_ladder(&lower), from_ladder(&raiser)))
}

/// g¹ coefficient of `⟨E_n|A|E_n⟩` for a hermitian `A`, as a polynomial in n.
pub fn rs_expectation_first_order(problem: &ProblemSpec, a: &OpPoly) -> Result<ParamPoly> {
    let hp = hermitian_perturbation(problem)?;
    let f1 = first_order_f(&hp);
    let a = to_ladder(a);
    let sandwich = &ladder_product(&a, &f1) + &ladder_product(&f1.adjoint(), &a);
    diagonal_eigenvalue(&sandwich.charge_part(0))
}
