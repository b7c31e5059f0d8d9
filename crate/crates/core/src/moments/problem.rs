use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::FieldElem;
use crate::weyl::{GradedOp, OpPoly};

/// `H = p²/2 + potential_base + g · perturbation`, both potentials in x only.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub label: String,
    pub potential_base: OpPoly,
    pub perturbation: OpPoly,
    pub hermitian: bool,
    pub parity_even: bool,
}

impl ProblemSpec {
    fn harmonic() -> OpPoly {
        OpPoly::mono(2, 0, FieldElem::frac(1, 2))
    }

    /// `H = p²/2 + x²/2 + g x⁶`
    pub fn sextic() -> Self {
        ProblemSpec {
            label: "sextic".into(),
            potential_base: Self::harmonic(),
            perturbation: OpPoly::mono(6, 0, FieldElem::one()),
            hermitian: true,
            parity_even: true,
        }
    }

    /// `H = p²/2 + x²/2 + i g x`
    pub fn shifted() -> Self {
        ProblemSpec {
            label: "shifted".into(),
            potential_base: Self::harmonic(),
            perturbation: OpPoly::mono(1, 0, FieldElem::i()),
            hermitian: false,
            parity_even: false,
        }
    }

    /// `H = p²/2 + x²/2 + i g x³`
    pub fn cubic() -> Self {
        ProblemSpec {
            label: "cubic".into(),
            potential_base: Self::harmonic(),
            perturbation: OpPoly::mono(3, 0, FieldElem::i()),
            hermitian: false,
            parity_even: false,
        }
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name {
            "sextic" => Some(Self::sextic()),
            "shifted" => Some(Self::shifted()),
            "cubic" => Some(Self::cubic()),
            _ => None,
        }
    }

    /// Degree of the perturbation in x.
    pub fn perturbation_degree(&self) -> u32 {
        self.perturbation.degree()
    }

    /// Unperturbed part `p²/2 + potential_base`.
    pub fn h0(&self) -> OpPoly {
        &OpPoly::mono(0, 2, FieldElem::frac(1, 2)) + &self.potential_base
    }

    /// The Hamiltonian graded by powers of g.
    pub fn hamiltonian(&self) -> GradedOp {
        GradedOp::from_grades([(0, self.h0()), (1, self.perturbation.clone())])
    }

    fn constant_coeffs(op: &OpPoly) -> Option<Vec<FieldElem>> {
        op.terms().map(|(_, c)| c.as_constant()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |message: &str| Error::InvalidProblem(format!("{}: {message}", self.label));
        if !self.potential_base.is_pure_x() || !self.perturbation.is_pure_x() {
            return Err(bad("potentials must be polynomials in x only"));
        }
        if self.potential_base != Self::harmonic() {
            return Err(bad("unperturbed potential must be x²/2"));
        }
        if self.perturbation.is_zero() {
            return Err(bad("perturbation is zero"));
        }
        let coeffs = Self::constant_coeffs(&self.perturbation).ok_or_else(|| bad("perturbation coefficients must be constants"))?;
        if self.hermitian {
            if !coeffs.iter().all(FieldElem::is_real) {
                return Err(bad("hermitian problem needs real coefficients"));
            }
        } else if self.perturbation.pt_apply() != self.perturbation {
            return Err(bad("non-hermitian problem must be PT-invariant"));
        }
        if self.parity_even && self.perturbation.parity_apply() != self.perturbation {
            return Err(bad("perturbation is not parity even"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_validate() {
        for p in [ProblemSpec::sextic(), ProblemSpec::shifted(), ProblemSpec::cubic()] {
            p.validate().unwrap();
        }
        let mut bad = ProblemSpec::cubic();
        bad.perturbation = OpPoly::mono(3, 0, FieldElem::one());
        assert!(bad.validate().is_err());
        let mut odd = ProblemSpec::sextic();
        odd.perturbation = OpPoly::mono(5, 0, FieldElem::one());
        assert!(odd.validate().is_err());
    }

    #[test]
    fn shifted_hamiltonian_pt_invariant() {
        let h = ProblemSpec::shifted().hamiltonian();
        assert_eq!(h.grade(1).pt_apply(), h.grade(1));
        assert_eq!(h.grade(0).pt_apply(), h.grade(0));
    }
}
