//! Operators graded by powers of the coupling g, and BCH conjugation.

use std::collections::BTreeMap;
use std::fmt;

use super::op::{commutator, normal_product, OpPoly};
use crate::scalars::{FieldElem, Rat};

/// `Σ_k g^k · ops[k]`, with the grade kept structurally.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct GradedOp {
    grades: BTreeMap<i64, OpPoly>,
}

impl GradedOp {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `g^k · op`
    pub fn single(k: i64, op: OpPoly) -> Self {
        let mut g = Self::zero();
        g.add_at(k, &op);
        g
    }

    pub fn from_grades<I: IntoIterator<Item = (i64, OpPoly)>>(it: I) -> Self {
        let mut g = Self::zero();
        for (k, op) in it {
            g.add_at(k, &op);
        }
        g
    }

    pub fn add_at(&mut self, k: i64, op: &OpPoly) {
        if op.is_zero() {
            return;
        }
        let e = self.grades.entry(k).or_default();
        *e = &*e + op;
        if e.is_zero() {
            self.grades.remove(&k);
        }
    }

    pub fn grade(&self, k: i64) -> OpPoly {
        self.grades.get(&k).cloned().unwrap_or_default()
    }

    pub fn grades(&self) -> impl Iterator<Item = (i64, &OpPoly)> {
        self.grades.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_zero(&self) -> bool {
        self.grades.is_empty()
    }

    pub fn min_grade(&self) -> Option<i64> {
        self.grades.keys().next().copied()
    }

    pub fn truncate(&self, order: i64) -> GradedOp {
        GradedOp { grades: self.grades.range(..=order).map(|(k, v)| (*k, v.clone())).collect() }
    }

    pub fn add(&self, o: &GradedOp) -> GradedOp {
        let mut r = self.clone();
        for (k, v) in &o.grades {
            r.add_at(*k, v);
        }
        r
    }

    pub fn sub(&self, o: &GradedOp) -> GradedOp {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> GradedOp {
        self.scale(&FieldElem::from_int(-1))
    }

    pub fn scale(&self, c: &FieldElem) -> GradedOp {
        GradedOp::from_grades(self.grades.iter().map(|(k, v)| (*k, v.scale(c))))
    }

    pub fn adjoint(&self) -> GradedOp {
        GradedOp::from_grades(self.grades.iter().map(|(k, v)| (*k, v.adjoint())))
    }

    /// Product truncated above `g^order`.
    pub fn mul(&self, o: &GradedOp, order: i64) -> GradedOp {
        self.combine(o, order, normal_product)
    }

    /// Commutator truncated above `g^order`.
    pub fn commutator(&self, o: &GradedOp, order: i64) -> GradedOp {
        self.combine(o, order, commutator)
    }

    fn combine<F: Fn(&OpPoly, &OpPoly) -> OpPoly>(&self, o: &GradedOp, order: i64, f: F) -> GradedOp {
        let mut out = GradedOp::zero();
        for (ka, a) in &self.grades {
            for (kb, b) in &o.grades {
                if ka + kb <= order {
                    out.add_at(ka + kb, &f(a, b));
                }
            }
        }
        out
    }
}

/// `e^G H e^(−G) = Σ_k ad_G^k(H)/k!`, truncated above `g^order`.
///
/// `G` must carry strictly positive grades, so the sum terminates.
pub fn graded_conjugate(h: &GradedOp, g: &GradedOp, order: i64) -> GradedOp {
    assert!(g.min_grade().is_none_or(|k| k > 0), "generator must have positive grades");
    let mut term = h.truncate(order);
    let mut acc = term.clone();
    let mut k: i64 = 1;
    while !term.is_zero() {
        term = g.commutator(&term, order).scale(&FieldElem::from_rat(Rat::new(1.into(), k.into())));
        acc = acc.add(&term);
        k += 1;
    }
    acc
}

impl fmt::Display for GradedOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.grades.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.grades.iter().map(|(k, v)| format!("g^{k}·({v})")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for GradedOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn h0() -> OpPoly {
        &OpPoly::mono(0, 2, FieldElem::frac(1, 2)) + &OpPoly::mono(2, 0, FieldElem::frac(1, 2))
    }

    fn shifted() -> GradedOp {
        GradedOp::from_grades([(0, h0()), (1, OpPoly::mono(1, 0, FieldElem::i()))])
    }

    #[test]
    fn shifted_conjugated_to_adjoint() {
        let g = GradedOp::single(1, OpPoly::mono(0, 1, FieldElem::from_int(2)));
        let expected = GradedOp::from_grades([(0, h0()), (1, OpPoly::mono(1, 0, -FieldElem::i()))]);
        assert_eq!(graded_conjugate(&shifted(), &g, 2), expected);
        assert_eq!(graded_conjugate(&shifted(), &g, 6), expected);
    }

    #[test]
    fn shifted_equivalent_hermitian() {
        let g = GradedOp::single(1, OpPoly::p());
        let expected = GradedOp::from_grades([(0, h0()), (2, OpPoly::mono(0, 0, FieldElem::frac(1, 2)))]);
        assert_eq!(graded_conjugate(&shifted(), &g, 2), expected);
    }

    fn arb_graded() -> impl Strategy<Value = GradedOp> {
        (crate::weyl::op::tests::arb_op(2), crate::weyl::op::tests::arb_op(2)).prop_map(|(a, b)| GradedOp::from_grades([(1, a), (2, b)]))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn conjugation_inverts(h in crate::weyl::op::tests::arb_op(3), g in arb_graded()) {
            let order = 3;
            let h = GradedOp::single(0, h);
            let there = graded_conjugate(&h, &g, order);
            let back = graded_conjugate(&there, &g.neg(), order);
            prop_assert_eq!(back, h.truncate(order));
        }
    }
}
