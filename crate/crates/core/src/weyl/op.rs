//! Normal-ordered polynomials in x and p with `[x, p] = i`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, One};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::scalars::{FieldElem, ParamPoly, Rat};

/// `x^m p^n`, with every x to the left of every p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OpMonomial {
    pub m: u32,
    pub n: u32,
}

impl OpMonomial {
    pub fn new(m: u32, n: u32) -> Self {
        OpMonomial { m, n }
    }

    pub fn degree(&self) -> u32 {
        self.m + self.n
    }
}

pub(crate) fn falling(c: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, j| acc * BigInt::from(c - j))
}

pub(crate) fn binom(b: u32, k: u32) -> BigInt {
    falling(b, k) / falling(k, k)
}

/// `(−i)^k` as a field element.
fn minus_i_pow(k: u32) -> FieldElem {
    match k % 4 {
        0 => FieldElem::one(),
        1 => -FieldElem::i(),
        2 => FieldElem::from_int(-1),
        _ => FieldElem::i(),
    }
}

/// Reordering `p^b x^c = Σ_k C(b,k)·c!/(c−k)!·(−i)^k x^(c−k) p^(b−k)`.
fn reorder_coeffs(b: u32, c: u32) -> Vec<(u32, FieldElem)> {
    (0..=b.min(c))
        .map(|k| {
            let r = Rat::from_integer(binom(b, k) * falling(c, k));
            (k, minus_i_pow(k).scale(&r))
        })
        .collect()
}

/// Operator polynomial `Σ c_{m,n} x^m p^n` with [`ParamPoly`] coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct OpPoly {
    terms: BTreeMap<OpMonomial, ParamPoly>,
}

impl OpPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::scalar(ParamPoly::one())
    }

    pub fn scalar(c: ParamPoly) -> Self {
        Self::term(0, 0, c)
    }

    pub fn x() -> Self {
        Self::term(1, 0, ParamPoly::one())
    }

    pub fn p() -> Self {
        Self::term(0, 1, ParamPoly::one())
    }

    /// `c · x^m p^n`
    pub fn term(m: u32, n: u32, c: ParamPoly) -> Self {
        let mut o = Self::zero();
        o.add_term(OpMonomial::new(m, n), c);
        o
    }

    /// `c · x^m p^n` with a field constant.
    pub fn mono(m: u32, n: u32, c: FieldElem) -> Self {
        Self::term(m, n, ParamPoly::constant(c))
    }

    pub fn from_terms<I: IntoIterator<Item = (OpMonomial, ParamPoly)>>(it: I) -> Self {
        let mut o = Self::zero();
        for (k, c) in it {
            o.add_term(k, c);
        }
        o
    }

    pub fn add_term(&mut self, k: OpMonomial, c: ParamPoly) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_default();
        e.add_assign_poly(&c);
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&OpMonomial, &ParamPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: u32, n: u32) -> ParamPoly {
        self.terms.get(&OpMonomial::new(m, n)).cloned().unwrap_or_default()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(OpMonomial::degree).max().unwrap_or(0)
    }

    pub fn is_pure_x(&self) -> bool {
        self.terms.keys().all(|k| k.n == 0)
    }

    pub fn map_coeffs<F: FnMut(&ParamPoly) -> ParamPoly>(&self, mut f: F) -> OpPoly {
        OpPoly::from_terms(self.terms.iter().map(|(k, c)| (*k, f(c))))
    }

    pub fn try_map_coeffs<E, F: FnMut(&ParamPoly) -> Result<ParamPoly, E>>(&self, mut f: F) -> Result<OpPoly, E> {
        let mut out = OpPoly::zero();
        for (k, c) in &self.terms {
            out.add_term(*k, f(c)?);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &FieldElem) -> OpPoly {
        self.map_coeffs(|p| p.scale(c))
    }

    pub fn mul_poly(&self, c: &ParamPoly) -> OpPoly {
        self.map_coeffs(|p| p * c)
    }

    pub fn pow(&self, e: u32) -> OpPoly {
        (0..e).fold(OpPoly::one(), |acc, _| normal_product(&acc, self))
    }

    /// Hermitian adjoint: reverses factor order and conjugates coefficients
    /// (symbols are treated as real).
    pub fn adjoint(&self) -> OpPoly {
        let mut out = OpPoly::zero();
        for (k, c) in &self.terms {
            let cc = c.conj();
            for (j, f) in reorder_coeffs(k.n, k.m) {
                out.add_term(OpMonomial::new(k.m - j, k.n - j), cc.scale(&f));
            }
        }
        out
    }

    /// Parity: x → −x, p → −p.
    pub fn parity_apply(&self) -> OpPoly {
        self.map_signed(|k| (k.m + k.n) % 2 == 1, false)
    }

    /// Time reversal: x → x, p → −p, i → −i.
    pub fn t_apply(&self) -> OpPoly {
        self.map_signed(|k| k.n % 2 == 1, true)
    }

    /// Combined PT: x → −x, p → p, i → −i.
    pub fn pt_apply(&self) -> OpPoly {
        self.map_signed(|k| k.m % 2 == 1, true)
    }

    fn map_signed<F: Fn(&OpMonomial) -> bool>(&self, odd: F, conj: bool) -> OpPoly {
        OpPoly::from_terms(self.terms.iter().map(|(k, c)| {
            let c = if conj { c.conj() } else { c.clone() };
            (*k, if odd(k) { -c } else { c })
        }))
    }
}

/// Product `A·B` re-expressed in x-before-p order.
pub fn normal_product(a: &OpPoly, b: &OpPoly) -> OpPoly {
    let mut out = OpPoly::zero();
    for (ka, ca) in &a.terms {
        for (kb, cb) in &b.terms {
            let c = ca * cb;
            for (j, f) in reorder_coeffs(ka.n, kb.m) {
                out.add_term(OpMonomial::new(ka.m + kb.m - j, ka.n + kb.n - j), c.scale(&f));
            }
        }
    }
    out
}

/// `[A, B] = AB − BA`.
pub fn commutator(a: &OpPoly, b: &OpPoly) -> OpPoly {
    &normal_product(a, b) - &normal_product(b, a)
}

impl<'a> Add<&'a OpPoly> for &'a OpPoly {
    type Output = OpPoly;
    fn add(self, o: &OpPoly) -> OpPoly {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(*k, c.clone());
        }
        r
    }
}

impl<'a> Sub<&'a OpPoly> for &'a OpPoly {
    type Output = OpPoly;
    fn sub(self, o: &OpPoly) -> OpPoly {
        let mut r = self.clone();
        for (k, c) in &o.terms {
            r.add_term(*k, -c);
        }
        r
    }
}

impl<'a> Mul<&'a OpPoly> for &'a OpPoly {
    type Output = OpPoly;
    fn mul(self, o: &OpPoly) -> OpPoly {
        normal_product(self, o)
    }
}

impl Add for OpPoly {
    type Output = OpPoly;
    fn add(self, o: OpPoly) -> OpPoly {
        &self + &o
    }
}

impl Sub for OpPoly {
    type Output = OpPoly;
    fn sub(self, o: OpPoly) -> OpPoly {
        &self - &o
    }
}

impl Mul for OpPoly {
    type Output = OpPoly;
    fn mul(self, o: OpPoly) -> OpPoly {
        normal_product(&self, &o)
    }
}

impl Neg for &OpPoly {
    type Output = OpPoly;
    fn neg(self) -> OpPoly {
        self.map_coeffs(|c| -c)
    }
}

impl Neg for OpPoly {
    type Output = OpPoly;
    fn neg(self) -> OpPoly {
        -&self
    }
}

impl fmt::Display for OpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| match (k.m, k.n) {
                (0, 0) => format!("[{c}]"),
                (m, 0) => format!("[{c}] x^{m}"),
                (0, n) => format!("[{c}] p^{n}"),
                (m, n) => format!("[{c}] x^{m} p^{n}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for OpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct OpTermRepr {
    m: u32,
    n: u32,
    coeff: ParamPoly,
}

impl Serialize for OpPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<OpTermRepr> = self.terms.iter().map(|(k, c)| OpTermRepr { m: k.m, n: k.n, coeff: c.clone() }).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for OpPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<OpTermRepr>::deserialize(d)?;
        Ok(OpPoly::from_terms(v.into_iter().map(|t| (OpMonomial::new(t.m, t.n), t.coeff))))
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    fn i() -> FieldElem {
        FieldElem::i()
    }

    fn k(n: i64) -> FieldElem {
        FieldElem::from_int(n)
    }

    #[test]
    fn canonical_commutator() {
        let px = normal_product(&OpPoly::p(), &OpPoly::x());
        assert_eq!(px, &OpPoly::mono(1, 1, k(1)) - &OpPoly::mono(0, 0, i()));
        assert_eq!(commutator(&OpPoly::x(), &OpPoly::p()), OpPoly::mono(0, 0, i()));
    }

    #[test]
    fn p_past_x_cubed() {
        let lhs = normal_product(&OpPoly::p(), &OpPoly::x().pow(3));
        let rhs = &OpPoly::mono(3, 1, k(1)) - &OpPoly::mono(2, 0, k(3) * i());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn factorised_oscillator() {
        // (x + ip)(x − ip) = x² + p² − i[x, p] = x² + p² + 1
        let a = &OpPoly::x() + &OpPoly::mono(0, 1, i());
        let b = &OpPoly::x() - &OpPoly::mono(0, 1, i());
        let expected = &(&OpPoly::mono(2, 0, k(1)) + &OpPoly::mono(0, 2, k(1))) + &OpPoly::one();
        assert_eq!(normal_product(&a, &b), expected);
    }

    #[test]
    fn x_squared_against_p_power() {
        // [x², p²] = 2i·2·p x − 2 = 4i xp + 2 after ordering.
        let lhs = commutator(&OpPoly::x().pow(2), &OpPoly::p().pow(2));
        let px = normal_product(&OpPoly::p(), &OpPoly::x());
        let rhs = &px.scale(&(k(4) * i())) - &OpPoly::mono(0, 0, k(2));
        assert_eq!(lhs, rhs);
        assert_eq!(lhs, &OpPoly::mono(1, 1, k(4) * i()) + &OpPoly::mono(0, 0, k(2)));
    }

    #[test]
    fn adjoint_examples() {
        let s = FieldElem::inv_sqrt2();
        let a = (&OpPoly::x() + &OpPoly::mono(0, 1, i())).scale(&s);
        let ad = (&OpPoly::x() - &OpPoly::mono(0, 1, i())).scale(&s);
        assert_eq!(a.adjoint(), ad);
        let ixp = OpPoly::mono(1, 1, i());
        assert_eq!(ixp.adjoint(), &OpPoly::mono(1, 1, -i()) - &OpPoly::one());
    }

    #[test]
    fn discrete_symmetries() {
        let ix3 = OpPoly::mono(3, 0, i());
        assert_eq!(ix3.pt_apply(), ix3);
        assert_eq!(OpPoly::x().pow(2).parity_apply(), OpPoly::x().pow(2));
        // Shifted oscillator p²/2 + x²/2 + i g x is PT-invariant (g real).
        let h = &(&OpPoly::mono(0, 2, FieldElem::frac(1, 2)) + &OpPoly::mono(2, 0, FieldElem::frac(1, 2))) + &OpPoly::mono(1, 0, i());
        assert_eq!(h.pt_apply(), h);
        // x·p: PT sends it to (−x)(p) with conjugated coefficient.
        assert_eq!(OpPoly::mono(1, 1, k(1)).pt_apply(), OpPoly::mono(1, 1, k(-1)));
        assert_eq!(OpPoly::mono(1, 1, i()).pt_apply(), OpPoly::mono(1, 1, i()));
    }

    pub(crate) fn arb_op(max_deg: u32) -> impl Strategy<Value = OpPoly> {
        proptest::collection::vec((0..=max_deg, 0..=max_deg, -3i64..4, -2i64..3), 0..5).prop_map(move |v| {
            OpPoly::from_terms(
                v.into_iter()
                    .filter(|t| t.0 + t.1 <= max_deg)
                    .map(|(m, n, re, im)| (OpMonomial::new(m, n), ParamPoly::constant(&k(re) + &k(im).mul_i()))),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn adjoint_reverses_products(a in arb_op(4), b in arb_op(4)) {
            prop_assert_eq!(normal_product(&a, &b).adjoint(), normal_product(&b.adjoint(), &a.adjoint()));
            prop_assert_eq!(a.adjoint().adjoint(), a);
        }

        #[test]
        fn product_associative(a in arb_op(3), b in arb_op(3), c in arb_op(3)) {
            let l = normal_product(&normal_product(&a, &b), &c);
            let r = normal_product(&a, &normal_product(&b, &c));
            prop_assert_eq!(l, r);
        }

        #[test]
        fn jacobi(a in arb_op(3), b in arb_op(3), c in arb_op(3)) {
            let t1 = commutator(&a, &commutator(&b, &c));
            let t2 = commutator(&b, &commutator(&c, &a));
            let t3 = commutator(&c, &commutator(&a, &b));
            prop_assert!((&(&t1 + &t2) + &t3).is_zero());
        }
    }
}
