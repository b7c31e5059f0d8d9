//! Creation/annihilation basis: `a = (x + ip)/√2`, `a† = (x − ip)/√2`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::BigInt;

use super::op::{binom, falling, normal_product, OpMonomial, OpPoly};
use crate::error::{Error, Result};
use crate::scalars::{FieldElem, ParamPoly, Rat, Sym};

/// `Σ c_{p,q} a†^p a^q`, normal ordered with a† to the left.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LadderPoly {
    terms: BTreeMap<(u32, u32), ParamPoly>,
}

impl LadderPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::term(0, 0, ParamPoly::one())
    }

    /// Annihilation operator `a`.
    pub fn a() -> Self {
        Self::term(0, 1, ParamPoly::one())
    }

    /// Creation operator `a†`.
    pub fn adag() -> Self {
        Self::term(1, 0, ParamPoly::one())
    }

    /// `c · a†^p a^q`
    pub fn term(p: u32, q: u32, c: ParamPoly) -> Self {
        let mut l = Self::zero();
        l.add_term(p, q, c);
        l
    }

    pub fn mono(p: u32, q: u32, c: FieldElem) -> Self {
        Self::term(p, q, ParamPoly::constant(c))
    }

    pub fn add_term(&mut self, p: u32, q: u32, c: ParamPoly) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((p, q)).or_default();
        e.add_assign_poly(&c);
        if e.is_zero() {
            self.terms.remove(&(p, q));
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

    /// `((p, q), c)` for each term `c · a†^p a^q`.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &ParamPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, p: u32, q: u32) -> ParamPoly {
        self.terms.get(&(p, q)).cloned().unwrap_or_default()
    }

    pub fn map_coeffs<F: FnMut(&ParamPoly) -> ParamPoly>(&self, mut f: F) -> LadderPoly {
        let mut out = LadderPoly::zero();
        for (&(p, q), c) in &self.terms {
            out.add_term(p, q, f(c));
        }
        out
    }

    pub fn scale(&self, c: &FieldElem) -> LadderPoly {
        self.map_coeffs(|p| p.scale(c))
    }

    pub fn pow(&self, e: u32) -> LadderPoly {
        (0..e).fold(LadderPoly::one(), |acc, _| ladder_product(&acc, self))
    }

    pub fn adjoint(&self) -> LadderPoly {
        let mut out = LadderPoly::zero();
        for (&(p, q), c) in &self.terms {
            out.add_term(q, p, c.conj());
        }
        out
    }

    /// Part of charge `k` (terms with `p − q = k`).
    pub fn charge_part(&self, k: i64) -> LadderPoly {
        let mut out = LadderPoly::zero();
        for (&(p, q), c) in &self.terms {
            if p as i64 - q as i64 == k {
                out.add_term(p, q, c.clone());
            }
        }
        out
    }
}

/// Normal-ordered product using `a^q a†^r = Σ_k C(q,k) C(r,k) k! a†^(r−k) a^(q−k)`.
pub fn ladder_product(x: &LadderPoly, y: &LadderPoly) -> LadderPoly {
    let mut out = LadderPoly::zero();
    for (&(p, q), c1) in &x.terms {
        for (&(r, s), c2) in &y.terms {
            let c = c1 * c2;
            for k in 0..=q.min(r) {
                let f: BigInt = binom(q, k) * binom(r, k) * falling(k, k);
                out.add_term(p + r - k, q + s - k, c.scale_rat(&Rat::from_integer(f)));
            }
        }
    }
    out
}

pub fn ladder_commutator(x: &LadderPoly, y: &LadderPoly) -> LadderPoly {
    &ladder_product(x, y) - &ladder_product(y, x)
}

fn powers<T: Clone, F: Fn(&T, &T) -> T>(base: &T, one: T, e: u32, mul: F) -> Vec<T> {
    let mut v = vec![one];
    for _ in 0..e {
        let next = mul(v.last().unwrap(), base);
        v.push(next);
    }
    v
}

/// Rewrites an x, p polynomial in the ladder basis.
pub fn to_ladder(a: &OpPoly) -> LadderPoly {
    let s = FieldElem::inv_sqrt2();
    // x = (a + a†)/√2, p = i(a† − a)/√2
    let x = (&LadderPoly::a() + &LadderPoly::adag()).scale(&s);
    let p = (&LadderPoly::adag() - &LadderPoly::a()).scale(&(FieldElem::i() * s));
    let max_m = a.terms().map(|(k, _)| k.m).max().unwrap_or(0);
    let max_n = a.terms().map(|(k, _)| k.n).max().unwrap_or(0);
    let xs = powers(&x, LadderPoly::one(), max_m, ladder_product);
    let ps = powers(&p, LadderPoly::one(), max_n, ladder_product);
    let mut out = LadderPoly::zero();
    for (k, c) in a.terms() {
        let t = ladder_product(&xs[k.m as usize], &ps[k.n as usize]);
        for (&(pp, qq), tc) in &t.terms {
            out.add_term(pp, qq, tc * c);
        }
    }
    out
}

/// Rewrites a ladder polynomial in normal-ordered x, p form.
pub fn from_ladder(l: &LadderPoly) -> OpPoly {
    let s = FieldElem::inv_sqrt2();
    let a = (&OpPoly::x() + &OpPoly::mono(0, 1, FieldElem::i())).scale(&s);
    let ad = (&OpPoly::x() - &OpPoly::mono(0, 1, FieldElem::i())).scale(&s);
    let max_p = l.terms.keys().map(|k| k.0).max().unwrap_or(0);
    let max_q = l.terms.keys().map(|k| k.1).max().unwrap_or(0);
    let ads = powers(&ad, OpPoly::one(), max_p, normal_product);
    let as_ = powers(&a, OpPoly::one(), max_q, normal_product);
    let mut out = OpPoly::zero();
    for (&(p, q), c) in &l.terms {
        let t = normal_product(&ads[p as usize], &as_[q as usize]);
        for (k, tc) in t.terms() {
            out.add_term(OpMonomial::new(k.m, k.n), tc * c);
        }
    }
    out
}

/// Splits by charge `p − q`; only nonzero sectors are returned.
pub fn charge_decompose(l: &LadderPoly) -> BTreeMap<i64, LadderPoly> {
    let mut out: BTreeMap<i64, LadderPoly> = BTreeMap::new();
    for (&(p, q), c) in &l.terms {
        out.entry(p as i64 - q as i64).or_default().add_term(p, q, c.clone());
    }
    out
}

/// `⟨n|L|n⟩` as a polynomial in the level symbol `n`, for charge-0 `L`.
pub fn diagonal_eigenvalue(l: &LadderPoly) -> Result<ParamPoly> {
    let n = ParamPoly::sym(Sym::Level);
    let mut out = ParamPoly::zero();
    for (&(p, q), c) in &l.terms {
        if p != q {
            return Err(Error::NonDiagonal);
        }
        // a†^p a^p |n⟩ = n(n−1)…(n−p+1)|n⟩
        let ff = (0..p).fold(ParamPoly::one(), |acc, j| &acc * &(&n - &ParamPoly::int(j as i64)));
        out.add_assign_poly(&(&ff * c));
    }
    Ok(out)
}

impl<'a> Add<&'a LadderPoly> for &'a LadderPoly {
    type Output = LadderPoly;
    fn add(self, o: &LadderPoly) -> LadderPoly {
        let mut r = self.clone();
        for (&(p, q), c) in &o.terms {
            r.add_term(p, q, c.clone());
        }
        r
    }
}

impl<'a> Sub<&'a LadderPoly> for &'a LadderPoly {
    type Output = LadderPoly;
    fn sub(self, o: &LadderPoly) -> LadderPoly {
        let mut r = self.clone();
        for (&(p, q), c) in &o.terms {
            r.add_term(p, q, -c);
        }
        r
    }
}

impl<'a> Mul<&'a LadderPoly> for &'a LadderPoly {
    type Output = LadderPoly;
    fn mul(self, o: &LadderPoly) -> LadderPoly {
        ladder_product(self, o)
    }
}

impl Neg for &LadderPoly {
    type Output = LadderPoly;
    fn neg(self) -> LadderPoly {
        self.map_coeffs(|c| -c)
    }
}

impl fmt::Display for LadderPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(&(p, q), c)| format!("[{c}] a†^{p} a^{q}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for LadderPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
