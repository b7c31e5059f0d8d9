//! Arithmetic modulo a fixed 62-bit prime, used to plan exact solves.
//!
//! The prime is 1 mod 8, so both i and √2 have images in F_p and every
//! element of Q(i, √2) whose denominators avoid p maps homomorphically.

use num::{Integer, ToPrimitive};

use super::field::{FieldElem, Rat};
use super::poly::ParamPoly;
use super::sym::Sym;

pub const P: u64 = 4_611_686_018_427_387_817;
const I: u64 = 4_490_822_397_581_186_023;
const SQRT2: u64 = 1_258_367_634_252_069_079;

pub fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

pub fn sub(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

pub fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

pub fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

/// Inverse of a nonzero element.
pub fn inv(a: u64) -> u64 {
    debug_assert!(a != 0);
    pow(a, P - 2)
}

fn rat_mod(r: &Rat) -> Option<u64> {
    let m = num::BigInt::from(P);
    let n = r.numer().mod_floor(&m).to_u64()?;
    let d = r.denom().mod_floor(&m).to_u64()?;
    (d != 0).then(|| mul(n, inv(d)))
}

/// Image of a field element; `None` when a denominator vanishes mod p.
pub fn reduce(z: &FieldElem) -> Option<u64> {
    let i_s = mul(I, SQRT2);
    let parts = [(&z.a, 1), (&z.b, SQRT2), (&z.c, I), (&z.d, i_s)];
    let mut acc = 0;
    for (r, unit) in parts {
        acc = add(acc, mul(rat_mod(r)?, unit));
    }
    Some(acc)
}

/// Dense polynomial over F_p, constant term first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UPolyP(pub Vec<u64>);

impl UPolyP {
    pub fn constant(c: u64) -> Self {
        UPolyP(vec![c]).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    /// Reads a polynomial in `s` alone; `None` if other symbols occur or a
    /// coefficient does not reduce.
    pub fn from_param(p: &ParamPoly, s: Sym) -> Option<Self> {
        let mut out = vec![0; p.degree_in(s) as usize + 1];
        for (m, c) in p.terms() {
            let (rest, e) = m.without(s);
            if !rest.is_one() {
                return None;
            }
            out[e as usize] = reduce(c)?;
        }
        Some(UPolyP(out).trimmed())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    fn lead(&self) -> u64 {
        *self.0.last().unwrap_or(&0)
    }

    pub fn is_one(&self) -> bool {
        self.0 == [1]
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        UPolyP((0..n).map(|k| add(*self.0.get(k).unwrap_or(&0), *o.0.get(k).unwrap_or(&0))).collect()).trimmed()
    }

    pub fn neg(&self) -> Self {
        UPolyP(self.0.iter().map(|c| sub(0, *c)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UPolyP::default();
        }
        let mut out = vec![0; self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = add(out[i + j], mul(*a, *b));
            }
        }
        UPolyP(out).trimmed()
    }

    pub fn scale(&self, c: u64) -> Self {
        UPolyP(self.0.iter().map(|a| mul(*a, c)).collect()).trimmed()
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree();
        if self.0.len() < d.0.len() {
            return (UPolyP::default(), self.clone());
        }
        let li = inv(d.lead());
        let mut rem = self.0.clone();
        let mut quot = vec![0; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = mul(rem[k + dd], li);
            if q == 0 {
                continue;
            }
            for (j, c) in d.0.iter().enumerate() {
                rem[k + j] = sub(rem[k + j], mul(q, *c));
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (UPolyP(quot).trimmed(), UPolyP(rem).trimmed())
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.scale(inv(a.lead()))
        }
    }
}

/// Rational function over F_p in lowest terms, monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFnP {
    pub num: UPolyP,
    pub den: UPolyP,
}

impl RatFnP {
    pub fn zero() -> Self {
        RatFnP { num: UPolyP::default(), den: UPolyP::constant(1) }
    }

    pub fn from_poly(p: UPolyP) -> Self {
        RatFnP { num: p, den: UPolyP::constant(1) }
    }

    pub fn new(num: UPolyP, den: UPolyP) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let (n, d) = if den.degree() == 0 {
            (num, den)
        } else {
            let g = num.gcd(&den);
            (num.divrem(&g).0, den.divrem(&g).0)
        };
        let li = inv(d.lead());
        RatFnP { num: n.scale(li), den: d.scale(li) }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.den.is_one() && self.num.degree() == 0
    }

    pub fn weight(&self) -> usize {
        self.num.degree() + self.den.degree()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return RatFnP::new(self.num.add(&o.num), self.den.clone());
        }
        RatFnP::new(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&RatFnP { num: o.num.neg(), den: o.den.clone() })
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        RatFnP::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    /// `self / o` for nonzero `o`.
    pub fn div(&self, o: &Self) -> Self {
        RatFnP::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }
}
