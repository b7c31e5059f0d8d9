//! Exact rationals and the coefficient field Q(i, √2).

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn rat_to_string(r: &Rat) -> String {
    r.to_string()
}

pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| Error::Parse(format!("bad rational numerator in {s:?}")))?;
    let d: BigInt = den.parse().map_err(|_| Error::Parse(format!("bad rational denominator in {s:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(n, d))
}

/// Element `a + b√2 + c·i + d·i√2` of Q(i, √2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct FieldElem {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

// (p + q√2)(r + s√2)
fn mul_sqrt2(p: &Rat, q: &Rat, r: &Rat, s: &Rat) -> (Rat, Rat) {
    let two = rat_int(2);
    (p * r + &two * q * s, p * s + q * r)
}

impl FieldElem {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Self {
        FieldElem { a, b, c, d }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_rat(Rat::one())
    }

    pub fn from_rat(a: Rat) -> Self {
        FieldElem { a, ..Default::default() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rat_int(n))
    }

    pub fn frac(n: i64, d: i64) -> Self {
        Self::from_rat(rat(n, d))
    }

    pub fn i() -> Self {
        FieldElem { c: Rat::one(), ..Default::default() }
    }

    pub fn sqrt2() -> Self {
        FieldElem { b: Rat::one(), ..Default::default() }
    }

    /// `1/√2 = √2/2`
    pub fn inv_sqrt2() -> Self {
        FieldElem { b: rat(1, 2), ..Default::default() }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.c.is_zero() && self.d.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        self.is_rational().then_some(&self.a)
    }

    /// Complex conjugation `i → −i`; fixes √2.
    pub fn conj(&self) -> Self {
        FieldElem { a: self.a.clone(), b: self.b.clone(), c: -&self.c, d: -&self.d }
    }

    /// Real part `a + b√2`.
    pub fn re(&self) -> Self {
        FieldElem { a: self.a.clone(), b: self.b.clone(), ..Default::default() }
    }

    /// Imaginary part `c + d√2` (as a real element).
    pub fn im(&self) -> Self {
        FieldElem { a: self.c.clone(), b: self.d.clone(), ..Default::default() }
    }

    pub fn mul_i(&self) -> Self {
        FieldElem { a: -&self.c, b: -&self.d, c: self.a.clone(), d: self.b.clone() }
    }

    pub fn scale(&self, r: &Rat) -> Self {
        FieldElem { a: &self.a * r, b: &self.b * r, c: &self.c * r, d: &self.d * r }
    }

    pub fn inverse(&self) -> Result<Self> {
        field_inverse(self)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = FieldElem::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Square root of a non-negative rational of the form `r²` or `2r²`,
    /// returned in Q(√2). Used for ladder normalisation constants.
    pub fn sqrt_of_rational(q: &Rat) -> Option<Self> {
        if q.is_negative() {
            return None;
        }
        if let Some(r) = rational_sqrt(q) {
            return Some(Self::from_rat(r));
        }
        // q = 2 r²  ⇒ √q = r√2
        let half = q / rat_int(2);
        rational_sqrt(&half).map(|r| FieldElem { b: r, ..Default::default() })
    }
}

fn integer_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

fn rational_sqrt(q: &Rat) -> Option<Rat> {
    let n = integer_sqrt(q.numer())?;
    let d = integer_sqrt(q.denom())?;
    Some(Rat::new(n, d))
}

/// Multiplicative inverse in Q(i, √2).
pub fn field_inverse(z: &FieldElem) -> Result<FieldElem> {
    if z.is_zero() {
        return Err(Error::DivisionByZero);
    }
    // z = u + i v with u, v ∈ Q(√2); 1/z = (u − i v) / (u² + v²).
    let (u2a, u2b) = mul_sqrt2(&z.a, &z.b, &z.a, &z.b);
    let (v2a, v2b) = mul_sqrt2(&z.c, &z.d, &z.c, &z.d);
    let (p, q) = (u2a + v2a, u2b + v2b);
    // 1/(p + q√2) = (p − q√2)/(p² − 2q²)
    let norm = &p * &p - rat_int(2) * &q * &q;
    let (ip, iq) = (&p / &norm, -(&q / &norm));
    let (a, b) = mul_sqrt2(&z.a, &z.b, &ip, &iq);
    let (c, d) = mul_sqrt2(&(-&z.c), &(-&z.d), &ip, &iq);
    Ok(FieldElem { a, b, c, d })
}

pub fn conjugate(z: &FieldElem) -> FieldElem {
    z.conj()
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, o: &FieldElem) -> FieldElem {
        FieldElem { a: &self.a + &o.a, b: &self.b + &o.b, c: &self.c + &o.c, d: &self.d + &o.d }
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, o: &FieldElem) -> FieldElem {
        FieldElem { a: &self.a - &o.a, b: &self.b - &o.b, c: &self.c - &o.c, d: &self.d - &o.d }
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, o: &FieldElem) -> FieldElem {
        // Fast paths: most coefficients are purely rational.
        if o.is_rational() {
            return self.scale(&o.a);
        }
        if self.is_rational() {
            return o.scale(&self.a);
        }
        let (uu_a, uu_b) = mul_sqrt2(&self.a, &self.b, &o.a, &o.b);
        let (vv_a, vv_b) = mul_sqrt2(&self.c, &self.d, &o.c, &o.d);
        let (uv_a, uv_b) = mul_sqrt2(&self.a, &self.b, &o.c, &o.d);
        let (vu_a, vu_b) = mul_sqrt2(&self.c, &self.d, &o.a, &o.b);
        FieldElem { a: uu_a - vv_a, b: uu_b - vv_b, c: uv_a + vu_a, d: uv_b + vu_b }
    }
}

impl Add for FieldElem {
    type Output = FieldElem;
    fn add(self, o: FieldElem) -> FieldElem {
        &self + &o
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, o: FieldElem) -> FieldElem {
        &self - &o
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;
    fn mul(self, o: FieldElem) -> FieldElem {
        &self * &o
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { a: -self.a, b: -self.b, c: -self.c, d: -self.d }
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { a: -&self.a, b: -&self.b, c: -&self.c, d: -&self.d }
    }
}

impl AddAssign<&FieldElem> for FieldElem {
    fn add_assign(&mut self, o: &FieldElem) {
        self.a += &o.a;
        self.b += &o.b;
        self.c += &o.c;
        self.d += &o.d;
    }
}

impl SubAssign<&FieldElem> for FieldElem {
    fn sub_assign(&mut self, o: &FieldElem) {
        self.a -= &o.a;
        self.b -= &o.b;
        self.c -= &o.c;
        self.d -= &o.d;
    }
}

impl From<i64> for FieldElem {
    fn from(n: i64) -> Self {
        FieldElem::from_int(n)
    }
}

impl From<Rat> for FieldElem {
    fn from(r: Rat) -> Self {
        FieldElem::from_rat(r)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts = [(&self.a, ""), (&self.b, "√2"), (&self.c, "i"), (&self.d, "i√2")];
        let mut wrote = false;
        for (r, unit) in parts {
            if r.is_zero() {
                continue;
            }
            let s = if unit.is_empty() {
                r.to_string()
            } else if r.is_one() {
                unit.to_string()
            } else if *r == -Rat::one() {
                format!("-{unit}")
            } else {
                format!("{r}{unit}")
            };
            if wrote && !s.starts_with('-') {
                write!(f, "+")?;
            }
            write!(f, "{s}")?;
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct FieldElemRepr {
    a: String,
    b: String,
    c: String,
    d: String,
}

impl Serialize for FieldElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FieldElemRepr { a: rat_to_string(&self.a), b: rat_to_string(&self.b), c: rat_to_string(&self.c), d: rat_to_string(&self.d) }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = FieldElemRepr::deserialize(d)?;
        let p = |s: &str| parse_rat(s).map_err(serde::de::Error::custom);
        Ok(FieldElem { a: p(&r.a)?, b: p(&r.b)?, c: p(&r.c)?, d: p(&r.d)? })
    }
}
