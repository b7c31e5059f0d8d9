//! Finite Laurent series in the coupling g.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::field::FieldElem;
use super::poly::ParamPoly;

/// `Σ_{k} coeffs[k] · g^(lo + k)`.
///
/// The lowest stored coefficient is nonzero unless the series is zero
/// (then `coeffs` is empty and `lo` is 0). Trailing zeros are trimmed.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct GSeries {
    lo: i64,
    coeffs: Vec<ParamPoly>,
}

impl GSeries {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(ParamPoly::one())
    }

    pub fn constant(p: ParamPoly) -> Self {
        Self::monomial(p, 0)
    }

    /// `p · g^k`
    pub fn monomial(p: ParamPoly, k: i64) -> Self {
        Self::from_coeffs(k, vec![p])
    }

    pub fn from_coeffs(lo: i64, coeffs: Vec<ParamPoly>) -> Self {
        let mut s = GSeries { lo, coeffs };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(ParamPoly::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.lo += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.lo = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Lowest exponent with a nonzero coefficient (0 for the zero series).
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn hi(&self) -> i64 {
        self.lo + self.coeffs.len() as i64 - 1
    }

    /// Coefficient of `g^k`.
    pub fn coeff(&self, k: i64) -> ParamPoly {
        let idx = k - self.lo;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            ParamPoly::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    pub fn coeff_ref(&self, k: i64) -> Option<&ParamPoly> {
        let idx = k - self.lo;
        if idx < 0 {
            None
        } else {
            self.coeffs.get(idx as usize)
        }
    }

    /// Nonzero `(exponent, coefficient)` pairs in increasing exponent.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &ParamPoly)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(k, c)| (self.lo + k as i64, c))
    }

    /// Drops every term above `g^order`.
    pub fn truncate(&self, order: i64) -> GSeries {
        if self.is_zero() || order >= self.hi() {
            return self.clone();
        }
        if order < self.lo {
            return GSeries::zero();
        }
        GSeries::from_coeffs(self.lo, self.coeffs[..=(order - self.lo) as usize].to_vec())
    }

    /// Multiplies by `g^k`.
    pub fn shift(&self, k: i64) -> GSeries {
        if self.is_zero() {
            return self.clone();
        }
        GSeries { lo: self.lo + k, coeffs: self.coeffs.clone() }
    }

    pub fn add(&self, o: &GSeries) -> GSeries {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let lo = self.lo.min(o.lo);
        let hi = self.hi().max(o.hi());
        let coeffs = (lo..=hi)
            .map(|k| match (self.coeff_ref(k), o.coeff_ref(k)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => ParamPoly::zero(),
            })
            .collect();
        GSeries::from_coeffs(lo, coeffs)
    }

    pub fn sub(&self, o: &GSeries) -> GSeries {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> GSeries {
        self.map(|c| -c)
    }

    pub fn scale(&self, c: &FieldElem) -> GSeries {
        self.map(|p| p.scale(c))
    }

    pub fn mul_poly(&self, p: &ParamPoly) -> GSeries {
        self.map(|c| c * p)
    }

    /// Applies `f` to every coefficient.
    pub fn map<F: FnMut(&ParamPoly) -> ParamPoly>(&self, mut f: F) -> GSeries {
        GSeries::from_coeffs(self.lo, self.coeffs.iter().map(&mut f).collect())
    }

    pub fn try_map<E, F: FnMut(&ParamPoly) -> Result<ParamPoly, E>>(&self, f: F) -> Result<GSeries, E> {
        Ok(GSeries::from_coeffs(self.lo, self.coeffs.iter().map(f).collect::<Result<_, E>>()?))
    }
}

/// Cauchy product of two Laurent series, keeping exponents `≤ work_order`.
pub fn laurent_mul(x: &GSeries, y: &GSeries, work_order: i64) -> GSeries {
    if x.is_zero() || y.is_zero() {
        return GSeries::zero();
    }
    let lo = x.lo + y.lo;
    let hi = (x.hi() + y.hi()).min(work_order);
    if hi < lo {
        return GSeries::zero();
    }
    let mut coeffs = vec![ParamPoly::zero(); (hi - lo + 1) as usize];
    for (i, a) in x.coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in y.coeffs.iter().enumerate() {
            let k = i + j;
            if k >= coeffs.len() {
                break;
            }
            if !b.is_zero() {
                coeffs[k].add_assign_poly(&(a * b));
            }
        }
    }
    GSeries::from_coeffs(lo, coeffs)
}

impl fmt::Display for GSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.iter().map(|(k, c)| format!("[{c}] g^{k}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for GSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesTerm {
    g_power: i64,
    poly: ParamPoly,
}

impl Serialize for GSeries {
    /// Array of `{"g_power": k, "poly": ParamPoly}` for the nonzero terms.
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<SeriesTerm> = self.iter().map(|(k, c)| SeriesTerm { g_power: k, poly: c.clone() }).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for GSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<SeriesTerm>::deserialize(d)?;
        Ok(v.into_iter().fold(GSeries::zero(), |acc, t| acc.add(&GSeries::monomial(t.poly, t.g_power))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::sym::Sym;
    use proptest::prelude::*;

    fn c(n: i64) -> ParamPoly {
        ParamPoly::int(n)
    }

    #[test]
    fn inverse_powers_cancel() {
        let x = GSeries::monomial(c(1), -1);
        let y = GSeries::monomial(c(1), 1);
        assert_eq!(laurent_mul(&x, &y, 5), GSeries::one());
    }

    #[test]
    fn symbolic_product_truncated() {
        let x = GSeries::from_coeffs(-1, vec![ParamPoly::sym(Sym::Energy(0)), ParamPoly::sym(Sym::Energy(1))]);
        let y = GSeries::monomial(c(1), 1);
        let expected = GSeries::from_coeffs(0, vec![ParamPoly::sym(Sym::Energy(0)), ParamPoly::sym(Sym::Energy(1))]);
        assert_eq!(laurent_mul(&x, &y, 1), expected);
        assert_eq!(laurent_mul(&x, &y, 0), GSeries::constant(ParamPoly::sym(Sym::Energy(0))));
    }

    #[test]
    fn cubic_sum_identity() {
        // (1 + g)(1 − g + g²) = 1 + g³, so nothing survives between g¹ and g².
        let x = GSeries::from_coeffs(0, vec![c(1), c(1)]);
        let y = GSeries::from_coeffs(0, vec![c(1), c(-1), c(1)]);
        assert_eq!(laurent_mul(&x, &y, 2), GSeries::one());
        assert_eq!(laurent_mul(&x, &y, 3), GSeries::from_coeffs(0, vec![c(1), c(0), c(0), c(1)]));
    }

    #[test]
    fn normalisation_trims_zeros() {
        let s = GSeries::from_coeffs(-2, vec![c(0), c(3), c(0)]);
        assert_eq!(s.lo(), -1);
        assert_eq!(s.hi(), -1);
        assert!(GSeries::from_coeffs(4, vec![c(0)]).is_zero());
    }

    fn arb_series() -> impl Strategy<Value = GSeries> {
        (-2i64..2, proptest::collection::vec(-5i64..5, 0..4)).prop_map(|(lo, v)| GSeries::from_coeffs(lo, v.into_iter().map(c).collect()))
    }

    proptest! {
        #[test]
        fn mul_commutative_and_associative(a in arb_series(), b in arb_series(), d in arb_series(), w in -2i64..4) {
            prop_assert_eq!(laurent_mul(&a, &b, w), laurent_mul(&b, &a, w));
            // Truncation is compatible with association when inputs have lo ≥ -2:
            // use an exact working order for the inner product, then truncate.
            let big = i64::MAX / 4;
            let lhs = laurent_mul(&laurent_mul(&a, &b, big), &d, w);
            let rhs = laurent_mul(&a, &laurent_mul(&b, &d, big), w);
            prop_assert_eq!(lhs, rhs);
        }
    }
}
