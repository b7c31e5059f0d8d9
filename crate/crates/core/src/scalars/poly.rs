//! Sparse multivariate polynomials over Q(i, √2) in named symbols.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::field::{FieldElem, Rat};
use super::sym::Sym;
use crate::error::{Error, Result};

/// Monomial `∏ sym^exp`, stored sorted by symbol with no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct Monomial(Vec<(Sym, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(s: Sym, e: u32) -> Self {
        if e == 0 {
            Self::one()
        } else {
            Monomial(vec![(s, e)])
        }
    }

    pub fn from_pairs(mut pairs: Vec<(Sym, u32)>) -> Self {
        pairs.retain(|p| p.1 > 0);
        pairs.sort_by_key(|p| p.0);
        let mut out: Vec<(Sym, u32)> = Vec::with_capacity(pairs.len());
        for (s, e) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == s => last.1 += e,
                _ => out.push((s, e)),
            }
        }
        Monomial(out)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, s: Sym) -> u32 {
        self.0.iter().find(|p| p.0 == s).map_or(0, |p| p.1)
    }

    pub fn pairs(&self) -> &[(Sym, u32)] {
        &self.0
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(self.0.len() + o.0.len());
        while i < self.0.len() && j < o.0.len() {
            let (a, b) = (self.0[i], o.0[j]);
            match a.0.cmp(&b.0) {
                Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&o.0[j..]);
        Monomial(out)
    }

    /// `self / o` when `o` divides `self`.
    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for &(s, e) in &self.0 {
            if j < o.0.len() && o.0[j].0 == s {
                let oe = o.0[j].1;
                if oe > e {
                    return None;
                }
                if e > oe {
                    out.push((s, e - oe));
                }
                j += 1;
            } else if j < o.0.len() && o.0[j].0 < s {
                return None;
            } else {
                out.push((s, e));
            }
        }
        (j == o.0.len()).then_some(Monomial(out))
    }

    /// Removes `s` from the monomial, returning its exponent.
    pub fn without(&self, s: Sym) -> (Monomial, u32) {
        let e = self.exponent(s);
        (Monomial(self.0.iter().copied().filter(|p| p.0 != s).collect()), e)
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then the exponent of the
    /// earliest symbol decides.
    fn cmp(&self, o: &Self) -> Ordering {
        match self.degree().cmp(&o.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.0.iter().zip(o.0.iter()) {
            if a.0 != b.0 {
                return if a.0 < b.0 { Ordering::Greater } else { Ordering::Less };
            }
            if a.1 != b.1 {
                return a.1.cmp(&b.1);
            }
        }
        self.0.len().cmp(&o.0.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self.0.iter().map(|(s, e)| if *e == 1 { s.to_string() } else { format!("{s}^{e}") }).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Polynomial in [`Sym`]s with [`FieldElem`] coefficients. Zero
/// coefficients are never stored, so structural equality is equality.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ParamPoly {
    terms: BTreeMap<Monomial, FieldElem>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(FieldElem::one())
    }

    pub fn constant(c: FieldElem) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::one(), c);
        p
    }

    pub fn int(n: i64) -> Self {
        Self::constant(FieldElem::from_int(n))
    }

    pub fn rational(r: Rat) -> Self {
        Self::constant(FieldElem::from_rat(r))
    }

    pub fn sym(s: Sym) -> Self {
        Self::term(FieldElem::one(), Monomial::var(s, 1))
    }

    pub fn term(c: FieldElem, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
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

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &FieldElem)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Monomial, FieldElem)> {
        self.terms.into_iter()
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, FieldElem)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c · m · other`
    pub fn add_scaled(&mut self, other: &ParamPoly, c: &FieldElem, m: &Monomial) {
        if c.is_zero() {
            return;
        }
        for (om, oc) in &other.terms {
            self.add_term(om.mul(m), oc * c);
        }
    }

    pub fn add_assign_poly(&mut self, other: &ParamPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub_assign_poly(&mut self, other: &ParamPoly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), -c);
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The value if this polynomial is a constant.
    pub fn as_constant(&self) -> Option<FieldElem> {
        if self.terms.is_empty() {
            return Some(FieldElem::zero());
        }
        if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn constant_term(&self) -> FieldElem {
        self.terms.get(&Monomial::one()).cloned().unwrap_or_default()
    }

    pub fn coeff(&self, m: &Monomial) -> FieldElem {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<(&Monomial, &FieldElem)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, s: Sym) -> u32 {
        self.terms.keys().map(|m| m.exponent(s)).max().unwrap_or(0)
    }

    pub fn symbols(&self) -> BTreeSet<Sym> {
        self.terms.keys().flat_map(|m| m.pairs().iter().map(|p| p.0)).collect()
    }

    pub fn contains_sym(&self, s: Sym) -> bool {
        self.terms.keys().any(|m| m.exponent(s) > 0)
    }

    pub fn scale(&self, c: &FieldElem) -> ParamPoly {
        if c.is_zero() {
            return Self::zero();
        }
        ParamPoly { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn scale_rat(&self, r: &Rat) -> ParamPoly {
        self.scale(&FieldElem::from_rat(r.clone()))
    }

    pub fn pow(&self, e: u32) -> ParamPoly {
        let mut acc = ParamPoly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Complex conjugation of the coefficients; every symbol is treated as real.
    pub fn conj(&self) -> ParamPoly {
        ParamPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect() }
    }

    /// Real part, all symbols taken as real.
    pub fn re(&self) -> ParamPoly {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c.re())))
    }

    /// Imaginary part, all symbols taken as real.
    pub fn im(&self) -> ParamPoly {
        Self::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), c.im())))
    }

    /// Collects by powers of `s`: `self = Σ_k out[k] · s^k`.
    pub fn split_by(&self, s: Sym) -> BTreeMap<u32, ParamPoly> {
        let mut out: BTreeMap<u32, ParamPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (rest, e) = m.without(s);
            out.entry(e).or_default().add_term(rest, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Collects by the monomials in the given symbols; the values carry
    /// the remaining symbols.
    pub fn split_by_syms(&self, syms: &BTreeSet<Sym>) -> BTreeMap<Monomial, ParamPoly> {
        let mut out: BTreeMap<Monomial, ParamPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (inner, outer): (Vec<_>, Vec<_>) = m.pairs().iter().partition(|p| syms.contains(&p.0));
            out.entry(Monomial(inner)).or_default().add_term(Monomial(outer), c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Substitutes a single symbol.
    pub fn subst1(&self, s: Sym, value: &ParamPoly) -> ParamPoly {
        if !self.contains_sym(s) {
            return self.clone();
        }
        let mut powers: Vec<ParamPoly> = vec![ParamPoly::one()];
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            let (rest, e) = m.without(s);
            while powers.len() <= e as usize {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            out.add_scaled(&powers[e as usize], c, &rest);
        }
        out
    }

    /// Evaluates every bound symbol to a constant.
    pub fn eval_syms(&self, values: &BTreeMap<Sym, FieldElem>) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut rest = Vec::new();
            for &(s, e) in m.pairs() {
                match values.get(&s) {
                    Some(v) => coef = &coef * &v.pow(e),
                    None => rest.push((s, e)),
                }
            }
            out.add_term(Monomial(rest), coef);
        }
        out
    }

    /// Exact division. Returns `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &ParamPoly) -> Option<ParamPoly> {
        let (lm, lc) = d.leading()?;
        let lc_inv = lc.inverse().ok()?;
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.inverse().ok()?));
        }
        let mut rem = self.clone();
        let mut quot = ParamPoly::zero();
        while let Some((rm, rc)) = rem.leading() {
            let qm = rm.div(lm)?;
            let qc = rc * &lc_inv;
            rem.add_scaled(d, &(-&qc), &qm);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }
}

/// Simultaneous substitution of symbols by polynomials.
///
/// Bound symbols that occur in another binding's right-hand side are
/// resolved transitively; a cycle (including a self reference) is rejected.
pub fn poly_substitute(p: &ParamPoly, bindings: &BTreeMap<Sym, ParamPoly>) -> Result<ParamPoly> {
    let resolved = resolve_bindings(bindings)?;
    Ok(substitute_resolved(p, &resolved))
}

fn resolve_bindings(bindings: &BTreeMap<Sym, ParamPoly>) -> Result<BTreeMap<Sym, ParamPoly>> {
    // Depth-first resolution with cycle detection.
    fn visit(s: Sym, bindings: &BTreeMap<Sym, ParamPoly>, done: &mut BTreeMap<Sym, ParamPoly>, stack: &mut Vec<Sym>) -> Result<()> {
        if done.contains_key(&s) {
            return Ok(());
        }
        if stack.contains(&s) {
            return Err(Error::CyclicBinding(s.to_string()));
        }
        stack.push(s);
        let rhs = &bindings[&s];
        let deps: Vec<Sym> = rhs.symbols().into_iter().filter(|d| bindings.contains_key(d)).collect();
        for d in &deps {
            visit(*d, bindings, done, stack)?;
        }
        let mut value = rhs.clone();
        for d in deps {
            value = value.subst1(d, &done[&d]);
        }
        stack.pop();
        done.insert(s, value);
        Ok(())
    }

    let mut done = BTreeMap::new();
    for s in bindings.keys() {
        visit(*s, bindings, &mut done, &mut Vec::new())?;
    }
    Ok(done)
}

fn substitute_resolved(p: &ParamPoly, resolved: &BTreeMap<Sym, ParamPoly>) -> ParamPoly {
    let bound: BTreeSet<Sym> = resolved.keys().copied().collect();
    let mut power_cache: BTreeMap<(Sym, u32), ParamPoly> = BTreeMap::new();
    let mut out = ParamPoly::zero();
    for (m, c) in p.terms() {
        let mut acc = ParamPoly::one();
        let mut rest = Vec::new();
        for &(s, e) in m.pairs() {
            if bound.contains(&s) {
                let pw = power_cache.entry((s, e)).or_insert_with(|| resolved[&s].pow(e));
                acc = &acc * pw;
            } else {
                rest.push((s, e));
            }
        }
        out.add_scaled(&acc, c, &Monomial(rest));
    }
    out
}

impl<'a> Add<&'a ParamPoly> for &'a ParamPoly {
    type Output = ParamPoly;
    fn add(self, o: &ParamPoly) -> ParamPoly {
        let mut r = self.clone();
        r.add_assign_poly(o);
        r
    }
}

impl<'a> Sub<&'a ParamPoly> for &'a ParamPoly {
    type Output = ParamPoly;
    fn sub(self, o: &ParamPoly) -> ParamPoly {
        let mut r = self.clone();
        r.sub_assign_poly(o);
        r
    }
}

impl<'a> Mul<&'a ParamPoly> for &'a ParamPoly {
    type Output = ParamPoly;
    fn mul(self, o: &ParamPoly) -> ParamPoly {
        let mut r = ParamPoly::zero();
        for (m, c) in &o.terms {
            r.add_scaled(self, c, m);
        }
        r
    }
}

impl Add for ParamPoly {
    type Output = ParamPoly;
    fn add(mut self, o: ParamPoly) -> ParamPoly {
        self.add_assign_poly(&o);
        self
    }
}

impl Sub for ParamPoly {
    type Output = ParamPoly;
    fn sub(mut self, o: ParamPoly) -> ParamPoly {
        self.sub_assign_poly(&o);
        self
    }
}

impl Mul for ParamPoly {
    type Output = ParamPoly;
    fn mul(self, o: ParamPoly) -> ParamPoly {
        &self * &o
    }
}

impl Neg for ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly { terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect() }
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl From<FieldElem> for ParamPoly {
    fn from(c: FieldElem) -> Self {
        ParamPoly::constant(c)
    }
}

impl From<Sym> for ParamPoly {
    fn from(s: Sym) -> Self {
        ParamPoly::sym(s)
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.terms.iter().rev().map(|(m, c)| if m.is_one() { format!("({c})") } else { format!("({c})*{m}") }).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    mono: BTreeMap<String, u32>,
    coeff: FieldElem,
}

impl Serialize for ParamPoly {
    /// Array of `{"mono": {sym: exp}, "coeff": FieldElem}`, ascending in
    /// the canonical monomial order.
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(m, c)| TermRepr { mono: m.pairs().iter().map(|(s, e)| (s.name(), *e)).collect(), coeff: c.clone() })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ParamPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<TermRepr>::deserialize(d)?;
        let mut p = ParamPoly::zero();
        for t in v {
            let mut pairs = Vec::new();
            for (name, e) in t.mono {
                pairs.push((name.parse::<Sym>().map_err(serde::de::Error::custom)?, e));
            }
            p.add_term(Monomial::from_pairs(pairs), t.coeff);
        }
        Ok(p)
    }
}
