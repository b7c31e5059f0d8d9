//! Perturbative moment tables: every `⟨x^m p^n⟩` as a power series in g
//! whose coefficients are polynomials in the energy coefficients `E0, E1, …`.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::problem::ProblemSpec;
use super::recursion::{LinForm, Recursions};
use super::MomentKey;
use crate::error::{Error, Result};
use crate::scalars::{laurent_mul, linsolve, GSeries, LinSys, ParamPoly, Sym};
use crate::weyl::{GradedOp, OpPoly};

fn key(m: u32, n: u32) -> MomentKey {
    MomentKey { m, n }
}

/// `E = Σ_r E_r g^r`, with powers cached per truncation order.
struct EnergyExpander {
    cache: HashMap<(u32, i64), GSeries>,
}

impl EnergyExpander {
    fn new() -> Self {
        EnergyExpander { cache: HashMap::new() }
    }

    fn energy_series(max_power: i64) -> GSeries {
        let n = max_power.max(0) as u32;
        GSeries::from_coeffs(0, (0..=n).map(|r| ParamPoly::sym(Sym::Energy(r))).collect())
    }

    fn power(&mut self, e: u32, max_power: i64) -> GSeries {
        if e == 0 {
            return if max_power >= 0 { GSeries::one() } else { GSeries::zero() };
        }
        if let Some(s) = self.cache.get(&(e, max_power)) {
            return s.clone();
        }
        let prev = self.power(e - 1, max_power);
        let s = laurent_mul(&prev, &Self::energy_series(max_power), max_power);
        self.cache.insert((e, max_power), s.clone());
        s
    }

    /// Substitutes the energy series into a coefficient that is polynomial
    /// in the full energy `E`, keeping powers of g up to `max_power`.
    fn expand(&mut self, c: &GSeries, max_power: i64) -> GSeries {
        let mut out = GSeries::zero();
        for (s, poly) in c.iter() {
            if s > max_power {
                break;
            }
            for (e, a) in poly.split_by(Sym::EnergyFull) {
                let pw = self.power(e, max_power - s);
                out = out.add(&pw.mul_poly(&a).shift(s));
            }
        }
        out
    }
}

/// Moments of one problem through a fixed order in g.
///
/// At order `l` every moment of total degree up to `degree_caps[l]` is
/// available. Caps decrease with the order because higher-order
/// coefficients of low moments draw on lower-order coefficients of higher
/// moments.
#[derive(Clone, Debug)]
pub struct MomentTable {
    problem: ProblemSpec,
    order: usize,
    basis: Vec<MomentKey>,
    degree_caps: Vec<u32>,
    entries: BTreeMap<MomentKey, Vec<ParamPoly>>,
}

impl MomentTable {
    /// Builds the table so that moments of degree `required[l]` are present
    /// at order `l`.
    pub fn build(problem: &ProblemSpec, order: usize, required: &[u32]) -> Result<MomentTable> {
        problem.validate()?;
        let step = problem.perturbation_degree().saturating_sub(2);
        let caps: Vec<u32> = (0..=order)
            .map(|l| (l..=order).map(|v| required.get(v).copied().unwrap_or(0) + (v - l) as u32 * step).max().unwrap_or(0))
            .collect();
        let mut rec = Recursions::new(problem);
        let mut ex = EnergyExpander::new();
        let top = caps[0];
        let ord = order as i64;

        // Relation whose lowest-order part is led by ⟨x^u⟩, for every u.
        let mut lead_rel: BTreeMap<u32, (BTreeMap<u32, GSeries>, ParamPoly)> = BTreeMap::new();
        let mut t = 0;
        while lead_rel.len() < top as usize && t <= top + 4 {
            let rel = rec.x_relation(t);
            t += 1;
            let lead = rel.iter().filter(|(_, c)| !c.coeff(0).is_zero()).map(|(k, c)| (k.m, c.coeff(0))).max_by_key(|(m, _)| *m);
            let Some((u, c0)) = lead else { continue };
            if u == 0 || u > top || lead_rel.contains_key(&u) {
                continue;
            }
            if c0.as_constant().is_none() {
                return Err(Error::IrreducibleMoment(key(u, 0)));
            }
            let expanded = rel.iter().map(|(k, c)| (k.m, ex.expand(c, ord))).collect();
            lead_rel.insert(u, (expanded, c0));
        }

        // Pure-x coefficients, order by order, increasing degree.
        let mut x: Vec<Vec<ParamPoly>> = vec![Vec::new(); top as usize + 1];
        for l in 0..=order {
            for u in 0..=caps[l] {
                let value = if u == 0 {
                    if l == 0 {
                        ParamPoly::one()
                    } else {
                        ParamPoly::zero()
                    }
                } else if problem.parity_even && u % 2 == 1 {
                    ParamPoly::zero()
                } else {
                    let (rel, c0) = lead_rel.get(&u).ok_or(Error::IrreducibleMoment(key(u, 0)))?;
                    let mut acc = ParamPoly::zero();
                    for (j, c) in rel {
                        for (s, cs) in c.iter() {
                            if s < 0 || s as usize > l || (*j == u && s == 0) {
                                continue;
                            }
                            let xv = x[*j as usize].get(l - s as usize).ok_or_else(|| Error::OrderExceeded {
                                key: key(*j, 0),
                                order: l - s as usize,
                                available: format!("degree caps {caps:?}"),
                            })?;
                            acc.add_assign_poly(&(cs * xv));
                        }
                    }
                    acc.scale(&(-c0.as_constant().unwrap().inverse()?))
                };
                x[u as usize].push(value);
            }
        }

        let mut entries: BTreeMap<MomentKey, Vec<ParamPoly>> = BTreeMap::new();
        for (j, v) in x.iter().enumerate() {
            entries.insert(key(j as u32, 0), v.clone());
        }
        for deg in 1..=top {
            for n in 1..=deg {
                let m = deg - n;
                let k = key(m, n);
                let avail = (0..=order).take_while(|l| caps[*l] >= deg).count();
                if problem.parity_even && deg % 2 == 1 {
                    entries.insert(k, vec![ParamPoly::zero(); avail]);
                    continue;
                }
                let form = rec.to_pure_x(k);
                let expanded: Vec<(u32, GSeries)> = form.iter().map(|(pk, c)| (pk.m, ex.expand(c, ord))).collect();
                let mut coeffs = Vec::with_capacity(avail);
                'orders: for l in 0..avail {
                    let mut acc = ParamPoly::zero();
                    for (j, c) in &expanded {
                        for (s, cs) in c.iter() {
                            if s < 0 || s as usize > l {
                                continue;
                            }
                            match x.get(*j as usize).and_then(|v| v.get(l - s as usize)) {
                                Some(xv) => acc.add_assign_poly(&(cs * xv)),
                                None => break 'orders,
                            }
                        }
                    }
                    coeffs.push(acc);
                }
                entries.insert(k, coeffs);
            }
        }

        Ok(MomentTable { problem: problem.clone(), order, basis: rec.basis().to_vec(), degree_caps: caps, entries })
    }

    pub fn problem(&self) -> &ProblemSpec {
        &self.problem
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn basis(&self) -> &[MomentKey] {
        &self.basis
    }

    pub fn degree_caps(&self) -> &[u32] {
        &self.degree_caps
    }

    pub fn keys(&self) -> impl Iterator<Item = &MomentKey> {
        self.entries.keys()
    }

    /// The stored series of a moment, through the orders available for it.
    pub fn entry(&self, k: MomentKey) -> Option<GSeries> {
        self.entries.get(&k).map(|v| GSeries::from_coeffs(0, v.clone()))
    }

    fn available(&self, k: MomentKey) -> String {
        match self.entries.get(&k) {
            Some(v) if !v.is_empty() => format!("orders 0..={}", v.len() - 1),
            _ => "no orders".into(),
        }
    }

    /// Coefficient of `g^l` in `⟨x^m p^n⟩`.
    pub fn coeff(&self, k: MomentKey, l: usize) -> Result<&ParamPoly> {
        self.entries.get(&k).and_then(|v| v.get(l)).ok_or_else(|| Error::OrderExceeded { key: k, order: l, available: self.available(k) })
    }

    /// Coefficient of `g^l` in `⟨A⟩`.
    pub fn expectation_coeff(&self, a: &OpPoly, l: usize) -> Result<ParamPoly> {
        let mut acc = ParamPoly::zero();
        for (k, c) in a.terms() {
            let v = self.coeff(key(k.m, k.n), l)?;
            if !v.is_zero() {
                acc.add_assign_poly(&(c * v));
            }
        }
        Ok(acc)
    }

    /// Coefficient of `g^l` in `⟨A⟩` for a g-graded operator.
    pub fn graded_coeff(&self, a: &GradedOp, l: usize) -> Result<ParamPoly> {
        let mut acc = ParamPoly::zero();
        for (s, op) in a.grades() {
            if s >= 0 && s as usize <= l {
                acc.add_assign_poly(&self.expectation_coeff(op, l - s as usize)?);
            }
        }
        Ok(acc)
    }

    /// `⟨A⟩` through `g^order`.
    pub fn evaluate_graded(&self, a: &GradedOp, order: usize) -> Result<GSeries> {
        let coeffs = (0..=order).map(|l| self.graded_coeff(a, l)).collect::<Result<Vec<_>>>()?;
        Ok(GSeries::from_coeffs(0, coeffs))
    }
}

/// `⟨A⟩` through `g^order`, using the table.
pub fn evaluate_expectation(a: &OpPoly, table: &MomentTable, order: usize) -> Result<GSeries> {
    table.evaluate_graded(&GradedOp::single(0, a.clone()), order)
}

impl Serialize for MomentTable {
    /// `{"problem", "order", "basis", "entries": [{m, n, series}]}`
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry {
            m: u32,
            n: u32,
            series: GSeries,
        }
        let entries: Vec<Entry> =
            self.entries.iter().map(|(k, v)| Entry { m: k.m, n: k.n, series: GSeries::from_coeffs(0, v.clone()) }).collect();
        let mut st = s.serialize_struct("MomentTable", 4)?;
        st.serialize_field("problem", &self.problem.label)?;
        st.serialize_field("order", &self.order)?;
        st.serialize_field("basis", &self.basis)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

/// Basis-moment coefficients obtained by demanding that reduced moments
/// stay finite as `g → 0`.
pub fn basis_series_by_cancellation(problem: &ProblemSpec, order: usize) -> Result<BTreeMap<MomentKey, Vec<ParamPoly>>> {
    let mut rec = Recursions::new(problem);
    let basis = rec.basis().to_vec();
    if basis.is_empty() {
        return Ok(BTreeMap::new());
    }
    let cap = 4 * (order as u32 + 2);
    let bsym = |b: &MomentKey, l: u32| Sym::Basis { m: b.m, n: b.n, order: l };
    let mut ex = EnergyExpander::new();
    let mut exprs: Vec<ParamPoly> = Vec::new();
    let mut depth: u32 = 0;

    for k in 1..=cap {
        let mk = key(k, 0);
        if basis.contains(&mk) || (problem.parity_even && k % 2 == 1) {
            continue;
        }
        let red = rec.reduce(mk)?;
        let lowest = red.basis.values().chain([&red.constant]).filter(|c| !c.is_zero()).map(GSeries::lo).min();
        let Some(lowest) = lowest.filter(|lo| *lo < 0) else { continue };
        let q = (-lowest) as u32;
        depth = depth.max(q);
        // Singular part of Σ_b c_b ⟨b⟩ + c_0 with ⟨b⟩ = Σ_l B_{b,l} g^l.
        let mut singular = ex.expand(&red.constant, -1);
        for (b, c) in &red.basis {
            let series = GSeries::from_coeffs(0, (0..q).map(|l| ParamPoly::sym(bsym(b, l))).collect());
            singular = singular.add(&laurent_mul(&ex.expand(c, -1), &series, -1));
        }
        exprs.extend(singular.iter().map(|(_, p)| p.clone()));

        let mut unknowns = Vec::new();
        for l in 0..depth {
            for b in &basis {
                unknowns.push(bsym(b, l));
            }
        }
        let mut sys = LinSys::new(unknowns);
        for e in &exprs {
            sys.push_expr(e)?;
        }
        let sol = linsolve(&sys).map_err(|e| match e {
            Error::InconsistentSystem(m) => Error::SingularityNotCancelable(m),
            other => other,
        })?;
        let unknown_set: BTreeSet<Sym> = sys.unknowns.iter().copied().collect();
        let fixed = |b: &MomentKey, l: u32| sol.solution.get(&bsym(b, l)).filter(|v| v.symbols().is_disjoint(&unknown_set)).cloned();
        let done = (0..=order as u32).all(|l| basis.iter().all(|b| fixed(b, l).is_some()));
        if done {
            return Ok(basis.iter().map(|b| (*b, (0..=order as u32).map(|l| fixed(b, l).unwrap()).collect())).collect());
        }
    }
    Err(Error::UnderdeterminedBasis { order, cap: cap as usize })
}

/// Default degree needed at each order: the ansatz degree plus the
/// perturbation degree plus two.
pub fn default_degrees(problem: &ProblemSpec, order: usize, ansatz_degree: u32) -> Vec<u32> {
    vec![ansatz_degree + problem.perturbation_degree() + 2; order + 1]
}

/// Builds the moment table, fixing the basis series by singularity
/// cancellation and checking them against the table's own values.
pub fn fix_basis_series(problem: &ProblemSpec, order: usize) -> Result<MomentTable> {
    let k = crate::bootstrap::default_k_schedule(problem, order);
    let table = MomentTable::build(problem, order, &default_degrees(problem, order, k[order]))?;
    let fixed = basis_series_by_cancellation(problem, order)?;
    for (b, coeffs) in &fixed {
        for (l, c) in coeffs.iter().enumerate() {
            if table.coeff(*b, l)? != c {
                return Err(Error::SingularityNotCancelable(format!("{b} at order {l} disagrees with the recursion")));
            }
        }
    }
    Ok(table)
}

/// The g^l coefficient of a linear form evaluated on the table.
pub fn form_coeff(table: &MomentTable, form: &LinForm, l: usize) -> Result<ParamPoly> {
    let mut ex = EnergyExpander::new();
    let mut acc = ParamPoly::zero();
    for (k, c) in form {
        let c = ex.expand(c, l as i64);
        for (s, cs) in c.iter() {
            if s >= 0 && s as usize <= l {
                acc.add_assign_poly(&(cs * table.coeff(*k, l - s as usize)?));
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, FieldElem};

    fn e(i: u32) -> ParamPoly {
        ParamPoly::sym(Sym::Energy(i))
    }

    fn q(n: i64, d: i64) -> ParamPoly {
        ParamPoly::rational(rat(n, d))
    }

    /// Truncated `Σ_r E_r g^r` applied to a polynomial in the full energy,
    /// given as `Σ_s g^s poly_s(E)`.
    fn in_energy(terms: &[(i64, ParamPoly)], order: usize) -> Vec<ParamPoly> {
        let mut ex = EnergyExpander::new();
        let mut s = GSeries::zero();
        for (k, p) in terms {
            s = s.add(&GSeries::monomial(p.clone(), *k));
        }
        let out = ex.expand(&s, order as i64);
        (0..=order as i64).map(|l| out.coeff(l)).collect()
    }

    fn big_e() -> ParamPoly {
        ParamPoly::sym(Sym::EnergyFull)
    }

    #[test]
    fn sextic_basis_orders_zero_and_one() {
        let fixed = basis_series_by_cancellation(&ProblemSpec::sextic(), 1).unwrap();
        let x2 = &fixed[&key(2, 0)];
        let x4 = &fixed[&key(4, 0)];
        assert_eq!(x2[0], e(0));
        assert_eq!(x4[0], (&q(1, 1) + &e(0).pow(2).scale_rat(&rat(4, 1))).scale_rat(&rat(3, 8)));
        let x2_1 = (e(0).scale_rat(&rat(25, 1)) + e(0).pow(3).scale_rat(&rat(20, 1)) - e(1).scale_rat(&rat(2, 1))).scale_rat(&rat(-1, 2));
        assert_eq!(x2[1], x2_1);
        let x4_1 = (q(315, 1) + e(0).pow(2).scale_rat(&rat(2760, 1)) + e(0).pow(4).scale_rat(&rat(1200, 1))
            - (&e(0) * &e(1)).scale_rat(&rat(128, 1)))
        .scale_rat(&rat(-3, 128));
        assert_eq!(x4[1], x4_1);
    }

    #[test]
    fn recursion_table_matches_cancellation() {
        for p in [ProblemSpec::sextic(), ProblemSpec::cubic()] {
            let table = fix_basis_series(&p, 2).unwrap();
            assert_eq!(table.coeff(key(0, 0), 0).unwrap(), &ParamPoly::one());
        }
    }

    #[test]
    fn shifted_pure_momentum_moments() {
        let t = MomentTable::build(&ProblemSpec::shifted(), 6, &[8; 7]).unwrap();
        assert!(t.basis().is_empty());
        let p2 = in_energy(&[(0, big_e()), (2, q(-1, 2))], 6);
        let p4 = in_energy(
            &[
                (0, (&q(1, 1) + &big_e().pow(2).scale_rat(&rat(4, 1))).scale_rat(&rat(3, 8))),
                (2, big_e().scale_rat(&rat(-3, 2))),
                (4, q(3, 8)),
            ],
            6,
        );
        let p6 = in_energy(
            &[
                (0, (&big_e() * &(&q(5, 1) + &big_e().pow(2).scale_rat(&rat(4, 1)))).scale_rat(&rat(5, 8))),
                (2, (&q(5, 1) + &big_e().pow(2).scale_rat(&rat(12, 1))).scale_rat(&rat(-5, 16))),
                (4, big_e().scale_rat(&rat(15, 8))),
                (6, q(-5, 16)),
            ],
            6,
        );
        for (k, expected) in [(key(0, 2), p2), (key(0, 4), p4), (key(0, 6), p6)] {
            for (l, c) in expected.iter().enumerate() {
                assert_eq!(t.coeff(k, l).unwrap(), c, "{k} order {l}");
            }
        }
        for n in [1, 3, 5] {
            for l in 0..=6 {
                assert!(t.coeff(key(0, n), l).unwrap().is_zero());
            }
        }
        let minus_i = ParamPoly::constant(-FieldElem::i());
        let x1 = in_energy(&[(1, minus_i.clone())], 6);
        let x2 = in_energy(&[(0, big_e()), (2, q(-3, 2))], 6);
        // The printed value stops at g; the exact series also carries 5ig³/2.
        let x3 =
            in_energy(&[(1, (&big_e() * &minus_i).scale_rat(&rat(3, 1))), (3, ParamPoly::constant(FieldElem::i().scale(&rat(5, 2))))], 6);
        for (k, expected) in [(key(1, 0), x1), (key(2, 0), x2), (key(3, 0), x3)] {
            for (l, c) in expected.iter().enumerate() {
                assert_eq!(t.coeff(k, l).unwrap(), c, "{k} order {l}");
            }
        }
    }

    #[test]
    fn order_exceeded_reported() {
        let t = MomentTable::build(&ProblemSpec::sextic(), 1, &[4, 4]).unwrap();
        assert!(matches!(t.coeff(key(2, 0), 2), Err(Error::OrderExceeded { .. })));
        assert!(matches!(t.coeff(key(40, 0), 0), Err(Error::OrderExceeded { .. })));
    }
}
