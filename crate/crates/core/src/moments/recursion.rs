//! Moment identities derived from `⟨[H, O]⟩ = 0` and `⟨O H⟩ = E⟨O⟩`.
//!
//! Every relation is built by multiplying operators with the Weyl algebra,
//! so nothing here is specific to a particular potential. Coefficients are
//! exact Laurent polynomials in g whose coefficients are polynomials in the
//! full energy symbol `E`.

use std::collections::{BTreeMap, HashMap};

use super::problem::ProblemSpec;
use super::MomentKey;
use crate::error::{Error, Result};
use crate::scalars::{laurent_mul, GSeries, ParamPoly, Sym};
use crate::weyl::{GradedOp, OpPoly};

/// Working order large enough that Laurent products are never truncated.
pub const EXACT: i64 = i64::MAX / 4;

/// `Σ_key c_key · ⟨key⟩`; `⟨x⁰p⁰⟩` stands for `⟨1⟩ = 1`.
pub type LinForm = BTreeMap<MomentKey, GSeries>;

fn key(m: u32, n: u32) -> MomentKey {
    MomentKey { m, n }
}

fn energy() -> ParamPoly {
    ParamPoly::sym(Sym::EnergyFull)
}

pub(crate) fn form_add(acc: &mut LinForm, k: MomentKey, c: &GSeries) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(k).or_default();
    *e = e.add(c);
    if e.is_zero() {
        acc.remove(&k);
    }
}

/// `acc += c · f`
pub(crate) fn form_add_scaled(acc: &mut LinForm, f: &LinForm, c: &GSeries) {
    for (k, v) in f {
        form_add(acc, *k, &laurent_mul(v, c, EXACT));
    }
}

/// `⟨A⟩` for a g-graded operator, as a form over its monomials.
pub fn graded_form(op: &GradedOp) -> LinForm {
    let mut out = LinForm::new();
    for (s, o) in op.grades() {
        for (k, c) in o.terms() {
            form_add(&mut out, key(k.m, k.n), &GSeries::monomial(c.clone(), s));
        }
    }
    out
}

/// Inverse of `c · g^s` for a nonzero constant `c`.
fn monomial_inverse(s: &GSeries) -> Option<GSeries> {
    if s.is_zero() || s.lo() != s.hi() {
        return None;
    }
    let c = s.coeff(s.lo()).as_constant()?;
    Some(GSeries::monomial(ParamPoly::constant(c.inverse().ok()?), -s.lo()))
}

/// Rearranges `form = 0` into `⟨target⟩ = result`.
fn solve_for(form: &LinForm, target: MomentKey) -> Option<LinForm> {
    let inv = monomial_inverse(form.get(&target)?)?.neg();
    let mut out = LinForm::new();
    for (k, c) in form {
        if *k != target {
            form_add(&mut out, *k, &laurent_mul(c, &inv, EXACT));
        }
    }
    Some(out)
}

/// Highest pure moment (by power) with a nonzero coefficient.
fn top_key(form: &LinForm) -> Option<MomentKey> {
    form.keys().max_by_key(|k| (k.m + k.n, k.m)).copied()
}

/// A relation produced by a specific test operator.
#[derive(Clone, Debug)]
pub struct Relation {
    pub label: String,
    pub test_op: OpPoly,
    pub form: LinForm,
}

/// All relations needed to reduce moments of one problem.
pub struct Recursions {
    problem: ProblemSpec,
    h: GradedOp,
    to_x: HashMap<MomentKey, LinForm>,
    x_rel: Vec<LinForm>,
    reduced: HashMap<u32, LinForm>,
    basis: Vec<MomentKey>,
}

impl Recursions {
    pub fn new(problem: &ProblemSpec) -> Self {
        let mut r = Recursions {
            problem: problem.clone(),
            h: problem.hamiltonian(),
            to_x: HashMap::new(),
            x_rel: Vec::new(),
            reduced: HashMap::new(),
            basis: Vec::new(),
        };
        r.basis = r.detect_basis();
        r
    }

    pub fn problem(&self) -> &ProblemSpec {
        &self.problem
    }

    pub fn basis(&self) -> &[MomentKey] {
        &self.basis
    }

    /// `⟨[H, O]⟩` as a form (vanishes in any eigenstate).
    pub fn commutator_form(&self, o: &OpPoly) -> LinForm {
        graded_form(&self.h.commutator(&GradedOp::single(0, o.clone()), EXACT))
    }

    /// `⟨O H⟩ − E⟨O⟩` as a form (vanishes in any eigenstate).
    pub fn eigen_form(&self, o: &OpPoly) -> LinForm {
        let og = GradedOp::single(0, o.clone());
        let mut f = graded_form(&og.mul(&self.h, EXACT));
        let minus_e = GSeries::constant(-energy());
        form_add_scaled(&mut f, &graded_form(&og), &minus_e);
        f
    }

    /// Mixed moment `⟨x^m p^n⟩` as a combination of pure-x moments.
    ///
    /// `n = 1` uses `O = x^(m+1)` in the commutator identity; `n ≥ 2` uses
    /// `O = x^m p^(n−2)` in the eigenvalue identity.
    pub fn to_pure_x(&mut self, k: MomentKey) -> LinForm {
        if k.n == 0 {
            return LinForm::from([(k, GSeries::one())]);
        }
        if let Some(f) = self.to_x.get(&k) {
            return f.clone();
        }
        let rel = if k.n == 1 {
            self.commutator_form(&OpPoly::mono(k.m + 1, 0, crate::scalars::FieldElem::one()))
        } else {
            self.eigen_form(&OpPoly::mono(k.m, k.n - 2, crate::scalars::FieldElem::one()))
        };
        let solved = solve_for(&rel, k).expect("leading coefficient of a mixed-moment identity is a nonzero constant");
        let mut out = LinForm::new();
        for (sub, c) in &solved {
            let f = self.to_pure_x(*sub);
            form_add_scaled(&mut out, &f, c);
        }
        self.to_x.insert(k, out.clone());
        out
    }

    /// Pure-x relation from the test operator `x^t p` in the commutator identity.
    pub fn x_relation(&mut self, t: u32) -> LinForm {
        while self.x_rel.len() <= t as usize {
            let s = self.x_rel.len() as u32;
            let raw = self.commutator_form(&OpPoly::mono(s, 1, crate::scalars::FieldElem::one()));
            let mut out = LinForm::new();
            for (k, c) in &raw {
                let f = self.to_pure_x(*k);
                form_add_scaled(&mut out, &f, c);
            }
            self.x_rel.push(out);
        }
        self.x_rel[t as usize].clone()
    }

    fn detect_basis(&mut self) -> Vec<MomentKey> {
        let scan = self.problem.perturbation_degree() + 4;
        let tops: Vec<u32> = (0..=scan).filter_map(|t| top_key(&self.x_relation(t)).map(|k| k.m)).collect();
        (1..=scan).filter(|j| !tops.contains(j)).filter(|j| !(self.problem.parity_even && j % 2 == 1)).map(|j| key(j, 0)).collect()
    }

    /// `⟨x^j⟩` in terms of the basis moments and `⟨1⟩`.
    fn reduce_pure(&mut self, j: u32) -> Result<LinForm> {
        if j == 0 || self.basis.contains(&key(j, 0)) {
            return Ok(LinForm::from([(key(j, 0), GSeries::one())]));
        }
        if self.problem.parity_even && j % 2 == 1 {
            return Ok(LinForm::new());
        }
        if let Some(f) = self.reduced.get(&j) {
            return Ok(f.clone());
        }
        let target = key(j, 0);
        let mut solved = None;
        for t in 0..j {
            let rel = self.x_relation(t);
            if top_key(&rel) == Some(target) {
                solved = solve_for(&rel, target);
                break;
            }
        }
        let solved = solved.ok_or(Error::IrreducibleMoment(target))?;
        let mut out = LinForm::new();
        for (k, c) in &solved {
            let f = self.reduce_pure(k.m)?;
            form_add_scaled(&mut out, &f, c);
        }
        self.reduced.insert(j, out.clone());
        Ok(out)
    }

    /// Pure-p relation from the test operator `p^t x`, for perturbations of
    /// degree at most 2 (the x-dependence of the mixed moments is then at
    /// most quadratic and can be traded for pure-p moments).
    pub fn p_relation(&mut self, t: u32) -> Result<LinForm> {
        if self.problem.perturbation_degree() > 2 {
            return Err(Error::InvalidProblem("pure-p chain needs a perturbation of degree <= 2".into()));
        }
        let op = crate::weyl::normal_product(&OpPoly::p().pow(t), &OpPoly::x());
        let raw = self.commutator_form(&op);
        let mut out = LinForm::new();
        for (k, c) in &raw {
            let f = self.to_pure_p(*k)?;
            form_add_scaled(&mut out, &f, c);
        }
        Ok(out)
    }

    fn to_pure_p(&self, k: MomentKey) -> Result<LinForm> {
        let one = crate::scalars::FieldElem::one();
        let rel = match k.m {
            0 => return Ok(LinForm::from([(k, GSeries::one())])),
            1 => self.commutator_form(&OpPoly::mono(0, k.n + 1, one)),
            2 => self.eigen_form(&OpPoly::mono(0, k.n, one)),
            _ => return Err(Error::IrreducibleMoment(k)),
        };
        let solved = solve_for(&rel, k).ok_or(Error::IrreducibleMoment(k))?;
        let mut out = LinForm::new();
        for (sub, c) in &solved {
            if sub.m >= k.m && *sub != key(0, sub.n) {
                return Err(Error::IrreducibleMoment(k));
            }
            form_add_scaled(&mut out, &self.to_pure_p(*sub)?, c);
        }
        Ok(out)
    }
}

/// The identities used for a problem, labelled by their test operator.
pub fn instantiate_recursions(problem: &ProblemSpec, max_t: u32) -> Vec<Relation> {
    let mut r = Recursions::new(problem);
    let one = crate::scalars::FieldElem::one();
    let mut out = Vec::new();
    for t in 0..=max_t {
        let op = OpPoly::mono(t + 1, 0, one.clone());
        out.push(Relation { label: format!("[H, x^{}]", t + 1), form: r.commutator_form(&op), test_op: op });
    }
    for t in 0..=max_t {
        let op = OpPoly::mono(t, 1, one.clone());
        out.push(Relation { label: format!("[H, x^{t} p] (pure x)"), form: r.x_relation(t), test_op: op });
    }
    for t in 0..=max_t {
        let op = OpPoly::mono(0, t, one.clone());
        out.push(Relation { label: format!("p^{t} H - E p^{t}"), form: r.eigen_form(&op), test_op: op });
    }
    if problem.perturbation_degree() <= 2 {
        for t in 0..=max_t {
            let op = crate::weyl::normal_product(&OpPoly::p().pow(t), &OpPoly::x());
            if let Ok(form) = r.p_relation(t) {
                out.push(Relation { label: format!("[H, p^{t} x] (pure p)"), form, test_op: op });
            }
        }
    }
    out
}

/// `⟨key⟩` as `Σ_b c_b(g, E)·⟨b⟩ + c_0(g, E)` over the detected basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedMoment {
    pub basis: BTreeMap<MomentKey, GSeries>,
    pub constant: GSeries,
}

pub fn reduce_moment(k: MomentKey, problem: &ProblemSpec) -> Result<ReducedMoment> {
    Recursions::new(problem).reduce(k)
}

impl Recursions {
    pub fn reduce(&mut self, k: MomentKey) -> Result<ReducedMoment> {
        let pure = self.to_pure_x(k);
        let mut acc = LinForm::new();
        for (pk, c) in &pure {
            let f = self.reduce_pure(pk.m)?;
            form_add_scaled(&mut acc, &f, c);
        }
        let constant = acc.remove(&key(0, 0)).unwrap_or_default();
        Ok(ReducedMoment { basis: acc, constant })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, FieldElem};

    fn g(p: ParamPoly, s: i64) -> GSeries {
        GSeries::monomial(p, s)
    }

    fn c(n: i64, d: i64) -> ParamPoly {
        ParamPoly::rational(rat(n, d))
    }

    fn ci(n: i64, d: i64) -> ParamPoly {
        ParamPoly::constant(FieldElem::frac(n, d).mul_i())
    }

    /// `a = λ·b` for some constant λ.
    fn proportional(a: &LinForm, b: &LinForm) -> bool {
        let pick = b.iter().find_map(|(k, v)| (v.lo() == v.hi()).then(|| v.coeff(v.lo()).as_constant()).flatten().map(|c| (k, v.lo(), c)));
        let Some((k, lo, bc)) = pick else { return a.is_empty() };
        let Some(av) = a.get(k) else { return false };
        if av.lo() != lo || av.hi() != lo {
            return false;
        }
        let Some(ac) = av.coeff(lo).as_constant() else { return false };
        let lambda = &ac * &bc.inverse().unwrap();
        let mut scaled = LinForm::new();
        form_add_scaled(&mut scaled, b, &GSeries::constant(ParamPoly::constant(lambda)));
        &scaled == a
    }

    #[test]
    fn first_mixed_moments() {
        for p in [ProblemSpec::sextic(), ProblemSpec::shifted(), ProblemSpec::cubic()] {
            let mut r = Recursions::new(&p);
            for t in 0..6u32 {
                let expected: LinForm = if t == 0 { LinForm::new() } else { LinForm::from([(key(t - 1, 0), g(ci(t as i64, 2), 0))]) };
                assert_eq!(r.to_pure_x(key(t, 1)), expected, "{} t={t}", p.label);
            }
        }
    }

    #[test]
    fn sextic_pure_x_chain() {
        let mut r = Recursions::new(&ProblemSpec::sextic());
        let e = energy();
        for t in 0..8u32 {
            let ti = t as i64;
            let mut expected = LinForm::new();
            if t >= 3 {
                form_add(&mut expected, key(t - 3, 0), &g(c(ti * (ti - 1) * (ti - 2), 1), 0));
            }
            if t >= 1 {
                form_add(&mut expected, key(t - 1, 0), &g(e.scale_rat(&rat(8 * ti, 1)), 0));
            }
            form_add(&mut expected, key(t + 1, 0), &g(c(-4 * (ti + 1), 1), 0));
            form_add(&mut expected, key(t + 5, 0), &g(c(-8 * (ti + 3), 1), 1));
            assert!(proportional(&r.x_relation(t), &expected), "t = {t}: {:?}", r.x_relation(t));
        }
    }

    #[test]
    fn cubic_pure_x_chain() {
        let mut r = Recursions::new(&ProblemSpec::cubic());
        let e = energy();
        for t in 0..6u32 {
            let ti = t as i64;
            let mut expected = LinForm::new();
            if t >= 3 {
                form_add(&mut expected, key(t - 3, 0), &g(c(ti * (ti - 1) * (ti - 2), 1), 0));
            }
            if t >= 1 {
                form_add(&mut expected, key(t - 1, 0), &g(e.scale_rat(&rat(8 * ti, 1)), 0));
            }
            form_add(&mut expected, key(t + 1, 0), &g(c(-4 * (ti + 1), 1), 0));
            form_add(&mut expected, key(t + 2, 0), &g(ci(-(12 + 8 * ti), 1), 1));
            assert!(proportional(&r.x_relation(t), &expected), "t = {t}");
        }
    }

    #[test]
    fn shifted_pure_p_chain() {
        let mut r = Recursions::new(&ProblemSpec::shifted());
        let e = energy();
        for t in 0..7u32 {
            let ti = t as i64;
            let mut expected = LinForm::new();
            if t >= 1 {
                let k = key(0, t - 1);
                form_add(&mut expected, k, &g(e.scale_rat(&rat(8 * ti, 1)), 0));
                form_add(&mut expected, k, &g(c(-4 * ti, 1), 2));
            }
            if t >= 3 {
                form_add(&mut expected, key(0, t - 3), &g(c(ti * (ti - 1) * (ti - 2), 1), 0));
            }
            form_add(&mut expected, key(0, t + 1), &g(c(-4 * (ti + 1), 1), 0));
            assert!(proportional(&r.p_relation(t).unwrap(), &expected), "t = {t}: {:?}", r.p_relation(t));
        }
    }

    #[test]
    fn detected_bases() {
        assert_eq!(Recursions::new(&ProblemSpec::sextic()).basis(), &[key(2, 0), key(4, 0)]);
        assert_eq!(Recursions::new(&ProblemSpec::cubic()).basis(), &[key(1, 0)]);
        assert!(Recursions::new(&ProblemSpec::shifted()).basis().is_empty());
    }

    #[test]
    fn sextic_reductions() {
        let p = ProblemSpec::sextic();
        let e = energy();
        // ⟨x⁶⟩ = (E − ⟨x²⟩)/(4g)
        let r6 = reduce_moment(key(6, 0), &p).unwrap();
        assert_eq!(r6.constant, g(e.scale_rat(&rat(1, 4)), -1));
        assert_eq!(r6.basis, BTreeMap::from([(key(2, 0), g(c(-1, 4), -1))]));
        // ⟨x⁸⟩ = (3 + 12E⟨x²⟩ − 8⟨x⁴⟩)/(24g)
        let r8 = reduce_moment(key(8, 0), &p).unwrap();
        assert_eq!(r8.constant, g(c(1, 8), -1));
        assert_eq!(r8.basis, BTreeMap::from([(key(2, 0), g(e.scale_rat(&rat(1, 2)), -1)), (key(4, 0), g(c(-1, 3), -1))]));
        // ⟨x¹⁰⟩ = −3(E − ⟨x²⟩)/(32g²) + 5(3⟨x²⟩ + 2E⟨x⁴⟩)/(16g)
        let r10 = reduce_moment(key(10, 0), &p).unwrap();
        assert_eq!(r10.constant, g(e.scale_rat(&rat(-3, 32)), -2));
        assert_eq!(
            r10.basis,
            BTreeMap::from(
                [(key(2, 0), GSeries::from_coeffs(-2, vec![c(3, 32), c(15, 16)])), (key(4, 0), g(e.scale_rat(&rat(5, 8)), -1)),]
            )
        );
        assert!(reduce_moment(key(7, 0), &p).unwrap().basis.is_empty());
    }

    #[test]
    fn momentum_expectation_vanishes() {
        for p in [ProblemSpec::sextic(), ProblemSpec::shifted(), ProblemSpec::cubic()] {
            let r = reduce_moment(key(0, 1), &p).unwrap();
            assert!(r.basis.is_empty() && r.constant.is_zero());
        }
    }

    #[test]
    fn cubic_second_moment_slaved() {
        // ⟨x²⟩ = i⟨x⟩/(3g)
        let r = reduce_moment(key(2, 0), &ProblemSpec::cubic()).unwrap();
        assert!(r.constant.is_zero());
        assert_eq!(r.basis, BTreeMap::from([(key(1, 0), g(ci(1, 3), -1))]));
    }
}
