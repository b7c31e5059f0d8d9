//! The eight acceptance criteria, one pass/fail line each.

mod common;

use common::*;
use nullboot_core::bootstrap::{solve, BootstrapConfig, BootstrapSolution, Branch};
use nullboot_core::moments::{MomentKey, MomentTable, ProblemSpec};
use nullboot_core::oracle::{equiv_hermitian_energy, rs_energy, rs_ladder, rs_state_correction, verify_v_conjugation};
use nullboot_core::scalars::{FieldElem, ParamPoly, Sym};
use nullboot_core::weyl::{from_ladder, to_ladder, OpPoly};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

type Outcome = Result<(), String>;

/// Writes straight to stderr so the lines survive libtest output capture.
macro_rules! report {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stderr(), $($t)*);
    }};
}

fn check(ok: bool, what: impl Into<String>) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn same<T: PartialEq + std::fmt::Debug>(got: &T, want: &T, what: &str) -> Outcome {
    check(got == want, format!("{what}: got {got:?}, expected {want:?}"))
}

struct Solutions {
    sextic: BootstrapSolution,
    shifted: BootstrapSolution,
    cubic: BootstrapSolution,
}

fn key(m: u32, n: u32) -> MomentKey {
    MomentKey::new(m, n)
}

fn sextic_energies(s: &Solutions) -> Outcome {
    same(&s.sextic.energies[0], &poly_in_n(&[(1, 2), (1, 1)]), "E(0)")?;
    same(&s.sextic.energies[1], &sextic_e1(), "E(1)")?;
    same(&s.sextic.energies[2], &sextic_e2(), "E(2)")
}

fn sextic_ladders(s: &Solutions) -> Outcome {
    let sol = &s.sextic;
    same(&sol.lower[0], &sextic_lower_0(), "L-(0)")?;
    same(&sol.lower[1].len(), &12, "L-(1) term count")?;
    same(&sol.lower[1], &sextic_lower_1(), "L-(1)")?;
    same(&sol.raiser[1], &sextic_raiser_1(), "L+(1)")?;
    same(&sol.lower[2], &sextic_ladder_2(false), "L-(2)")?;
    same(&sol.raiser[2], &sextic_ladder_2(true), "L+(2)")
}

fn moment_fixes() -> Outcome {
    let t = MomentTable::build(&ProblemSpec::sextic(), 1, &[4, 4]).map_err(|e| e.to_string())?;
    let c = |m, l| t.coeff(key(m, 0), l).cloned().map_err(|e| e.to_string());
    same(&c(2, 0)?, &e(0), "<x^2>(0)")?;
    same(&c(4, 0)?, &(&q(3, 8) + &e(0).pow(2).scale(&fe(3, 2))), "<x^4>(0)")?;
    let x2_1 = (e(0).scale(&fe(25, 1)) + e(0).pow(3).scale(&fe(20, 1)) - e(1).scale(&fe(2, 1))).scale(&fe(-1, 2));
    same(&c(2, 1)?, &x2_1, "<x^2>(1)")?;
    let x4_1 = (q(315, 1) + e(0).pow(2).scale(&fe(2760, 1)) + e(0).pow(4).scale(&fe(1200, 1)) - (&e(0) * &e(1)).scale(&fe(128, 1)))
        .scale(&fe(-3, 128));
    same(&c(4, 1)?, &x4_1, "<x^4>(1)")
}

fn compare_series(t: &MomentTable, k: MomentKey, want: &[ParamPoly], upto: usize) -> Outcome {
    for (l, w) in want.iter().enumerate().take(upto + 1) {
        let got = t.coeff(k, l).map_err(|e| e.to_string())?;
        same(got, w, &format!("{k} at g^{l}"))?;
    }
    Ok(())
}

fn shifted_oscillator(s: &Solutions) -> Outcome {
    let sol = &s.shifted;
    same(&sol.energies[0], &poly_in_n(&[(1, 2), (1, 1)]), "E(0)")?;
    same(&sol.energies[1], &ParamPoly::zero(), "E(1)")?;
    same(&sol.energies[2], &ParamPoly::constant(fe(1, 2)), "E(2)")?;
    let i_over_root2 = OpPoly::mono(0, 0, s2(1, 1).mul_i());
    same(&sol.lower[1], &i_over_root2, "L-(1)")?;
    same(&sol.raiser[1], &i_over_root2, "L+(1)")?;
    check(sol.lower[2].is_zero() && sol.raiser[2].is_zero(), "L(2) should vanish")?;

    let mut rhs = sol.raiser_graded().mul(&sol.lower_graded(), 2);
    rhs.add_at(0, &OpPoly::mono(0, 0, fe(1, 2)));
    rhs.add_at(2, &OpPoly::mono(0, 0, fe(1, 2)));
    same(&rhs, &ProblemSpec::shifted().hamiltonian(), "L+L- + 1/2 + g^2/2")?;

    let t = MomentTable::build(&ProblemSpec::shifted(), 6, &[8; 7]).map_err(|e| e.to_string())?;
    let p2 = in_energy(&[(0, big_e()), (2, q(-1, 2))], 6);
    let p4 = in_energy(&[(0, &q(3, 8) + &big_e().pow(2).scale(&fe(3, 2))), (2, big_e().scale(&fe(-3, 2))), (4, q(3, 8))], 6);
    let p6 = in_energy(
        &[
            (0, (&big_e() * &(&q(5, 1) + &big_e().pow(2).scale(&fe(4, 1)))).scale(&fe(5, 8))),
            (2, (&q(5, 1) + &big_e().pow(2).scale(&fe(12, 1))).scale(&fe(-5, 16))),
            (4, big_e().scale(&fe(15, 8))),
            (6, q(-5, 16)),
        ],
        6,
    );
    compare_series(&t, key(0, 2), &p2, 6)?;
    compare_series(&t, key(0, 4), &p4, 6)?;
    compare_series(&t, key(0, 6), &p6, 6)?;
    let minus_i = ParamPoly::constant(-FieldElem::i());
    compare_series(&t, key(1, 0), &in_energy(&[(1, minus_i.clone())], 6), 6)?;
    compare_series(&t, key(2, 0), &in_energy(&[(0, big_e()), (2, q(-3, 2))], 6), 6)?;
    // The closed form −3igE is the leading behaviour; compare through g².
    compare_series(&t, key(3, 0), &in_energy(&[(1, (&big_e() * &minus_i).scale(&fe(3, 1)))], 6), 2)
}

fn cubic_oscillator(s: &Solutions) -> Outcome {
    let sol = &s.cubic;
    same(&sol.energies[1], &ParamPoly::zero(), "E(1)")?;
    same(&sol.energies[2], &cubic_e2(), "E(2)")?;
    same(&sol.lower[1], &cubic_lower_1(), "L-(1)")?;
    same(&sol.raiser[1], &cubic_raiser_1(), "L+(1)")?;
    same(&sol.lower[2], &cubic_ladder_2(false), "L-(2)")?;
    same(&sol.raiser[2], &cubic_ladder_2(true), "L+(2)")
}

fn oracle_equivalence() -> Outcome {
    let sextic = ProblemSpec::sextic();
    let err = |e: nullboot_core::Error| e.to_string();
    same(&rs_energy(&sextic, 1).map_err(err)?, &sextic_e1(), "RS E(1)")?;
    same(&rs_energy(&sextic, 2).map_err(err)?, &sextic_e2(), "RS E(2)")?;
    same(&rs_ladder(&sextic, 1).map_err(err)?, &(sextic_lower_1(), sextic_raiser_1()), "RS L(1)")?;
    same(&rs_ladder(&sextic, 2).map_err(err)?, &(sextic_ladder_2(false), sextic_ladder_2(true)), "RS L(2)")?;
    same(&equiv_hermitian_energy(&ProblemSpec::cubic()).map_err(err)?, &cubic_e2(), "cubic equivalent E(2)")?;
    same(&equiv_hermitian_energy(&ProblemSpec::shifted()).map_err(err)?, &ParamPoly::constant(fe(1, 2)), "shifted shift")?;
    for order in 1..=6 {
        check(verify_v_conjugation(&ProblemSpec::shifted(), order).map_err(err)?.passed, format!("shifted V at g^{order}"))?;
    }
    check(verify_v_conjugation(&ProblemSpec::cubic(), 3).map_err(err)?.passed, "cubic V through g^3")
}

fn state_corrections() -> Outcome {
    let sextic = ProblemSpec::sextic();
    let f1 = rs_state_correction(&sextic, 1).map_err(|e| e.to_string())?.f;
    let f2 = rs_state_correction(&sextic, 2).map_err(|e| e.to_string())?.f;
    same(&f1, &sextic_f1(), "f(1)")?;
    same(&f2, &sextic_f2(), "f(2)")?;
    same(&f2.coeff(0, 0).as_constant(), &Some(fe(-685, 64)), "f(2) constant")
}

fn arb_op() -> impl Strategy<Value = OpPoly> {
    prop::collection::vec((0u32..3, 0u32..3, -3i64..=3, -3i64..=3), 0..5).prop_map(|terms| {
        let mut out = OpPoly::zero();
        for (m, n, a, c) in terms {
            let coeff = &FieldElem::from_int(a) + &FieldElem::from_int(c).mul_i();
            out = &out + &OpPoly::mono(m, n, coeff);
        }
        out
    })
}

fn fail<V: std::fmt::Debug>(name: &str, e: proptest::test_runner::TestError<V>) -> String {
    format!("{name}: {e}")
}

fn property_suites(s: &Solutions) -> Outcome {
    let mut runner = TestRunner::new(Config { cases: 64, ..Config::default() });
    runner
        .run(&(arb_op(), arb_op()), |(a, b)| {
            prop_assert_eq!((&a * &b).adjoint(), &b.adjoint() * &a.adjoint());
            Ok(())
        })
        .map_err(|e| fail("adjoint anti-homomorphism", e))?;
    runner
        .run(&(arb_op(), arb_op(), arb_op()), |(a, b, c)| {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            Ok(())
        })
        .map_err(|e| fail("normal-form uniqueness", e))?;
    runner
        .run(&arb_op(), |a| {
            prop_assert_eq!(from_ladder(&to_ladder(&a)), a);
            Ok(())
        })
        .map_err(|e| fail("ladder round trip", e))?;

    let t = MomentTable::build(&ProblemSpec::sextic(), 2, &[10, 10, 10]).map_err(|e| e.to_string())?;
    for k in t.keys().filter(|k| (k.m + k.n) % 2 == 1) {
        for l in 0..=2 {
            if let Ok(c) = t.coeff(*k, l) {
                check(c.is_zero(), format!("parity selection: {k} at g^{l} is {c}"))?;
            }
        }
    }
    for p in [ProblemSpec::sextic(), ProblemSpec::shifted(), ProblemSpec::cubic()] {
        let t = MomentTable::build(&p, 2, &[6, 6, 6]).map_err(|e| e.to_string())?;
        for l in 0..=2 {
            let h = t.graded_coeff(&p.hamiltonian(), l).map_err(|e| e.to_string())?;
            same(&h, &ParamPoly::sym(Sym::Energy(l as u32)), &format!("{} <H> at g^{l}", p.label))?;
        }
    }

    for sol in [&s.sextic, &s.shifted, &s.cubic] {
        let v = &sol.diagnostics.verification;
        for (i, audit) in v.test_degree.iter().enumerate() {
            let used = sol.diagnostics.orders.iter().filter(|r| r.order == i).map(|r| r.test_degree).max().unwrap_or(0);
            check(*audit >= used + 3, format!("{} order {i}: audit degree {audit} < {used} + 3", sol.problem.label))?;
        }
        check(v.nonzero_residuals.is_empty(), format!("{} residuals: {:?}", sol.problem.label, v.nonzero_residuals))?;
        check(v.passed(), format!("{} normalisation", sol.problem.label))?;
        check(sol.diagnostics.orders.iter().any(|r| r.branch == Branch::Raise), "raising branch missing")?;
        // Reported, not required.
        report!("  [L-, L+] = 1 per order for {}: {:?}", sol.problem.label, v.commutator_is_one);
    }
    Ok(())
}

#[test]
fn acceptance_criteria() {
    let run = |p: ProblemSpec| solve(&p, &BootstrapConfig::with_order(2)).expect("bootstrap solves");
    let s = Solutions { sextic: run(ProblemSpec::sextic()), shifted: run(ProblemSpec::shifted()), cubic: run(ProblemSpec::cubic()) };

    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "sextic energies", sextic_energies(&s)),
        (2, "sextic ladder operators", sextic_ladders(&s)),
        (3, "moment fixes", moment_fixes()),
        (4, "shifted oscillator", shifted_oscillator(&s)),
        (5, "cubic oscillator", cubic_oscillator(&s)),
        (6, "oracle equivalence", oracle_equivalence()),
        (7, "state corrections", state_corrections()),
        (8, "property suites", property_suites(&s)),
    ];
    let mut failed = Vec::new();
    for (n, name, r) in &results {
        match r {
            Ok(()) => report!("criterion {n} ({name}): PASS"),
            Err(why) => {
                report!("criterion {n} ({name}): FAIL: {why}");
                failed.push(*n);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
