//! Expected operator tables and small builders shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use nullboot_core::scalars::{poly_substitute, rat, FieldElem, Monomial, ParamPoly, Sym};
use nullboot_core::weyl::{LadderPoly, OpMonomial, OpPoly};

pub fn fe(n: i64, d: i64) -> FieldElem {
    FieldElem::frac(n, d)
}

/// `num / (den √2)`
pub fn s2(num: i64, den: i64) -> FieldElem {
    FieldElem::frac(num, den) * FieldElem::inv_sqrt2()
}

/// Term `sign · num/(den√2) · (i if imag) · x^m p^n`.
#[derive(Clone, Copy)]
pub struct T(pub i64, pub i64, pub bool, pub u32, pub u32);

pub fn op(terms: &[T]) -> OpPoly {
    OpPoly::from_terms(terms.iter().map(|T(num, den, imag, m, n)| {
        let mut c = s2(*num, *den);
        if *imag {
            c = c.mul_i();
        }
        (OpMonomial::new(*m, *n), ParamPoly::constant(c))
    }))
}

/// `Σ_d c_d n^d` from `(num, den)` pairs, constant first.
pub fn poly_in_n(coeffs: &[(i64, i64)]) -> ParamPoly {
    let mut p = ParamPoly::zero();
    for (d, (a, b)) in coeffs.iter().enumerate() {
        p.add_term(Monomial::var(Sym::Level, d as u32), fe(*a, *b));
    }
    p
}

pub fn ladder(terms: &[(u32, u32, i64, i64)]) -> LadderPoly {
    let mut l = LadderPoly::zero();
    for (p, q, a, b) in terms {
        l.add_term(*p, *q, ParamPoly::constant(fe(*a, *b)));
    }
    l
}

pub fn e(i: u32) -> ParamPoly {
    ParamPoly::sym(Sym::Energy(i))
}

pub fn big_e() -> ParamPoly {
    ParamPoly::sym(Sym::EnergyFull)
}

pub fn q(n: i64, d: i64) -> ParamPoly {
    ParamPoly::rational(rat(n, d))
}

/// g^l coefficients, l = 0..=order, of `Σ_s g^s poly_s(E)` with
/// `E = Σ_r g^r E_r`.
pub fn in_energy(terms: &[(u32, ParamPoly)], order: u32) -> Vec<ParamPoly> {
    let g = Sym::Aux(9000);
    let gp = ParamPoly::sym(g);
    let series = (0..=order).fold(ParamPoly::zero(), |acc, r| &acc + &(&e(r) * &gp.pow(r)));
    let bind = BTreeMap::from([(Sym::EnergyFull, series)]);
    let mut total = ParamPoly::zero();
    for (s, p) in terms {
        total = &total + &(&poly_substitute(p, &bind).unwrap() * &gp.pow(*s));
    }
    let parts = total.split_by(g);
    (0..=order).map(|l| parts.get(&l).cloned().unwrap_or_default()).collect()
}

pub fn sextic_e1() -> ParamPoly {
    poly_in_n(&[(15, 8), (5, 1), (15, 4), (5, 2)])
}

pub fn sextic_e2() -> ParamPoly {
    poly_in_n(&[(-3495, 64), (-11528, 64), (-14400, 64), (-12220, 64), (-3930, 64), (-1572, 64)])
}

pub fn sextic_lower_0() -> OpPoly {
    op(&[T(1, 1, false, 1, 0), T(1, 1, true, 0, 1)])
}

pub fn sextic_lower_1() -> OpPoly {
    op(&[
        T(15, 4, true, 0, 1),
        T(-15, 4, false, 1, 0),
        T(-25, 8, true, 0, 3),
        T(-15, 2, false, 1, 2),
        T(-15, 2, true, 2, 1),
        T(-55, 8, false, 3, 0),
        T(-5, 16, true, 0, 5),
        T(25, 16, false, 1, 4),
        T(-5, 2, true, 2, 3),
        T(5, 2, false, 3, 2),
        T(-55, 16, true, 4, 1),
        T(11, 16, false, 5, 0),
    ])
}

pub fn sextic_raiser_1() -> OpPoly {
    op(&[
        T(-15, 4, true, 0, 1),
        T(-15, 4, false, 1, 0),
        T(-25, 8, true, 0, 3),
        T(15, 2, false, 1, 2),
        T(-15, 2, true, 2, 1),
        T(55, 8, false, 3, 0),
        T(5, 16, true, 0, 5),
        T(25, 16, false, 1, 4),
        T(5, 2, true, 2, 3),
        T(5, 2, false, 3, 2),
        T(55, 16, true, 4, 1),
        T(11, 16, false, 5, 0),
    ])
}

/// Second-order ladder correction: `(sign for L₊, sign for L₋, num, den, imag, m, n)`.
const SEXTIC_L2: [(i64, i64, i64, i64, bool, u32, u32); 30] = [
    (-1, 1, 15135, 32, true, 0, 1),
    (-1, -1, 17985, 32, false, 1, 0),
    (-1, -1, 167035, 256, true, 0, 3),
    (1, -1, 194085, 128, false, 1, 2),
    (-1, -1, 237435, 128, true, 2, 1),
    (1, -1, 236085, 256, false, 3, 0),
    (1, -1, 86621, 512, true, 0, 5),
    (1, 1, 439105, 512, false, 1, 4),
    (1, -1, 169285, 128, true, 2, 3),
    (1, 1, 206235, 128, false, 3, 2),
    (1, -1, 608655, 512, true, 4, 1),
    (1, 1, 124371, 512, false, 5, 0),
    (1, 1, 2381, 64, true, 0, 7),
    (-1, 1, 25207, 256, false, 1, 6),
    (1, 1, 81621, 256, true, 2, 5),
    (-1, 1, 52295, 128, false, 3, 4),
    (1, 1, 63545, 128, true, 4, 3),
    (-1, 1, 111771, 256, false, 5, 2),
    (1, 1, 41657, 256, true, 6, 1),
    (-1, 1, 4771, 64, false, 7, 0),
    (-1, 1, 167, 128, true, 0, 9),
    (-1, -1, 2381, 256, false, 1, 8),
    (-1, 1, 3601, 256, true, 2, 7),
    (-1, -1, 9069, 256, false, 3, 6),
    (-1, 1, 10459, 256, true, 4, 5),
    (-1, -1, 12709, 256, false, 5, 4),
    (-1, 1, 12419, 256, true, 6, 3),
    (-1, -1, 5951, 256, false, 7, 2),
    (-1, 1, 4771, 256, true, 8, 1),
    (-1, -1, 97, 128, false, 9, 0),
];

pub fn sextic_ladder_2(raiser: bool) -> OpPoly {
    let terms: Vec<T> =
        SEXTIC_L2.iter().map(|&(up, down, num, den, imag, m, n)| T(if raiser { up } else { down } * num, den, imag, m, n)).collect();
    op(&terms)
}

pub fn cubic_e2() -> ParamPoly {
    poly_in_n(&[(11, 8), (30, 8), (30, 8)])
}

pub fn cubic_lower_1() -> OpPoly {
    op(&[T(-1, 1, true, 0, 0), T(2, 1, true, 0, 2), T(2, 1, false, 1, 1), T(1, 1, true, 2, 0)])
}

pub fn cubic_raiser_1() -> OpPoly {
    op(&[T(1, 1, true, 0, 0), T(2, 1, true, 0, 2), T(-2, 1, false, 1, 1), T(1, 1, true, 2, 0)])
}

pub fn cubic_ladder_2(raiser: bool) -> OpPoly {
    let pm = if raiser { 1 } else { -1 };
    op(&[
        T(-61, 16, true, 0, 1),
        T(pm * 59, 16, false, 1, 0),
        T(-pm, 16, true, 0, 3),
        T(61, 16, false, 1, 2),
        T(pm * 59, 16, true, 2, 1),
        T(-23, 16, false, 3, 0),
    ])
}

/// `|E_n⟩⁽¹⁾ = f⁽¹⁾|E_n⟩⁽⁰⁾`, terms `(a† power, a power, num, den)`.
pub fn sextic_f1() -> LadderPoly {
    ladder(&[
        (0, 2, 270, 96),
        (0, 4, 45, 96),
        (0, 6, 2, 96),
        (2, 0, -270, 96),
        (4, 0, -45, 96),
        (6, 0, -2, 96),
        (1, 3, 360, 96),
        (1, 5, 18, 96),
        (2, 4, 90, 96),
        (3, 1, -360, 96),
        (4, 2, -90, 96),
        (5, 1, -18, 96),
    ])
}

pub fn sextic_f2() -> LadderPoly {
    ladder(&[
        (0, 2, -1755, 8),
        (0, 4, -19575, 512),
        (0, 6, 11405, 1536),
        (0, 8, 2325, 2048),
        (0, 10, 61, 2560),
        (0, 12, 1, 4608),
        (2, 0, 18495, 128),
        (4, 0, 27825, 512),
        (6, 0, 13165, 1536),
        (8, 0, 1245, 2048),
        (10, 0, 49, 2560),
        (12, 0, 1, 4608),
        (1, 3, -22275, 32),
        (1, 5, -1215, 64),
        (1, 7, 2245, 256),
        (1, 9, 55, 128),
        (1, 11, 1, 256),
        (2, 4, -300375, 512),
        (2, 6, 165, 16),
        (2, 8, 1225, 512),
        (2, 10, 19, 512),
        (3, 1, 15825, 32),
        (3, 5, -42885, 256),
        (3, 7, 155, 32),
        (3, 9, 45, 256),
        (4, 2, 222825, 512),
        (4, 6, -3895, 256),
        (4, 8, 215, 512),
        (5, 1, 6195, 64),
        (5, 3, 31275, 256),
        (5, 7, -23, 128),
        (6, 2, 795, 16),
        (6, 4, 2285, 256),
        (7, 1, 2165, 256),
        (7, 3, 275, 32),
        (7, 5, -23, 128),
        (8, 2, 1205, 512),
        (8, 4, 215, 512),
        (9, 1, 5, 16),
        (9, 3, 45, 256),
        (10, 2, 19, 512),
        (11, 1, 1, 256),
        (1, 1, -18615, 128),
        (2, 2, -46725, 128),
        (3, 3, -116975, 384),
        (4, 4, -109225, 1024),
        (5, 5, -2107, 128),
        (6, 6, -2107, 2304),
        (0, 0, -685, 64),
    ])
}
