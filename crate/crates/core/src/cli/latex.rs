//! LaTeX rendering of energies and ladder operators.

use num::{One, Signed};

use crate::bootstrap::{coeffs_in_n, BootstrapSolution};
use crate::scalars::{FieldElem, Rat};
use crate::weyl::OpPoly;

fn rat_abs(r: &Rat) -> String {
    let r = r.abs();
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
    }
}

/// Signed pieces `(negative, body)` of a field element.
fn pieces(c: &FieldElem) -> Vec<(bool, String)> {
    let units = [(&c.a, ""), (&c.b, "\\sqrt{2}"), (&c.c, "i"), (&c.d, "i\\sqrt{2}")];
    units
        .into_iter()
        .filter(|(r, _)| !num::Zero::is_zero(*r))
        .map(|(r, unit)| {
            let body = match (r.abs().is_one(), unit.is_empty()) {
                (true, true) => "1".to_string(),
                (true, false) => unit.to_string(),
                (false, _) => format!("{}{}", rat_abs(r), unit),
            };
            (r.is_negative(), body)
        })
        .collect()
}

fn join_signed(terms: Vec<(bool, String)>) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (neg, body)) in terms.into_iter().enumerate() {
        match (k, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    out
}

/// Coefficient times a monomial; multi-part coefficients are bracketed.
fn scaled(c: &FieldElem, mono: &str) -> Vec<(bool, String)> {
    let p = pieces(c);
    if mono.is_empty() {
        return p;
    }
    match p.len() {
        0 => Vec::new(),
        1 => {
            let (neg, body) = &p[0];
            let body = if body == "1" { mono.to_string() } else { format!("{body}\\,{mono}") };
            vec![(*neg, body)]
        }
        _ => vec![(false, format!("\\left({}\\right){mono}", join_signed(p)))],
    }
}

fn power(var: &str, e: u32) -> String {
    match e {
        0 => String::new(),
        1 => var.to_string(),
        _ => format!("{var}^{{{e}}}"),
    }
}

pub fn field_latex(c: &FieldElem) -> String {
    join_signed(pieces(c))
}

pub fn energy_latex(coeffs: &[FieldElem]) -> String {
    join_signed(coeffs.iter().enumerate().flat_map(|(d, c)| scaled(c, &power("n", d as u32))).collect())
}

pub fn op_latex(op: &OpPoly) -> String {
    let terms = op
        .terms()
        .flat_map(|(k, c)| {
            let mono = format!("{}{}", power("x", k.m), power("p", k.n));
            match c.as_constant() {
                Some(c) => scaled(&c, &mono),
                None => vec![(false, format!("\\left({c}\\right){mono}"))],
            }
        })
        .collect();
    join_signed(terms)
}

/// An `align*` block with `E_n⁽ⁱ⁾` and `L±⁽ⁱ⁾` per order.
pub fn solution_latex(s: &BootstrapSolution) -> String {
    let mut lines = Vec::new();
    for (i, e) in s.energies.iter().enumerate() {
        lines.push(format!("E_n^{{({i})}} &= {}", energy_latex(&coeffs_in_n(e))));
    }
    for (i, (l, r)) in s.lower.iter().zip(&s.raiser).enumerate() {
        lines.push(format!("L_{{-}}^{{({i})}} &= {}", op_latex(l)));
        lines.push(format!("L_{{+}}^{{({i})}} &= {}", op_latex(r)));
    }
    format!("% {}\n\\begin{{align*}}\n{}\n\\end{{align*}}\n", s.problem.label, lines.join(" \\\\\n"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_field_elements() {
        assert_eq!(field_latex(&FieldElem::frac(-15, 8)), "-\\frac{15}{8}");
        assert_eq!(field_latex(&(FieldElem::one() + FieldElem::sqrt2())), "1 + \\sqrt{2}");
        assert_eq!(field_latex(&FieldElem::inv_sqrt2().mul_i()), "\\frac{1}{2}i\\sqrt{2}");
        assert_eq!(field_latex(&FieldElem::zero()), "0");
    }

    #[test]
    fn renders_polynomials() {
        let e = energy_latex(&[FieldElem::frac(1, 2), FieldElem::one()]);
        assert_eq!(e, "\\frac{1}{2} + n");
        let op = &OpPoly::mono(1, 0, FieldElem::inv_sqrt2()) + &OpPoly::mono(0, 1, -FieldElem::one());
        assert_eq!(op_latex(&op), "-p + \\frac{1}{2}\\sqrt{2}\\,x");
    }
}
