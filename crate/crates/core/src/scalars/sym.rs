//! Named symbols appearing in polynomial coefficients.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A symbol of a [`ParamPoly`](super::ParamPoly).
///
/// The derived `Ord` is the canonical variable order used by the graded
/// lexicographic monomial order: energy coefficients first (by order index),
/// then the remaining families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sym {
    /// `Ei`: g^i coefficient of the energy of the level under study.
    Energy(u32),
    /// `Epi`: g^i coefficient of the energy of the adjacent level (n ∓ 1).
    ShiftedEnergy(u32),
    /// `E`: the full (unexpanded) energy, used in exact recursions.
    EnergyFull,
    /// `n`: the level index.
    Level,
    /// `Ai_m_n`: coefficient of x^m (ip)^n in the order-i ladder ansatz.
    Ansatz { order: u32, m: u32, n: u32 },
    /// `ReAi_m_n` / `ImAi_m_n`: real and imaginary parts of an ansatz unknown.
    AnsatzPart { imag: bool, order: u32, m: u32, n: u32 },
    /// `Bm_n_l`: g^l coefficient of the basis moment ⟨x^m p^n⟩.
    Basis { m: u32, n: u32, order: u32 },
    /// `ck`: scratch unknowns (polynomial coefficients and the like).
    Aux(u32),
}

impl Sym {
    pub fn is_energy(&self) -> bool {
        matches!(self, Sym::Energy(_) | Sym::ShiftedEnergy(_) | Sym::EnergyFull)
    }

    pub fn name(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sym::Energy(i) => write!(f, "E{i}"),
            Sym::ShiftedEnergy(i) => write!(f, "Ep{i}"),
            Sym::EnergyFull => write!(f, "E"),
            Sym::Level => write!(f, "n"),
            Sym::Ansatz { order, m, n } => write!(f, "A{order}_{m}_{n}"),
            Sym::AnsatzPart { imag, order, m, n } => {
                write!(f, "{}A{order}_{m}_{n}", if *imag { "Im" } else { "Re" })
            }
            Sym::Basis { m, n, order } => write!(f, "B{m}_{n}_{order}"),
            Sym::Aux(k) => write!(f, "c{k}"),
        }
    }
}

fn parse_u32s(s: &str, count: usize) -> Option<Vec<u32>> {
    let v: Option<Vec<u32>> = s.split('_').map(|p| p.parse().ok()).collect();
    v.filter(|v| v.len() == count)
}

impl FromStr for Sym {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown symbol {s:?}"));
        if s == "E" {
            return Ok(Sym::EnergyFull);
        }
        if s == "n" {
            return Ok(Sym::Level);
        }
        for (prefix, imag) in [("ReA", false), ("ImA", true)] {
            if let Some(rest) = s.strip_prefix(prefix) {
                let v = parse_u32s(rest, 3).ok_or_else(bad)?;
                return Ok(Sym::AnsatzPart { imag, order: v[0], m: v[1], n: v[2] });
            }
        }
        if let Some(rest) = s.strip_prefix("Ep") {
            return rest.parse().map(Sym::ShiftedEnergy).map_err(|_| bad());
        }
        if let Some(rest) = s.strip_prefix('E') {
            return rest.parse().map(Sym::Energy).map_err(|_| bad());
        }
        if let Some(rest) = s.strip_prefix('A') {
            let v = parse_u32s(rest, 3).ok_or_else(bad)?;
            return Ok(Sym::Ansatz { order: v[0], m: v[1], n: v[2] });
        }
        if let Some(rest) = s.strip_prefix('B') {
            let v = parse_u32s(rest, 3).ok_or_else(bad)?;
            return Ok(Sym::Basis { m: v[0], n: v[1], order: v[2] });
        }
        if let Some(rest) = s.strip_prefix('c') {
            return rest.parse().map(Sym::Aux).map_err(|_| bad());
        }
        Err(bad())
    }
}
