//! Batch runs driven by a JSON configuration.

pub mod latex;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bootstrap::{solve, BootstrapConfig, BootstrapSolution};
use crate::error::{Error, Result};
use crate::moments::ProblemSpec;
use crate::oracle::compare;
use crate::scalars::FieldElem;
use crate::weyl::OpPoly;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Solve,
    Verify,
    Compare,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Sextic,
    Shifted,
    Cubic,
    Custom,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub kind: ProblemKind,
    /// The fully specified problem, built-in or custom.
    pub problem: ProblemSpec,
    pub max_order: usize,
    pub k_schedule: Option<Vec<u32>>,
    pub output_path: Option<PathBuf>,
    pub mode: Option<Mode>,
}

impl RunConfig {
    pub fn bootstrap_config(&self) -> BootstrapConfig {
        BootstrapConfig { max_order: self.max_order, k_schedule: self.k_schedule.clone(), ..Default::default() }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    problem: Value,
    max_order: Option<Value>,
    #[serde(rename = "K_schedule")]
    k_schedule: Option<Vec<Value>>,
    custom_potential: Option<Value>,
    hermitian: Option<bool>,
    parity_even: Option<bool>,
    output_path: Option<String>,
    mode: Option<Mode>,
}

fn invalid(path: &str, message: impl Into<String>) -> Error {
    Error::Validation { path: path.into(), message: message.into() }
}

fn non_negative(v: &Value, path: &str) -> Result<u64> {
    v.as_u64().ok_or_else(|| invalid(path, format!("expected a non-negative integer, got {v}")))
}

fn build_problem(raw: &RawConfig, kind: &ProblemKind) -> Result<ProblemSpec> {
    if *kind != ProblemKind::Custom {
        let p = ProblemSpec::by_name(raw.problem.as_str().unwrap_or_default()).expect("built-in name");
        if raw.custom_potential.is_some() {
            return Err(invalid("custom_potential", "only allowed with \"problem\": \"custom\""));
        }
        if raw.hermitian.is_some_and(|h| h != p.hermitian) {
            return Err(invalid("hermitian", format!("{} has hermitian = {}", p.label, p.hermitian)));
        }
        if raw.parity_even.is_some_and(|h| h != p.parity_even) {
            return Err(invalid("parity_even", format!("{} has parity_even = {}", p.label, p.parity_even)));
        }
        return Ok(p);
    }
    let pot = raw.custom_potential.clone().ok_or_else(|| invalid("custom_potential", "required for a custom problem"))?;
    let perturbation: OpPoly =
        serde_json::from_value(pot).map_err(|e| invalid("custom_potential", format!("not an operator polynomial: {e}")))?;
    let hermitian = raw.hermitian.ok_or_else(|| invalid("hermitian", "required for a custom problem"))?;
    let parity_even = raw.parity_even.ok_or_else(|| invalid("parity_even", "required for a custom problem"))?;
    let p = ProblemSpec {
        label: "custom".into(),
        potential_base: OpPoly::mono(2, 0, FieldElem::frac(1, 2)),
        perturbation,
        hermitian,
        parity_even,
    };
    p.validate().map_err(|e| invalid("custom_potential", e.to_string()))?;
    Ok(p)
}

/// Parses and validates a configuration document, applying defaults.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if !doc.is_object() {
        return Err(Error::Parse("configuration must be a JSON object".into()));
    }
    let raw: RawConfig = serde_json::from_value(doc).map_err(|e| invalid("$", e.to_string()))?;
    let kind: ProblemKind = serde_json::from_value(raw.problem.clone())
        .map_err(|_| invalid("problem", format!("expected sextic, shifted, cubic or custom, got {}", raw.problem)))?;
    let max_order = match &raw.max_order {
        Some(v) => non_negative(v, "max_order")? as usize,
        None => 2,
    };
    let k_schedule = match &raw.k_schedule {
        Some(ks) => {
            let mut out = Vec::with_capacity(ks.len());
            for (j, k) in ks.iter().enumerate() {
                let path = format!("K_schedule[{j}]");
                let k = non_negative(k, &path)?;
                if k == 0 || k > u32::MAX as u64 {
                    return Err(invalid(&path, "ansatz degree must be at least 1"));
                }
                out.push(k as u32);
            }
            if out.len() <= max_order {
                return Err(invalid("K_schedule", format!("needs {} entries for max_order {max_order}", max_order + 1)));
            }
            Some(out)
        }
        None => None,
    };
    let problem = build_problem(&raw, &kind)?;
    Ok(RunConfig { kind, problem, max_order, k_schedule, output_path: raw.output_path.map(PathBuf::from), mode: raw.mode })
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub report: Value,
    pub exit_code: i32,
    pub solution: Option<BootstrapSolution>,
}

fn failure(config: &RunConfig, mode: Mode, e: &Error) -> RunOutcome {
    RunOutcome {
        report: json!({ "problem": config.problem.label, "mode": mode, "max_order": config.max_order, "error": e.to_string() }),
        exit_code: EXIT_FAILURE,
        solution: None,
    }
}

fn verify_report(s: &BootstrapSolution) -> (Value, bool) {
    let v = &s.diagnostics.verification;
    let mut notes = Vec::new();
    let adjoint_ok = v.raiser_is_adjoint.iter().all(|b| *b);
    if !s.problem.hermitian && !adjoint_ok {
        notes.push("raiser differs from adjoint(lower) at some order; expected for a non-Hermitian problem".to_string());
    }
    if !v.commutator_is_one.iter().all(|b| *b) {
        notes.push("[L-, L+] = 1 fails at some order; reported, not required".to_string());
    }
    let passed = v.passed() && s.ladders_numeric() && (!s.problem.hermitian || adjoint_ok);
    let report = json!({
        "problem": s.problem.label,
        "max_order": s.max_order,
        "k_schedule": s.k_schedule,
        "verification": v,
        "ladders_energy_independent": s.ladders_numeric(),
        "notes": notes,
        "passed": passed,
    });
    (report, passed)
}

/// Runs one configuration. Failures are reported in the document, never
/// raised.
pub fn run(config: &RunConfig, mode: Mode) -> RunOutcome {
    let solution = match solve(&config.problem, &config.bootstrap_config()) {
        Ok(s) => s,
        Err(e) => return failure(config, mode, &e),
    };
    let (report, ok) = match mode {
        Mode::Solve => {
            let ok = solution.diagnostics.verification.passed();
            (serde_json::to_value(&solution).unwrap_or(Value::Null), ok)
        }
        Mode::Verify => verify_report(&solution),
        Mode::Compare => match compare(&solution) {
            Ok(c) => {
                let ok = c.all_match && solution.diagnostics.verification.passed();
                (serde_json::to_value(&c).unwrap_or(Value::Null), ok)
            }
            Err(e) => return failure(config, mode, &e),
        },
    };
    RunOutcome { report, exit_code: if ok { EXIT_OK } else { EXIT_FAILURE }, solution: Some(solution) }
}

/// Canonical text of a report: sorted keys, two-space indent, trailing newline.
pub fn render_report(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).unwrap_or_default();
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_apply() {
        let c = parse_config(r#"{"problem":"sextic"}"#).unwrap();
        assert_eq!(c.max_order, 2);
        assert_eq!(c.kind, ProblemKind::Sextic);
        assert!(c.k_schedule.is_none());
    }

    #[test]
    fn negative_order_is_a_validation_error() {
        let e = parse_config(r#"{"problem":"sextic","max_order":-1}"#).unwrap_err();
        assert!(matches!(e, Error::Validation { ref path, .. } if path == "max_order"));
    }

    #[test]
    fn malformed_json_is_a_parse_error() {
        assert!(matches!(parse_config("{\"problem\":"), Err(Error::Parse(_))));
        assert!(matches!(parse_config("[1]"), Err(Error::Parse(_))));
    }

    #[test]
    fn schedule_entries_checked() {
        let e = parse_config(r#"{"problem":"sextic","max_order":1,"K_schedule":[1,0]}"#).unwrap_err();
        assert!(matches!(e, Error::Validation { ref path, .. } if path == "K_schedule[1]"));
        let e = parse_config(r#"{"problem":"sextic","max_order":2,"K_schedule":[1,5]}"#).unwrap_err();
        assert!(matches!(e, Error::Validation { ref path, .. } if path == "K_schedule"));
    }

    #[test]
    fn custom_needs_declarations() {
        let pot = r#"[{"m":4,"n":0,"coeff":[{"mono":{},"coeff":{"a":"1","b":"0","c":"0","d":"0"}}]}]"#;
        let e = parse_config(&format!(r#"{{"problem":"custom","custom_potential":{pot},"hermitian":true}}"#)).unwrap_err();
        assert!(matches!(e, Error::Validation { ref path, .. } if path == "parity_even"));
        let c = parse_config(&format!(r#"{{"problem":"custom","custom_potential":{pot},"hermitian":true,"parity_even":true}}"#)).unwrap();
        assert_eq!(c.problem.perturbation, OpPoly::mono(4, 0, FieldElem::one()));
    }

    #[test]
    fn unknown_problem_rejected() {
        let e = parse_config(r#"{"problem":"quartic"}"#).unwrap_err();
        assert!(matches!(e, Error::Validation { ref path, .. } if path == "problem"));
    }
}
