//! Order-by-order null bootstrap for ladder operators and energies.

mod ansatz;
mod null;
mod steps;
mod verify;

use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

pub use ansatz::{build_ansatz, test_operators, x_ip, Branch, LadderAnsatz};
pub use null::{assemble_null_system, solve_null_stable, solve_order, NullAssembler, OrderContext, PartialOrder};
pub use steps::{ground_condition, impose_energy_independence, impose_normalization, ladder_covariance, solve_energy_recursion};
pub use verify::{is_numeric, verify_solution, VerificationReport};

use crate::error::{Error, Result};
use crate::moments::{MomentTable, ProblemSpec};
use crate::scalars::{FieldElem, Monomial, ParamPoly, Sym};
use crate::weyl::{GradedOp, OpPoly};

/// Ansatz degree `K_i` per order: the worked schedules for the built-in
/// problems, `1 + i(d − 1)` otherwise.
pub fn default_k_schedule(problem: &ProblemSpec, order: usize) -> Vec<u32> {
    let worked: Option<&[u32]> = match problem.label.as_str() {
        "sextic" => Some(&[1, 5, 9]),
        "shifted" => Some(&[1, 3, 3]),
        "cubic" => Some(&[1, 3, 5]),
        _ => None,
    };
    let d = problem.perturbation_degree().max(1);
    (0..=order)
        .map(|i| match worked.and_then(|w| w.get(i)) {
            Some(k) => *k,
            None => 1 + i as u32 * (d - 1).max(1),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BootstrapConfig {
    pub max_order: usize,
    /// Ansatz degrees; `None` picks [`default_k_schedule`].
    pub k_schedule: Option<Vec<u32>>,
    /// How far past `K_i + 1` the test-operator degree may grow.
    pub max_extra_test_degree: u32,
    /// Extra test degree for the post-hoc residual audit.
    pub verify_extra: u32,
    /// Increments of `K_i` tried when a defaulted schedule fails.
    pub k_retries: u32,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig { max_order: 2, k_schedule: None, max_extra_test_degree: 4, verify_extra: 3, k_retries: 2 }
    }
}

impl BootstrapConfig {
    pub fn with_order(max_order: usize) -> Self {
        BootstrapConfig { max_order, ..Default::default() }
    }
}

/// What happened at one order of one branch.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderReport {
    pub order: usize,
    pub branch: Branch,
    pub k: u32,
    pub test_degree: u32,
    /// Unknowns left free by the null conditions.
    pub free_after_null: Vec<String>,
    /// Shifted-level energy coefficient in terms of E0 and `E⁽ⁱ⁾`.
    pub recursion: Option<ParamPoly>,
    pub ground_energy: Option<FieldElem>,
    pub fixed_by_energy_independence: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub orders: Vec<OrderReport>,
    pub verification: VerificationReport,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BootstrapSolution {
    pub problem: ProblemSpec,
    pub max_order: usize,
    pub k_schedule: Vec<u32>,
    /// `E⁽ⁱ⁾` as polynomials in the level `n`.
    pub energies: Vec<ParamPoly>,
    pub lower: Vec<OpPoly>,
    pub raiser: Vec<OpPoly>,
    pub diagnostics: Diagnostics,
}

/// Coefficients of a polynomial in `n`, constant term first.
pub fn coeffs_in_n(p: &ParamPoly) -> Vec<FieldElem> {
    (0..=p.degree_in(Sym::Level)).map(|d| p.coeff(&Monomial::var(Sym::Level, d))).collect()
}

fn field_string(c: &FieldElem) -> String {
    c.to_string()
}

#[derive(Serialize)]
struct EnergyEntry {
    order: usize,
    coeffs_in_n: Vec<String>,
}

impl BootstrapSolution {
    pub fn lower_graded(&self) -> GradedOp {
        GradedOp::from_grades(self.lower.iter().enumerate().map(|(i, l)| (i as i64, l.clone())))
    }

    pub fn raiser_graded(&self) -> GradedOp {
        GradedOp::from_grades(self.raiser.iter().enumerate().map(|(i, l)| (i as i64, l.clone())))
    }

    /// `true` when no ladder coefficient carries a symbol.
    pub fn ladders_numeric(&self) -> bool {
        self.lower.iter().chain(&self.raiser).all(is_numeric)
    }
}

impl Serialize for BootstrapSolution {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let energies: Vec<EnergyEntry> = self
            .energies
            .iter()
            .enumerate()
            .map(|(order, p)| EnergyEntry { order, coeffs_in_n: coeffs_in_n(p).iter().map(field_string).collect() })
            .collect();
        let mut st = s.serialize_struct("BootstrapSolution", 7)?;
        st.serialize_field("problem", &self.problem)?;
        st.serialize_field("max_order", &self.max_order)?;
        st.serialize_field("k_schedule", &self.k_schedule)?;
        st.serialize_field("energies", &energies)?;
        st.serialize_field("lower", &self.lower)?;
        st.serialize_field("raiser", &self.raiser)?;
        st.serialize_field("diagnostics", &self.diagnostics)?;
        st.end()
    }
}

/// Moment degrees needed at each order when order i is solved with test
/// operators up to `test_degree[i]` and ansatz degrees `schedule`.
pub fn required_degrees(problem: &ProblemSpec, schedule: &[u32], test_degree: &[u32]) -> Vec<u32> {
    let k = schedule.len() - 1;
    let d = problem.perturbation_degree();
    let mut req = vec![0u32; k + 1];
    for i in 0..=k {
        let m = test_degree[i];
        for v in 0..=i {
            req[i - v] = req[i - v].max(m + 2 + schedule[v]);
            if i > v {
                req[i - v - 1] = req[i - v - 1].max(m + d + schedule[v]);
            }
            for a in 0..=i - v {
                req[i - v - a] = req[i - v - a].max(schedule[v] + schedule[a]);
            }
        }
    }
    req
}

struct Solver<'a> {
    problem: &'a ProblemSpec,
    config: &'a BootstrapConfig,
    schedule: Vec<u32>,
    margin: Vec<u32>,
    table: Option<(Vec<u32>, MomentTable)>,
}

impl<'a> Solver<'a> {
    fn test_budget(&self) -> Vec<u32> {
        self.schedule.iter().zip(&self.margin).map(|(k, m)| k + 1 + m).collect()
    }

    /// The shared moment table, rebuilt when the requirement grows.
    fn table(&mut self) -> Result<&MomentTable> {
        let req = required_degrees(self.problem, &self.schedule, &self.test_budget());
        let stale = match &self.table {
            Some((have, _)) => have.iter().zip(&req).any(|(h, r)| h < r),
            None => true,
        };
        if stale {
            let t = MomentTable::build(self.problem, self.config.max_order, &req)?;
            self.table = Some((req, t));
        }
        Ok(&self.table.as_ref().unwrap().1)
    }

    fn run(&mut self) -> Result<BootstrapSolution> {
        let k = self.config.max_order;
        let mut energies: Vec<ParamPoly> = Vec::new();
        let mut lower: Vec<OpPoly> = Vec::new();
        let mut raiser: Vec<OpPoly> = Vec::new();
        let mut reports = Vec::new();
        let defaulted = self.config.k_schedule.is_none();
        for i in 0..=k {
            let mut attempt = 0;
            loop {
                match self.solve_order_pair(i, &mut energies, &lower, &raiser) {
                    Ok((l, r, mut rep)) => {
                        lower.push(l);
                        raiser.push(r);
                        reports.append(&mut rep);
                        break;
                    }
                    Err(Error::OrderExceeded { .. }) if self.margin[i] < self.config.max_extra_test_degree + 8 => {
                        self.margin[i] += 2;
                    }
                    Err(e) if defaulted && attempt < self.config.k_retries && retryable(&e) => {
                        attempt += 1;
                        self.schedule[i] += 1;
                    }
                    Err(e) => return Err(e),
                }
                energies.truncate(i);
            }
        }

        let used: Vec<u32> =
            (0..=k).map(|i| reports.iter().filter(|r: &&OrderReport| r.order == i).map(|r| r.test_degree).max().unwrap_or(0)).collect();
        let audit: Vec<u32> = used.iter().map(|m| m + self.config.verify_extra).collect();
        for (i, a) in audit.iter().enumerate() {
            self.margin[i] = self.margin[i].max(a - self.schedule[i] - 1);
        }
        let mut solution = BootstrapSolution {
            problem: self.problem.clone(),
            max_order: k,
            k_schedule: self.schedule.clone(),
            energies,
            lower,
            raiser,
            diagnostics: Diagnostics { orders: reports, verification: empty_report() },
        };
        let table = self.table()?;
        solution.diagnostics.verification = verify_solution(&solution, table, &audit)?;
        Ok(solution)
    }

    fn solve_order_pair(
        &mut self,
        i: usize,
        energies: &mut Vec<ParamPoly>,
        lower: &[OpPoly],
        raiser: &[OpPoly],
    ) -> Result<(OpPoly, OpPoly, Vec<OrderReport>)> {
        let problem = self.problem;
        let extra = self.config.max_extra_test_degree;
        let d = problem.perturbation_degree().max(1) as usize;
        let ki = self.schedule[i];
        let table = self.table()?;

        let ansatz = build_ansatz(i as u32, ki, Branch::Lower);
        let ctx = OrderContext::new(problem, table, i, Branch::Lower, energies, lower);
        let partial = solve_order(&ctx, &ansatz, extra)?;
        let ground = ground_condition(&ctx, &partial)?;
        let recursion = partial.recursion.clone().expect("lowering branch carries a recursion");
        let energy = solve_energy_recursion(&recursion, i, &ground, i * (d - 1) + 1)?;
        let mut lower_report = report(&partial);
        lower_report.ground_energy = Some(ground);
        energies.push(energy);
        let (refined, fixed) = impose_energy_independence(&partial, energies)?;
        lower_report.fixed_by_energy_independence = fixed.iter().map(Sym::name).collect();
        let ctx = OrderContext::new(problem, table, i, Branch::Lower, energies, lower);
        let l = impose_normalization(&ctx, &refined)?;

        let ansatz = build_ansatz(i as u32, ki, Branch::Raise);
        let ctx = OrderContext::new(problem, table, i, Branch::Raise, energies, raiser);
        let partial = solve_order(&ctx, &ansatz, extra)?;
        let mut raise_report = report(&partial);
        let (refined, fixed) = impose_energy_independence(&partial, energies)?;
        raise_report.fixed_by_energy_independence = fixed.iter().map(Sym::name).collect();
        let r = impose_normalization(&ctx, &refined)?;
        Ok((l, r, vec![lower_report, raise_report]))
    }
}

fn retryable(e: &Error) -> bool {
    matches!(
        e,
        Error::ResidualFreedom(_)
            | Error::InconsistentSystem(_)
            | Error::InconsistentGroundSystem(_)
            | Error::NonConstantPivot(_)
            | Error::Unstable(_)
            | Error::NoPolynomialSolution(_)
    )
}

fn report(p: &PartialOrder) -> OrderReport {
    OrderReport {
        order: p.order,
        branch: p.branch,
        k: p.k,
        test_degree: p.test_degree,
        free_after_null: p.free.iter().map(Sym::name).collect(),
        recursion: p.recursion.clone(),
        ground_energy: None,
        fixed_by_energy_independence: Vec::new(),
    }
}

fn empty_report() -> VerificationReport {
    VerificationReport {
        test_degree: Vec::new(),
        residuals_checked: 0,
        nonzero_residuals: Vec::new(),
        lower_normalized: Vec::new(),
        raiser_normalized: Vec::new(),
        raiser_is_adjoint: Vec::new(),
        commutator_is_one: Vec::new(),
        h_minus_raiser_lower: Vec::new(),
    }
}

/// Runs the bootstrap through `config.max_order` and audits the result.
pub fn solve(problem: &ProblemSpec, config: &BootstrapConfig) -> Result<BootstrapSolution> {
    problem.validate()?;
    let schedule = match &config.k_schedule {
        Some(s) => {
            if s.len() <= config.max_order {
                return Err(Error::Validation {
                    path: "K_schedule".into(),
                    message: format!("needs {} entries, got {}", config.max_order + 1, s.len()),
                });
            }
            if s.contains(&0) {
                return Err(Error::Validation { path: "K_schedule".into(), message: "entries must be at least 1".into() });
            }
            s[..=config.max_order].to_vec()
        }
        None => default_k_schedule(problem, config.max_order),
    };
    let margin = vec![config.verify_extra + 1; config.max_order + 1];
    Solver { problem, config, schedule, margin, table: None }.run()
}
