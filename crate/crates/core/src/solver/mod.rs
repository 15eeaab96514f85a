//! LP / MILP kernel.
//!
//! The reference kernel is a dense bounded-variable primal simplex
//! ([`DenseSimplex`]) with an LP-based branch-and-bound on top
//! ([`solve_milp`]). Anything implementing [`LpBackend`] can replace the LP
//! engine underneath branch-and-bound; [`SparseSimplex`] wraps the `microlp`
//! revised simplex for the larger reformulations, and [`AutoBackend`] picks
//! between the two by problem size.

mod bnb;
mod listing;
mod simplex;
mod sparse;

use serde::{Deserialize, Serialize};

pub use bnb::{lp_relaxation_value, solve_milp, solve_milp_with, MilpOptions};
pub use listing::write_listing;
pub use simplex::DenseSimplex;
pub use sparse::SparseSimplex;

/// Primal feasibility tolerance on constraint rows.
pub const FEAS_TOL: f64 = 1e-7;
/// Distance from the nearest integer below which a value counts as integral.
pub const INT_TOL: f64 = 1e-6;
/// Relative optimality gap at which branch-and-bound stops.
pub const GAP_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    #[default]
    Minimize,
    Maximize,
}

impl Sense {
    /// +1 for minimization, -1 for maximization.
    pub fn sign(self) -> f64 {
        match self {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        }
    }

    /// True when `a` is strictly better than `b` under this sense.
    pub fn better(self, a: f64, b: f64) -> bool {
        match self {
            Sense::Minimize => a < b,
            Sense::Maximize => a > b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

/// One linear row `sum coeffs[i].1 * x[coeffs[i].0]  (relation)  rhs`, stored sparsely.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl Constraint {
    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(j, a)| a * x[j]).sum()
    }

    /// Amount by which `x` violates this row (0 when satisfied).
    pub fn violation(&self, x: &[f64]) -> f64 {
        let lhs = self.activity(x);
        match self.relation {
            Relation::Le => (lhs - self.rhs).max(0.0),
            Relation::Ge => (self.rhs - lhs).max(0.0),
            Relation::Eq => (lhs - self.rhs).abs(),
        }
    }
}

/// `optimize objective·x + constant` subject to rows and per-variable bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<f64>,
    pub constant: f64,
    pub rows: Vec<Constraint>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Optional variable names, used only by the text listing.
    pub names: Option<Vec<String>>,
}

impl LinearProgram {
    /// A program over `n` variables with zero objective and bounds `[0, +inf)`.
    pub fn new(n: usize, sense: Sense) -> Self {
        Self {
            sense,
            objective: vec![0.0; n],
            constant: 0.0,
            rows: Vec::new(),
            lower: vec![0.0; n],
            upper: vec![f64::INFINITY; n],
            names: None,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    /// Appends a variable and returns its index.
    pub fn add_var(&mut self, cost: f64, lower: f64, upper: f64) -> usize {
        self.objective.push(cost);
        self.lower.push(lower);
        self.upper.push(upper);
        if let Some(names) = &mut self.names {
            names.push(format!("v{}", names.len()));
        }
        self.objective.len() - 1
    }

    /// Appends a row; zero coefficients are dropped and repeated indices merged.
    pub fn add_row(
        &mut self,
        coeffs: impl IntoIterator<Item = (usize, f64)>,
        relation: Relation,
        rhs: f64,
    ) {
        let mut merged: Vec<(usize, f64)> = Vec::new();
        let mut items: Vec<(usize, f64)> = coeffs.into_iter().collect();
        items.sort_by_key(|&(j, _)| j);
        for (j, a) in items {
            match merged.last_mut() {
                Some(last) if last.0 == j => last.1 += a,
                _ => merged.push((j, a)),
            }
        }
        merged.retain(|&(_, a)| a != 0.0);
        self.rows.push(Constraint {
            coeffs: merged,
            relation,
            rhs,
        });
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.constant
            + self
                .objective
                .iter()
                .zip(x)
                .map(|(c, v)| c * v)
                .sum::<f64>()
    }

    /// Largest row or bound violation of `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let rows = self.rows.iter().map(|r| r.violation(x)).fold(0.0, f64::max);
        let bounds = x
            .iter()
            .enumerate()
            .map(|(j, &v)| (self.lower[j] - v).max(v - self.upper[j]).max(0.0))
            .fold(0.0, f64::max);
        rows.max(bounds)
    }

    pub(crate) fn check_dims(&self) -> bool {
        let n = self.num_vars();
        n > 0
            && self.lower.len() == n
            && self.upper.len() == n
            && self
                .rows
                .iter()
                .all(|r| r.coeffs.iter().all(|&(j, _)| j < n))
            && self.names.as_ref().is_none_or(|v| v.len() == n)
    }
}

/// An LP whose flagged variables must take integer values.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedIntegerProgram {
    pub lp: LinearProgram,
    pub integer: Vec<bool>,
}

impl MixedIntegerProgram {
    pub fn new(lp: LinearProgram, integer: Vec<bool>) -> Self {
        Self { lp, integer }
    }

    pub fn is_integral(&self, x: &[f64]) -> bool {
        self.integer
            .iter()
            .zip(x)
            .all(|(&int, &v)| !int || (v - v.round()).abs() <= INT_TOL)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    IterLimit,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub status: Status,
    /// Objective value including the constant, in the program's own sense.
    pub value: f64,
    pub primal: Vec<f64>,
    /// Row duals, in the program's own sense (empty when the backend does not report them).
    pub dual: Vec<f64>,
    /// Simplex pivots (LP) or total pivots over all nodes (MILP).
    pub iterations: usize,
    /// Branch-and-bound nodes processed; 0 for a plain LP solve.
    pub node_count: usize,
    /// Value of the root relaxation (MILP only).
    pub root_lp: Option<f64>,
}

impl SolveResult {
    pub(crate) fn failed(status: Status, iterations: usize) -> Self {
        Self {
            status,
            value: f64::NAN,
            primal: Vec::new(),
            dual: Vec::new(),
            iterations,
            node_count: 0,
            root_lp: None,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}

/// Something that can solve a continuous [`LinearProgram`].
pub trait LpBackend: Sync {
    fn solve_lp(&self, lp: &LinearProgram) -> SolveResult;

    fn name(&self) -> &'static str;
}

/// Dense reference kernel for small programs, sparse kernel above a size threshold.
#[derive(Debug, Clone)]
pub struct AutoBackend {
    pub dense: DenseSimplex,
    pub sparse: SparseSimplex,
    /// Programs whose `rows * vars` exceeds this go to the sparse kernel.
    pub dense_limit: usize,
}

impl Default for AutoBackend {
    fn default() -> Self {
        Self {
            dense: DenseSimplex::default(),
            sparse: SparseSimplex,
            dense_limit: 60_000,
        }
    }
}

impl LpBackend for AutoBackend {
    fn solve_lp(&self, lp: &LinearProgram) -> SolveResult {
        if lp.rows.len() * lp.num_vars() > self.dense_limit {
            self.sparse.solve_lp(lp)
        } else {
            self.dense.solve_lp(lp)
        }
    }

    fn name(&self) -> &'static str {
        "auto"
    }
}

/// Named backend choice, as exposed to configuration and the CLI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Dense,
    Sparse,
    #[default]
    Auto,
}

impl BackendKind {
    pub fn backend(self) -> Box<dyn LpBackend> {
        match self {
            BackendKind::Dense => Box::new(DenseSimplex::default()),
            BackendKind::Sparse => Box::new(SparseSimplex),
            BackendKind::Auto => Box::new(AutoBackend::default()),
        }
    }
}

impl std::str::FromStr for BackendKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dense" => Ok(BackendKind::Dense),
            "sparse" => Ok(BackendKind::Sparse),
            "auto" => Ok(BackendKind::Auto),
            other => Err(format!(
                "unknown backend `{other}` (expected dense, sparse or auto)"
            )),
        }
    }
}

/// Solves an LP with the reference dense kernel.
pub fn solve_lp(lp: &LinearProgram) -> SolveResult {
    DenseSimplex::default().solve_lp(lp)
}

/// Lagrangian dual bound of `lp` at row multipliers `y`.
///
/// With reduced costs `r = c - A'y`, the bound is `b'y + sum_j opt_{x_j in [l_j,u_j]} r_j x_j`
/// (inner `min` for minimization, `max` for maximization). Reduced costs smaller than
/// `tol` in magnitude are treated as zero so that infinite bounds do not poison the sum.
/// Returns `None` if `y` has the wrong sign on some inequality row.
pub fn dual_bound(lp: &LinearProgram, y: &[f64], tol: f64) -> Option<f64> {
    let s = lp.sense.sign();
    let mut bound = lp.constant;
    let mut reduced = lp.objective.clone();
    for (row, &yi) in lp.rows.iter().zip(y) {
        // in minimization form: y >= 0 on >= rows, y <= 0 on <= rows
        let ym = s * yi;
        match row.relation {
            Relation::Ge if ym < -tol => return None,
            Relation::Le if ym > tol => return None,
            _ => {}
        }
        bound += yi * row.rhs;
        for &(j, a) in &row.coeffs {
            reduced[j] -= yi * a;
        }
    }
    for (j, &r) in reduced.iter().enumerate() {
        let rm = s * r;
        if rm.abs() <= tol {
            continue;
        }
        let at = if rm > 0.0 { lp.lower[j] } else { lp.upper[j] };
        if !at.is_finite() {
            return Some(-s * f64::INFINITY);
        }
        bound += r * at;
    }
    Some(bound)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_row_merges_duplicates_and_drops_zeros() {
        let mut lp = LinearProgram::new(3, Sense::Minimize);
        lp.add_row([(2, 1.0), (0, 2.0), (2, -1.0), (1, 0.0)], Relation::Le, 4.0);
        assert_eq!(lp.rows[0].coeffs, vec![(0, 2.0)]);
    }

    #[test]
    fn dual_bound_rejects_wrong_sign() {
        let mut lp = LinearProgram::new(1, Sense::Minimize);
        lp.objective[0] = 1.0;
        lp.add_row([(0, 1.0)], Relation::Ge, 1.0);
        assert_eq!(dual_bound(&lp, &[-1.0], 1e-9), None);
        assert_eq!(dual_bound(&lp, &[1.0], 1e-9), Some(1.0));
    }
}
