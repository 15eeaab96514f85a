//! Sparse revised-simplex backend delegating to `microlp`.
//!
//! Used for the large reformulations where the dense tableau does not fit the
//! time budget. Row duals are not reported by this backend.

use microlp::{ComparisonOp, Error, LinearExpr, OptimizationDirection, Problem};

use super::{LinearProgram, LpBackend, Relation, Sense, SolveResult, Status};

#[derive(Debug, Clone, Copy, Default)]
pub struct SparseSimplex;

impl LpBackend for SparseSimplex {
    fn solve_lp(&self, lp: &LinearProgram) -> SolveResult {
        assert!(lp.check_dims(), "malformed linear program");
        let direction = match lp.sense {
            Sense::Minimize => OptimizationDirection::Minimize,
            Sense::Maximize => OptimizationDirection::Maximize,
        };
        let mut problem = Problem::new(direction);
        let vars: Vec<_> = (0..lp.num_vars())
            .map(|j| problem.add_var(lp.objective[j], (lp.lower[j], lp.upper[j])))
            .collect();
        for row in &lp.rows {
            let expr: LinearExpr = row.coeffs.iter().map(|&(j, a)| (vars[j], a)).collect();
            let op = match row.relation {
                Relation::Le => ComparisonOp::Le,
                Relation::Eq => ComparisonOp::Eq,
                Relation::Ge => ComparisonOp::Ge,
            };
            problem.add_constraint(expr, op, row.rhs);
        }
        match problem.solve() {
            Ok(outcome) => match outcome.solution() {
                Some(sol) if outcome.is_optimal() => {
                    let primal: Vec<f64> = vars.iter().map(|&v| sol.var_value_raw(v)).collect();
                    SolveResult {
                        status: Status::Optimal,
                        value: lp.objective_value(&primal),
                        primal,
                        dual: Vec::new(),
                        iterations: 0,
                        node_count: 0,
                        root_lp: None,
                    }
                }
                _ => SolveResult::failed(Status::IterLimit, 0),
            },
            Err(Error::Infeasible) => SolveResult::failed(Status::Infeasible, 0),
            Err(Error::Unbounded) => SolveResult::failed(Status::Unbounded, 0),
            Err(_) => SolveResult::failed(Status::IterLimit, 0),
        }
    }

    fn name(&self) -> &'static str {
        "sparse"
    }
}
