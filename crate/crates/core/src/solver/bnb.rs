//! LP-based branch-and-bound.
//!
//! Best-first on the parent relaxation bound (ties: older node first),
//! branching on the most fractional integer variable (ties: lowest index).
//! Children are evaluated lazily when popped.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::{DenseSimplex, LpBackend, MixedIntegerProgram, SolveResult, Status, GAP_TOL, INT_TOL};

#[derive(Debug, Clone)]
pub struct MilpOptions {
    pub max_nodes: usize,
    /// Relative gap: a node is pruned once its bound is within `gap * max(1, |incumbent|)`.
    pub gap: f64,
    pub int_tol: f64,
}

impl Default for MilpOptions {
    fn default() -> Self {
        Self {
            max_nodes: 500_000,
            gap: GAP_TOL,
            int_tol: INT_TOL,
        }
    }
}

struct Node {
    /// Parent bound in minimisation form.
    key: f64,
    id: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // BinaryHeap is a max-heap: the smallest key, then the smallest id, must compare greatest.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .key
            .total_cmp(&self.key)
            .then_with(|| other.id.cmp(&self.id))
    }
}

/// Solves a MILP with the dense reference kernel and default options.
pub fn solve_milp(mip: &MixedIntegerProgram) -> SolveResult {
    solve_milp_with(mip, &DenseSimplex::default(), &MilpOptions::default())
}

pub fn solve_milp_with(
    mip: &MixedIntegerProgram,
    backend: &dyn LpBackend,
    opts: &MilpOptions,
) -> SolveResult {
    let lp = &mip.lp;
    assert_eq!(mip.integer.len(), lp.num_vars(), "integrality mask length");
    let s = lp.sense.sign();

    let mut heap = BinaryHeap::new();
    heap.push(Node {
        key: f64::NEG_INFINITY,
        id: 0,
        lower: lp.lower.clone(),
        upper: lp.upper.clone(),
    });
    let mut next_id = 1;
    let mut incumbent: Option<(f64, Vec<f64>)> = None;
    let mut root_lp = None;
    let mut nodes = 0;
    let mut pivots = 0;
    let mut work = lp.clone();

    let prunable = |key: f64, inc: &Option<(f64, Vec<f64>)>| match inc {
        Some((best, _)) => key >= best - opts.gap * best.abs().max(1.0),
        None => false,
    };

    while let Some(node) = heap.pop() {
        if prunable(node.key, &incumbent) {
            continue;
        }
        if nodes >= opts.max_nodes {
            return finish(lp, Status::IterLimit, incumbent, root_lp, nodes, pivots);
        }
        nodes += 1;
        work.lower.clone_from(&node.lower);
        work.upper.clone_from(&node.upper);
        let res = backend.solve_lp(&work);
        pivots += res.iterations;
        if node.id == 0 {
            match res.status {
                Status::Optimal => root_lp = Some(res.value),
                other => return finish(lp, other, None, None, nodes, pivots),
            }
        }
        match res.status {
            Status::Optimal => {}
            Status::Infeasible => continue,
            other => return finish(lp, other, incumbent, root_lp, nodes, pivots),
        }
        let key = s * res.value;
        if prunable(key, &incumbent) {
            continue;
        }

        let mut branch: Option<(usize, f64)> = None;
        let mut best_score = opts.int_tol;
        for (j, &v) in res.primal.iter().enumerate() {
            if !mip.integer[j] {
                continue;
            }
            let frac = v - v.floor();
            let score = frac.min(1.0 - frac);
            if score > best_score {
                best_score = score;
                branch = Some((j, v));
            }
        }

        match branch {
            None => {
                let mut x = res.primal;
                for (j, v) in x.iter_mut().enumerate() {
                    if mip.integer[j] {
                        *v = v.round();
                    }
                }
                let value = s * lp.objective_value(&x);
                if incumbent.as_ref().is_none_or(|(best, _)| value < *best) {
                    incumbent = Some((value, x));
                }
            }
            Some((j, v)) => {
                let mut down_upper = node.upper.clone();
                down_upper[j] = v.floor();
                heap.push(Node {
                    key,
                    id: next_id,
                    lower: node.lower.clone(),
                    upper: down_upper,
                });
                let mut up_lower = node.lower;
                up_lower[j] = v.ceil();
                heap.push(Node {
                    key,
                    id: next_id + 1,
                    lower: up_lower,
                    upper: node.upper,
                });
                next_id += 2;
            }
        }
    }

    let status = if incumbent.is_some() {
        Status::Optimal
    } else {
        Status::Infeasible
    };
    finish(lp, status, incumbent, root_lp, nodes, pivots)
}

fn finish(
    lp: &super::LinearProgram,
    status: Status,
    incumbent: Option<(f64, Vec<f64>)>,
    root_lp: Option<f64>,
    nodes: usize,
    pivots: usize,
) -> SolveResult {
    match incumbent {
        Some((_, x)) => SolveResult {
            status,
            value: lp.objective_value(&x),
            primal: x,
            dual: Vec::new(),
            iterations: pivots,
            node_count: nodes,
            root_lp,
        },
        None => SolveResult {
            node_count: nodes,
            root_lp,
            ..SolveResult::failed(status, pivots)
        },
    }
}

/// Optimal value of `mip` with integrality dropped.
pub fn lp_relaxation_value(
    mip: &MixedIntegerProgram,
    backend: &dyn LpBackend,
) -> Result<f64, Status> {
    let res = backend.solve_lp(&mip.lp);
    match res.status {
        Status::Optimal => Ok(res.value),
        other => Err(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{LinearProgram, Relation, Sense, SparseSimplex};

    fn binary_program(objective: &[f64], sense: Sense) -> LinearProgram {
        let mut lp = LinearProgram::new(objective.len(), sense);
        lp.objective = objective.to_vec();
        lp.upper = vec![1.0; objective.len()];
        lp
    }

    #[test]
    fn two_binaries_sharing_a_unit_budget() {
        let mut lp = binary_program(&[-1.0, -1.0], Sense::Minimize);
        lp.add_row([(0, 1.0), (1, 1.0)], Relation::Le, 1.0);
        let res = solve_milp(&MixedIntegerProgram::new(lp, vec![true; 2]));
        assert!(res.is_optimal());
        assert!((res.value + 1.0).abs() < 1e-12);
    }

    #[test]
    fn rounding_gap_between_relaxation_and_milp() {
        let mut lp = binary_program(&[1.0], Sense::Minimize);
        lp.add_row([(0, 2.0)], Relation::Ge, 1.0);
        let mip = MixedIntegerProgram::new(lp, vec![true]);
        let relaxed = lp_relaxation_value(&mip, &DenseSimplex::default()).unwrap();
        assert!((relaxed - 0.5).abs() < 1e-12);
        let res = solve_milp(&mip);
        assert!((res.value - 1.0).abs() < 1e-12);
        assert_eq!(res.root_lp, Some(relaxed));
    }

    #[test]
    fn sorting_as_milp_picks_two_cheapest() {
        let costs = [0.1, 0.2, 0.3, 0.4, 0.5];
        let mut lp = binary_program(&costs, Sense::Minimize);
        lp.add_row((0..5).map(|j| (j, 1.0)), Relation::Le, 2.0);
        lp.add_row((0..5).map(|j| (j, -1.0)), Relation::Le, -2.0);
        let mip = MixedIntegerProgram::new(lp, vec![true; 5]);
        for backend in [&DenseSimplex::default() as &dyn LpBackend, &SparseSimplex] {
            let res = solve_milp_with(&mip, backend, &MilpOptions::default());
            assert!(
                (res.value - 0.3).abs() < 1e-9,
                "{}: {}",
                backend.name(),
                res.value
            );
        }
    }

    #[test]
    fn infeasible_integer_program() {
        let mut lp = binary_program(&[1.0], Sense::Minimize);
        lp.add_row([(0, 2.0)], Relation::Eq, 1.0);
        let res = solve_milp(&MixedIntegerProgram::new(lp, vec![true]));
        assert_eq!(res.status, Status::Infeasible);
    }

    #[test]
    fn maximisation_knapsack() {
        let mut lp = binary_program(&[5.0, 4.0, 3.0], Sense::Maximize);
        lp.add_row([(0, 2.0), (1, 3.0), (2, 1.0)], Relation::Le, 5.0);
        let res = solve_milp(&MixedIntegerProgram::new(lp, vec![true; 3]));
        assert!((res.value - 9.0).abs() < 1e-9);
        assert!(res.node_count >= 1);
    }
}
