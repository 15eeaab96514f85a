//! Polynomial special cases for linear loss `c'x` and binary decisions.
//!
//! * Box support `[l, u]`, exact data: the worst-case expectation of a fixed
//!   decision is `min{ mean(c_k)'x + eps, u'x }` ([`box_worst_case_value`]).
//! * Interval (and semi-bandit) data: the whole problem reduces to two nominal
//!   problems, one on the averaged upper bounds plus `eps` and one on `u`
//!   ([`solve_interval_data`]).
//! * Bandit data from pairwise disjoint historical decisions on the unit box:
//!   the optimum is one of the historical decisions and has a closed-form value
//!   ([`solve_bandit_disjoint`]).

use serde::{Deserialize, Serialize};

use crate::error::{DroError, Result};
use crate::model::{check_len, dot, DataScenario, FeasibleSet, ProblemInstance};
use crate::problems::{shortest_path_dp, LayeredGraph};
use crate::solver::{
    self, BackendKind, LinearProgram, MilpOptions, MixedIntegerProgram, Sense, Status, FEAS_TOL,
};

/// Worst-case expected cost of binary `x` under exact data on a box support with upper corner `u`.
pub fn box_worst_case_value(x: &[f64], data: &[Vec<f64>], u: &[f64], epsilon: f64) -> Result<f64> {
    check_len("upper bounds", x.len(), u.len())?;
    if data.is_empty() {
        return Err(DroError::EmptyInput);
    }
    let mut mean = 0.0;
    for c in data {
        check_len("data point", x.len(), c.len())?;
        mean += dot(c, x);
    }
    mean /= data.len() as f64;
    Ok((mean + epsilon).min(dot(u, x)))
}

/// Solver for the underlying deterministic problem `opt { costs'x : x in X }`.
pub trait NominalCop: Sync {
    fn optimize(&self, costs: &[f64], sense: Sense) -> Result<(f64, Vec<f64>)>;
}

/// Pick exactly `h` items: sort and take the `h` best (ties to the lower index).
#[derive(Debug, Clone, Copy)]
pub struct SortingSelector {
    pub h: usize,
}

impl NominalCop for SortingSelector {
    fn optimize(&self, costs: &[f64], sense: Sense) -> Result<(f64, Vec<f64>)> {
        if self.h == 0 || self.h > costs.len() {
            return Err(DroError::BadCardinality {
                n: costs.len(),
                h: self.h,
            });
        }
        let mut order: Vec<usize> = (0..costs.len()).collect();
        let s = sense.sign();
        order.sort_by(|&a, &b| (s * costs[a]).total_cmp(&(s * costs[b])));
        let mut x = vec![0.0; costs.len()];
        let mut value = 0.0;
        for &a in &order[..self.h] {
            x[a] = 1.0;
            value += costs[a];
        }
        Ok((value, x))
    }
}

/// Shortest (or longest) path in a layered graph by dynamic programming.
#[derive(Debug, Clone, Copy)]
pub struct LayeredDp {
    pub graph: LayeredGraph,
}

impl NominalCop for LayeredDp {
    fn optimize(&self, costs: &[f64], sense: Sense) -> Result<(f64, Vec<f64>)> {
        check_len("arc costs", self.graph.num_arcs(), costs.len())?;
        let s = sense.sign();
        let signed: Vec<f64> = costs.iter().map(|c| s * c).collect();
        let (v, x) = shortest_path_dp(&self.graph, &signed);
        Ok((s * v, x))
    }
}

/// Any mixed-integer feasible set, through branch-and-bound.
#[derive(Debug, Clone)]
pub struct MilpCop {
    pub feasible: FeasibleSet,
    pub backend: BackendKind,
}

impl MilpCop {
    pub fn new(feasible: FeasibleSet) -> Self {
        Self {
            feasible,
            backend: BackendKind::Dense,
        }
    }
}

impl NominalCop for MilpCop {
    fn optimize(&self, costs: &[f64], sense: Sense) -> Result<(f64, Vec<f64>)> {
        check_len("costs", self.feasible.n(), costs.len())?;
        let mut lp = LinearProgram::new(0, sense);
        self.feasible.embed(&mut lp)?;
        lp.objective = costs.to_vec();
        let mip = MixedIntegerProgram::new(lp, self.feasible.integer_mask());
        let res = solver::solve_milp_with(
            &mip,
            self.backend.backend().as_ref(),
            &MilpOptions::default(),
        );
        match res.status {
            Status::Optimal => Ok((res.value, res.primal)),
            other => Err(DroError::Solver(other)),
        }
    }
}

/// Per-sample boxes `[lower_k, upper_k]` inside the support box `[lower, upper]`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalData {
    pub lower_k: Vec<Vec<f64>>,
    pub upper_k: Vec<Vec<f64>>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl IntervalData {
    pub fn new(
        lower_k: Vec<Vec<f64>>,
        upper_k: Vec<Vec<f64>>,
        lower: Vec<f64>,
        upper: Vec<f64>,
    ) -> Result<Self> {
        let n = lower.len();
        check_len("support upper", n, upper.len())?;
        check_len("sample count", lower_k.len(), upper_k.len())?;
        if lower_k.is_empty() {
            return Err(DroError::EmptyInput);
        }
        for (lk, uk) in lower_k.iter().zip(&upper_k) {
            check_len("sample lower", n, lk.len())?;
            check_len("sample upper", n, uk.len())?;
            for a in 0..n {
                let chain = [lower[a], lk[a], uk[a], upper[a]];
                if chain.windows(2).any(|w| w[0] > w[1] + FEAS_TOL) {
                    return Err(DroError::InvalidInstance(format!(
                        "component {a}: need l <= l_k <= u_k <= u, got {chain:?}"
                    )));
                }
            }
        }
        Ok(Self {
            lower_k,
            upper_k,
            lower,
            upper,
        })
    }

    /// Reads the interval description off an instance with linear loss, binary
    /// decisions and box support. Exact points become zero-width boxes;
    /// semi-bandit observations become zero-width on observed components and
    /// the full support range elsewhere.
    pub fn from_instance(inst: &ProblemInstance) -> Result<Self> {
        if !inst.feasible.is_binary() {
            return Err(DroError::Unsupported(
                "interval closed form needs binary decisions".into(),
            ));
        }
        let (lower, upper) = box_support(inst)?;
        check_linear_loss(inst, &lower, &upper)?;
        let n = inst.n();
        let mut lower_k = Vec::with_capacity(inst.k());
        let mut upper_k = Vec::with_capacity(inst.k());
        for s in &inst.scenarios {
            let (lk, uk) = match s {
                DataScenario::Exact { point } => {
                    check_len("exact point", n, point.len())?;
                    (point.clone(), point.clone())
                }
                DataScenario::Interval { lower: l, upper: u } => {
                    check_len("interval", n, l.len())?;
                    check_len("interval", n, u.len())?;
                    let lk = l.iter().zip(&lower).map(|(a, b)| a.max(*b)).collect();
                    let uk = u.iter().zip(&upper).map(|(a, b)| a.min(*b)).collect();
                    (lk, uk)
                }
                DataScenario::SemiBandit { observed } => {
                    let (mut lk, mut uk) = (lower.clone(), upper.clone());
                    for &(a, v) in observed {
                        if a >= n {
                            return Err(DroError::DimensionMismatch {
                                what: "observed component",
                                expected: n,
                                got: a + 1,
                            });
                        }
                        lk[a] = v;
                        uk[a] = v;
                    }
                    (lk, uk)
                }
                DataScenario::Bandit { .. } => {
                    return Err(DroError::Unsupported(
                        "bandit data has no interval form".into(),
                    ));
                }
            };
            lower_k.push(lk);
            upper_k.push(uk);
        }
        Self::new(lower_k, upper_k, lower, upper)
    }

    pub fn k(&self) -> usize {
        self.lower_k.len()
    }
}

fn box_support(inst: &ProblemInstance) -> Result<(Vec<f64>, Vec<f64>)> {
    match inst.support.as_box() {
        Some((lo, hi)) if lo.iter().chain(&hi).all(|v| v.is_finite()) => Ok((lo, hi)),
        _ => Err(DroError::Unsupported(
            "closed forms need a bounded box support".into(),
        )),
    }
}

/// Accepts `c'x`, or `c'x` restricted to a coordinate mask when the masked-out
/// coordinates are pinned to zero by the support.
fn check_linear_loss(inst: &ProblemInstance, lower: &[f64], upper: &[f64]) -> Result<()> {
    let loss = &inst.loss;
    let n = inst.n();
    let zero = |v: &[f64]| v.iter().all(|&a| a == 0.0);
    let mut ok = zero(&loss.t1) && zero(&loss.t2) && loss.t0 == 0.0;
    for i in 0..n {
        for j in 0..n {
            let v = loss.t[i][j];
            ok &= if i == j {
                v == 1.0 || (v == 0.0 && lower[i] == 0.0 && upper[i] == 0.0)
            } else {
                v == 0.0
            };
        }
    }
    if ok {
        Ok(())
    } else {
        Err(DroError::Unsupported(
            "closed forms need the loss c'x".into(),
        ))
    }
}

/// Which of the two nominal problems attained the optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// Averaged data bounds plus (minus) the radius.
    F1,
    /// Support bound only: the most conservative choice.
    F2,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalSolution {
    pub value: f64,
    pub x: Vec<f64>,
    pub f1: f64,
    pub f2: f64,
    pub regime: Regime,
}

/// Optimal value and decision under interval data.
///
/// Minimization compares `min mean(u_k)'x + eps` with `min u'x`; maximization
/// compares `max mean(l_k)'x - eps` with `max l'x`. Exact ties go to the first.
pub fn solve_interval_data(
    data: &IntervalData,
    epsilon: f64,
    sense: Sense,
    cop: &dyn NominalCop,
) -> Result<IntervalSolution> {
    let (per_sample, bound, shift) = match sense {
        Sense::Minimize => (&data.upper_k, &data.upper, epsilon),
        Sense::Maximize => (&data.lower_k, &data.lower, -epsilon),
    };
    let kf = data.k() as f64;
    let n = bound.len();
    let mean: Vec<f64> = (0..n)
        .map(|a| per_sample.iter().map(|v| v[a]).sum::<f64>() / kf)
        .collect();
    let (v1, x1) = cop.optimize(&mean, sense)?;
    let (v2, x2) = cop.optimize(bound, sense)?;
    let (f1, f2) = (v1 + shift, v2);
    let (value, x, regime) = if sense.better(f2, f1) {
        (f2, x2, Regime::F2)
    } else {
        (f1, x1, Regime::F1)
    };
    Ok(IntervalSolution {
        value,
        x,
        f1,
        f2,
        regime,
    })
}

/// Identical historical decisions merged into groups, in order of first appearance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionGrouping {
    pub decisions: Vec<Vec<u8>>,
    pub counts: Vec<usize>,
    /// Group index of every sample.
    pub group_of: Vec<usize>,
}

impl DecisionGrouping {
    pub fn num_groups(&self) -> usize {
        self.decisions.len()
    }
}

/// Two distinct historical decisions that share a component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Overlap {
    /// Sample indices of the first occurrences of the two decisions.
    pub first: usize,
    pub second: usize,
    pub component: usize,
}

/// Groups identical decisions and checks that distinct groups never share a component.
pub fn group_disjoint_decisions(
    decisions: &[Vec<u8>],
) -> std::result::Result<DecisionGrouping, Overlap> {
    let mut grouping = DecisionGrouping {
        decisions: Vec::new(),
        counts: Vec::new(),
        group_of: Vec::new(),
    };
    let mut first_seen: Vec<usize> = Vec::new();
    for (k, d) in decisions.iter().enumerate() {
        match grouping.decisions.iter().position(|g| g == d) {
            Some(v) => {
                grouping.counts[v] += 1;
                grouping.group_of.push(v);
            }
            None => {
                for (v, g) in grouping.decisions.iter().enumerate() {
                    if let Some(a) = g.iter().zip(d).position(|(p, q)| p + q > 1) {
                        return Err(Overlap {
                            first: first_seen[v],
                            second: k,
                            component: a,
                        });
                    }
                }
                grouping.group_of.push(grouping.decisions.len());
                grouping.decisions.push(d.clone());
                grouping.counts.push(1);
                first_seen.push(k);
            }
        }
    }
    Ok(grouping)
}

/// Bandit observations: decision `k` and its observed total cost.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditHistory {
    pub decisions: Vec<Vec<u8>>,
    pub totals: Vec<f64>,
    /// Common number of selected components.
    pub h: usize,
}

impl BanditHistory {
    pub fn new(decisions: Vec<Vec<u8>>, totals: Vec<f64>) -> Result<Self> {
        check_len("totals", decisions.len(), totals.len())?;
        let first = decisions.first().ok_or(DroError::EmptyInput)?;
        let h = first.iter().map(|&v| usize::from(v)).sum::<usize>();
        for (d, &s) in decisions.iter().zip(&totals) {
            check_len("decision", first.len(), d.len())?;
            if d.iter().any(|&v| v > 1) || d.iter().map(|&v| usize::from(v)).sum::<usize>() != h {
                return Err(DroError::InvalidInstance(format!(
                    "every decision must select exactly {h} components"
                )));
            }
            if !(-FEAS_TOL..=h as f64 + FEAS_TOL).contains(&s) {
                return Err(DroError::InvalidInstance(format!(
                    "total {s} outside [0, {h}]"
                )));
            }
        }
        Ok(Self {
            decisions,
            totals,
            h,
        })
    }

    /// Requires bandit scenarios only, the unit-box support, loss `c'x` and minimization.
    pub fn from_instance(inst: &ProblemInstance) -> Result<Self> {
        if inst.sense != Sense::Minimize {
            return Err(DroError::Unsupported(
                "bandit closed form is stated for minimization".into(),
            ));
        }
        let (lower, upper) = box_support(inst)?;
        if lower.iter().any(|&v| v != 0.0) || upper.iter().any(|&v| v != 1.0) {
            return Err(DroError::Unsupported(
                "bandit closed form needs the unit-box support".into(),
            ));
        }
        check_linear_loss(inst, &lower, &upper)?;
        let mut decisions = Vec::with_capacity(inst.k());
        let mut totals = Vec::with_capacity(inst.k());
        for s in &inst.scenarios {
            match s {
                DataScenario::Bandit { mask, total } => {
                    decisions.push(mask.clone());
                    totals.push(*total);
                }
                _ => {
                    return Err(DroError::Unsupported(
                        "bandit closed form needs bandit data only".into(),
                    ))
                }
            }
        }
        Self::new(decisions, totals)
    }

    pub fn k(&self) -> usize {
        self.decisions.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BanditSolution {
    pub value: f64,
    /// Index of the optimal group (lowest on ties).
    pub group: usize,
    /// The optimal decision: the group's historical decision.
    pub decision: Vec<u8>,
    /// `n_v * mean_v + (K - n_v) * h` per group.
    pub scores: Vec<f64>,
}

/// Closed-form optimum for bandit data whose distinct decisions are pairwise disjoint.
pub fn solve_bandit_disjoint(hist: &BanditHistory, epsilon: f64) -> Result<BanditSolution> {
    let grouping =
        group_disjoint_decisions(&hist.decisions).map_err(|o| DroError::Overlapping {
            first: o.first,
            second: o.second,
            component: o.component,
        })?;
    let kf = hist.k() as f64;
    let h = hist.h as f64;
    let mut sums = vec![0.0; grouping.num_groups()];
    for (k, &v) in grouping.group_of.iter().enumerate() {
        sums[v] += hist.totals[k];
    }
    // n_v * mean_v is just the group's total
    let scores: Vec<f64> = sums
        .iter()
        .zip(&grouping.counts)
        .map(|(&s, &n)| s + (kf - n as f64) * h)
        .collect();
    let mut group = 0;
    for (v, &r) in scores.iter().enumerate() {
        if r < scores[group] {
            group = v;
        }
    }
    let value = (scores[group] / kf + epsilon).min(h);
    Ok(BanditSolution {
        value,
        group,
        decision: grouping.decisions[group].clone(),
        scores,
    })
}
