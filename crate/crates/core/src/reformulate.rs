//! Single-level reformulations.
//!
//! For a fixed decision and fixed data, the worst-case expected loss over the
//! Wasserstein ball is an LP in a scalar radius multiplier `lambda >= 0` and one
//! support-dual block `nu_k >= 0` per sample ([`build_wc_expectation_lp`]).
//! Dualizing the data maximization as well turns the whole min-max-max problem
//! into one MILP over `(x, lambda, nu, gamma)` ([`build_dro_milp`]), where
//! `gamma_k >= 0` are the duals of the rows describing the k-th data set.

use std::ops::Range;
use std::time::Instant;

use serde::Serialize;

use crate::error::{DroError, Result};
use crate::model::{check_len, dot, BiaffineLoss, Polytope, ProblemInstance};
use crate::solver::{
    self, BackendKind, LinearProgram, MilpOptions, MixedIntegerProgram, Relation, Sense, Status,
    FEAS_TOL, INT_TOL,
};

/// Where each block of the MILP lives in the variable vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ReformulationVars {
    pub x: Range<usize>,
    pub lambda: usize,
    pub nu: Vec<Range<usize>>,
    pub gamma: Vec<Range<usize>>,
}

impl ReformulationVars {
    pub fn len(&self) -> usize {
        self.gamma.last().map_or(self.lambda + 1, |r| r.end)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn names(&self) -> Vec<String> {
        let mut names: Vec<String> = self.x.clone().map(|j| format!("x{j}")).collect();
        names.push("lambda".into());
        for (k, r) in self.nu.iter().enumerate() {
            names.extend((0..r.len()).map(|i| format!("nu{k}_{i}")));
        }
        for (k, r) in self.gamma.iter().enumerate() {
            names.extend((0..r.len()).map(|i| format!("gamma{k}_{i}")));
        }
        names
    }
}

/// The reformulated program plus the bookkeeping needed to read a solution back.
#[derive(Debug, Clone)]
pub struct DroMilp {
    pub mip: MixedIntegerProgram,
    pub vars: ReformulationVars,
    /// True when the instance maximizes and its loss was negated to obtain a minimization.
    pub negated: bool,
}

impl DroMilp {
    /// Converts an internal (minimization) objective value to the instance's own sense.
    pub fn report(&self, internal: f64) -> f64 {
        if self.negated {
            -internal
        } else {
            internal
        }
    }
}

/// Worst-case expected loss of the fixed decision `x` over the ball of radius
/// `epsilon` around the empirical distribution of `data`, as a minimization LP
/// in `(lambda, nu_1, ..., nu_K)`.
///
/// Variable 0 is `lambda`; `nu_k` occupies `1 + k*w .. 1 + (k+1)*w` where `w` is
/// the number of support rows.
pub fn build_wc_expectation_lp(
    x: &[f64],
    data: &[Vec<f64>],
    support: &Polytope,
    loss: &BiaffineLoss,
    epsilon: f64,
) -> Result<LinearProgram> {
    let n = support.num_vars();
    check_len("decision", n, x.len())?;
    check_len("loss", n, loss.dim())?;
    if data.is_empty() {
        return Err(DroError::EmptyInput);
    }
    for (k, c) in data.iter().enumerate() {
        check_len("data point", n, c.len())?;
        let violation = support.violation(c);
        if violation > FEAS_TOL {
            return Err(DroError::DataOutsideSupport {
                index: k,
                violation,
            });
        }
    }

    let kf = data.len() as f64;
    let w = support.num_rows();
    let b0: Vec<f64> = support.rows().iter().map(|r| r.rhs).collect();
    let cols = support.columns();
    // q = T x + t2 is the gradient of the loss in c
    let q: Vec<f64> = loss
        .apply_t(x)
        .iter()
        .zip(&loss.t2)
        .map(|(a, b)| a + b)
        .collect();

    let mut lp = LinearProgram::new(0, Sense::Minimize);
    lp.add_var(epsilon, 0.0, f64::INFINITY);
    lp.constant = dot(&loss.t1, x) + loss.t0;
    for c in data {
        lp.constant += dot(c, &q) / kf;
        let bc = support.apply(c);
        let first = lp.num_vars();
        for i in 0..w {
            lp.add_var((b0[i] - bc[i]) / kf, 0.0, f64::INFINITY);
        }
        for a in 0..n {
            let bt_nu = || cols[a].iter().map(|&(i, v)| (first + i, -v));
            lp.add_row(bt_nu().chain([(0, -1.0)]), Relation::Le, -q[a]);
            lp.add_row(bt_nu().chain([(0, 1.0)]), Relation::Ge, -q[a]);
        }
    }
    Ok(lp)
}

/// The single-level MILP equivalent of the full three-level problem.
///
/// Scenarios are lowered against the support first; a maximizing instance is
/// rewritten as minimization of the negated loss.
pub fn build_dro_milp(inst: &ProblemInstance) -> Result<DroMilp> {
    let n = inst.n();
    check_len("loss", n, inst.loss.dim())?;
    check_len("support", n, inst.support.num_vars())?;
    if inst.scenarios.is_empty() {
        return Err(DroError::EmptyInput);
    }
    if inst.epsilon.is_nan() || inst.epsilon < 0.0 {
        return Err(DroError::InvalidInstance(format!(
            "negative radius {}",
            inst.epsilon
        )));
    }
    let lowered = inst.lowered_scenarios()?;
    let negated = inst.sense == Sense::Maximize;
    let loss = if negated {
        inst.loss.negated()
    } else {
        inst.loss.clone()
    };

    let kf = lowered.len() as f64;
    let support = &inst.support;
    let cols0 = support.columns();

    let mut lp = LinearProgram::new(0, Sense::Minimize);
    let x0 = inst.feasible.embed(&mut lp)?;
    for j in 0..n {
        lp.objective[x0 + j] = loss.t1[j];
    }
    lp.constant = loss.t0;
    let lambda = lp.add_var(inst.epsilon, 0.0, f64::INFINITY);

    let mut nu = Vec::with_capacity(lowered.len());
    for _ in &lowered {
        let first = lp.num_vars();
        for row in support.rows() {
            lp.add_var(row.rhs / kf, 0.0, f64::INFINITY);
        }
        nu.push(first..lp.num_vars());
    }
    let mut gamma = Vec::with_capacity(lowered.len());
    for sk in &lowered {
        let first = lp.num_vars();
        for row in sk.rows() {
            lp.add_var(row.rhs, 0.0, f64::INFINITY);
        }
        gamma.push(first..lp.num_vars());
    }

    for (k, sk) in lowered.iter().enumerate() {
        let colsk = sk.columns();
        for a in 0..n {
            let tx = loss.t[a]
                .iter()
                .enumerate()
                .filter(|(_, v)| **v != 0.0)
                .map(|(j, &v)| (x0 + j, v));
            let bt_nu = cols0[a].iter().map(|&(i, v)| (nu[k].start + i, -v));
            // (1/K)(T x + t2 - B0' nu_k) = Bk' gamma_k
            let coupling = tx
                .clone()
                .map(|(j, v)| (j, v / kf))
                .chain(bt_nu.clone().map(|(j, v)| (j, v / kf)))
                .chain(colsk[a].iter().map(|&(i, v)| (gamma[k].start + i, -v)));
            lp.add_row(coupling, Relation::Eq, -loss.t2[a] / kf);
            // -lambda <= T x + t2 - B0' nu_k <= lambda
            lp.add_row(
                tx.clone().chain(bt_nu.clone()).chain([(lambda, -1.0)]),
                Relation::Le,
                -loss.t2[a],
            );
            lp.add_row(
                tx.chain(bt_nu).chain([(lambda, 1.0)]),
                Relation::Ge,
                -loss.t2[a],
            );
        }
    }

    let vars = ReformulationVars {
        x: x0..x0 + n,
        lambda,
        nu,
        gamma,
    };
    lp.names = Some(vars.names());
    let mut integer = vec![false; lp.num_vars()];
    integer[vars.x.clone()].copy_from_slice(&inst.feasible.integer_mask());
    Ok(DroMilp {
        mip: MixedIntegerProgram::new(lp, integer),
        vars,
        negated,
    })
}

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    pub backend: BackendKind,
    pub milp: MilpOptions,
    /// Record wall-clock time (makes the result non-reproducible byte-for-byte).
    pub timing: bool,
}

/// Optimal decision of a three-level instance, reported in the instance's own sense.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DroSolution {
    pub value: f64,
    pub x: Vec<f64>,
    pub node_count: usize,
    /// Value of the root LP relaxation, in the instance's sense.
    pub root_lp: Option<f64>,
    pub time_ms: Option<f64>,
    /// The full MILP primal vector (`x`, `lambda`, `nu`, `gamma`), uninterpreted.
    #[serde(skip)]
    pub raw: Vec<f64>,
}

impl DroSolution {
    /// MILP optimum over its LP relaxation (>= 1 for minimization, <= 1 for maximization).
    pub fn lp_quality(&self) -> Option<f64> {
        self.root_lp.filter(|r| *r != 0.0).map(|r| self.value / r)
    }
}

/// Builds and solves the MILP, then re-checks the decision against the feasible set.
pub fn solve_dro(inst: &ProblemInstance, opts: &SolveOptions) -> Result<DroSolution> {
    let start = Instant::now();
    let milp = build_dro_milp(inst)?;
    let backend = opts.backend.backend();
    let res = solver::solve_milp_with(&milp.mip, backend.as_ref(), &opts.milp);
    if res.status != Status::Optimal {
        return Err(DroError::Solver(res.status));
    }
    let mut x = res.primal[milp.vars.x.clone()].to_vec();
    for v in &mut x {
        if v.abs() <= INT_TOL {
            *v = 0.0;
        }
    }
    let violation = inst.feasible.violation(&x);
    if violation > 1e-6 {
        return Err(DroError::InfeasibleDecision(violation));
    }
    Ok(DroSolution {
        value: milp.report(res.value),
        x,
        node_count: res.node_count,
        root_lp: res.root_lp.map(|v| milp.report(v)),
        time_ms: opts.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
        raw: res.primal,
    })
}

/// Worst case over the data sets and the ball for one fixed decision `x`,
/// in the instance's own sense: the MILP with `x` pinned, solved as an LP.
pub fn evaluate_decision(inst: &ProblemInstance, x: &[f64], backend: BackendKind) -> Result<f64> {
    check_len("decision", inst.n(), x.len())?;
    let milp = build_dro_milp(inst)?;
    let mut lp = milp.mip.lp.clone();
    for (j, &v) in milp.vars.x.clone().zip(x) {
        lp.lower[j] = v;
        lp.upper[j] = v;
    }
    let res = backend.backend().solve_lp(&lp);
    match res.status {
        Status::Optimal => Ok(milp.report(res.value)),
        other => Err(DroError::Solver(other)),
    }
}

/// Finitely supported probability distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    points: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl DiscreteDistribution {
    pub fn new(points: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self> {
        check_len("weights", points.len(), weights.len())?;
        let first = points.first().ok_or(DroError::EmptyInput)?;
        for p in &points {
            check_len("support point", first.len(), p.len())?;
        }
        let total: f64 = weights.iter().sum();
        if weights.iter().any(|w| w.is_nan() || *w < 0.0) || (total - 1.0).abs() > 1e-9 {
            return Err(DroError::InvalidInstance(format!(
                "weights must be nonnegative and sum to 1 (sum {total})"
            )));
        }
        Ok(Self { points, weights })
    }

    /// Equal weight on every point (the empirical distribution).
    pub fn uniform(points: Vec<Vec<f64>>) -> Result<Self> {
        let w = 1.0 / points.len().max(1) as f64;
        let weights = vec![w; points.len()];
        Self::new(points, weights)
    }

    pub fn dirac(point: Vec<f64>) -> Self {
        Self {
            points: vec![point],
            weights: vec![1.0],
        }
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn expectation(&self, f: impl Fn(&[f64]) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .map(|(p, w)| w * f(p))
            .sum()
    }

    fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering {
        let flat = |d: &Self| {
            d.points
                .iter()
                .flatten()
                .chain(&d.weights)
                .copied()
                .collect::<Vec<f64>>()
        };
        let (a, b) = (flat(self), flat(other));
        a.len().cmp(&b.len()).then_with(|| {
            a.iter()
                .zip(&b)
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    }
}

fn l1(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Type-1 Wasserstein distance with the l1 ground metric (optimal transport LP).
///
/// The pair is put in a canonical order before solving, so the result is
/// bitwise symmetric in its arguments.
pub fn discrete_w1(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<f64> {
    check_len("distribution dimension", p.dim(), q.dim())?;
    let (p, q) = if p.canonical_cmp(q).is_gt() {
        (q, p)
    } else {
        (p, q)
    };
    if p == q {
        return Ok(0.0);
    }
    // a single point on either side forces the coupling
    if p.points.len() == 1 {
        return Ok(q.expectation(|c| l1(&p.points[0], c)));
    }
    if q.points.len() == 1 {
        return Ok(p.expectation(|c| l1(&q.points[0], c)));
    }

    let (m, n) = (p.points.len(), q.points.len());
    let mut lp = LinearProgram::new(m * n, Sense::Minimize);
    for i in 0..m {
        for j in 0..n {
            lp.objective[i * n + j] = l1(&p.points[i], &q.points[j]);
        }
    }
    for i in 0..m {
        lp.add_row((0..n).map(|j| (i * n + j, 1.0)), Relation::Eq, p.weights[i]);
    }
    for j in 0..n {
        lp.add_row((0..m).map(|i| (i * n + j, 1.0)), Relation::Eq, q.weights[j]);
    }
    let res = solver::solve_lp(&lp);
    match res.status {
        Status::Optimal => Ok(res.value.max(0.0)),
        other => Err(DroError::Solver(other)),
    }
}
