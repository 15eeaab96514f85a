//! Domain types for the three-level problem: the feasible decision set, the
//! biaffine loss, the support polytope, and the per-sample data scenarios.
//!
//! Equalities are always stored as a pair of opposite inequalities, so every
//! polytope here is a plain `B c <= b` system.

use serde::{Deserialize, Serialize};

use crate::error::{DroError, Result};
use crate::solver::{self, LinearProgram, Relation, Sense, Status, FEAS_TOL};

/// A single inequality `coeffs . c <= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
}

/// `{c : B c <= b}` in dense row form.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    num_vars: usize,
    rows: Vec<HalfSpace>,
}

impl Polytope {
    /// The whole space (no rows).
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(num_vars: usize, rows: Vec<HalfSpace>) -> Result<Self> {
        let mut p = Self::new(num_vars);
        for row in rows {
            p.push(row.coeffs, row.rhs)?;
        }
        Ok(p)
    }

    /// `{c : lower <= c <= upper}`, encoded as `c_a <= u_a` then `-c_a <= -l_a` per coordinate.
    pub fn boxed(lower: &[f64], upper: &[f64]) -> Result<Self> {
        check_len("box bounds", lower.len(), upper.len())?;
        let mut p = Self::new(lower.len());
        for (a, (&lo, &hi)) in lower.iter().zip(upper).enumerate() {
            p.push_bound(a, lo, hi);
        }
        Ok(p)
    }

    pub fn unit_box(n: usize) -> Self {
        Self::boxed(&vec![0.0; n], &vec![1.0; n]).expect("equal lengths")
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[HalfSpace] {
        &self.rows
    }

    pub fn push(&mut self, coeffs: Vec<f64>, rhs: f64) -> Result<()> {
        check_len("polytope row", self.num_vars, coeffs.len())?;
        self.rows.push(HalfSpace { coeffs, rhs });
        Ok(())
    }

    /// Appends `coeffs . c = rhs` as two opposite inequalities.
    pub fn push_equality(&mut self, coeffs: Vec<f64>, rhs: f64) -> Result<()> {
        let negated = coeffs.iter().map(|v| -v).collect();
        self.push(coeffs, rhs)?;
        self.push(negated, -rhs)
    }

    fn push_bound(&mut self, a: usize, lo: f64, hi: f64) {
        if hi.is_finite() {
            self.rows.push(HalfSpace {
                coeffs: unit(self.num_vars, a, 1.0),
                rhs: hi,
            });
        }
        if lo.is_finite() {
            self.rows.push(HalfSpace {
                coeffs: unit(self.num_vars, a, -1.0),
                rhs: -lo,
            });
        }
    }

    pub fn append(&mut self, other: &Polytope) -> Result<()> {
        check_len("polytope append", self.num_vars, other.num_vars)?;
        self.rows.extend(other.rows.iter().cloned());
        Ok(())
    }

    /// Largest amount by which `c` violates a row.
    pub fn violation(&self, c: &[f64]) -> f64 {
        self.rows
            .iter()
            .map(|r| dot(&r.coeffs, c) - r.rhs)
            .fold(0.0, f64::max)
    }

    pub fn contains(&self, c: &[f64], tol: f64) -> bool {
        c.len() == self.num_vars && self.violation(c) <= tol
    }

    /// `B c`.
    pub fn apply(&self, c: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|r| dot(&r.coeffs, c)).collect()
    }

    /// For each coordinate, the nonzero `(row, B[row][a])` entries: the columns of `B`.
    pub fn columns(&self) -> Vec<Vec<(usize, f64)>> {
        let mut cols = vec![Vec::new(); self.num_vars];
        for (i, row) in self.rows.iter().enumerate() {
            for (a, &v) in row.coeffs.iter().enumerate() {
                if v != 0.0 {
                    cols[a].push((i, v));
                }
            }
        }
        cols
    }

    /// When every row touches a single coordinate, the implied box (no LP needed).
    ///
    /// Coordinates without a bound in some direction get `-inf` / `+inf`.
    /// Returns `None` if any row has two or more nonzero coefficients, or a
    /// row with no nonzeros at all is violated at the origin.
    pub fn as_box(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        let mut lo = vec![f64::NEG_INFINITY; self.num_vars];
        let mut hi = vec![f64::INFINITY; self.num_vars];
        for row in &self.rows {
            let mut nz = row.coeffs.iter().enumerate().filter(|(_, v)| **v != 0.0);
            match (nz.next(), nz.next()) {
                (Some((a, &v)), None) => {
                    let bound = row.rhs / v;
                    if v > 0.0 {
                        hi[a] = hi[a].min(bound);
                    } else {
                        lo[a] = lo[a].max(bound);
                    }
                }
                (None, _) if row.rhs >= -FEAS_TOL => {}
                _ => return None,
            }
        }
        Some((lo, hi))
    }

    fn lp(&self, sense: Sense) -> LinearProgram {
        let mut lp = LinearProgram::new(self.num_vars, sense);
        lp.lower = vec![f64::NEG_INFINITY; self.num_vars];
        for row in &self.rows {
            let coeffs = row.coeffs.iter().copied().enumerate();
            lp.add_row(coeffs, Relation::Le, row.rhs);
        }
        lp
    }

    /// Optimizes `objective . c` over the polytope.
    pub fn optimize(&self, objective: &[f64], sense: Sense) -> solver::SolveResult {
        let mut lp = self.lp(sense);
        lp.objective = objective.to_vec();
        solver::solve_lp(&lp)
    }

    /// Minimum and maximum of coordinate `a` (possibly infinite).
    pub fn coordinate_range(&self, a: usize) -> Result<(f64, f64)> {
        if let Some((lo, hi)) = self.as_box() {
            return Ok((lo[a], hi[a]));
        }
        let objective = unit(self.num_vars, a, 1.0);
        let mut out = [0.0; 2];
        for (slot, sense) in out.iter_mut().zip([Sense::Minimize, Sense::Maximize]) {
            let res = self.optimize(&objective, sense);
            *slot = match res.status {
                Status::Optimal => res.value,
                Status::Unbounded => -sense.sign() * f64::INFINITY,
                other => return Err(DroError::Solver(other)),
            };
        }
        Ok((out[0], out[1]))
    }

    /// Componentwise bounding box; errors if the polytope is unbounded in some coordinate.
    pub fn bounding_box(&self) -> Result<(Vec<f64>, Vec<f64>)> {
        let mut lo = Vec::with_capacity(self.num_vars);
        let mut hi = Vec::with_capacity(self.num_vars);
        for a in 0..self.num_vars {
            let (l, h) = self.coordinate_range(a)?;
            if !l.is_finite() || !h.is_finite() {
                return Err(DroError::UnboundedSupport { coordinate: a });
            }
            lo.push(l);
            hi.push(h);
        }
        Ok((lo, hi))
    }

    /// True when some point satisfies every row within [`FEAS_TOL`].
    pub fn is_nonempty(&self) -> bool {
        if let Some((lo, hi)) = self.as_box() {
            return lo.iter().zip(&hi).all(|(l, h)| *l <= h + FEAS_TOL);
        }
        let res = self.optimize(&vec![0.0; self.num_vars], Sense::Minimize);
        res.is_optimal() && self.violation(&res.primal) <= FEAS_TOL
    }
}

/// `loss(x, c) = c' T x + t1' x + t2' c + t0` with symmetric `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct BiaffineLoss {
    pub t: Vec<Vec<f64>>,
    pub t1: Vec<f64>,
    pub t2: Vec<f64>,
    pub t0: f64,
}

impl BiaffineLoss {
    /// `loss(x, c) = c' x`.
    pub fn linear(n: usize) -> Self {
        Self::masked_linear(&vec![true; n])
    }

    /// `loss(x, c) = sum_{a in mask} c_a x_a`.
    pub fn masked_linear(mask: &[bool]) -> Self {
        let n = mask.len();
        let t = (0..n)
            .map(|a| {
                let mut row = vec![0.0; n];
                row[a] = if mask[a] { 1.0 } else { 0.0 };
                row
            })
            .collect();
        Self {
            t,
            t1: vec![0.0; n],
            t2: vec![0.0; n],
            t0: 0.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.t1.len()
    }

    pub fn evaluate(&self, x: &[f64], c: &[f64]) -> f64 {
        let tx = self.apply_t(x);
        dot(c, &tx) + dot(&self.t1, x) + dot(&self.t2, c) + self.t0
    }

    /// `T x`.
    pub fn apply_t(&self, x: &[f64]) -> Vec<f64> {
        self.t.iter().map(|row| dot(row, x)).collect()
    }

    pub fn negated(&self) -> Self {
        let neg = |v: &[f64]| v.iter().map(|a| -a).collect::<Vec<_>>();
        Self {
            t: self.t.iter().map(|row| neg(row)).collect(),
            t1: neg(&self.t1),
            t2: neg(&self.t2),
            t0: -self.t0,
        }
    }

    /// Largest `|T[i][j] - T[j][i]|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, row) in self.t.iter().enumerate() {
            for (j, &v) in row.iter().enumerate().skip(i + 1) {
                worst = worst.max((v - self.t[j][i]).abs());
            }
        }
        worst
    }

    fn check_dims(&self) -> Result<()> {
        let n = self.t1.len();
        check_len("loss t2", n, self.t2.len())?;
        check_len("loss T rows", n, self.t.len())?;
        for row in &self.t {
            check_len("loss T columns", n, row.len())?;
        }
        Ok(())
    }
}

/// `{x in R^n1_+ x Z^n2_+ : G1 x1 + G2 x2 <= g, x <= upper}`.
///
/// The continuous block comes first; the last `n2` coordinates are integer.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibleSet {
    pub n1: usize,
    pub n2: usize,
    pub g1: Vec<Vec<f64>>,
    pub g2: Vec<Vec<f64>>,
    pub g: Vec<f64>,
    pub upper: Vec<Option<f64>>,
}

impl FeasibleSet {
    /// `n` binary variables and no rows yet.
    pub fn binary(n: usize) -> Self {
        Self {
            n1: 0,
            n2: n,
            g1: Vec::new(),
            g2: Vec::new(),
            g: Vec::new(),
            upper: vec![Some(1.0); n],
        }
    }

    pub fn n(&self) -> usize {
        self.n1 + self.n2
    }

    pub fn num_rows(&self) -> usize {
        self.g.len()
    }

    /// Appends `coeffs . x <= rhs` over the full variable vector.
    pub fn push_row(&mut self, coeffs: &[f64], rhs: f64) {
        self.g1.push(coeffs[..self.n1].to_vec());
        self.g2.push(coeffs[self.n1..].to_vec());
        self.g.push(rhs);
    }

    pub fn push_equality(&mut self, coeffs: &[f64], rhs: f64) {
        self.push_row(coeffs, rhs);
        let neg: Vec<f64> = coeffs.iter().map(|v| -v).collect();
        self.push_row(&neg, -rhs);
    }

    /// Row `i` over the full variable vector.
    pub fn row(&self, i: usize) -> impl Iterator<Item = f64> + '_ {
        self.g1[i].iter().chain(&self.g2[i]).copied()
    }

    pub fn is_integer(&self, j: usize) -> bool {
        j >= self.n1
    }

    /// All variables integer with upper bound 1.
    pub fn is_binary(&self) -> bool {
        self.n1 == 0 && self.upper.iter().all(|u| *u == Some(1.0))
    }

    /// Largest violation of nonnegativity, bounds, rows or integrality.
    pub fn violation(&self, x: &[f64]) -> f64 {
        if x.len() != self.n() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for (j, &v) in x.iter().enumerate() {
            worst = worst.max(-v);
            if let Some(u) = self.upper[j] {
                worst = worst.max(v - u);
            }
            if self.is_integer(j) {
                worst = worst.max((v - v.round()).abs());
            }
        }
        for (i, &g) in self.g.iter().enumerate() {
            let lhs: f64 = self.row(i).zip(x).map(|(a, v)| a * v).sum();
            worst = worst.max(lhs - g);
        }
        worst
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        self.violation(x) <= tol
    }

    /// Appends the decision variables and rows to `lp`; returns the index of the first one.
    pub(crate) fn embed(&self, lp: &mut LinearProgram) -> Result<usize> {
        let first = lp.num_vars();
        for j in 0..self.n() {
            let hi = match self.upper[j] {
                Some(u) => u,
                None if self.is_integer(j) => return Err(DroError::MissingIntegerBound { var: j }),
                None => f64::INFINITY,
            };
            lp.add_var(0.0, 0.0, hi);
        }
        for i in 0..self.num_rows() {
            let coeffs = self.row(i).enumerate().map(|(j, a)| (first + j, a));
            lp.add_row(coeffs, Relation::Le, self.g[i]);
        }
        Ok(first)
    }

    /// Integrality mask over the decision block.
    pub fn integer_mask(&self) -> Vec<bool> {
        (0..self.n()).map(|j| self.is_integer(j)).collect()
    }

    fn check_dims(&self) -> Result<()> {
        let m = self.g.len();
        check_len("G1 rows", m, self.g1.len())?;
        check_len("G2 rows", m, self.g2.len())?;
        for row in &self.g1 {
            check_len("G1 columns", self.n1, row.len())?;
        }
        for row in &self.g2 {
            check_len("G2 columns", self.n2, row.len())?;
        }
        check_len("variable bounds", self.n(), self.upper.len())
    }
}

/// What is known about one training sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DataScenario {
    /// The sample is observed exactly.
    Exact { point: Vec<f64> },
    /// Each component lies in `[lower, upper]`.
    Interval { lower: Vec<f64>, upper: Vec<f64> },
    /// Only the listed `(component, value)` pairs are observed.
    #[serde(rename = "semibandit")]
    SemiBandit { observed: Vec<(usize, f64)> },
    /// Only the sum of the components selected by `mask` is observed.
    Bandit { mask: Vec<u8>, total: f64 },
}

impl DataScenario {
    /// Length of the vectors carried by the scenario, if it has any.
    fn width(&self) -> Option<usize> {
        match self {
            DataScenario::Exact { point } => Some(point.len()),
            DataScenario::Interval { lower, .. } => Some(lower.len()),
            DataScenario::SemiBandit { .. } => None,
            DataScenario::Bandit { mask, .. } => Some(mask.len()),
        }
    }
}

/// `S_k ∩ support` as a single inequality system: the scenario's own rows first,
/// then the support rows.
pub fn lower_scenario(scenario: &DataScenario, support: &Polytope) -> Result<Polytope> {
    let n = support.num_vars();
    let mut out = Polytope::new(n);
    match scenario {
        DataScenario::Exact { point } => {
            check_len("exact point", n, point.len())?;
            for (a, &v) in point.iter().enumerate() {
                out.push_equality(unit(n, a, 1.0), v)?;
            }
        }
        DataScenario::Interval { lower, upper } => {
            check_len("interval lower", n, lower.len())?;
            check_len("interval upper", n, upper.len())?;
            let (slo, shi) = match support.as_box() {
                Some(b) => b,
                None => support.bounding_box()?,
            };
            for a in 0..n {
                out.push(unit(n, a, 1.0), upper[a].min(shi[a]))?;
                out.push(unit(n, a, -1.0), -lower[a].max(slo[a]))?;
            }
        }
        DataScenario::SemiBandit { observed } => {
            for &(a, v) in observed {
                if a >= n {
                    return Err(DroError::DimensionMismatch {
                        what: "observed component",
                        expected: n,
                        got: a + 1,
                    });
                }
                out.push_equality(unit(n, a, 1.0), v)?;
            }
        }
        DataScenario::Bandit { mask, total } => {
            check_len("bandit mask", n, mask.len())?;
            let coeffs = mask.iter().map(|&m| f64::from(m)).collect();
            out.push_equality(coeffs, *total)?;
        }
    }
    out.append(support)?;
    if !out.is_nonempty() {
        return Err(DroError::EmptyIntersection { scenario: 0 });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    pub feasible: FeasibleSet,
    pub loss: BiaffineLoss,
    pub support: Polytope,
    pub scenarios: Vec<DataScenario>,
    pub epsilon: f64,
    pub sense: Sense,
}

impl ProblemInstance {
    pub fn n(&self) -> usize {
        self.feasible.n()
    }

    pub fn k(&self) -> usize {
        self.scenarios.len()
    }

    /// Lowers every scenario; the error names the failing scenario index.
    pub fn lowered_scenarios(&self) -> Result<Vec<Polytope>> {
        self.scenarios
            .iter()
            .enumerate()
            .map(|(k, s)| {
                lower_scenario(s, &self.support).map_err(|e| match e {
                    DroError::EmptyIntersection { .. } => {
                        DroError::EmptyIntersection { scenario: k }
                    }
                    other => other,
                })
            })
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text)?;
        file.try_into()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&InstanceFile::from(self)).expect("instance serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Diagnostic {
    DimensionMismatch { what: String },
    AsymmetricLoss { deviation: f64 },
    NoScenarios,
    NegativeEpsilon { epsilon: f64 },
    UnboundedSupport { coordinate: usize },
    EmptySupport,
    MissingIntegerBound { var: usize },
    InvertedInterval { scenario: usize, component: usize },
    BanditTotalOutOfRange { scenario: usize, total: f64 },
    NonBinaryMask { scenario: usize },
    EmptyIntersection { scenario: usize },
}

impl Diagnostic {
    pub fn severity(&self) -> Severity {
        match self {
            Diagnostic::AsymmetricLoss { deviation } if *deviation <= 1e-9 => Severity::Warning,
            _ => Severity::Error,
        }
    }
}

/// Checks every structural invariant of `inst`; an empty list means the instance is usable.
pub fn validate_instance(inst: &ProblemInstance) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let n = inst.n();
    let dims = [
        ("feasible set", inst.feasible.check_dims().err()),
        ("loss", inst.loss.check_dims().err()),
    ];
    for (what, err) in dims {
        if let Some(e) = err {
            out.push(Diagnostic::DimensionMismatch {
                what: format!("{what}: {e}"),
            });
        }
    }
    if inst.loss.dim() != n || inst.support.num_vars() != n {
        out.push(Diagnostic::DimensionMismatch {
            what: format!(
                "decision has {n} components, loss {}, support {}",
                inst.loss.dim(),
                inst.support.num_vars()
            ),
        });
    }
    if !out.is_empty() {
        return out;
    }
    let asym = inst.loss.asymmetry();
    if asym > 0.0 {
        out.push(Diagnostic::AsymmetricLoss { deviation: asym });
    }
    if inst.scenarios.is_empty() {
        out.push(Diagnostic::NoScenarios);
    }
    if inst.epsilon.is_nan() || inst.epsilon < 0.0 {
        out.push(Diagnostic::NegativeEpsilon {
            epsilon: inst.epsilon,
        });
    }
    for j in 0..n {
        if inst.feasible.is_integer(j) && inst.feasible.upper[j].is_none() {
            out.push(Diagnostic::MissingIntegerBound { var: j });
        }
    }
    match inst.support.bounding_box() {
        Ok(_) => {}
        Err(DroError::UnboundedSupport { coordinate }) => {
            out.push(Diagnostic::UnboundedSupport { coordinate })
        }
        Err(_) => out.push(Diagnostic::EmptySupport),
    }
    if !out.iter().any(|d| {
        matches!(
            d,
            Diagnostic::UnboundedSupport { .. } | Diagnostic::EmptySupport
        )
    }) && !inst.support.is_nonempty()
    {
        out.push(Diagnostic::EmptySupport);
    }
    let support_ok = !out.iter().any(|d| {
        matches!(
            d,
            Diagnostic::UnboundedSupport { .. } | Diagnostic::EmptySupport
        )
    });

    for (k, s) in inst.scenarios.iter().enumerate() {
        if s.width().is_some_and(|w| w != n) {
            out.push(Diagnostic::DimensionMismatch {
                what: format!("scenario {k}"),
            });
            continue;
        }
        let mut structural = false;
        match s {
            DataScenario::Interval { lower, upper } => {
                for a in 0..n {
                    if lower[a] > upper[a] {
                        out.push(Diagnostic::InvertedInterval {
                            scenario: k,
                            component: a,
                        });
                        structural = true;
                    }
                }
            }
            DataScenario::Bandit { mask, total } => {
                if mask.iter().any(|&m| m > 1) {
                    out.push(Diagnostic::NonBinaryMask { scenario: k });
                    structural = true;
                }
                let size: f64 = mask.iter().map(|&m| f64::from(m)).sum();
                let unit_support = inst.support.as_box().is_some_and(|(lo, hi)| {
                    lo.iter().all(|&l| l == 0.0) && hi.iter().all(|&h| h == 1.0)
                });
                if unit_support && !(-FEAS_TOL..=size + FEAS_TOL).contains(total) {
                    out.push(Diagnostic::BanditTotalOutOfRange {
                        scenario: k,
                        total: *total,
                    });
                    structural = true;
                }
            }
            DataScenario::SemiBandit { observed } => {
                if observed.iter().any(|&(a, _)| a >= n) {
                    out.push(Diagnostic::DimensionMismatch {
                        what: format!("scenario {k} observed index"),
                    });
                    structural = true;
                }
            }
            DataScenario::Exact { .. } => {}
        }
        if !structural && support_ok && lower_scenario(s, &inst.support).is_err() {
            out.push(Diagnostic::EmptyIntersection { scenario: k });
        }
    }
    out
}

// ---------------------------------------------------------------------------
// On-disk format

#[derive(Serialize, Deserialize)]
struct InstanceFile {
    n: usize,
    n1: usize,
    n2: usize,
    feasible: FeasibleFile,
    loss: LossFile,
    support: SupportFile,
    scenarios: Vec<DataScenario>,
    epsilon: f64,
    #[serde(default)]
    sense: Sense,
}

#[derive(Serialize, Deserialize)]
struct FeasibleFile {
    #[serde(rename = "G1")]
    g1: Vec<Vec<f64>>,
    #[serde(rename = "G2")]
    g2: Vec<Vec<f64>>,
    g: Vec<f64>,
    bounds: Vec<Option<f64>>,
}

#[derive(Serialize, Deserialize)]
struct LossFile {
    #[serde(rename = "T")]
    t: Vec<Vec<f64>>,
    t1: Vec<f64>,
    t2: Vec<f64>,
    t0: f64,
}

#[derive(Serialize, Deserialize)]
struct SupportFile {
    rows: Vec<HalfSpace>,
}

impl From<&ProblemInstance> for InstanceFile {
    fn from(inst: &ProblemInstance) -> Self {
        let f = &inst.feasible;
        Self {
            n: inst.n(),
            n1: f.n1,
            n2: f.n2,
            feasible: FeasibleFile {
                g1: f.g1.clone(),
                g2: f.g2.clone(),
                g: f.g.clone(),
                bounds: f.upper.clone(),
            },
            loss: LossFile {
                t: inst.loss.t.clone(),
                t1: inst.loss.t1.clone(),
                t2: inst.loss.t2.clone(),
                t0: inst.loss.t0,
            },
            support: SupportFile {
                rows: inst.support.rows.clone(),
            },
            scenarios: inst.scenarios.clone(),
            epsilon: inst.epsilon,
            sense: inst.sense,
        }
    }
}

impl TryFrom<InstanceFile> for ProblemInstance {
    type Error = DroError;

    fn try_from(file: InstanceFile) -> Result<Self> {
        check_len("n = n1 + n2", file.n, file.n1 + file.n2)?;
        let feasible = FeasibleSet {
            n1: file.n1,
            n2: file.n2,
            g1: file.feasible.g1,
            g2: file.feasible.g2,
            g: file.feasible.g,
            upper: file.feasible.bounds,
        };
        feasible.check_dims()?;
        let loss = BiaffineLoss {
            t: file.loss.t,
            t1: file.loss.t1,
            t2: file.loss.t2,
            t0: file.loss.t0,
        };
        check_len("loss", file.n, loss.dim())?;
        loss.check_dims()?;
        let support = Polytope::from_rows(file.n, file.support.rows)?;
        Ok(Self {
            feasible,
            loss,
            support,
            scenarios: file.scenarios,
            epsilon: file.epsilon,
            sense: file.sense,
        })
    }
}

// ---------------------------------------------------------------------------

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn unit(n: usize, a: usize, v: f64) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[a] = v;
    e
}

pub(crate) fn check_len(what: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(DroError::DimensionMismatch {
            what,
            expected,
            got,
        })
    }
}
