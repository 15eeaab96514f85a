//! Experiment protocol: relative loss against the true optimum, radius and
//! confidence calculators, parameter sweeps aggregated as mean and MAD over
//! random instances, CSV output, and a randomized cross-check suite.
//!
//! Sweeps use common random numbers: instance `i` of every cell draws from the
//! stream `derive_seed(seed, i)`, so cells differ only by the swept parameter.

use std::fmt::Write as _;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::closedform::{
    box_worst_case_value, solve_bandit_disjoint, solve_interval_data, BanditHistory, IntervalData,
    LayeredDp, MilpCop, NominalCop, Regime, SortingSelector,
};
use crate::datagen::{
    corrupt_interval, cucb_collect, cucb_collect_coverage, derive_seed, observe_bandit,
    observe_semibandit, rng_from_seed, sample_nominal, BetaNominal, CucbRun, DroRng, NoiseSchedule,
};
use crate::error::{DroError, Result};
use crate::model::{dot, DataScenario, Polytope, ProblemInstance};
use crate::problems::{
    enumerate_feasible, gen_layered_spp, gen_mcp_with, gen_sorting, CoverageSystem, LayeredGraph,
};
use crate::reformulate::{
    build_wc_expectation_lp, discrete_w1, solve_dro, DiscreteDistribution, SolveOptions,
};
use crate::solver::{self, BackendKind, LinearProgram, MilpOptions, MixedIntegerProgram, Sense};

pub fn mean(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(DroError::EmptyInput);
    }
    Ok(values.iter().sum::<f64>() / values.len() as f64)
}

/// Mean absolute deviation from the mean.
pub fn mad(values: &[f64]) -> Result<f64> {
    let m = mean(values)?;
    Ok(values.iter().map(|v| (v - m).abs()).sum::<f64>() / values.len() as f64)
}

/// Spearman rank correlation (average ranks for ties); `None` if either side is constant.
pub fn spearman(xs: &[f64], ys: &[f64]) -> Option<f64> {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut out = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            let rank = (i + j) as f64 / 2.0;
            for &t in &idx[i..=j] {
                out[t] = rank;
            }
            i = j + 1;
        }
        out
    }
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let (rx, ry) = (ranks(xs), ranks(ys));
    let (mx, my) = (mean(&rx).ok()?, mean(&ry).ok()?);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        None
    } else {
        Some(cov / (vx * vy).sqrt())
    }
}

/// `gamma / sqrt(K)`.
pub fn wasserstein_radius(k: usize, gamma: f64) -> f64 {
    gamma / (k as f64).sqrt()
}

/// Hoeffding bound `exp(-2 K eps^2 / hmax^2)` on the chance that the true expected
/// cost exceeds the sample mean plus `eps`.
pub fn hoeffding_bound(k: usize, epsilon: f64, hmax: f64) -> f64 {
    (-2.0 * k as f64 * epsilon * epsilon / (hmax * hmax)).exp()
}

/// Expected cost of `x` relative to the best expected cost over the feasible set:
/// `costs'x / opt costs'x` with `opt` taken in `sense`.
pub fn nominal_relative_loss(
    x: &[f64],
    costs: &[f64],
    cop: &dyn NominalCop,
    sense: Sense,
) -> Result<f64> {
    let (best, _) = cop.optimize(costs, sense)?;
    if best == 0.0 {
        return Err(DroError::DegenerateDenominator);
    }
    Ok(dot(costs, x) / best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Family {
    Sorting {
        n: usize,
        h: usize,
    },
    Spp {
        h: usize,
        r: usize,
    },
    Mcp {
        n1: usize,
        n2: usize,
        subset_size: usize,
        budget: usize,
    },
}

impl Family {
    /// Length of the random cost vector (items, arcs, or coverable items).
    fn cost_dim(&self) -> Result<usize> {
        Ok(match *self {
            Family::Sorting { n, .. } => n,
            Family::Spp { h, r } => LayeredGraph::new(h, r)?.num_arcs(),
            Family::Mcp { n1, .. } => n1,
        })
    }

    /// Largest number of nonzero decision components.
    fn size(&self) -> usize {
        match *self {
            Family::Sorting { h, .. } | Family::Spp { h, .. } => h,
            Family::Mcp { n1, .. } => n1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Feedback {
    Interval,
    SemiBandit,
    Bandit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadiusRule {
    Fixed {
        epsilon: f64,
    },
    /// `gamma / sqrt(K)`.
    SqrtK {
        gamma: f64,
    },
    /// `gamma * (largest decision size)`: `h` for sorting and paths, `n1` for coverage.
    PerSize {
        gamma: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweptParam {
    Delta,
    H,
    Gamma,
    K,
    N1,
}

fn default_sigma() -> f64 {
    0.125
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub family: Family,
    pub feedback: Feedback,
    #[serde(default = "no_noise")]
    pub noise: NoiseSchedule,
    pub radius: RadiusRule,
    pub k: usize,
    pub param: SweptParam,
    pub grid: Vec<f64>,
    pub instances: usize,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    pub seed: u64,
    #[serde(default)]
    pub backend: BackendKind,
    /// Report wall-clock solve times (off by default so output is reproducible).
    #[serde(default)]
    pub timing: bool,
}

fn no_noise() -> NoiseSchedule {
    NoiseSchedule::Constant { delta: 0.0 }
}

/// Names accepted by [`SweepConfig::preset`].
pub const PRESETS: &[&str] = &[
    "delta",
    "h",
    "gamma",
    "k-noise",
    "spp-semibandit",
    "spp-bandit",
    "mcp-semibandit",
    "mcp-bandit",
    "spp-size",
    "mcp-size",
];

fn steps(from: f64, to: f64, step: f64) -> Vec<f64> {
    let n = ((to - from) / step).round() as usize;
    (0..=n)
        .map(|i| from + i as f64 * step)
        .map(|v| (v * 1e9).round() / 1e9)
        .collect()
}

impl SweepConfig {
    /// One of the standard experiments, at desk scale or at the published scale.
    pub fn preset(name: &str, full_scale: bool) -> Result<Self> {
        let pick = |desk: usize, full: usize| if full_scale { full } else { desk };
        let m = pick(30, 100);
        let sorting = Family::Sorting {
            n: pick(20, 50),
            h: 5,
        };
        let k_sorting = pick(30, 50);
        let base = |family, feedback, radius, k, param, grid| SweepConfig {
            family,
            feedback,
            noise: no_noise(),
            radius,
            k,
            param,
            grid,
            instances: m,
            sigma: default_sigma(),
            seed: 1,
            backend: BackendKind::Auto,
            timing: false,
        };
        let spp = Family::Spp {
            h: pick(5, 11),
            r: pick(3, 5),
        };
        let spp_kmax = pick(25, 100);
        let spp_grid = if full_scale {
            steps(10.0, 100.0, 10.0)
        } else {
            steps(5.0, 25.0, 5.0)
        };
        let mcp = Family::Mcp {
            n1: pick(20, 50),
            n2: pick(20, 50),
            subset_size: 5,
            budget: 5,
        };
        let mcp_kmax = pick(20, 50);
        let mcp_grid = if full_scale {
            steps(5.0, 50.0, 5.0)
        } else {
            steps(5.0, 20.0, 5.0)
        };
        let cfg = match name {
            "delta" => {
                let grid = if full_scale {
                    steps(0.0, 0.9, 0.1)
                } else {
                    steps(0.0, 0.8, 0.2)
                };
                base(
                    sorting,
                    Feedback::Interval,
                    RadiusRule::Fixed { epsilon: 1.0 },
                    k_sorting,
                    SweptParam::Delta,
                    grid,
                )
            }
            "h" => SweepConfig {
                noise: NoiseSchedule::Constant { delta: 0.2 },
                ..base(
                    sorting,
                    Feedback::Interval,
                    RadiusRule::Fixed { epsilon: 1.0 },
                    k_sorting,
                    SweptParam::H,
                    steps(1.0, 10.0, 1.0),
                )
            },
            "gamma" => base(
                sorting,
                Feedback::Interval,
                RadiusRule::SqrtK { gamma: 0.0 },
                k_sorting,
                SweptParam::Gamma,
                steps(0.0, 50.0, 5.0),
            ),
            "k-noise" => SweepConfig {
                noise: NoiseSchedule::Increasing { k_max: k_sorting },
                ..base(
                    sorting,
                    Feedback::Interval,
                    RadiusRule::SqrtK {
                        gamma: (k_sorting as f64).sqrt(),
                    },
                    k_sorting,
                    SweptParam::K,
                    steps(5.0, k_sorting as f64, 5.0),
                )
            },
            "spp-semibandit" | "spp-bandit" => {
                let fb = if name == "spp-bandit" {
                    Feedback::Bandit
                } else {
                    Feedback::SemiBandit
                };
                let radius = RadiusRule::SqrtK {
                    gamma: (spp_kmax as f64).sqrt(),
                };
                base(spp, fb, radius, spp_kmax, SweptParam::K, spp_grid)
            }
            "mcp-semibandit" | "mcp-bandit" => {
                let fb = if name == "mcp-bandit" {
                    Feedback::Bandit
                } else {
                    Feedback::SemiBandit
                };
                let radius = RadiusRule::SqrtK {
                    gamma: (mcp_kmax as f64).sqrt(),
                };
                base(mcp, fb, radius, mcp_kmax, SweptParam::K, mcp_grid)
            }
            "spp-size" => {
                let grid = if full_scale {
                    steps(3.0, 17.0, 2.0)
                } else {
                    steps(3.0, 6.0, 1.0)
                };
                let radius = RadiusRule::PerSize {
                    gamma: 2f64.sqrt() / 11.0,
                };
                base(
                    spp,
                    Feedback::Bandit,
                    radius,
                    pick(20, 50),
                    SweptParam::H,
                    grid,
                )
            }
            "mcp-size" => {
                let grid = if full_scale {
                    steps(30.0, 70.0, 10.0)
                } else {
                    steps(10.0, 25.0, 5.0)
                };
                let radius = RadiusRule::PerSize {
                    gamma: 2f64.sqrt() / 50.0,
                };
                base(
                    mcp,
                    Feedback::Bandit,
                    radius,
                    pick(10, 25),
                    SweptParam::N1,
                    grid,
                )
            }
            other => {
                return Err(DroError::InvalidInstance(format!(
                    "unknown preset `{other}` (expected one of {})",
                    PRESETS.join(", ")
                )))
            }
        };
        Ok(cfg)
    }

    /// The configuration of the cell where the swept parameter equals `value`.
    pub fn at(&self, value: f64) -> Result<SweepConfig> {
        let mut cell = self.clone();
        let as_count = |v: f64| -> Result<usize> {
            if v >= 0.0 && v.fract() == 0.0 {
                Ok(v as usize)
            } else {
                Err(DroError::InvalidInstance(format!(
                    "swept value {v} must be a nonnegative integer"
                )))
            }
        };
        let mismatch = || {
            DroError::InvalidInstance(format!(
                "cannot sweep {:?} for {:?}",
                self.param, self.family
            ))
        };
        match self.param {
            SweptParam::Delta => match &mut cell.noise {
                NoiseSchedule::Constant { delta } => *delta = value,
                _ => return Err(mismatch()),
            },
            SweptParam::H => match &mut cell.family {
                Family::Sorting { h, .. } | Family::Spp { h, .. } => *h = as_count(value)?,
                _ => return Err(mismatch()),
            },
            SweptParam::Gamma => match &mut cell.radius {
                RadiusRule::SqrtK { gamma } | RadiusRule::PerSize { gamma } => *gamma = value,
                _ => return Err(mismatch()),
            },
            SweptParam::K => cell.k = as_count(value)?,
            SweptParam::N1 => match &mut cell.family {
                Family::Mcp { n1, .. } | Family::Sorting { n: n1, .. } => *n1 = as_count(value)?,
                _ => return Err(mismatch()),
            },
        }
        Ok(cell)
    }

    pub fn epsilon(&self) -> f64 {
        match self.radius {
            RadiusRule::Fixed { epsilon } => epsilon,
            RadiusRule::SqrtK { gamma } => wasserstein_radius(self.k, gamma),
            RadiusRule::PerSize { gamma } => gamma * self.family.size() as f64,
        }
    }

    fn check(&self) -> Result<()> {
        if self.grid.is_empty() || self.instances == 0 {
            return Err(DroError::InvalidInstance(
                "sweep needs a nonempty grid and at least one instance".into(),
            ));
        }
        for &v in &self.grid {
            let cell = self.at(v)?;
            if cell.k == 0 {
                return Err(DroError::InvalidInstance(
                    "sample size K must be positive".into(),
                ));
            }
            if matches!(cell.family, Family::Sorting { .. }) && cell.feedback != Feedback::Interval
            {
                return Err(DroError::Unsupported(
                    "sorting instances support interval data only".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Result of one random instance of a sweep cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceOutcome {
    pub rho: f64,
    pub time_ms: f64,
    pub lp_quality: Option<f64>,
    pub regime: Option<Regime>,
    /// Decision returned by the robust model.
    pub x: Vec<f64>,
    /// The robust model's optimal value.
    pub value: f64,
}

/// A generated instance together with the hidden truth needed to score it.
pub struct GeneratedInstance {
    pub instance: ProblemInstance,
    /// Expected cost of every decision coordinate (zeros outside the cost block).
    pub expected_costs: Vec<f64>,
    pub cop: Box<dyn NominalCop>,
    pub nominal: BetaNominal,
    /// The unobserved full samples behind the scenarios.
    pub samples: Vec<Vec<f64>>,
}

/// Builds instance `index` of the cell described by `cfg`.
pub fn generate_instance(cfg: &SweepConfig, index: u64) -> Result<GeneratedInstance> {
    let mut rng = rng_from_seed(derive_seed(cfg.seed, index));
    generate_from_rng(cfg, &mut rng)
}

/// Builds one instance of `cfg`, drawing structure, means and data from `rng` in that order.
pub fn generate_from_rng(cfg: &SweepConfig, rng: &mut DroRng) -> Result<GeneratedInstance> {
    enum Structure {
        Sorting(usize),
        Graph(LayeredGraph),
        Coverage(CoverageSystem),
    }
    let (mut instance, structure) = match cfg.family {
        Family::Sorting { n, h } => (gen_sorting(n, h)?, Structure::Sorting(h)),
        Family::Spp { h, r } => {
            let (inst, g) = gen_layered_spp(h, r)?;
            (inst, Structure::Graph(g))
        }
        Family::Mcp {
            n1,
            n2,
            subset_size,
            budget,
        } => {
            let (inst, sys) = gen_mcp_with(n1, n2, subset_size, budget, rng)?;
            (inst, Structure::Coverage(sys))
        }
    };
    let n = instance.n();
    let dim = cfg.family.cost_dim()?;
    let nominal = BetaNominal::random(dim, cfg.sigma, rng)?;
    let mut expected_costs = nominal.means();
    expected_costs.resize(n, 0.0);

    let (samples, scenarios) = match cfg.feedback {
        Feedback::Interval => {
            let mut p: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
            p.resize(n, 0.0);
            let mut samples = sample_nominal(&nominal, cfg.k, rng);
            for s in &mut samples {
                s.resize(n, 0.0);
            }
            let scenarios = corrupt_interval(&samples, &cfg.noise, &p, rng);
            (samples, scenarios)
        }
        Feedback::SemiBandit | Feedback::Bandit => {
            let CucbRun { decisions, samples } = match &structure {
                Structure::Graph(g) => cucb_collect(g, &nominal, cfg.k, rng),
                Structure::Coverage(sys) => cucb_collect_coverage(sys, &nominal, cfg.k, rng),
                Structure::Sorting(_) => {
                    return Err(DroError::Unsupported(
                        "feedback collection is defined for paths and coverage".into(),
                    ))
                }
            };
            let scenarios = if cfg.feedback == Feedback::Bandit {
                observe_bandit(&samples, &decisions)
            } else {
                observe_semibandit(&samples, &decisions)
            };
            (samples, scenarios)
        }
    };
    instance.scenarios = scenarios;
    instance.epsilon = cfg.epsilon();

    let cop: Box<dyn NominalCop> = match structure {
        Structure::Sorting(h) => Box::new(SortingSelector { h }),
        Structure::Graph(graph) => Box::new(LayeredDp { graph }),
        Structure::Coverage(_) => Box::new(MilpCop {
            feasible: instance.feasible.clone(),
            backend: cfg.backend,
        }),
    };
    Ok(GeneratedInstance {
        instance,
        expected_costs,
        cop,
        nominal,
        samples,
    })
}

/// Solves one generated instance by the route matching its data and scores the decision.
pub fn solve_generated(cfg: &SweepConfig, gen: &GeneratedInstance) -> Result<InstanceOutcome> {
    let inst = &gen.instance;
    let start = Instant::now();
    let (x, value, regime, lp_quality) = match cfg.feedback {
        Feedback::Interval | Feedback::SemiBandit => {
            let data = IntervalData::from_instance(inst)?;
            let sol = solve_interval_data(&data, inst.epsilon, inst.sense, gen.cop.as_ref())?;
            (sol.x, sol.value, Some(sol.regime), None)
        }
        Feedback::Bandit => {
            let opts = SolveOptions {
                backend: cfg.backend,
                milp: MilpOptions::default(),
                timing: false,
            };
            let sol = solve_dro(inst, &opts)?;
            let q = sol.lp_quality();
            (sol.x, sol.value, None, q)
        }
    };
    let time_ms = start.elapsed().as_secs_f64() * 1e3;
    let rho = nominal_relative_loss(&x, &gen.expected_costs, gen.cop.as_ref(), inst.sense)?;
    Ok(InstanceOutcome {
        rho,
        time_ms,
        lp_quality,
        regime,
        x,
        value,
    })
}

/// Aggregate of one sweep cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub param: f64,
    pub mean_rho: Option<f64>,
    pub mad_rho: Option<f64>,
    /// Only with timing enabled.
    pub mean_time_ms: Option<f64>,
    /// Only for cells solved through the MILP.
    pub mean_lp_quality: Option<f64>,
    pub n_f1_wins: usize,
    pub n_fail: usize,
}

fn aggregate(param: f64, outcomes: &[Result<InstanceOutcome>], timing: bool) -> SweepRecord {
    let ok: Vec<&InstanceOutcome> = outcomes.iter().filter_map(|o| o.as_ref().ok()).collect();
    let rhos: Vec<f64> = ok.iter().map(|o| o.rho).collect();
    let times: Vec<f64> = ok.iter().map(|o| o.time_ms).collect();
    let quality: Vec<f64> = ok.iter().filter_map(|o| o.lp_quality).collect();
    SweepRecord {
        param,
        mean_rho: mean(&rhos).ok(),
        mad_rho: mad(&rhos).ok(),
        mean_time_ms: if timing { mean(&times).ok() } else { None },
        mean_lp_quality: mean(&quality).ok(),
        n_f1_wins: ok.iter().filter(|o| o.regime == Some(Regime::F1)).count(),
        n_fail: outcomes.len() - ok.len(),
    }
}

/// Runs every (cell, instance) pair, in parallel, and aggregates per cell in index order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<SweepRecord>> {
    Ok(run_sweep_detailed(cfg)?
        .into_iter()
        .map(|(rec, _)| rec)
        .collect())
}

/// As [`run_sweep`], also returning every instance outcome.
pub fn run_sweep_detailed(
    cfg: &SweepConfig,
) -> Result<Vec<(SweepRecord, Vec<Result<InstanceOutcome>>)>> {
    cfg.check()?;
    let cells: Vec<SweepConfig> = cfg.grid.iter().map(|&v| cfg.at(v)).collect::<Result<_>>()?;
    let m = cfg.instances;
    let outcomes: Vec<Result<InstanceOutcome>> = (0..cells.len() * m)
        .into_par_iter()
        .map(|job| {
            let cell = &cells[job / m];
            let gen = generate_instance(cell, (job % m) as u64)?;
            solve_generated(cell, &gen)
        })
        .collect();
    let mut outcomes = outcomes.into_iter();
    Ok(cfg
        .grid
        .iter()
        .map(|&v| {
            let chunk: Vec<Result<InstanceOutcome>> = outcomes.by_ref().take(m).collect();
            (aggregate(v, &chunk, cfg.timing), chunk)
        })
        .collect())
}

pub const CSV_HEADER: &str = "param,mean_rho,mad_rho,mean_time_ms,mean_lp_quality,n_f1_wins,n_fail";

/// Fixed-format CSV: header, then one row per cell; missing values are empty fields.
pub fn to_csv(records: &[SweepRecord]) -> String {
    let f = |v: Option<f64>| v.map(|x| format!("{x:.6}")).unwrap_or_default();
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.param,
            f(r.mean_rho),
            f(r.mad_rho),
            f(r.mean_time_ms),
            f(r.mean_lp_quality),
            r.n_f1_wins,
            r.n_fail
        );
    }
    out
}

// ---------------------------------------------------------------------------
// Randomized cross-checks between independent code paths

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    /// Largest discrepancy observed.
    pub worst: f64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn check(
    name: &'static str,
    trials: usize,
    tol: f64,
    mut gap: impl FnMut(usize) -> Result<f64>,
) -> CheckReport {
    let mut report = CheckReport {
        name,
        trials,
        failures: 0,
        worst: 0.0,
    };
    for t in 0..trials {
        match gap(t) {
            Ok(g) => {
                report.worst = report.worst.max(g);
                if g.is_nan() || g > tol {
                    report.failures += 1;
                }
            }
            Err(_) => report.failures += 1,
        }
    }
    report
}

fn rel_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / (1.0 + a.abs().max(b.abs()))
}

/// Compares closed forms, the MILP, the LP and brute force on random small instances.
pub fn validation_suite(seed: u64, trials: usize) -> Vec<CheckReport> {
    let opts = SolveOptions {
        backend: BackendKind::Dense,
        ..SolveOptions::default()
    };
    let stream = |salt: u64, t: usize| rng_from_seed(derive_seed(seed ^ salt, t as u64));
    vec![
        check("interval closed form vs MILP", trials, 1e-6, |t| {
            let mut rng = stream(1, t);
            let n = rng.random_range(3..=7);
            let h = rng.random_range(1..=n.min(3));
            let mut inst = gen_sorting(n, h)?;
            let k = rng.random_range(1..=4);
            inst.scenarios = (0..k)
                .map(|_| {
                    let (mut lower, mut upper) = (Vec::new(), Vec::new());
                    for _ in 0..n {
                        let a: f64 = rng.random();
                        let b: f64 = rng.random();
                        lower.push(a.min(b));
                        upper.push(a.max(b));
                    }
                    DataScenario::Interval { lower, upper }
                })
                .collect();
            inst.epsilon = rng.random_range(0.0..1.5);
            let closed = solve_interval_data(
                &IntervalData::from_instance(&inst)?,
                inst.epsilon,
                inst.sense,
                &SortingSelector { h },
            )?;
            Ok(rel_gap(closed.value, solve_dro(&inst, &opts)?.value))
        }),
        check("bandit closed form vs MILP", trials, 1e-6, |t| {
            let mut rng = stream(2, t);
            let h = rng.random_range(1..=3);
            let groups = rng.random_range(1..=3);
            let n = h * groups + rng.random_range(0..=2);
            let mut inst = gen_sorting(n, h)?;
            let k = rng.random_range(1..=6);
            let masks: Vec<Vec<u8>> = (0..groups)
                .map(|v| {
                    (0..n)
                        .map(|a| u8::from(a / h == v && a < h * groups))
                        .collect()
                })
                .collect();
            let decisions: Vec<Vec<u8>> = (0..k)
                .map(|_| masks[rng.random_range(0..groups)].clone())
                .collect();
            let data: Vec<Vec<f64>> = (0..k)
                .map(|_| (0..n).map(|_| rng.random()).collect())
                .collect();
            inst.scenarios = observe_bandit(&data, &decisions);
            inst.epsilon = rng.random_range(0.0..1.0);
            let closed =
                solve_bandit_disjoint(&BanditHistory::from_instance(&inst)?, inst.epsilon)?;
            Ok(rel_gap(closed.value, solve_dro(&inst, &opts)?.value))
        }),
        check("box closed form vs worst-case LP", trials, 1e-6, |t| {
            let mut rng = stream(3, t);
            let n = rng.random_range(1..=6);
            let x: Vec<f64> = (0..n)
                .map(|_| f64::from(rng.random_range(0..2u8)))
                .collect();
            let k = rng.random_range(1..=4);
            let data: Vec<Vec<f64>> = (0..k)
                .map(|_| (0..n).map(|_| rng.random()).collect())
                .collect();
            let eps = rng.random_range(0.0..2.0);
            let lp = build_wc_expectation_lp(
                &x,
                &data,
                &Polytope::unit_box(n),
                &crate::model::BiaffineLoss::linear(n),
                eps,
            )?;
            let res = solver::solve_lp(&lp);
            Ok(rel_gap(
                res.value,
                box_worst_case_value(&x, &data, &vec![1.0; n], eps)?,
            ))
        }),
        check("branch-and-bound vs enumeration", trials, 1e-6, |t| {
            let mut rng = stream(4, t);
            let n = rng.random_range(2..=8);
            let weights: Vec<f64> = (0..n).map(|_| rng.random_range(0.1..1.0)).collect();
            let values: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let cap = weights.iter().sum::<f64>() * rng.random_range(0.2..0.8);
            let mut feasible = crate::model::FeasibleSet::binary(n);
            feasible.push_row(&weights, cap);
            let mut lp = LinearProgram::new(0, Sense::Minimize);
            feasible.embed(&mut lp)?;
            lp.objective = values.clone();
            let res = solver::solve_milp(&MixedIntegerProgram::new(lp, vec![true; n]));
            let brute = enumerate_feasible(&feasible, 1 << 12)?
                .iter()
                .map(|x| dot(x, &values))
                .fold(f64::INFINITY, f64::min);
            Ok(rel_gap(res.value, brute))
        }),
        check("Wasserstein distance is a metric", trials, 1e-6, |t| {
            let mut rng = stream(5, t);
            let mut draw = || -> Result<DiscreteDistribution> {
                let m = rng.random_range(1..=3);
                DiscreteDistribution::uniform(
                    (0..m)
                        .map(|_| (0..2).map(|_| rng.random()).collect())
                        .collect(),
                )
            };
            let (p, q, r) = (draw()?, draw()?, draw()?);
            let pq = discrete_w1(&p, &q)?;
            let asym = (pq - discrete_w1(&q, &p)?).abs();
            let triangle = (pq - discrete_w1(&p, &r)? - discrete_w1(&r, &q)?).max(0.0);
            Ok(asym.max(triangle).max(-pq))
        }),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mad_examples() {
        assert_eq!(mad(&[0.7; 4]).unwrap(), 0.0);
        assert_eq!(mad(&[1.0, 3.0]).unwrap(), 1.0);
        assert_eq!(mad(&[1.0, 2.0, 3.0, 4.0]).unwrap(), 1.0);
        assert!(matches!(mad(&[]), Err(DroError::EmptyInput)));
    }

    #[test]
    fn radius_and_bound_examples() {
        assert!((wasserstein_radius(50, 50f64.sqrt()) - 1.0).abs() < 1e-15);
        assert!((wasserstein_radius(40, 2.0) - wasserstein_radius(10, 2.0) / 2.0).abs() < 1e-15);
        assert_eq!(wasserstein_radius(7, 0.0), 0.0);
        assert_eq!(hoeffding_bound(10, 0.0, 3.0), 1.0);
        assert!((hoeffding_bound(50, 1.0, 5.0) - (-4.0f64).exp()).abs() < 1e-15);
        assert!((hoeffding_bound(20, 0.4, 2.0) - hoeffding_bound(20, 0.8, 4.0)).abs() < 1e-15);
    }

    #[test]
    fn relative_loss_examples() {
        let cop = SortingSelector { h: 1 };
        let m = [0.2, 0.5, 0.9];
        assert_eq!(
            nominal_relative_loss(&[1.0, 0.0, 0.0], &m, &cop, Sense::Minimize).unwrap(),
            1.0
        );
        assert!(
            (nominal_relative_loss(&[0.0, 1.0, 0.0], &m, &cop, Sense::Minimize).unwrap() - 2.5)
                .abs()
                < 1e-12
        );
        let r = nominal_relative_loss(&[0.0, 1.0, 0.0], &m, &cop, Sense::Maximize).unwrap();
        assert!(r > 0.0 && r < 1.0);
    }

    #[test]
    fn spearman_basics() {
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[2.0, 4.0, 9.0]), Some(1.0));
        assert_eq!(spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]), Some(-1.0));
        assert_eq!(spearman(&[1.0, 2.0], &[5.0, 5.0]), None);
    }

    #[test]
    fn presets_are_consistent() {
        for name in PRESETS {
            for full in [false, true] {
                let cfg = SweepConfig::preset(name, full).unwrap();
                cfg.check().unwrap_or_else(|e| panic!("{name}: {e}"));
            }
        }
        assert!(SweepConfig::preset("nope", false).is_err());
    }

    #[test]
    fn tiny_sweep_is_deterministic() {
        let mut cfg = SweepConfig::preset("delta", false).unwrap();
        cfg.family = Family::Sorting { n: 8, h: 2 };
        cfg.k = 5;
        cfg.instances = 4;
        cfg.grid = vec![0.0, 0.5];
        let a = to_csv(&run_sweep(&cfg).unwrap());
        assert_eq!(a, to_csv(&run_sweep(&cfg).unwrap()));
        assert!(a.starts_with(CSV_HEADER));
        let recs = run_sweep(&cfg).unwrap();
        assert!(recs
            .iter()
            .all(|r| r.n_fail == 0 && r.mean_rho.unwrap() >= 1.0 && r.mean_time_ms.is_none()));
    }

    #[test]
    fn validation_suite_passes() {
        for report in validation_suite(3, 15) {
            assert!(report.passed(), "{report:?}");
        }
    }

    proptest! {
        #[test]
        fn mad_is_shift_invariant(v in prop::collection::vec(-5.0..5.0f64, 1..20), s in -3.0..3.0f64) {
            let shifted: Vec<f64> = v.iter().map(|x| x + s).collect();
            prop_assert!((mad(&v).unwrap() - mad(&shifted).unwrap()).abs() < 1e-9);
        }
    }
}
