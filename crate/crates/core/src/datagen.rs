//! Synthetic data: independent beta-distributed costs, the three ways of
//! degrading a sample (interval noise, semi-bandit, bandit), and the CUCB
//! procedures that choose which decisions get observed.
//!
//! # Randomness
//!
//! Every random draw comes from [`DroRng`] (ChaCha8, seeded through
//! `seed_from_u64`), which is platform independent. Parallel instances get
//! their own stream from [`derive_seed`]. Within one instance, consumers draw
//! in this order: structure (coverage subsets), means `m_a`, perturbation
//! probabilities `p_a`, samples (directly or inside CUCB), interval noise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{DroError, Result};
use crate::model::DataScenario;
use crate::problems::{shortest_path_dp, CoverageSystem, LayeredGraph};

pub type DroRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> DroRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of stream `index` under `master`: `splitmix64(master ^ splitmix64(index))`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index))
}

/// Open interval of means for which a beta distribution with standard deviation `sigma` exists.
pub fn admissible_mean_range(sigma: f64) -> (f64, f64) {
    let root = (1.0 - 4.0 * sigma * sigma).max(0.0).sqrt();
    (0.5 * (1.0 - root), 0.5 * (1.0 + root))
}

/// Beta shape parameters with mean `m` and standard deviation `sigma`.
pub fn beta_params(m: f64, sigma: f64) -> Result<(f64, f64)> {
    let (lo, hi) = admissible_mean_range(sigma);
    let out_of_range = DroError::MeanOutOfRange {
        mean: m,
        sigma,
        lo,
        hi,
    };
    if !(sigma > 0.0 && 4.0 * sigma * sigma < 1.0 && m > lo && m < hi) {
        return Err(out_of_range);
    }
    let alpha = m * m * (1.0 - m) / (sigma * sigma) - m;
    let beta = alpha * (1.0 / m - 1.0);
    if alpha > 0.0 && beta > 0.0 {
        Ok((alpha, beta))
    } else {
        Err(out_of_range)
    }
}

/// Product of independent beta marginals on `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaNominal {
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl BetaNominal {
    pub fn from_moments(means: &[f64], sigma: f64) -> Result<Self> {
        let (alpha, beta) = means
            .iter()
            .map(|&m| beta_params(m, sigma))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .unzip();
        Ok(Self { alpha, beta })
    }

    /// Means drawn uniformly from the admissible interval, common `sigma`.
    pub fn random<R: Rng + ?Sized>(n: usize, sigma: f64, rng: &mut R) -> Result<Self> {
        let (lo, hi) = admissible_mean_range(sigma);
        let mut means = Vec::with_capacity(n);
        while means.len() < n {
            let m = rng.random_range(lo..hi);
            // the sampler may return the closed lower end; redraw it
            if m > lo {
                means.push(m);
            }
        }
        Self::from_moments(&means, sigma)
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    pub fn means(&self) -> Vec<f64> {
        self.alpha
            .iter()
            .zip(&self.beta)
            .map(|(a, b)| a / (a + b))
            .collect()
    }

    pub fn stds(&self) -> Vec<f64> {
        self.alpha
            .iter()
            .zip(&self.beta)
            .map(|(a, b)| (a * b / ((a + b) * (a + b) * (a + b + 1.0))).sqrt())
            .collect()
    }

    /// One joint draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.alpha
            .iter()
            .zip(&self.beta)
            .map(|(&a, &b)| {
                Beta::new(a, b)
                    .expect("validated shape parameters")
                    .sample(rng)
                    .clamp(0.0, 1.0)
            })
            .collect()
    }
}

/// `k` independent joint draws.
pub fn sample_nominal<R: Rng + ?Sized>(dist: &BetaNominal, k: usize, rng: &mut R) -> Vec<Vec<f64>> {
    (0..k).map(|_| dist.sample(rng)).collect()
}

/// Half-width of the noise interval for sample `k` (0-based) when a component is perturbed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NoiseSchedule {
    Constant {
        delta: f64,
    },
    /// `k / k_max`: later samples are noisier.
    Increasing {
        k_max: usize,
    },
}

impl NoiseSchedule {
    pub fn delta(&self, k: usize) -> f64 {
        match *self {
            NoiseSchedule::Constant { delta } => delta,
            NoiseSchedule::Increasing { k_max } => k as f64 / k_max as f64,
        }
    }
}

/// Replaces each component `c` of sample `k` by `[max(c - d, 0), min(c + d, 1)]`, where
/// `d = schedule.delta(k)` with probability `p[a]` and `d = 0` otherwise.
///
/// One uniform draw is consumed per `(k, a)`, samples in order, components in order.
pub fn corrupt_interval<R: Rng + ?Sized>(
    data: &[Vec<f64>],
    schedule: &NoiseSchedule,
    p: &[f64],
    rng: &mut R,
) -> Vec<DataScenario> {
    data.iter()
        .enumerate()
        .map(|(k, c)| {
            let mut lower = Vec::with_capacity(c.len());
            let mut upper = Vec::with_capacity(c.len());
            for (a, &v) in c.iter().enumerate() {
                let hit = rng.random::<f64>() < p[a];
                let d = if hit { schedule.delta(k) } else { 0.0 };
                lower.push((v - d).max(0.0));
                upper.push((v + d).min(1.0));
            }
            DataScenario::Interval { lower, upper }
        })
        .collect()
}

/// Exposes the components of sample `k` selected by decision `k`.
pub fn observe_semibandit(data: &[Vec<f64>], decisions: &[Vec<u8>]) -> Vec<DataScenario> {
    data.iter()
        .zip(decisions)
        .map(|(c, d)| DataScenario::SemiBandit {
            observed: d
                .iter()
                .enumerate()
                .filter(|(_, &m)| m == 1)
                .map(|(a, _)| (a, c[a]))
                .collect(),
        })
        .collect()
}

/// Exposes only the total cost of decision `k` on sample `k`.
pub fn observe_bandit(data: &[Vec<f64>], decisions: &[Vec<u8>]) -> Vec<DataScenario> {
    data.iter()
        .zip(decisions)
        .map(|(c, d)| DataScenario::Bandit {
            mask: d.clone(),
            total: c.iter().zip(d).map(|(v, &m)| v * f64::from(m)).sum(),
        })
        .collect()
}

/// Observation counts and running means per component.
#[derive(Debug, Clone, PartialEq)]
pub struct CucbState {
    pub count: Vec<u64>,
    pub mean: Vec<f64>,
}

impl CucbState {
    pub fn new(n: usize) -> Self {
        Self {
            count: vec![0; n],
            mean: vec![0.0; n],
        }
    }

    fn bonus(&self, a: usize, step: usize) -> f64 {
        if self.count[a] == 0 {
            f64::INFINITY
        } else {
            (3.0 * (step as f64).ln() / (2.0 * self.count[a] as f64)).sqrt()
        }
    }

    /// Optimistic costs `max(mean - bonus, 0)` at 1-based `step`; unobserved components cost 0.
    pub fn adjusted_costs(&self, step: usize) -> Vec<f64> {
        (0..self.mean.len())
            .map(|a| (self.mean[a] - self.bonus(a, step)).max(0.0))
            .collect()
    }

    /// Optimistic rewards `min(mean + bonus, 1)` at 1-based `step`; unobserved components get 1.
    pub fn adjusted_rewards(&self, step: usize) -> Vec<f64> {
        (0..self.mean.len())
            .map(|a| (self.mean[a] + self.bonus(a, step)).min(1.0))
            .collect()
    }

    pub fn update(&mut self, mask: &[u8], sample: &[f64]) {
        for (a, &m) in mask.iter().enumerate() {
            if m == 1 {
                self.count[a] += 1;
                self.mean[a] += (sample[a] - self.mean[a]) / self.count[a] as f64;
            }
        }
    }
}

/// Decisions chosen by a CUCB run and the full (hidden) samples drawn at each step.
#[derive(Debug, Clone, PartialEq)]
pub struct CucbRun {
    pub decisions: Vec<Vec<u8>>,
    pub samples: Vec<Vec<f64>>,
}

/// CUCB on the layered graph: at step `k` take the shortest path under the
/// optimistic costs, draw a sample, and update the arcs on the path.
pub fn cucb_collect<R: Rng + ?Sized>(
    graph: &LayeredGraph,
    dist: &BetaNominal,
    k: usize,
    rng: &mut R,
) -> CucbRun {
    let mut state = CucbState::new(graph.num_arcs());
    let mut run = CucbRun {
        decisions: Vec::with_capacity(k),
        samples: Vec::with_capacity(k),
    };
    for step in 1..=k {
        let (_, path) = shortest_path_dp(graph, &state.adjusted_costs(step));
        let mask: Vec<u8> = path.iter().map(|&v| v as u8).collect();
        let sample = dist.sample(rng);
        state.update(&mask, &sample);
        run.decisions.push(mask);
        run.samples.push(sample);
    }
    run
}

/// CUCB adapted to maximum coverage: at step `k` greedily pick `budget` subsets by
/// marginal optimistic reward (ties to the lowest subset index), then observe the
/// covered items.
///
/// `dist` covers the `n1` items; decisions and samples are padded with zeros to the
/// `n1 + n2` coordinates of the coverage instance.
pub fn cucb_collect_coverage<R: Rng + ?Sized>(
    system: &CoverageSystem,
    dist: &BetaNominal,
    k: usize,
    rng: &mut R,
) -> CucbRun {
    let n1 = system.n1;
    let n = n1 + system.n2();
    let mut state = CucbState::new(n1);
    let mut run = CucbRun {
        decisions: Vec::with_capacity(k),
        samples: Vec::with_capacity(k),
    };
    for step in 1..=k {
        let reward = state.adjusted_rewards(step);
        let mut covered = vec![false; n1];
        let mut chosen: Vec<usize> = Vec::new();
        for _ in 0..system.budget.min(system.n2()) {
            let mut best: Option<(usize, f64)> = None;
            for (i, subset) in system.subsets.iter().enumerate() {
                if chosen.contains(&i) {
                    continue;
                }
                let gain: f64 = subset
                    .iter()
                    .filter(|&&a| !covered[a])
                    .map(|&a| reward[a])
                    .sum();
                if best.is_none_or(|(_, g)| gain > g) {
                    best = Some((i, gain));
                }
            }
            let (i, _) = best.expect("a subset is left");
            chosen.push(i);
            for &a in &system.subsets[i] {
                covered[a] = true;
            }
        }
        let mut mask: Vec<u8> = covered.iter().map(|&c| u8::from(c)).collect();
        let mut sample = dist.sample(rng);
        state.update(&mask, &sample);
        mask.resize(n, 0);
        sample.resize(n, 0.0);
        run.decisions.push(mask);
        run.samples.push(sample);
    }
    run
}
