//! Benchmark fixtures: seeded instances shared by the criterion benches.

use dro_core::datagen::NoiseSchedule;
use dro_core::harness::{generate_instance, Family, Feedback, RadiusRule, SweepConfig, SweptParam};
use dro_core::{BackendKind, ProblemInstance};

fn config(family: Family, feedback: Feedback, k: usize) -> SweepConfig {
    SweepConfig {
        family,
        feedback,
        noise: NoiseSchedule::Constant { delta: 0.2 },
        radius: RadiusRule::SqrtK {
            gamma: (k as f64).sqrt(),
        },
        k,
        param: SweptParam::K,
        grid: vec![k as f64],
        instances: 1,
        sigma: 0.125,
        seed: 2024,
        backend: BackendKind::Auto,
        timing: false,
    }
}

/// Sorting instance (choose `h` of `n`) with corrupted interval data.
pub fn sorting_interval(n: usize, h: usize, k: usize) -> ProblemInstance {
    generate_instance(&config(Family::Sorting { n, h }, Feedback::Interval, k), 0)
        .expect("sorting fixture")
        .instance
}

/// Layered-graph shortest path with data collected by CUCB.
pub fn spp(h: usize, r: usize, k: usize, feedback: Feedback) -> ProblemInstance {
    generate_instance(&config(Family::Spp { h, r }, feedback, k), 0)
        .expect("path fixture")
        .instance
}

/// Maximum coverage with bandit data collected by the greedy CUCB variant.
pub fn coverage_bandit(n1: usize, n2: usize, k: usize) -> ProblemInstance {
    let family = Family::Mcp {
        n1,
        n2,
        subset_size: 5,
        budget: 5,
    };
    generate_instance(&config(family, Feedback::Bandit, k), 0)
        .expect("coverage fixture")
        .instance
}

/// The exact samples of `inst`, or uniform mid-points for scenarios that are not exact.
pub fn point_data(inst: &ProblemInstance) -> Vec<Vec<f64>> {
    use dro_core::DataScenario;
    inst.scenarios
        .iter()
        .map(|s| match s {
            DataScenario::Exact { point } => point.clone(),
            DataScenario::Interval { lower, upper } => lower
                .iter()
                .zip(upper)
                .map(|(l, u)| 0.5 * (l + u))
                .collect(),
            _ => vec![0.5; inst.n()],
        })
        .collect()
}
