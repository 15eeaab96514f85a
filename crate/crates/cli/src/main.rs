//! `dro`: solve, generate and benchmark distributionally robust combinatorial problems.
//!
//! Every command writes deterministic output for a fixed seed; wall-clock times
//! are only reported with `--timing`. `DRO_SEED` overrides any seed given on the
//! command line or in a sweep configuration.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dro_core::closedform::{
    group_disjoint_decisions, solve_bandit_disjoint, solve_interval_data, BanditHistory,
    IntervalData, MilpCop,
};
use dro_core::datagen::{rng_from_seed, NoiseSchedule};
use dro_core::harness::{self, Family, Feedback, RadiusRule, SweepConfig, SweptParam};
use dro_core::reformulate::build_dro_milp;
use dro_core::solver::write_listing;
use dro_core::{solve_dro, BackendKind, ProblemInstance, SolveOptions};

#[derive(Parser)]
#[command(
    name = "dro",
    version,
    about = "Distributionally robust combinatorial optimization with uncertain data"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance through its single-level MILP.
    Solve {
        instance: PathBuf,
        /// Override the Wasserstein radius stored in the instance.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Write the MILP as a plain-text listing.
        #[arg(long)]
        dump_milp: Option<PathBuf>,
        #[arg(long, default_value = "auto")]
        backend: BackendKind,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Solve an instance by a closed form (interval data, or bandit data with disjoint decisions).
    ClosedForm {
        instance: PathBuf,
        #[arg(long)]
        epsilon: Option<f64>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Generate an instance.
    Gen {
        #[command(subcommand)]
        family: GenFamily,
    },
    /// Generate a path or coverage instance with data collected by a CUCB policy.
    Collect {
        #[command(subcommand)]
        family: CollectFamily,
    },
    /// Run a parameter sweep and write one CSV row per cell.
    Sweep {
        /// Sweep configuration (JSON); alternatively use --preset.
        config: Option<PathBuf>,
        /// A built-in experiment.
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        /// Use the published experiment sizes for the preset.
        #[arg(long, requires = "preset")]
        paper_scale: bool,
        /// Override the number of random instances per cell.
        #[arg(long)]
        instances: Option<usize>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Cross-check closed forms, the MILP and brute force on random small instances.
    Validate {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

#[derive(Args)]
struct OutputArgs {
    /// Output file (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Report wall-clock times (output is then no longer reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum GenFamily {
    /// Select h of n items; with --k, adds interval data from a beta nominal distribution.
    Sorting {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        k: Option<usize>,
        /// Interval half-width applied to corrupted components.
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Shortest path through a layered graph with h arcs per path and r nodes per layer.
    Spp {
        #[arg(long)]
        h: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Maximum coverage: pick `budget` of n2 random subsets of n1 items.
    Mcp {
        #[command(flatten)]
        shape: McpShape,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Copy)]
struct McpShape {
    #[arg(long)]
    n1: usize,
    #[arg(long)]
    n2: usize,
    #[arg(long, default_value_t = 5)]
    subset_size: usize,
    #[arg(long, default_value_t = 5)]
    budget: usize,
}

#[derive(Args)]
struct CollectArgs {
    /// Number of collected samples.
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "bandit")]
    feedback: FeedbackArg,
    #[arg(long, default_value_t = 1.0)]
    epsilon: f64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum CollectFamily {
    Spp {
        #[arg(long)]
        h: usize,
        #[arg(long)]
        r: usize,
        #[command(flatten)]
        args: CollectArgs,
    },
    Mcp {
        #[command(flatten)]
        shape: McpShape,
        #[command(flatten)]
        args: CollectArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FeedbackArg {
    Semibandit,
    Bandit,
}

/// Result of `dro closed-form`.
#[derive(Serialize)]
struct ClosedFormOutput {
    value: f64,
    /// The decision for interval data; the winning group index for bandit data.
    x_or_group: serde_json::Value,
    method: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    decision: Option<Vec<u8>>,
    time_ms: Option<f64>,
}

fn seed_override(seed: u64) -> Result<u64> {
    match std::env::var("DRO_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .with_context(|| format!("DRO_SEED must be an unsigned integer, got `{s}`")),
        Err(_) => Ok(seed),
    }
}

fn read_instance(path: &Path, epsilon: Option<f64>) -> Result<ProblemInstance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut inst =
        ProblemInstance::from_json(&text).with_context(|| format!("parsing {}", path.display()))?;
    if let Some(e) = epsilon {
        inst.epsilon = e;
    }
    Ok(inst)
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(output: Option<&Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(output, &text)
}

fn emit_instance(output: Option<&Path>, inst: &ProblemInstance) -> Result<()> {
    emit(output, &(inst.to_json() + "\n"))
}

fn data_config(
    family: Family,
    feedback: Feedback,
    noise: NoiseSchedule,
    k: usize,
    epsilon: f64,
    seed: u64,
) -> SweepConfig {
    SweepConfig {
        family,
        feedback,
        noise,
        radius: RadiusRule::Fixed { epsilon },
        k,
        param: SweptParam::K,
        grid: vec![k as f64],
        instances: 1,
        sigma: 0.125,
        seed,
        backend: BackendKind::Auto,
        timing: false,
    }
}

fn generated(cfg: &SweepConfig) -> Result<ProblemInstance> {
    let mut rng = rng_from_seed(cfg.seed);
    Ok(harness::generate_from_rng(cfg, &mut rng)?.instance)
}

fn mcp_family(s: McpShape) -> Family {
    Family::Mcp {
        n1: s.n1,
        n2: s.n2,
        subset_size: s.subset_size,
        budget: s.budget,
    }
}

/// Returns `Ok(false)` when the command ran but reported a failure.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Solve {
            instance,
            epsilon,
            dump_milp,
            backend,
            out,
        } => {
            let inst = read_instance(&instance, epsilon)?;
            if let Some(path) = dump_milp {
                let milp = build_dro_milp(&inst)?;
                let mut buf = Vec::new();
                write_listing(&mut buf, &milp.mip.lp, Some(&milp.mip.integer))?;
                fs::write(&path, buf).with_context(|| format!("writing {}", path.display()))?;
            }
            let opts = SolveOptions {
                backend,
                timing: out.timing,
                ..SolveOptions::default()
            };
            let sol = solve_dro(&inst, &opts)?;
            emit_json(out.output.as_deref(), &sol)?;
        }
        Command::ClosedForm {
            instance,
            epsilon,
            out,
        } => {
            let inst = read_instance(&instance, epsilon)?;
            let start = std::time::Instant::now();
            let mut result = if let Ok(data) = IntervalData::from_instance(&inst) {
                let cop = MilpCop::new(inst.feasible.clone());
                let sol = solve_interval_data(&data, inst.epsilon, inst.sense, &cop)?;
                ClosedFormOutput {
                    value: sol.value,
                    x_or_group: serde_json::to_value(&sol.x)?,
                    method: "thm2",
                    decision: None,
                    time_ms: None,
                }
            } else if let Some(hist) = BanditHistory::from_instance(&inst)
                .ok()
                .filter(|h| group_disjoint_decisions(&h.decisions).is_ok())
            {
                let sol = solve_bandit_disjoint(&hist, inst.epsilon)?;
                ClosedFormOutput {
                    value: sol.value,
                    x_or_group: sol.group.into(),
                    method: "thm3",
                    decision: Some(sol.decision),
                    time_ms: None,
                }
            } else {
                bail!(
                    "no closed form applies: scenarios must all be intervals on a box support, \
                     or all bandit observations of pairwise disjoint decisions"
                );
            };
            if out.timing {
                result.time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            emit_json(out.output.as_deref(), &result)?;
        }
        Command::Gen { family } => match family {
            GenFamily::Sorting {
                n,
                h,
                k,
                delta,
                epsilon,
                seed,
                output,
            } => {
                let inst = match k {
                    Some(k) => {
                        let noise = NoiseSchedule::Constant { delta };
                        let cfg = data_config(
                            Family::Sorting { n, h },
                            Feedback::Interval,
                            noise,
                            k,
                            epsilon,
                            seed_override(seed)?,
                        );
                        generated(&cfg)?
                    }
                    None => {
                        let mut inst = dro_core::problems::gen_sorting(n, h)?;
                        inst.epsilon = epsilon;
                        inst
                    }
                };
                emit_instance(output.as_deref(), &inst)?;
            }
            GenFamily::Spp {
                h,
                r,
                epsilon,
                output,
            } => {
                let (mut inst, _) = dro_core::problems::gen_layered_spp(h, r)?;
                inst.epsilon = epsilon;
                emit_instance(output.as_deref(), &inst)?;
            }
            GenFamily::Mcp {
                shape,
                epsilon,
                seed,
                output,
            } => {
                let seed = seed_override(seed)?;
                let (mut inst, _) = dro_core::problems::gen_mcp(
                    shape.n1,
                    shape.n2,
                    shape.subset_size,
                    shape.budget,
                    seed,
                )?;
                inst.epsilon = epsilon;
                emit_instance(output.as_deref(), &inst)?;
            }
        },
        Command::Collect { family } => {
            let (fam, args) = match family {
                CollectFamily::Spp { h, r, args } => (Family::Spp { h, r }, args),
                CollectFamily::Mcp { shape, args } => (mcp_family(shape), args),
            };
            let feedback = match args.feedback {
                FeedbackArg::Semibandit => Feedback::SemiBandit,
                FeedbackArg::Bandit => Feedback::Bandit,
            };
            let noise = NoiseSchedule::Constant { delta: 0.0 };
            let cfg = data_config(
                fam,
                feedback,
                noise,
                args.k,
                args.epsilon,
                seed_override(args.seed)?,
            );
            emit_instance(args.output.as_deref(), &generated(&cfg)?)?;
        }
        Command::Sweep {
            config,
            preset,
            paper_scale,
            instances,
            out,
        } => {
            let mut cfg = match (config, preset) {
                (Some(path), None) => {
                    let text = fs::read_to_string(&path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    serde_json::from_str::<SweepConfig>(&text)
                        .with_context(|| format!("parsing {}", path.display()))?
                }
                (None, Some(name)) => SweepConfig::preset(&name, paper_scale)?,
                _ => bail!("give either a configuration file or --preset"),
            };
            cfg.seed = seed_override(cfg.seed)?;
            cfg.timing |= out.timing;
            if let Some(m) = instances {
                cfg.instances = m;
            }
            let records = harness::run_sweep(&cfg)?;
            emit(out.output.as_deref(), &harness::to_csv(&records))?;
            let failed: usize = records.iter().map(|r| r.n_fail).sum();
            if failed > 0 {
                eprintln!("{failed} instance(s) failed");
                return Ok(false);
            }
        }
        Command::Validate { seed, trials } => {
            let reports = harness::validation_suite(seed_override(seed)?, trials);
            let mut all = true;
            for r in &reports {
                let tag = if r.passed() { "PASS" } else { "FAIL" };
                println!(
                    "{tag} {} ({} trials, {} failures, worst gap {:.3e})",
                    r.name, r.trials, r.failures, r.worst
                );
                all &= r.passed();
            }
            return Ok(all);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
