//! Distributionally robust combinatorial optimization over type-1 Wasserstein
//! balls with interval, semi-bandit and bandit data.
//!
//! The crate is organised bottom-up: [`solver`] (LP and branch-and-bound),
//! [`model`] (instances and scenarios), [`reformulate`] (the single-level MILP),
//! [`closedform`] (fast exact solutions for special data), [`problems`] and
//! [`datagen`] (instance families and data collection), and [`harness`]
//! (experiment sweeps).

pub mod closedform;
pub mod datagen;
pub mod error;
pub mod harness;
pub mod model;
pub mod problems;
pub mod reformulate;
pub mod solver;

pub use closedform::{IntervalData, IntervalSolution, NominalCop, Regime};
pub use error::{DroError, Result};
pub use model::{
    BiaffineLoss, DataScenario, Diagnostic, FeasibleSet, HalfSpace, Polytope, ProblemInstance,
    Severity,
};
pub use reformulate::{solve_dro, DroSolution, SolveOptions};
pub use solver::{BackendKind, Sense, Status};
