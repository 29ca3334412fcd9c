//! Power interruption cost estimation with data envelopment analysis.
//!
//! The pipeline scores producers with the output-oriented CCR model
//! ([`dea`]), estimates the sales a producer could reach with more
//! electricity at unchanged efficiency ([`inverse`]), and turns a sampled
//! uninterrupted-energy distribution into a per-kWh cost ([`stochastic`]).
//! All linear programs go through the dense simplex in [`lp`].

pub mod cli;
pub mod dea;
pub mod error;
pub mod exec;
pub mod inverse;
pub mod io;
pub mod lp;
pub mod rng;
pub mod stochastic;

pub use dea::{build_ccr_lp, efficiency, efficiency_all, Dataset, EfficiencyResult, Producer};
pub use error::{Error, Result};
pub use exec::Execution;
pub use inverse::{estimate_output, perturbed_inputs, value_curve, OutputEstimate, PerturbedInputs};
pub use lp::{solve, LinearProgram, LpSolution, LpStatus, Relation};
pub use stochastic::{
    energy_distribution, interruption_cost, monte_carlo_estimate, EnergyDistribution, InterruptionCostEstimate,
    OutageRecord,
};
