//! Empirical-process strong-law toolkit.
//!
//! Building blocks for studying almost-sure convergence rates of empirical
//! distribution functions and plug-in estimators at desk scale:
//!
//! - model laws with exact CDFs, quantiles, and seeded inverse-transform
//!   sampling ([`distributions`]);
//! - u-shaped weight functions and the moment condition governing weighted
//!   convergence ([`weights`]);
//! - empirical distribution functions and the weighted sup-norm deviation
//!   ([`edf`]);
//! - L-, V-, and one-sided-moment risk functionals with their plug-in and
//!   exact values and Hölder continuity constants ([`functionals`]);
//! - dependent-data generators (linear processes, AR(1)) and mixing-rate
//!   condition checkers ([`mixing`]);
//! - dyadic chaining decompositions and tail bounds for partial-sum
//!   deviations over uniforms ([`chaining`]);
//! - epsilon-bracket construction and the bracketing inequality
//!   ([`brackets`]);
//! - a deterministic, replication-parallel Monte Carlo driver with log-log
//!   rate fitting ([`harness`]).
//!
//! All randomness flows through seeded SplitMix64 streams ([`rng`]); equal
//! seeds give bit-identical results, independent of thread count.

pub mod brackets;
pub mod chaining;
pub mod distributions;
pub mod edf;
pub mod error;
pub mod functionals;
pub mod harness;
pub mod mixing;
pub mod quad;
pub mod rng;
pub mod special;
pub mod weights;

pub use brackets::{
    bracket_inequality_check, bracket_weight, build_partition, verify_brackets, BracketPartition,
    BracketWeight,
};
pub use chaining::{
    chaining_bound_check, dyadic_blocks, rio_tail_bound, sup_z_statistic, z_statistic,
    DyadicDecomposition,
};
pub use distributions::{Direction, DistributionModel, MonotoneFunctionSamples};
pub use edf::{
    build_edf, edf_quantile, weighted_sup_norm, weighted_sup_norm_upto, EmpiricalDistribution,
};
pub use error::{Error, Result};
pub use functionals::{
    bernoulli_chain_check, holder_constant, l_functional_exact, l_statistic, risk_exact,
    risk_one_sided, v_functional_exact, v_plugin, v_statistic, LKernel, RiskParams, VKernel,
};
pub use harness::{
    estimate_rate, holder_bound_experiment, run_experiment, ExperimentConfig, FunctionalSpec,
    GeneratorSpec, HolderConfig, HolderReport, PerN, RateReport, SummaryStats,
};
pub use mixing::{
    condition_t3_check, feasibility_window, gamma_for_theta_one, simulate_ar1,
    simulate_linear_process, simulate_linear_process_with, theta_bound, FeasibilityWindow,
    LinearProcessSpec, MixingRateModel, T3Report, TailModel,
};
pub use weights::{
    make_adaptive_weight, theorem1_integrability, IntegrabilityReport, WeightFunction,
};
