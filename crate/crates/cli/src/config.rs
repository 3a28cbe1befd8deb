//! JSON configuration file: one file with a section per subcommand, plus
//! `key=value` overrides with dotted paths.

use anyhow::{anyhow, bail, Context};
use serde::Deserialize;

use emproc::distributions::DistributionModel;
use emproc::functionals::RiskParams;
use emproc::harness::{ExperimentConfig, HolderConfig};
use emproc::mixing::{MixingRateModel, TailModel};
use emproc::weights::WeightFunction;

/// Top-level configuration; each subcommand reads its own section.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    /// `rate` subcommand: the Monte Carlo experiment to run.
    pub experiment: Option<ExperimentConfig>,
    /// Optional pass/fail expectations applied to rate-style reports.
    pub expect: Option<Expectations>,
    /// `holder` subcommand.
    pub holder: Option<HolderConfig>,
    /// `conditions` subcommand.
    pub conditions: Option<ConditionsConfig>,
    /// `brackets` subcommand.
    pub brackets: Option<BracketsConfig>,
    /// `chaining` subcommand.
    pub chaining: Option<ChainingConfig>,
    /// `riskcheck` subcommand.
    pub riskcheck: Option<RiskcheckConfig>,
}

/// Expectations turned into report verdicts.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    /// Fitted log-log slope must fall inside [lo, hi].
    pub slope_range: Option<[f64; 2]>,
    /// Median of n^r D_n at the last grid point must be below the first.
    #[serde(default)]
    pub require_scaled_decreasing: bool,
    /// Median of n^r D_n must decrease at every grid step.
    #[serde(default)]
    pub require_scaled_monotone: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditionsConfig {
    /// Integrability check int phi^{1/(1-r)} dF < inf.
    pub integrability: Option<IntegrabilityConfig>,
    /// Log-tail summability condition for alpha-mixing weighted laws.
    pub t3: Option<T3Config>,
    /// Admissible-gamma window for power tails.
    pub feasibility: Option<FeasibilityConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrabilityConfig {
    pub model: DistributionModel,
    pub weight: WeightFunction,
    pub r: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct T3Config {
    pub rate: MixingRateModel,
    pub tail: TailModel,
    #[serde(default = "default_t3_tol")]
    pub tol: f64,
}

fn default_t3_tol() -> f64 {
    1e-8
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FeasibilityConfig {
    pub alpha: f64,
    pub beta_prime: f64,
    pub r: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketsConfig {
    pub model: DistributionModel,
    pub weight: WeightFunction,
    pub epsilon: f64,
    /// Sample size per replication of the inequality check.
    pub n: usize,
    pub replications: usize,
    pub master_seed: u64,
    #[serde(default = "default_s_grid")]
    pub s_grid: usize,
    #[serde(default = "default_arg_grid")]
    pub arg_grid: usize,
    #[serde(default = "default_resolution")]
    pub sup_resolution: usize,
}

fn default_s_grid() -> usize {
    10_000
}

fn default_arg_grid() -> usize {
    1_000
}

fn default_resolution() -> usize {
    8
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainingConfig {
    /// Block-inequality sample sizes.
    pub n_list: Vec<usize>,
    #[serde(default = "default_t_grid")]
    pub t_grid_points: usize,
    /// Number of independent uniform sequences checked.
    pub sequences: usize,
    pub master_seed: u64,
    /// Tail-bound comparison; omit to skip.
    pub rio: Option<RioConfig>,
}

fn default_t_grid() -> usize {
    101
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RioConfig {
    pub q_list: Vec<u64>,
    pub x_list: Vec<f64>,
    pub replications: usize,
    pub rate: MixingRateModel,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RiskcheckConfig {
    pub params: RiskParams,
    /// Kernel-bound sweep grid: x runs over {0, 1/(x_points-1), ..., 1}.
    #[serde(default = "default_x_points")]
    pub x_points: usize,
    #[serde(default = "default_p_list")]
    pub p_list: Vec<f64>,
    #[serde(default = "default_a_list")]
    pub a_list: Vec<f64>,
    /// Rate experiment for the plug-in estimator of rho_{p,a}.
    pub experiment: Option<ExperimentConfig>,
}

fn default_x_points() -> usize {
    11
}

fn default_p_list() -> Vec<f64> {
    vec![1.0, 2.0, 4.0]
}

fn default_a_list() -> Vec<f64> {
    vec![0.0, 0.5, 1.0]
}

/// Loads the config file, applies `key=value` overrides (dotted paths into
/// the JSON tree; values parsed as JSON, falling back to strings), and
/// deserializes.
pub fn load_config(path: &std::path::Path, overrides: &[String]) -> anyhow::Result<ConfigFile> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read config file {}", path.display()))?;
    let mut value: serde_json::Value = serde_json::from_str(&text)
        .with_context(|| format!("malformed JSON in {}", path.display()))?;
    for item in overrides {
        apply_override(&mut value, item)?;
    }
    let cfg: ConfigFile = serde_json::from_value(value)
        .with_context(|| format!("config {} does not match the schema", path.display()))?;
    Ok(cfg)
}

fn apply_override(root: &mut serde_json::Value, item: &str) -> anyhow::Result<()> {
    let (path, raw) = item
        .split_once('=')
        .ok_or_else(|| anyhow!("override '{item}' is not of the form key=value"))?;
    let parsed: serde_json::Value = serde_json::from_str(raw)
        .unwrap_or_else(|_| serde_json::Value::String(raw.to_string()));
    let mut cursor = root;
    let segments: Vec<&str> = path.split('.').collect();
    if segments.is_empty() {
        bail!("empty override path in '{item}'");
    }
    for seg in &segments[..segments.len() - 1] {
        if !cursor.is_object() {
            bail!("override path '{path}' descends into a non-object");
        }
        cursor = cursor
            .as_object_mut()
            .unwrap()
            .entry(seg.to_string())
            .or_insert_with(|| serde_json::Value::Object(Default::default()));
    }
    let last = segments[segments.len() - 1];
    cursor
        .as_object_mut()
        .ok_or_else(|| anyhow!("override path '{path}' descends into a non-object"))?
        .insert(last.to_string(), parsed);
    Ok(())
}
