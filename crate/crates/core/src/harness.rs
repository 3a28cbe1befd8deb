//! Monte Carlo experiment driver: simulates i.i.d. or dependent paths,
//! evaluates a deviation statistic on every prefix of an n-grid across
//! replications, aggregates summary statistics of D_n and n^r D_n, and fits
//! the empirical convergence rate by log-log regression.
//!
//! Replications are embarrassingly parallel; replication k draws its whole
//! path from a generator seeded with the k-th SplitMix64 output of the
//! master seed, and aggregation folds the per-replication results in
//! replication order, so reports are bit-identical regardless of thread
//! count.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distributions::DistributionModel;
use crate::edf::{build_edf, weighted_sup_norm};
use crate::error::{Error, Result};
use crate::functionals::{
    holder_constant, l_functional_exact, l_statistic, risk_exact, risk_one_sided,
    v_functional_exact, v_plugin, LKernel, RiskParams, VKernel,
};
use crate::mixing::{simulate_ar1, simulate_linear_process, LinearProcessSpec};
use crate::rng::derive_seed;
use crate::weights::{make_adaptive_weight, theorem1_integrability, WeightFunction};

/// Data-generating process for one experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorSpec {
    Iid { model: DistributionModel },
    LinearProcess { spec: LinearProcessSpec },
    Ar1 { rho: f64 },
}

impl GeneratorSpec {
    pub fn simulate(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        match self {
            GeneratorSpec::Iid { model } => model.sample_iid(n, seed),
            GeneratorSpec::LinearProcess { spec } => simulate_linear_process(spec, n, seed),
            GeneratorSpec::Ar1 { rho } => simulate_ar1(*rho, n, seed),
        }
    }

    /// Closed-form marginal law, when one exists. The truncated linear
    /// process has none.
    pub fn marginal(&self) -> Option<DistributionModel> {
        match self {
            GeneratorSpec::Iid { model } => Some(model.clone()),
            GeneratorSpec::Ar1 { .. } => Some(DistributionModel::StdNormal),
            GeneratorSpec::LinearProcess { .. } => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GeneratorSpec::Iid { model } => model.validate(),
            GeneratorSpec::LinearProcess { spec } => spec.validate(),
            GeneratorSpec::Ar1 { rho } => {
                if rho.abs() < 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter("ar1 requires |rho| < 1".into()))
                }
            }
        }
    }
}

/// Plug-in functional whose error |T(F_n) - T(F)| is tracked instead of the
/// weighted sup-norm.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionalSpec {
    LStatistic { kernel: LKernel },
    VStatistic { kernel: VKernel },
    Risk { params: RiskParams },
    Quantile { y: f64 },
}

/// One Monte Carlo experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub generator: GeneratorSpec,
    #[serde(default = "default_weight")]
    pub weight: WeightFunction,
    #[serde(default)]
    pub functional: Option<FunctionalSpec>,
    pub r_exponent: f64,
    pub n_grid: Vec<usize>,
    pub replications: usize,
    pub master_seed: u64,
    #[serde(default = "default_resolution")]
    pub sup_resolution: usize,
}

fn default_weight() -> WeightFunction {
    WeightFunction::Uniform
}

fn default_resolution() -> usize {
    8
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.generator.validate()?;
        self.weight.validate()?;
        if self.n_grid.is_empty() {
            return Err(Error::InvalidParameter("n_grid must be nonempty".into()));
        }
        if self.n_grid.windows(2).any(|w| w[0] >= w[1]) || self.n_grid[0] == 0 {
            return Err(Error::InvalidParameter("n_grid must be strictly increasing and positive".into()));
        }
        if self.replications == 0 {
            return Err(Error::InvalidParameter("replications must be >= 1".into()));
        }
        if !(0.0..0.5).contains(&self.r_exponent) {
            return Err(Error::InvalidParameter("r_exponent must lie in [0, 1/2)".into()));
        }
        if self.sup_resolution == 0 {
            return Err(Error::InvalidParameter("sup_resolution must be >= 1".into()));
        }
        Ok(())
    }
}

/// Order-statistic summary over replications (left-quantile convention).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub median: f64,
    pub mean: f64,
    pub q10: f64,
    pub q90: f64,
}

impl SummaryStats {
    // left-quantile convention x_(ceil(R q)); deviations may be +inf, so
    // this does not go through EmpiricalDistribution
    fn from_values(values: &[f64]) -> Self {
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let at = |q: f64| sorted[((n as f64 * q).ceil() as usize).clamp(1, n) - 1];
        SummaryStats {
            median: at(0.5),
            mean: sorted.iter().sum::<f64>() / n as f64,
            q10: at(0.1),
            q90: at(0.9),
        }
    }

    fn scaled(&self, factor: f64) -> Self {
        SummaryStats {
            median: self.median * factor,
            mean: self.mean * factor,
            q10: self.q10 * factor,
            q90: self.q90 * factor,
        }
    }
}

/// Per-grid-point statistics of the raw deviation and of n^r times it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PerN {
    pub n: usize,
    pub raw: SummaryStats,
    pub scaled: SummaryStats,
}

/// Aggregated experiment outcome.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RateReport {
    pub per_n: Vec<PerN>,
    /// OLS slope of ln(median D_n) on ln n.
    pub fitted_slope: f64,
    pub slope_stderr: f64,
    pub r_exponent: f64,
    pub verdicts: BTreeMap<String, bool>,
    pub warnings: Vec<String>,
}

impl RateReport {
    /// Canonical tabular form: columns n, metric, value, replication_stat.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,metric,value,replication_stat\n");
        for per in &self.per_n {
            for (metric, stats) in [("deviation", &per.raw), ("scaled_deviation", &per.scaled)] {
                for (stat, value) in [
                    ("median", stats.median),
                    ("mean", stats.mean),
                    ("q10", stats.q10),
                    ("q90", stats.q90),
                ] {
                    out.push_str(&format!("{},{metric},{value},{stat}\n", per.n));
                }
            }
        }
        out
    }
}

/// Runs the experiment: for replication k and every n in the grid, the
/// deviation is evaluated on the length-n prefix of one length-max(n_grid)
/// path simulated with seed_k.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RateReport> {
    cfg.validate()?;
    let model = cfg.generator.marginal().ok_or_else(|| {
        Error::InvalidParameter(
            "the configured generator has no closed-form marginal law to compare against; \
             use an iid or ar1 generator"
                .into(),
        )
    })?;
    let mut warnings = Vec::new();
    let deviation = DeviationKind::prepare(cfg, &model, &mut warnings)?;
    let n_max = *cfg.n_grid.last().unwrap();

    let per_rep: Result<Vec<Vec<f64>>> = (0..cfg.replications)
        .into_par_iter()
        .map(|k| {
            let seed = derive_seed(cfg.master_seed, k as u64);
            let path = cfg.generator.simulate(n_max, seed)?;
            cfg.n_grid
                .iter()
                .map(|&n| deviation.eval(&path[..n], &model))
                .collect()
        })
        .collect();
    let per_rep = per_rep?;

    let mut per_n = Vec::with_capacity(cfg.n_grid.len());
    for (gi, &n) in cfg.n_grid.iter().enumerate() {
        let values: Vec<f64> = per_rep.iter().map(|row| row[gi]).collect();
        let raw = SummaryStats::from_values(&values);
        let scaled = raw.scaled((n as f64).powf(cfg.r_exponent));
        per_n.push(PerN { n, raw, scaled });
    }

    let medians: Vec<f64> = per_n.iter().map(|p| p.raw.median).collect();
    let (fitted_slope, slope_stderr) = if cfg.n_grid.len() >= 3 {
        estimate_rate(&cfg.n_grid, &medians)?
    } else {
        (f64::NAN, f64::NAN)
    };

    let mut verdicts = BTreeMap::new();
    let scaled_medians: Vec<f64> = per_n.iter().map(|p| p.scaled.median).collect();
    verdicts.insert(
        "scaled_median_decreasing".into(),
        scaled_medians.last() < scaled_medians.first(),
    );
    verdicts.insert(
        "scaled_median_monotone".into(),
        scaled_medians.windows(2).all(|w| w[1] < w[0]),
    );

    Ok(RateReport { per_n, fitted_slope, slope_stderr, r_exponent: cfg.r_exponent, verdicts, warnings })
}

enum DeviationKind<'a> {
    SupNorm { weight: &'a WeightFunction, resolution: usize },
    LStat { kernel: &'a LKernel, exact: f64 },
    VStat { kernel: &'a VKernel, exact: f64 },
    Risk { params: &'a RiskParams, exact: f64 },
    Quantile { y: f64, exact: f64 },
}

impl<'a> DeviationKind<'a> {
    fn prepare(
        cfg: &'a ExperimentConfig,
        model: &DistributionModel,
        warnings: &mut Vec<String>,
    ) -> Result<Self> {
        const TOL: f64 = 1e-10;
        match &cfg.functional {
            None => {
                match theorem1_integrability(model, &cfg.weight, cfg.r_exponent) {
                    Ok(rep) if !rep.holds => {
                        let msg = format!(
                            "integrability condition fails for weight {} at r = {}: {}",
                            cfg.weight.name(),
                            cfg.r_exponent,
                            rep.detail
                        );
                        log::warn!("{msg}");
                        warnings.push(msg);
                    }
                    Ok(_) => {}
                    Err(e) => warnings.push(format!("integrability check unavailable: {e}")),
                }
                Ok(DeviationKind::SupNorm {
                    weight: &cfg.weight,
                    resolution: cfg.sup_resolution,
                })
            }
            Some(FunctionalSpec::LStatistic { kernel }) => Ok(DeviationKind::LStat {
                kernel,
                exact: l_functional_exact(model, kernel, TOL)?,
            }),
            Some(FunctionalSpec::VStatistic { kernel }) => Ok(DeviationKind::VStat {
                kernel,
                exact: v_functional_exact(model, kernel, TOL)?,
            }),
            Some(FunctionalSpec::Risk { params }) => Ok(DeviationKind::Risk {
                params,
                exact: risk_exact(model, params, TOL)?,
            }),
            Some(FunctionalSpec::Quantile { y }) => {
                if !(*y > 0.0 && *y < 1.0) {
                    return Err(Error::InvalidParameter("quantile level must lie in (0,1)".into()));
                }
                Ok(DeviationKind::Quantile { y: *y, exact: model.quantile_left(*y) })
            }
        }
    }

    fn eval(&self, prefix: &[f64], model: &DistributionModel) -> Result<f64> {
        let edf = build_edf(prefix)?;
        Ok(match self {
            DeviationKind::SupNorm { weight, resolution } => {
                weighted_sup_norm(&edf, model, weight, *resolution)
            }
            DeviationKind::LStat { kernel, exact } => (l_statistic(&edf, kernel) - exact).abs(),
            DeviationKind::VStat { kernel, exact } => (v_plugin(&edf, kernel) - exact).abs(),
            DeviationKind::Risk { params, exact } => {
                (risk_one_sided(edf.sorted_values(), params)? - exact).abs()
            }
            DeviationKind::Quantile { y, exact } => (edf.quantile_left(*y) - exact).abs(),
        })
    }
}

/// OLS slope (with standard error) of ln(median) against ln(n).
pub fn estimate_rate(ns: &[usize], medians: &[f64]) -> Result<(f64, f64)> {
    if ns.len() < 3 || medians.len() != ns.len() {
        return Err(Error::InvalidParameter(
            "rate estimation needs at least 3 grid points".into(),
        ));
    }
    if medians.iter().any(|&m| !(m > 0.0) || !m.is_finite()) {
        return Err(Error::Numerical("medians must be positive and finite for log-log fit".into()));
    }
    let x: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let y: Vec<f64> = medians.iter().map(|&m| m.ln()).collect();
    let m = x.len() as f64;
    let xbar = x.iter().sum::<f64>() / m;
    let ybar = y.iter().sum::<f64>() / m;
    let sxx: f64 = x.iter().map(|&v| (v - xbar) * (v - xbar)).sum();
    let sxy: f64 = x.iter().zip(&y).map(|(&a, &b)| (a - xbar) * (b - ybar)).sum();
    let slope = sxy / sxx;
    let intercept = ybar - slope * xbar;
    let rss: f64 = x
        .iter()
        .zip(&y)
        .map(|(&a, &b)| {
            let e = b - (intercept + slope * a);
            e * e
        })
        .sum();
    let stderr = (rss / (m - 2.0) / sxx).sqrt();
    Ok((slope, stderr))
}

/// Configuration of the Hölder-bound experiment.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HolderConfig {
    pub model: DistributionModel,
    pub kernel: LKernel,
    pub gamma: f64,
    pub n_grid: Vec<usize>,
    pub replications: usize,
    pub master_seed: u64,
    #[serde(default = "default_resolution")]
    pub sup_resolution: usize,
}

/// Outcome of the per-replication bound check
/// |L(F_n) - L(F)| <= C ||F_n - F||_{phi_{gamma,F}}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HolderReport {
    pub constant: f64,
    pub exact_value: f64,
    /// Fraction of (replication, n) checks where the bound held.
    pub fraction_held: f64,
    pub checks: usize,
    /// Smallest observed value of rhs - lhs.
    pub min_margin: f64,
    pub per_n_fraction: Vec<(usize, f64)>,
}

/// Runs the bound check over i.i.d. replications from the model law.
pub fn holder_bound_experiment(cfg: &HolderConfig) -> Result<HolderReport> {
    const TOL: f64 = 1e-10;
    if cfg.n_grid.is_empty() || cfg.replications == 0 {
        return Err(Error::InvalidParameter("need a nonempty n_grid and replications >= 1".into()));
    }
    let constant = holder_constant(&cfg.model, &cfg.kernel, cfg.gamma, TOL)?;
    let exact = l_functional_exact(&cfg.model, &cfg.kernel, TOL)?;
    let weight = make_adaptive_weight(&cfg.model, cfg.gamma)?;
    let n_max = *cfg.n_grid.iter().max().unwrap();

    let rows: Result<Vec<Vec<(bool, f64)>>> = (0..cfg.replications)
        .into_par_iter()
        .map(|k| {
            let seed = derive_seed(cfg.master_seed, k as u64);
            let path = cfg.model.sample_iid(n_max, seed)?;
            cfg.n_grid
                .iter()
                .map(|&n| {
                    let edf = build_edf(&path[..n])?;
                    let lhs = (l_statistic(&edf, &cfg.kernel) - exact).abs();
                    let rhs = constant
                        * weighted_sup_norm(&edf, &cfg.model, &weight, cfg.sup_resolution);
                    let held = lhs <= rhs * (1.0 + 1e-9) + 1e-12;
                    Ok((held, rhs - lhs))
                })
                .collect()
        })
        .collect();
    let rows = rows?;

    let mut held_total = 0usize;
    let mut min_margin = f64::INFINITY;
    let mut per_n_fraction = Vec::with_capacity(cfg.n_grid.len());
    for (gi, &n) in cfg.n_grid.iter().enumerate() {
        let held_n = rows.iter().filter(|row| row[gi].0).count();
        held_total += held_n;
        per_n_fraction.push((n, held_n as f64 / cfg.replications as f64));
        for row in &rows {
            min_margin = min_margin.min(row[gi].1);
        }
    }
    let checks = cfg.replications * cfg.n_grid.len();
    Ok(HolderReport {
        constant,
        exact_value: exact,
        fraction_held: held_total as f64 / checks as f64,
        checks,
        min_margin,
        per_n_fraction,
    })
}
