//! Empirical distribution functions and the weighted sup-norm deviation
//! sup_x |F_n(x) - F(x)| phi(x).
//!
//! The sup is computed from a candidate set: left limits and values at every
//! distinct sample point, the weight trough, a fixed refinement grid inside
//! each inter-jump interval, plus closed-form or scanned bounds for the two
//! tails where the deviation reduces to F*phi (left of the sample) and
//! (1-F)*phi (right of it). For the constant weight the jump candidates are
//! exact and the refinement grid is skipped.

use crate::distributions::DistributionModel;
use crate::error::{Error, Result};
use crate::weights::WeightFunction;

/// Sorted sample with step-function evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    sorted: Vec<f64>,
}

/// Sorts a sample into an empirical distribution function.
pub fn build_edf(sample: &[f64]) -> Result<EmpiricalDistribution> {
    EmpiricalDistribution::from_sample(sample)
}

impl EmpiricalDistribution {
    pub fn from_sample(sample: &[f64]) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::InvalidSample("empty sample".into()));
        }
        if sample.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSample("sample contains non-finite values".into()));
        }
        let mut sorted = sample.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(EmpiricalDistribution { sorted })
    }

    pub fn n(&self) -> usize {
        self.sorted.len()
    }

    pub fn sorted_values(&self) -> &[f64] {
        &self.sorted
    }

    /// F_n(x) = #{i : x_i <= x} / n.
    pub fn eval(&self, x: f64) -> f64 {
        let count = self.sorted.partition_point(|&v| v <= x);
        count as f64 / self.sorted.len() as f64
    }

    /// Left-continuous quantile with the extended-real conventions:
    /// -inf for y <= 0, +inf for y > 1, and x_(ceil(n y)) on (0, 1].
    pub fn quantile_left(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return f64::NEG_INFINITY;
        }
        if y > 1.0 {
            return f64::INFINITY;
        }
        let n = self.sorted.len();
        let idx = (n as f64 * y).ceil() as usize;
        self.sorted[idx.clamp(1, n) - 1]
    }

    /// Checked sample quantile; y must lie in (0, 1].
    pub fn quantile(&self, y: f64) -> Result<f64> {
        if !(y > 0.0 && y <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "edf quantile requires y in (0, 1], got {y}"
            )));
        }
        Ok(self.quantile_left(y))
    }
}

/// Checked sample quantile x_(ceil(n y)).
pub fn edf_quantile(edf: &EmpiricalDistribution, y: f64) -> Result<f64> {
    edf.quantile(y)
}

/// sup over the real line of |F_n(x) - F(x)| * phi(x).
pub fn weighted_sup_norm(
    edf: &EmpiricalDistribution,
    model: &DistributionModel,
    weight: &WeightFunction,
    resolution: usize,
) -> f64 {
    weighted_sup_impl(edf, model, weight, resolution, None)
}

/// Same sup restricted to x <= x_cap.
pub fn weighted_sup_norm_upto(
    edf: &EmpiricalDistribution,
    model: &DistributionModel,
    weight: &WeightFunction,
    resolution: usize,
    x_cap: f64,
) -> f64 {
    weighted_sup_impl(edf, model, weight, resolution, Some(x_cap))
}

fn weighted_sup_impl(
    edf: &EmpiricalDistribution,
    model: &DistributionModel,
    weight: &WeightFunction,
    resolution: usize,
    x_cap: Option<f64>,
) -> f64 {
    let xs = edf.sorted_values();
    let n = xs.len() as f64;
    let uniform_weight = matches!(weight, WeightFunction::Uniform);

    // |c - F(x)| * phi(x), with 0 * inf treated as 0
    let dev = |c: f64, x: f64| {
        let d = (c - model.cdf(x)).abs();
        if d == 0.0 {
            0.0
        } else {
            d * weight.eval(x)
        }
    };

    let mut best = 0.0f64;
    let mut prev: Option<f64> = None; // previous distinct value within the cap
    let mut below = 0usize; // count strictly below the current distinct value
    let mut i = 0usize;
    while i < xs.len() {
        let x = xs[i];
        let mut j = i;
        while j < xs.len() && xs[j] == x {
            j += 1;
        }
        if let Some(cap) = x_cap {
            if x > cap {
                break;
            }
        }
        best = best.max(dev(below as f64 / n, x)); // left limit
        best = best.max(dev(j as f64 / n, x)); // value
        if !uniform_weight {
            if let Some(px) = prev {
                best = best.max(grid_max(&dev, px, x, below as f64 / n, resolution));
            }
        }
        prev = Some(x);
        below = j;
        i = j;
    }

    // weight trough
    let trough = weight.x_phi();
    if x_cap.map_or(true, |cap| trough <= cap) {
        best = best.max(dev(edf.eval(trough), trough));
    }

    // left tail: F_n = 0 below the first retained point (or below the cap)
    let left_edge = match (prev, x_cap) {
        (Some(_), _) => xs[0].min(x_cap.unwrap_or(xs[0])),
        (None, Some(cap)) => cap,
        (None, None) => unreachable!("sample is nonempty"),
    };
    best = best.max(tail_sup_left(model, weight, left_edge));

    match x_cap {
        None => {
            // right tail: F_n = 1 beyond the last point
            best = best.max(tail_sup_right(model, weight, xs[xs.len() - 1]));
        }
        Some(cap) => {
            if let Some(px) = prev {
                if px < cap {
                    let c = below as f64 / n;
                    best = best.max(dev(c, cap));
                    if !uniform_weight {
                        best = best.max(grid_max(&dev, px, cap, c, resolution));
                    }
                }
            }
        }
    }
    best
}

fn grid_max<F: Fn(f64, f64) -> f64>(dev: &F, a: f64, b: f64, c: f64, resolution: usize) -> f64 {
    let mut best = 0.0f64;
    let steps = resolution + 1;
    for t in 1..steps {
        let x = a + (b - a) * t as f64 / steps as f64;
        best = best.max(dev(c, x));
    }
    best
}

/// sup_{x <= a} F(x) * phi(x), the exact left-tail deviation below the
/// smallest observation.
pub fn tail_sup_left(model: &DistributionModel, weight: &WeightFunction, a: f64) -> f64 {
    let g = |x: f64| {
        let f = model.cdf(x);
        if f == 0.0 {
            0.0
        } else {
            f * weight.eval(x)
        }
    };
    match weight {
        WeightFunction::Uniform => model.cdf(a),
        WeightFunction::AdaptiveGammaF { base, .. } if base == model => g(a),
        WeightFunction::Poly { lambda } => match *model {
            DistributionModel::Uniform01 => g(a),
            DistributionModel::StdNormal => {
                // Mills' ratio: Phi(x) < pdf(x)/|x| makes Phi(x)(1-x)^lambda
                // increasing below -sqrt(lambda)
                let thr = -lambda.sqrt();
                if a <= thr {
                    g(a)
                } else {
                    scan_max(&g, thr, a)
                }
            }
            DistributionModel::ParetoTwoSided { alpha, x0, .. } => {
                if *lambda > alpha {
                    return f64::INFINITY;
                }
                if a <= -x0 {
                    g(a)
                } else {
                    scan_max(&g, -x0, a)
                }
            }
        },
        WeightFunction::AdaptiveGammaF { .. } => {
            log::warn!(
                "no analytic tail bound for weight {} over model {}; truncating the scan at quantile 1e-6",
                weight.name(),
                model.name()
            );
            let lo = model.quantile_left(1e-6).min(a);
            scan_max(&g, lo, a)
        }
    }
}

/// sup_{x >= b} (1 - F(x)) * phi(x), the exact right-tail deviation above
/// the largest observation.
pub fn tail_sup_right(model: &DistributionModel, weight: &WeightFunction, b: f64) -> f64 {
    let g = |x: f64| {
        let s = model.sf(x);
        if s == 0.0 {
            0.0
        } else {
            s * weight.eval(x)
        }
    };
    match weight {
        WeightFunction::Uniform => model.sf(b),
        WeightFunction::AdaptiveGammaF { base, .. } if base == model => g(b),
        WeightFunction::Poly { lambda } => match *model {
            DistributionModel::Uniform01 => {
                if b >= 1.0 {
                    0.0
                } else {
                    scan_max(&g, b, 1.0)
                }
            }
            DistributionModel::StdNormal => {
                let thr = lambda.sqrt();
                if b >= thr {
                    g(b)
                } else {
                    scan_max(&g, b, thr)
                }
            }
            DistributionModel::ParetoTwoSided { alpha, x0, .. } => {
                if *lambda > alpha {
                    return f64::INFINITY;
                }
                if b >= x0 {
                    g(b)
                } else {
                    scan_max(&g, b, x0)
                }
            }
        },
        WeightFunction::AdaptiveGammaF { .. } => {
            log::warn!(
                "no analytic tail bound for weight {} over model {}; truncating the scan at quantile 1e-6",
                weight.name(),
                model.name()
            );
            let hi = model.quantile_left(1.0 - 1e-6).max(b);
            scan_max(&g, b, hi)
        }
    }
}

// Dense grid over [lo, hi] plus a golden-section polish around the best
// point. The tail products this is applied to are smooth with at most one
// interior maximum on the scan region.
fn scan_max<F: Fn(f64) -> f64>(g: &F, lo: f64, hi: f64) -> f64 {
    if !(hi > lo) {
        return g(hi.min(lo));
    }
    const POINTS: usize = 257;
    let mut best = f64::NEG_INFINITY;
    let mut best_idx = 0usize;
    for k in 0..POINTS {
        let x = lo + (hi - lo) * k as f64 / (POINTS - 1) as f64;
        let v = g(x);
        if v > best {
            best = v;
            best_idx = k;
        }
    }
    let step = (hi - lo) / (POINTS - 1) as f64;
    let mut a = lo + step * best_idx.saturating_sub(1) as f64;
    let mut b = (lo + step * (best_idx + 1) as f64).min(hi);
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = g(x1);
    let mut f2 = g(x2);
    for _ in 0..60 {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = g(x1);
        }
    }
    best.max(f1).max(f2)
}
