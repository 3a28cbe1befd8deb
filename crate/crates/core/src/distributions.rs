//! Target distribution models and one-sided inverse operators.
//!
//! Three model laws are supported: the uniform law on (0,1), the standard
//! normal law, and a two-sided Pareto law with power tails
//! F(x) = c1·|x|^(-alpha) on (-inf, -x0] and 1 - F(x) = c2·x^(-alpha) on
//! [x0, inf), joined by a linear bridge on [-x0, x0]. All evaluations are
//! closed-form; sampling is inverse-transform from a seeded SplitMix64
//! stream.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use crate::special;

/// A model law with exact CDF, survival function, and quantiles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistributionModel {
    Uniform01,
    StdNormal,
    ParetoTwoSided { alpha: f64, x0: f64, c1: f64, c2: f64 },
}

impl DistributionModel {
    /// Two-sided Pareto with validated parameters.
    pub fn pareto(alpha: f64, x0: f64, c1: f64, c2: f64) -> Result<Self> {
        let m = DistributionModel::ParetoTwoSided { alpha, x0, c1, c2 };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if let DistributionModel::ParetoTwoSided { alpha, x0, c1, c2 } = *self {
            if !(alpha > 0.0 && x0 > 0.0 && c1 > 0.0 && c2 > 0.0) {
                return Err(Error::InvalidParameter(
                    "pareto_two_sided requires alpha, x0, c1, c2 > 0".into(),
                ));
            }
            let mass = (c1 + c2) * x0.powf(-alpha);
            if !(mass < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "pareto_two_sided tails overlap: (c1+c2)*x0^-alpha = {mass} >= 1"
                )));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> String {
        match self {
            DistributionModel::Uniform01 => "uniform01".into(),
            DistributionModel::StdNormal => "std_normal".into(),
            DistributionModel::ParetoTwoSided { alpha, x0, c1, c2 } => {
                format!("pareto_two_sided(alpha={alpha},x0={x0},c1={c1},c2={c2})")
            }
        }
    }

    /// F(-x0) and F(x0) for the Pareto bridge.
    fn pareto_bridge(alpha: f64, x0: f64, c1: f64, c2: f64) -> (f64, f64) {
        (c1 * x0.powf(-alpha), 1.0 - c2 * x0.powf(-alpha))
    }

    /// Distribution function F(x). Total on the reals.
    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            DistributionModel::Uniform01 => x.clamp(0.0, 1.0),
            DistributionModel::StdNormal => special::normal_cdf(x),
            DistributionModel::ParetoTwoSided { alpha, x0, c1, c2 } => {
                if x <= -x0 {
                    c1 * (-x).powf(-alpha)
                } else if x >= x0 {
                    1.0 - c2 * x.powf(-alpha)
                } else {
                    let (flo, fhi) = Self::pareto_bridge(alpha, x0, c1, c2);
                    flo + (x + x0) * (fhi - flo) / (2.0 * x0)
                }
            }
        }
    }

    /// Survival function 1 - F(x), without cancellation in the upper tail.
    pub fn sf(&self, x: f64) -> f64 {
        match *self {
            DistributionModel::Uniform01 => (1.0 - x).clamp(0.0, 1.0),
            DistributionModel::StdNormal => special::normal_sf(x),
            DistributionModel::ParetoTwoSided { alpha, x0, c1, c2 } => {
                if x >= x0 {
                    c2 * x.powf(-alpha)
                } else if x <= -x0 {
                    1.0 - c1 * (-x).powf(-alpha)
                } else {
                    let (flo, fhi) = Self::pareto_bridge(alpha, x0, c1, c2);
                    (1.0 - fhi) + (x0 - x) * (fhi - flo) / (2.0 * x0)
                }
            }
        }
    }

    /// Left-continuous quantile F^{<-}(y) = inf{x : F(x) >= y}, with the
    /// conventions inf(empty) = +inf (y > sup F) and -inf for y <= 0.
    pub fn quantile_left(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return f64::NEG_INFINITY;
        }
        if y > 1.0 {
            return f64::INFINITY;
        }
        match *self {
            DistributionModel::Uniform01 => y,
            DistributionModel::StdNormal => {
                if y == 1.0 {
                    f64::INFINITY
                } else {
                    special::normal_quantile(y)
                }
            }
            DistributionModel::ParetoTwoSided { .. } => {
                if y == 1.0 {
                    f64::INFINITY
                } else {
                    self.pareto_quantile_parts(y, 1.0 - y)
                }
            }
        }
    }

    /// Right-continuous inverse F^{->}(y) = sup{x : F(x) <= y} on (0,1).
    ///
    /// All three model CDFs are continuous and strictly increasing on the
    /// open support, so the two inverses coincide there.
    pub fn quantile_right(&self, y: f64) -> f64 {
        self.quantile_left(y)
    }

    /// Quantile with the upper-tail probability supplied separately, so
    /// quadratures near y = 1 keep full precision.
    pub fn quantile_parts(&self, y: f64, one_minus_y: f64) -> f64 {
        match *self {
            DistributionModel::Uniform01 => y,
            DistributionModel::StdNormal => {
                if one_minus_y < 1e-15 {
                    // invert the tail instead of the CDF
                    -special::normal_quantile(one_minus_y)
                } else {
                    special::normal_quantile(y)
                }
            }
            DistributionModel::ParetoTwoSided { .. } => self.pareto_quantile_parts(y, one_minus_y),
        }
    }

    fn pareto_quantile_parts(&self, y: f64, one_minus_y: f64) -> f64 {
        let DistributionModel::ParetoTwoSided { alpha, x0, c1, c2 } = *self else {
            unreachable!()
        };
        let (flo, fhi) = Self::pareto_bridge(alpha, x0, c1, c2);
        if y <= flo {
            -((c1 / y).powf(1.0 / alpha))
        } else if y >= fhi {
            (c2 / one_minus_y).powf(1.0 / alpha)
        } else {
            -x0 + (y - flo) * (2.0 * x0) / (fhi - flo)
        }
    }

    /// Probability levels at which the quantile function has kinks (the
    /// Pareto bridge seams); empty when the quantile is smooth on (0,1).
    pub fn quantile_kinks(&self) -> Vec<f64> {
        match *self {
            DistributionModel::ParetoTwoSided { alpha, x0, c1, c2 } => {
                let (flo, fhi) = Self::pareto_bridge(alpha, x0, c1, c2);
                vec![flo, fhi]
            }
            _ => Vec::new(),
        }
    }

    /// Open interval on which F takes values in (0,1).
    pub fn support(&self) -> (f64, f64) {
        match self {
            DistributionModel::Uniform01 => (0.0, 1.0),
            _ => (f64::NEG_INFINITY, f64::INFINITY),
        }
    }

    /// n i.i.d. draws by inverse transform from a SplitMix64 stream.
    ///
    /// The draws are sequential in the stream, so a longer run with the same
    /// seed extends a shorter one (prefix property).
    pub fn sample_iid(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        if n == 0 {
            return Err(Error::InvalidSample("sample_iid requires n >= 1".into()));
        }
        let mut rng = SplitMix64::new(seed);
        Ok((0..n).map(|_| self.quantile_left(rng.next_uniform())).collect())
    }
}

/// Direction of a sampled monotone function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Nonincreasing,
    Nondecreasing,
}

/// A monotone function represented by samples on a finite grid.
///
/// Evaluation is right-continuous piecewise-constant: h(x) = values[i] for
/// x in [grid[i], grid[i+1]), extended constantly outside the grid span.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MonotoneFunctionSamples {
    grid: Vec<f64>,
    values: Vec<f64>,
    direction: Direction,
}

impl MonotoneFunctionSamples {
    pub fn new(grid: Vec<f64>, values: Vec<f64>, direction: Direction) -> Result<Self> {
        if grid.is_empty() || grid.len() != values.len() {
            return Err(Error::InvalidParameter(
                "grid and values must be nonempty and of equal length".into(),
            ));
        }
        if grid.iter().any(|v| !v.is_finite()) || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("grid/values must be finite".into()));
        }
        if grid.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidParameter("grid must be nondecreasing".into()));
        }
        let ordered = match direction {
            Direction::Nonincreasing => values.windows(2).all(|w| w[0] >= w[1]),
            Direction::Nondecreasing => values.windows(2).all(|w| w[0] <= w[1]),
        };
        if !ordered {
            return Err(Error::InvalidParameter(
                "values are not ordered consistently with direction".into(),
            ));
        }
        Ok(MonotoneFunctionSamples { grid, values, direction })
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Right-continuous step evaluation.
    pub fn eval(&self, x: f64) -> f64 {
        let idx = self.grid.partition_point(|&g| g <= x);
        if idx == 0 {
            self.values[0]
        } else {
            self.values[idx - 1]
        }
    }

    /// Right-continuous inverse h^{->}(y) = sup{x in R+ : h(x) > y} of a
    /// nonincreasing h, with the convention sup(empty) = 0.
    ///
    /// Under the step interpretation the piece [grid[i], grid[i+1]) carries
    /// values[i], so the sup is the right endpoint of the last piece
    /// exceeding y. If even the final sampled value exceeds y the sup is
    /// unbounded under constant extension and +inf is returned.
    pub fn inverse_right(&self, y: f64) -> f64 {
        debug_assert_eq!(self.direction, Direction::Nonincreasing);
        // last index with values[i] > y; values nonincreasing
        let idx = self.values.partition_point(|&v| v > y);
        if idx == 0 {
            0.0
        } else if idx == self.values.len() {
            f64::INFINITY
        } else {
            self.grid[idx]
        }
    }

    /// Left-continuous inverse inf{x : h(x) >= y} of a nondecreasing h
    /// restricted to the grid span; +inf when no sampled value reaches y.
    pub fn quantile_left(&self, y: f64) -> f64 {
        debug_assert_eq!(self.direction, Direction::Nondecreasing);
        let idx = self.values.partition_point(|&v| v < y);
        if idx == self.values.len() {
            f64::INFINITY
        } else {
            self.grid[idx]
        }
    }
}
