//! epsilon-bracket machinery for the weighted indicator class on the unit
//! interval.
//!
//! For a model law F and weight phi (nonincreasing on the negative axis),
//! the negative-axis deviation is controlled through the class
//! {w_s = w(s) 1_{[0,s]} : s in [0,1]} with w(t) = phi(F^{<-}(t))
//! 1_{[0, F(0)]}(t). Brackets follow the partition construction
//!
//!   l_i = w(t_i) 1_{[0, t_{i-1}]},
//!   u_i = w(t_{i-1}+) 1_{[0, t_{i-1}]} + w 1_{(t_{i-1}, t_i]},
//!
//! where w(t+) is the right limit: w is continuous on (0, F(0)] for the
//! shipped models but drops to zero past F(0), and the plateau of u_i must
//! majorize w(s) for s beyond t_{i-1}, which the right limit does at no cost
//! elsewhere. F(0) is always made a partition point. The positive axis is
//! handled by reflecting data and model rather than duplicating the
//! construction.

use serde::Serialize;

use crate::distributions::DistributionModel;
use crate::edf::{build_edf, weighted_sup_norm_upto};
use crate::error::{Error, Result};
use crate::quad;
use crate::weights::{theorem1_integrability, WeightFunction};

/// Greedy safety margin: brackets are grown to (1 - delta) * epsilon so the
/// quadrature recheck cannot push them over epsilon.
const GREEDY_MARGIN: f64 = 0.1;

const QUAD_TOL: f64 = 1e-10;

/// The bracket weight w(t) = phi(F^{<-}(t)) 1_{[0, F(0)]}(t).
#[derive(Debug, Clone)]
pub struct BracketWeight {
    model: DistributionModel,
    weight: WeightFunction,
    tau: f64,
}

/// Builds the bracket weight after checking int phi dF < inf.
pub fn bracket_weight(model: &DistributionModel, weight: &WeightFunction) -> Result<BracketWeight> {
    weight.validate()?;
    let report = theorem1_integrability(model, weight, 0.0)?;
    if !report.holds {
        return Err(Error::Integrability(format!(
            "int phi dF diverges for weight {} over {}: {}",
            weight.name(),
            model.name(),
            report.detail
        )));
    }
    if weight.x_phi() < 0.0 {
        return Err(Error::ConditionViolated(
            "bracket construction needs phi nonincreasing on the negative axis (x_phi >= 0)".into(),
        ));
    }
    let tau = model.cdf(0.0);
    if tau >= 1.0 {
        return Err(Error::ConditionViolated("F(0) must be < 1".into()));
    }
    Ok(BracketWeight { model: model.clone(), weight: weight.clone(), tau })
}

impl BracketWeight {
    /// F(0), the point past which w vanishes.
    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn model(&self) -> &DistributionModel {
        &self.model
    }

    pub fn weight(&self) -> &WeightFunction {
        &self.weight
    }

    /// w(t); may be +inf at t = 0 for unbounded weights.
    pub fn eval(&self, t: f64) -> f64 {
        if self.tau <= 0.0 || t < 0.0 || t > self.tau {
            return 0.0;
        }
        self.weight.eval(self.model.quantile_left(t))
    }

    /// Right limit w(t+); differs from the value only at the drop t = tau.
    pub fn eval_right(&self, t: f64) -> f64 {
        if t >= self.tau {
            0.0
        } else {
            self.eval(t)
        }
    }

    /// int_{(a,b]} w dI by quadrature, split at the quantile's bridge seams.
    fn integral(&self, a: f64, b: f64) -> f64 {
        let hi = b.min(self.tau);
        if self.tau <= 0.0 || hi <= a {
            return 0.0;
        }
        let mut bounds = vec![a];
        for k in self.model.quantile_kinks() {
            if k > a && k < hi {
                bounds.push(k);
            }
        }
        bounds.push(hi);
        bounds.sort_by(f64::total_cmp);
        bounds
            .windows(2)
            .map(|w| quad::integrate_interval(|t| self.eval(t), w[0], w[1], QUAD_TOL).value)
            .sum()
    }
}

/// A partition 0 = t_0 < ... < t_m = 1 whose induced brackets are all
/// epsilon-brackets.
#[derive(Debug, Clone, Serialize)]
pub struct BracketPartition {
    pub epsilon: f64,
    pub t_points: Vec<f64>,
    /// w evaluated at the partition points.
    pub w_values: Vec<f64>,
}

impl BracketPartition {
    pub fn m(&self) -> usize {
        self.t_points.len() - 1
    }

    /// Index i (1-based) of the bracket with t_{i-1} < s <= t_i.
    pub fn locate(&self, s: f64) -> usize {
        let idx = self.t_points.partition_point(|&t| t < s);
        idx.clamp(1, self.m())
    }
}

/// int (u_i - l_i) dI = (w(t_{i-1}+) - w(t_i)) t_{i-1} + int_{(t_{i-1},t_i]} w.
fn bracket_integral(w: &BracketWeight, lo: f64, hi: f64) -> f64 {
    let plateau = if lo == 0.0 { 0.0 } else { (w.eval_right(lo) - w.eval(hi)) * lo };
    plateau + w.integral(lo, hi)
}

/// Greedy partition: each t_i is pushed as far as the bracket-integral
/// budget (1 - delta) epsilon allows, F(0) is forced into the partition,
/// and everything past F(0) costs nothing.
pub fn build_partition(w: &BracketWeight, epsilon: f64) -> Result<BracketPartition> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidParameter("epsilon must be positive".into()));
    }
    let target = epsilon * (1.0 - GREEDY_MARGIN);
    let tau = w.tau();
    let mut points = vec![0.0f64];
    if tau > 0.0 {
        let mut lo = 0.0f64;
        while lo < tau {
            let full = bracket_integral(w, lo, tau);
            let next = if full <= target {
                tau
            } else {
                // g(t) = bracket_integral(lo, t) is continuous and
                // nondecreasing on (lo, tau]; find the largest admissible t
                let mut a = lo;
                let mut b = tau;
                for _ in 0..60 {
                    let mid = 0.5 * (a + b);
                    if bracket_integral(w, lo, mid) <= target {
                        a = mid;
                    } else {
                        b = mid;
                    }
                }
                a
            };
            if !(next > lo) || next - lo < 1e-13 {
                return Err(Error::Numerical(format!(
                    "bracket partition stalled at t = {lo}; epsilon = {epsilon} may be too small"
                )));
            }
            points.push(next);
            lo = next;
            if points.len() > 1_000_000 {
                return Err(Error::Numerical("bracket partition exceeded 1e6 pieces".into()));
            }
        }
    }
    if *points.last().unwrap() < 1.0 {
        points.push(1.0);
    }
    let w_values = points.iter().map(|&t| w.eval(t)).collect();
    Ok(BracketPartition { epsilon, t_points: points, w_values })
}

/// Outcome of the bracket verification pass.
#[derive(Debug, Clone, Serialize)]
pub struct BracketVerification {
    pub holds: bool,
    /// Index (1-based) and description of the first offending bracket.
    pub violation: Option<(usize, String)>,
    /// Largest bracket integral seen in the recheck.
    pub max_bracket_integral: f64,
}

/// Rechecks every bracket integral by quadrature and the covering property
/// l_{i_s} <= w_s <= u_{i_s} pointwise over an s-grid and argument grid.
pub fn verify_brackets(
    partition: &BracketPartition,
    w: &BracketWeight,
    s_grid: usize,
    arg_grid: usize,
) -> BracketVerification {
    let eps = partition.epsilon;
    let m = partition.m();
    let mut max_integral = 0.0f64;
    for i in 1..=m {
        let (lo, hi) = (partition.t_points[i - 1], partition.t_points[i]);
        let integral = bracket_integral(w, lo, hi);
        max_integral = max_integral.max(integral);
        if !(integral < eps) {
            return BracketVerification {
                holds: false,
                violation: Some((i, format!("bracket integral {integral} >= epsilon {eps}"))),
                max_bracket_integral: max_integral,
            };
        }
    }
    let tol = 1e-10;
    for k in 0..s_grid {
        let s = (k as f64 + 0.5) / s_grid as f64;
        let i = partition.locate(s);
        let (lo, hi) = (partition.t_points[i - 1], partition.t_points[i]);
        let ws = w.eval(s);
        let plateau = if lo == 0.0 { f64::INFINITY } else { w.eval_right(lo) };
        let l_val = w.eval(hi);
        for a in 0..arg_grid {
            let x = (a as f64 + 0.5) / arg_grid as f64;
            // w_s(x) = w(s) 1[x <= s]
            let target = if x <= s { ws } else { 0.0 };
            let l = if x <= lo { l_val } else { 0.0 };
            let u = if x <= lo {
                plateau
            } else if x <= hi {
                w.eval(x)
            } else {
                0.0
            };
            if l > target + tol || target > u + tol {
                return BracketVerification {
                    holds: false,
                    violation: Some((
                        i,
                        format!("covering fails at s = {s}, x = {x}: l = {l}, w_s = {target}, u = {u}"),
                    )),
                    max_bracket_integral: max_integral,
                };
            }
        }
    }
    BracketVerification { holds: true, violation: None, max_bracket_integral: max_integral }
}

/// Both sides of the bracketing bound for one uniform sample.
#[derive(Debug, Clone, Serialize)]
pub struct BracketInequality {
    /// sup_{x <= 0} |F_n(x) - F(x)| phi(x) under the quantile coupling
    /// X_j = F^{<-}(U_j).
    pub lhs: f64,
    /// max_i max{ int u_i d(G_n - I), int l_i d(I - G_n) } + epsilon.
    pub rhs: f64,
    pub holds: bool,
}

/// Evaluates the deterministic bracketing inequality on one sample of
/// uniforms. Empirical integrals are exact sums; dI-integrals of the upper
/// brackets are quadratures with the partition's tolerance.
pub fn bracket_inequality_check(
    uniforms: &[f64],
    w: &BracketWeight,
    partition: &BracketPartition,
    resolution: usize,
) -> Result<BracketInequality> {
    if uniforms.is_empty() {
        return Err(Error::InvalidSample("bracket_inequality_check needs uniforms".into()));
    }
    if uniforms.iter().any(|&u| !(0.0 < u && u < 1.0)) {
        return Err(Error::InvalidSample("uniforms must lie in (0,1)".into()));
    }
    let n = uniforms.len() as f64;
    let xs: Vec<f64> = uniforms.iter().map(|&u| w.model().quantile_left(u)).collect();
    let edf = build_edf(&xs)?;
    let lhs = weighted_sup_norm_upto(&edf, w.model(), w.weight(), resolution, 0.0);

    let mut sorted_u = uniforms.to_vec();
    sorted_u.sort_by(f64::total_cmp);
    let count_le = |t: f64| sorted_u.partition_point(|&u| u <= t);

    let mut max_term = f64::NEG_INFINITY;
    for i in 1..=partition.m() {
        let (lo, hi) = (partition.t_points[i - 1], partition.t_points[i]);
        let plateau = w.eval_right(lo);
        let n_lo = count_le(lo);
        let n_hi = count_le(hi);
        // int u_i dG_n: plateau mass below t_{i-1} plus w at the points inside
        let inside: f64 = sorted_u[n_lo..n_hi].iter().map(|&u| w.eval(u)).sum();
        let u_emp = if n_lo == 0 { 0.0 } else { plateau * n_lo as f64 / n } + inside / n;
        let u_exact = if lo == 0.0 { 0.0 } else { plateau * lo } + w.integral(lo, hi);
        // int l_i d(I - G_n) with l_i = w(t_i) 1_{[0, t_{i-1}]}
        let l_val = w.eval(hi);
        let l_term = l_val * (lo - n_lo as f64 / n);
        max_term = max_term.max(u_emp - u_exact).max(l_term);
    }
    let rhs = max_term + partition.epsilon;
    Ok(BracketInequality { lhs, rhs, holds: lhs <= rhs + 1e-9 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use approx::assert_relative_eq;

    fn normal_poly() -> BracketWeight {
        bracket_weight(&DistributionModel::StdNormal, &WeightFunction::poly(1.0).unwrap()).unwrap()
    }

    #[test]
    fn weight_examples() {
        // F(0) = 0.5 with constant weight: indicator of [0, 1/2]
        let w =
            bracket_weight(&DistributionModel::StdNormal, &WeightFunction::Uniform).unwrap();
        assert_eq!(w.tau(), 0.5);
        assert_eq!(w.eval(0.3), 1.0);
        assert_eq!(w.eval(0.5), 1.0);
        assert_eq!(w.eval(0.6), 0.0);
        assert_eq!(w.eval_right(0.5), 0.0);

        // F(0) = 0: the zero function
        let z =
            bracket_weight(&DistributionModel::Uniform01, &WeightFunction::Uniform).unwrap();
        assert_eq!(z.tau(), 0.0);
        assert_eq!(z.eval(0.0), 0.0);
        assert_eq!(z.eval(0.25), 0.0);

        // poly weight over the normal at t = 0.25: 1 + |z_{0.25}|
        let p = normal_poly();
        assert_relative_eq!(p.eval(0.25), 1.6744897501960817, max_relative = 1e-12);
    }

    #[test]
    fn weight_rejects_nonintegrable() {
        // poly lambda = 2 over two-sided Pareto alpha = 2: int phi dF diverges
        let model = DistributionModel::pareto(2.0, 1.0, 0.25, 0.25).unwrap();
        assert!(bracket_weight(&model, &WeightFunction::poly(2.0).unwrap()).is_err());
    }

    #[test]
    fn constant_weight_partition_has_expected_pieces() {
        let w =
            bracket_weight(&DistributionModel::StdNormal, &WeightFunction::Uniform).unwrap();
        let p = build_partition(&w, 0.2).unwrap();
        // pieces of length 0.18 inside [0, 0.5], then a free piece to 1
        assert!(p.m() >= 4);
        let before: Vec<f64> =
            p.t_points.iter().copied().filter(|&t| t <= 0.5 + 1e-9).collect();
        assert!(before.len() - 1 >= 3, "pieces before 0.5: {:?}", p.t_points);
        assert_relative_eq!(*p.t_points.last().unwrap(), 1.0, max_relative = 1e-15);
        // tau is a partition point
        assert!(p.t_points.iter().any(|&t| (t - 0.5).abs() < 1e-9));
        let v = verify_brackets(&p, &w, 1000, 200);
        assert!(v.holds, "{:?}", v.violation);
    }

    #[test]
    fn zero_weight_partition_is_single_bracket() {
        let w =
            bracket_weight(&DistributionModel::Uniform01, &WeightFunction::Uniform).unwrap();
        let p = build_partition(&w, 0.1).unwrap();
        assert_eq!(p.m(), 1);
        assert_eq!(p.t_points, vec![0.0, 1.0]);
        let v = verify_brackets(&p, &w, 500, 100);
        assert!(v.holds);
        assert_eq!(v.max_bracket_integral, 0.0);
    }

    #[test]
    fn normal_poly_partition_verifies() {
        let w = normal_poly();
        let p = build_partition(&w, 0.05).unwrap();
        assert!(p.m() > 10);
        let v = verify_brackets(&p, &w, 2000, 300);
        assert!(v.holds, "{:?}", v.violation);
        assert!(v.max_bracket_integral < 0.05);
        // membership at partition points themselves
        for &s in &p.t_points[1..] {
            let i = p.locate(s);
            assert!(p.t_points[i - 1] < s && s <= p.t_points[i]);
        }
    }

    #[test]
    fn coarsened_partition_fails() {
        let w = normal_poly();
        let p = build_partition(&w, 0.05).unwrap();
        // drop every other interior point: some bracket must blow past eps
        let mut coarse_points = vec![0.0];
        for (idx, &t) in p.t_points.iter().enumerate().skip(1) {
            if idx % 2 == 0 || t == 1.0 || (t - w.tau()).abs() < 1e-12 {
                coarse_points.push(t);
            }
        }
        coarse_points.dedup();
        let coarse = BracketPartition {
            epsilon: p.epsilon,
            w_values: coarse_points.iter().map(|&t| w.eval(t)).collect(),
            t_points: coarse_points,
        };
        let v = verify_brackets(&coarse, &w, 200, 50);
        assert!(!v.holds);
        assert!(v.violation.is_some());
    }

    #[test]
    fn inequality_single_point_hand_case() {
        let w =
            bracket_weight(&DistributionModel::StdNormal, &WeightFunction::Uniform).unwrap();
        let p = build_partition(&w, 0.2).unwrap();
        let rep = bracket_inequality_check(&[0.3], &w, &p, 8).unwrap();
        assert!(rep.holds);
        // X = Phi^{-1}(0.3) < 0, so F_n = 1 from X on: the deviation peaks
        // at X itself, |1 - F(X)| = 0.7
        assert_relative_eq!(rep.lhs, 0.7, max_relative = 1e-9);
        assert!(rep.rhs >= 0.7);
    }

    #[test]
    fn inequality_zero_weight() {
        let w =
            bracket_weight(&DistributionModel::Uniform01, &WeightFunction::Uniform).unwrap();
        let p = build_partition(&w, 0.2).unwrap();
        let rep = bracket_inequality_check(&[0.4, 0.9, 0.1], &w, &p, 8).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.lhs, 0.0);
    }

    #[test]
    fn inequality_monte_carlo() {
        let w = normal_poly();
        let p = build_partition(&w, 0.05).unwrap();
        let mut rng = SplitMix64::new(77);
        for _ in 0..20 {
            let u: Vec<f64> = (0..500).map(|_| rng.next_uniform()).collect();
            let rep = bracket_inequality_check(&u, &w, &p, 8).unwrap();
            assert!(rep.holds, "lhs {} rhs {}", rep.lhs, rep.rhs);
        }
    }
}
