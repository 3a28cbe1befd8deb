//! L-, V-, and one-sided-moment risk functionals: plug-in values at
//! empirical laws, exact values at model laws, and the constant of the
//! Hölder-1 continuity bound
//!
//!   |L(F_n) - L(F)| <= C' * int F^{-b'} (1-F)^{-b'} phi_{gamma,F}^{-1} dx
//!                      * ||F_n - F||_{phi_{gamma,F}}.

use serde::{Deserialize, Serialize};

use crate::distributions::DistributionModel;
use crate::edf::EmpiricalDistribution;
use crate::error::{Error, Result};
use crate::quad;

/// Membership tests cap: absolute-moment quadratures above this value are
/// treated as divergent.
pub const MEMBERSHIP_CAP: f64 = 1e8;

/// Kernel of an L-functional: a distribution function on [0,1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LKernel {
    /// K(x) = x; the L-functional is the mean.
    Identity,
    /// K(x) = 1 - (1-x)^beta for beta in (0,1].
    Power { beta: f64 },
    /// K = 1_{[y,1]}; the L-functional is the y-quantile.
    Step { y: f64 },
}

impl LKernel {
    pub fn validate(&self) -> Result<()> {
        match self {
            LKernel::Identity => Ok(()),
            LKernel::Power { beta } => {
                if *beta > 0.0 && *beta <= 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter("power kernel requires beta in (0, 1]".into()))
                }
            }
            LKernel::Step { y } => {
                if *y > 0.0 && *y < 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter("step kernel requires y in (0, 1)".into()))
                }
            }
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            LKernel::Identity => x.clamp(0.0, 1.0),
            LKernel::Power { beta } => 1.0 - (1.0 - x.clamp(0.0, 1.0)).powf(*beta),
            LKernel::Step { y } => {
                if x >= *y {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Local Lipschitz envelope L(x) <= C' x^{-b'} (1-x)^{-b'}: returns
    /// (b', C'). The step kernel is not locally Lipschitz.
    pub fn lipschitz_data(&self) -> Option<(f64, f64)> {
        match self {
            LKernel::Identity => Some((0.0, 1.0)),
            LKernel::Power { beta } => Some((1.0 - beta, 1.0)),
            LKernel::Step { .. } => None,
        }
    }

    pub fn name(&self) -> String {
        match self {
            LKernel::Identity => "identity".into(),
            LKernel::Power { beta } => format!("power(beta={beta})"),
            LKernel::Step { y } => format!("step(y={y})"),
        }
    }
}

/// Exact weighted order-statistic sum sum_i x_(i) (K(i/n) - K((i-1)/n)).
pub fn l_statistic(edf: &EmpiricalDistribution, kernel: &LKernel) -> f64 {
    let xs = edf.sorted_values();
    let n = xs.len();
    match kernel {
        // K increments are exactly 1/n: the sample mean
        LKernel::Identity => compensated_sum(xs.iter().copied()) / n as f64,
        LKernel::Step { y } => edf.quantile_left(*y),
        LKernel::Power { beta } => {
            let nf = n as f64;
            compensated_sum(xs.iter().enumerate().map(|(idx, &x)| {
                let i = idx + 1;
                // 1 - (i-1)/n and 1 - i/n without cancellation
                let hi = ((n - i + 1) as f64 / nf).powf(*beta);
                let lo = ((n - i) as f64 / nf).powf(*beta);
                x * (hi - lo)
            }))
        }
    }
}

/// Exact L-functional value int_0^1 F^{<-}(u) dK(u) at a model law.
///
/// Membership in the kernel's domain class is gated by the quadrature of
/// int |F^{<-}| dK against [`MEMBERSHIP_CAP`].
pub fn l_functional_exact(model: &DistributionModel, kernel: &LKernel, tol: f64) -> Result<f64> {
    kernel.validate()?;
    match kernel {
        LKernel::Step { y } => Ok(model.quantile_left(*y)),
        LKernel::Identity => l_quadrature(model, |_, _| 1.0, tol),
        LKernel::Power { beta } => {
            let b = *beta;
            l_quadrature(model, move |_, omu| b * omu.powf(b - 1.0), tol)
        }
    }
}

fn l_quadrature<D>(model: &DistributionModel, dk: D, tol: f64) -> Result<f64>
where
    D: Fn(f64, f64) -> f64,
{
    let kinks = model.quantile_kinks();
    // |F^{<-}| adds a kink where the quantile crosses zero
    let mut gate_breaks = kinks.clone();
    gate_breaks.push(model.cdf(0.0));
    let gate = quad::integrate_unit_split(
        |u, omu| model.quantile_parts(u, omu).abs() * dk(u, omu),
        &gate_breaks,
        tol.max(1e-9),
    );
    if !gate.value.is_finite() || gate.value > MEMBERSHIP_CAP || !gate.converged {
        return Err(Error::Integrability(format!(
            "model {} is not in the domain class of the kernel: int |F^[-1]| dK ~ {}",
            model.name(),
            gate.value
        )));
    }
    let res =
        quad::integrate_unit_split(|u, omu| model.quantile_parts(u, omu) * dk(u, omu), &kinks, tol);
    if !res.converged {
        return Err(Error::Numerical(format!(
            "L-functional quadrature did not reach tol {tol} (error estimate {:.2e})",
            res.error_estimate
        )));
    }
    Ok(res.value)
}

/// The Hölder-1 constant C' int F^{-b'} (1-F)^{-b'} phi_{gamma,F}(x)^{-1} dx.
///
/// Requires b' < gamma <= 1 and the tail condition
/// int_{-inf}^0 F^{gamma-b'} dx + int_0^inf (1-F)^{gamma-b'} dx < inf,
/// decided analytically for Pareto tails (gamma - b' > 1/alpha) and by capped
/// quadrature otherwise.
pub fn holder_constant(
    model: &DistributionModel,
    kernel: &LKernel,
    gamma: f64,
    tol: f64,
) -> Result<f64> {
    kernel.validate()?;
    let (bp, cp) = kernel.lipschitz_data().ok_or_else(|| {
        Error::ConditionViolated(format!(
            "kernel {} has no locally Lipschitz envelope",
            kernel.name()
        ))
    })?;
    if !(bp < gamma && gamma <= 1.0) {
        return Err(Error::ConditionViolated(format!(
            "need beta' < gamma <= 1; got beta' = {bp}, gamma = {gamma}"
        )));
    }
    let d = gamma - bp;
    if let DistributionModel::ParetoTwoSided { alpha, .. } = model {
        // tail test of the power-tail example: finite iff gamma - b' > 1/alpha
        if d * alpha <= 1.0 {
            return Err(Error::ConditionViolated(format!(
                "tail condition fails: gamma - beta' = {d} <= 1/alpha = {}",
                1.0 / alpha
            )));
        }
    } else {
        // numeric check of the tail integrals, over the support only
        let t = tol.max(1e-9);
        let (b_left, b_right) = match model {
            DistributionModel::Uniform01 => (
                quad::QuadResult { value: 0.0, error_estimate: 0.0, evals: 0, converged: true },
                quad::integrate_interval(|x| model.sf(x).powf(d), 0.0, 1.0, t),
            ),
            _ => (
                quad::integrate_neg_halfline(|x| model.cdf(x).powf(d), t),
                quad::integrate_pos_halfline(|x| model.sf(x).powf(d), t),
            ),
        };
        let total = b_left.value + b_right.value;
        if !total.is_finite() || total > MEMBERSHIP_CAP || !(b_left.converged && b_right.converged)
        {
            return Err(Error::ConditionViolated(format!(
                "tail condition integral diverges (value {total})"
            )));
        }
    }
    // integrand: F^{gamma-b'} (1-F)^{-b'} on x < 0, F^{-b'} (1-F)^{gamma-b'} on x >= 0
    let left_part = |x: f64| model.cdf(x).powf(d) * model.sf(x).powf(-bp);
    let right_part = |x: f64| model.cdf(x).powf(-bp) * model.sf(x).powf(d);
    let (left, right) = match *model {
        // split at the bridge seams where the integrand has kinks
        DistributionModel::ParetoTwoSided { x0, .. } => {
            let l_tail = quad::integrate_pos_halfline(|t| left_part(-x0 - t), tol);
            let l_bridge = quad::integrate_interval(left_part, -x0, 0.0, tol);
            let r_bridge = quad::integrate_interval(right_part, 0.0, x0, tol);
            let r_tail = quad::integrate_pos_halfline(|t| right_part(x0 + t), tol);
            (
                combine(&[l_tail, l_bridge])?,
                combine(&[r_bridge, r_tail])?,
            )
        }
        DistributionModel::Uniform01 => {
            (0.0, combine(&[quad::integrate_interval(right_part, 0.0, 1.0, tol)])?)
        }
        DistributionModel::StdNormal => (
            combine(&[quad::integrate_neg_halfline(left_part, tol)])?,
            combine(&[quad::integrate_pos_halfline(right_part, tol)])?,
        ),
    };
    Ok(cp * (left + right))
}

fn combine(parts: &[quad::QuadResult]) -> Result<f64> {
    let mut total = 0.0;
    for p in parts {
        if !p.converged || !p.value.is_finite() {
            return Err(Error::Numerical(format!(
                "Hölder-constant quadrature failed to converge (value {}, err {:.2e})",
                p.value, p.error_estimate
            )));
        }
        total += p.value;
    }
    Ok(total)
}

/// Kernel of a V-functional on R^2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VKernel {
    /// g(x1,x2) = (x1 - mu)(x2 - mu); degenerate when mu is the true mean.
    ProductCentered { mu: f64 },
    /// g(x1,x2) = (x1 - x2)^2 / 2; the V-statistic is the biased variance.
    HalfSquaredDiff,
    /// g(x1,x2) = x1 x2.
    Product,
}

impl VKernel {
    pub fn eval(&self, x1: f64, x2: f64) -> f64 {
        match self {
            VKernel::ProductCentered { mu } => (x1 - mu) * (x2 - mu),
            VKernel::HalfSquaredDiff => 0.5 * (x1 - x2) * (x1 - x2),
            VKernel::Product => x1 * x2,
        }
    }

    pub fn symmetric(&self) -> bool {
        true
    }

    pub fn name(&self) -> String {
        match self {
            VKernel::ProductCentered { mu } => format!("product_centered(mu={mu})"),
            VKernel::HalfSquaredDiff => "half_squared_diff".into(),
            VKernel::Product => "product".into(),
        }
    }
}

/// Exact double sum (1/n^2) sum_i sum_j g(x_i, x_j); symmetric kernels are
/// computed from the upper triangle with off-diagonal doubling.
pub fn v_statistic(edf: &EmpiricalDistribution, kernel: &VKernel) -> f64 {
    let xs = edf.sorted_values();
    let n = xs.len();
    let nf = n as f64;
    if kernel.symmetric() {
        let diag = compensated_sum(xs.iter().map(|&x| kernel.eval(x, x)));
        let mut acc = Accumulator::new();
        for i in 0..n {
            for j in (i + 1)..n {
                acc.add(kernel.eval(xs[i], xs[j]));
            }
        }
        (diag + 2.0 * acc.total()) / (nf * nf)
    } else {
        let mut acc = Accumulator::new();
        for &a in xs {
            for &b in xs {
                acc.add(kernel.eval(a, b));
            }
        }
        acc.total() / (nf * nf)
    }
}

/// O(n) evaluation of the plug-in V-value through the moment identities
/// each shipped kernel factors into; agrees with [`v_statistic`] to
/// rounding. Used by the experiment driver on large samples.
pub fn v_plugin(edf: &EmpiricalDistribution, kernel: &VKernel) -> f64 {
    let xs = edf.sorted_values();
    let n = xs.len() as f64;
    let m1 = compensated_sum(xs.iter().copied()) / n;
    match kernel {
        VKernel::Product => m1 * m1,
        VKernel::ProductCentered { mu } => (m1 - mu) * (m1 - mu),
        VKernel::HalfSquaredDiff => {
            let m2 = compensated_sum(xs.iter().map(|&x| x * x)) / n;
            m2 - m1 * m1
        }
    }
}

/// Exact V-functional value at a model law, via the first two moments.
pub fn v_functional_exact(model: &DistributionModel, kernel: &VKernel, tol: f64) -> Result<f64> {
    let (m1, m2) = model_moments(model, tol)?;
    Ok(match kernel {
        VKernel::Product => m1 * m1,
        VKernel::ProductCentered { mu } => (m1 - mu) * (m1 - mu),
        VKernel::HalfSquaredDiff => m2 - m1 * m1,
    })
}

fn model_mean(model: &DistributionModel, tol: f64) -> Result<f64> {
    match *model {
        DistributionModel::Uniform01 => Ok(0.5),
        DistributionModel::StdNormal => Ok(0.0),
        DistributionModel::ParetoTwoSided { alpha, .. } => {
            if alpha <= 1.0 {
                return Err(Error::Integrability(format!(
                    "two-sided Pareto with alpha = {alpha} <= 1 has no mean"
                )));
            }
            let m1 = quad::integrate_unit_split(
                |u, omu| model.quantile_parts(u, omu),
                &model.quantile_kinks(),
                tol,
            );
            if !m1.converged {
                return Err(Error::Numerical("mean quadrature did not converge".into()));
            }
            Ok(m1.value)
        }
    }
}

fn model_moments(model: &DistributionModel, tol: f64) -> Result<(f64, f64)> {
    match *model {
        DistributionModel::Uniform01 => Ok((0.5, 1.0 / 3.0)),
        DistributionModel::StdNormal => Ok((0.0, 1.0)),
        DistributionModel::ParetoTwoSided { alpha, .. } => {
            if alpha <= 2.0 {
                return Err(Error::Integrability(format!(
                    "two-sided Pareto with alpha = {alpha} <= 2 has no finite second moment"
                )));
            }
            let m1 = model_mean(model, tol)?;
            let m2 = quad::integrate_unit_split(
                |u, omu| {
                    let x = model.quantile_parts(u, omu);
                    x * x
                },
                &model.quantile_kinks(),
                tol,
            );
            if !m2.converged {
                return Err(Error::Numerical("moment quadrature did not converge".into()));
            }
            Ok((m1, m2.value))
        }
    }
}

/// Parameters of the one-sided-moment risk functional
/// rho_{p,a}(X) = E[X] + a E[((X - E[X])^+)^p]^{1/p}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiskParams {
    pub p: f64,
    pub a: f64,
}

impl RiskParams {
    pub fn new(p: f64, a: f64) -> Result<Self> {
        let params = RiskParams { p, a };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p >= 1.0) {
            return Err(Error::InvalidParameter("risk requires p >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.a) {
            return Err(Error::InvalidParameter("risk requires a in [0, 1]".into()));
        }
        Ok(())
    }
}

/// Empirical plug-in of rho_{p,a} with sample means.
pub fn risk_one_sided(sample: &[f64], params: &RiskParams) -> Result<f64> {
    params.validate()?;
    if sample.is_empty() {
        return Err(Error::InvalidSample("risk_one_sided requires a nonempty sample".into()));
    }
    let n = sample.len() as f64;
    let m = compensated_sum(sample.iter().copied()) / n;
    let upper = compensated_sum(sample.iter().map(|&x| {
        let d = x - m;
        if d > 0.0 {
            d.powf(params.p)
        } else {
            0.0
        }
    })) / n;
    Ok(m + params.a * upper.powf(1.0 / params.p))
}

/// Exact rho_{p,a} at a model law via quantile-space quadrature.
pub fn risk_exact(model: &DistributionModel, params: &RiskParams, tol: f64) -> Result<f64> {
    params.validate()?;
    let m1 = model_mean(model, tol)?;
    // the positive part introduces a kink at F(m1)
    let mut breaks = model.quantile_kinks();
    breaks.push(model.cdf(m1));
    let upper = quad::integrate_unit_split(
        |u, omu| {
            let d = model.quantile_parts(u, omu) - m1;
            if d > 0.0 {
                d.powf(params.p)
            } else {
                0.0
            }
        },
        &breaks,
        tol,
    );
    if !upper.converged || !upper.value.is_finite() {
        return Err(Error::Numerical("risk moment quadrature did not converge".into()));
    }
    Ok(m1 + params.a * upper.value.powf(1.0 / params.p))
}

/// Both sides of the Bernoulli-mixture kernel bound
/// (1-x) + a((1-x) x^p)^{1/p} <= (1+a)(1-x)^{1/p}, for x in [0,1].
#[derive(Debug, Clone, Copy)]
pub struct ChainCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn bernoulli_chain_check(x: f64, params: &RiskParams) -> ChainCheck {
    debug_assert!((0.0..=1.0).contains(&x));
    let omx = 1.0 - x;
    let lhs = omx + params.a * (omx * x.powf(params.p)).powf(1.0 / params.p);
    let rhs = (1.0 + params.a) * omx.powf(1.0 / params.p);
    ChainCheck { lhs, rhs, holds: lhs <= rhs + 1e-12 }
}

/// Neumaier-compensated summation.
pub(crate) fn compensated_sum<I: Iterator<Item = f64>>(iter: I) -> f64 {
    let mut acc = Accumulator::new();
    for v in iter {
        acc.add(v);
    }
    acc.total()
}

pub(crate) struct Accumulator {
    sum: f64,
    comp: f64,
}

impl Accumulator {
    pub(crate) fn new() -> Self {
        Accumulator { sum: 0.0, comp: 0.0 }
    }

    pub(crate) fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edf::build_edf;
    use crate::rng::SplitMix64;
    use approx::assert_relative_eq;

    fn edf(values: &[f64]) -> EmpiricalDistribution {
        build_edf(values).unwrap()
    }

    #[test]
    fn l_statistic_identity_is_mean() {
        assert_eq!(l_statistic(&edf(&[1.0, 2.0, 3.0]), &LKernel::Identity), 2.0);
    }

    #[test]
    fn l_statistic_step_is_order_statistic() {
        let e = edf(&[1.0, 2.0, 3.0]);
        assert_eq!(l_statistic(&e, &LKernel::Step { y: 0.5 }), 2.0);
        assert_eq!(l_statistic(&e, &LKernel::Step { y: 0.5 }), e.quantile(0.5).unwrap());
    }

    #[test]
    fn l_statistic_power_two_terms() {
        let v = l_statistic(&edf(&[0.0, 1.0]), &LKernel::Power { beta: 0.5 });
        assert_relative_eq!(v, 0.5f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn l_statistic_identity_mean_accuracy() {
        // compensated accumulation keeps the identity at 1e-12 relative
        let model = DistributionModel::StdNormal;
        let xs = model.sample_iid(1_000_000, 3).unwrap();
        let e = edf(&xs);
        let mean = compensated_sum(xs.iter().copied()) / xs.len() as f64;
        assert_relative_eq!(
            l_statistic(&e, &LKernel::Identity),
            mean,
            max_relative = 1e-12
        );
    }

    #[test]
    fn l_exact_uniform_identity() {
        let v = l_functional_exact(&DistributionModel::Uniform01, &LKernel::Identity, 1e-10)
            .unwrap();
        assert_relative_eq!(v, 0.5, max_relative = 1e-9);
    }

    #[test]
    fn l_exact_normal_median_is_zero() {
        let v =
            l_functional_exact(&DistributionModel::StdNormal, &LKernel::Step { y: 0.5 }, 1e-10)
                .unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn l_exact_uniform_power_closed_form() {
        for beta in [0.25, 0.5, 1.0] {
            let v = l_functional_exact(
                &DistributionModel::Uniform01,
                &LKernel::Power { beta },
                1e-11,
            )
            .unwrap();
            assert_relative_eq!(v, 1.0 / (beta + 1.0), max_relative = 1e-9);
        }
    }

    #[test]
    fn l_exact_pareto_power_fixture() {
        // scipy oracle, cross-checked through the identity
        // L(F) = -int_{-inf}^0 K(F) dx + int_0^inf (1 - K(F)) dx
        let model = DistributionModel::pareto(4.0, 1.0, 0.25, 0.25).unwrap();
        let v = l_functional_exact(&model, &LKernel::Power { beta: 0.5 }, 1e-11).unwrap();
        assert_relative_eq!(v, 0.8558341176907723, max_relative = 1e-7);
    }

    #[test]
    fn l_exact_normal_power_fixture() {
        let v = l_functional_exact(&DistributionModel::StdNormal, &LKernel::Power { beta: 0.5 }, 1e-11)
            .unwrap();
        assert_relative_eq!(v, 0.7043072188916236, max_relative = 1e-8);
    }

    #[test]
    fn l_exact_rejects_heavy_tail() {
        // alpha = 0.5: no mean
        let model = DistributionModel::pareto(0.5, 1.0, 0.25, 0.25).unwrap();
        assert!(l_functional_exact(&model, &LKernel::Identity, 1e-9).is_err());
    }

    #[test]
    fn holder_constant_uniform_closed_form() {
        let c =
            holder_constant(&DistributionModel::Uniform01, &LKernel::Identity, 1.0, 1e-11).unwrap();
        assert_relative_eq!(c, 0.5, max_relative = 1e-9);
    }

    #[test]
    fn holder_constant_pareto_fixture() {
        let model = DistributionModel::pareto(4.0, 1.0, 0.25, 0.25).unwrap();
        let c = holder_constant(&model, &LKernel::Power { beta: 0.5 }, 0.9, 1e-11).unwrap();
        assert_relative_eq!(c, 3.6668665450904845, max_relative = 1e-7);
    }

    #[test]
    fn holder_constant_rejects_thin_window() {
        // gamma - beta' = 0.4 < 1/alpha = 0.5
        let model = DistributionModel::pareto(2.0, 1.0, 0.25, 0.25).unwrap();
        let e = holder_constant(&model, &LKernel::Power { beta: 0.5 }, 0.9, 1e-10);
        assert!(matches!(e, Err(Error::ConditionViolated(_))));
    }

    #[test]
    fn holder_constant_rejects_step_kernel() {
        let e = holder_constant(&DistributionModel::StdNormal, &LKernel::Step { y: 0.5 }, 0.9, 1e-9);
        assert!(matches!(e, Err(Error::ConditionViolated(_))));
    }

    #[test]
    fn v_statistic_examples() {
        let e = edf(&[1.0, 2.0, 3.0]);
        assert_relative_eq!(v_statistic(&e, &VKernel::HalfSquaredDiff), 2.0 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(v_statistic(&e, &VKernel::Product), 4.0, max_relative = 1e-14);
        let single = edf(&[1.7]);
        let g = VKernel::ProductCentered { mu: 0.4 };
        assert_relative_eq!(v_statistic(&single, &g), g.eval(1.7, 1.7), max_relative = 1e-15);
    }

    #[test]
    fn v_statistic_equals_biased_variance() {
        let mut rng = SplitMix64::new(8);
        let model = DistributionModel::StdNormal;
        for trial in 0..50 {
            let n = 2 + (rng.next_u64() % 199) as usize;
            let xs = model.sample_iid(n, 100 + trial).unwrap();
            let e = edf(&xs);
            let nf = n as f64;
            let mean = xs.iter().sum::<f64>() / nf;
            let biased_var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / nf;
            assert_relative_eq!(
                v_statistic(&e, &VKernel::HalfSquaredDiff),
                biased_var,
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn v_plugin_matches_double_sum() {
        let model = DistributionModel::pareto(4.0, 1.0, 0.25, 0.25).unwrap();
        let xs = model.sample_iid(800, 77).unwrap();
        let e = edf(&xs);
        for g in [
            VKernel::HalfSquaredDiff,
            VKernel::Product,
            VKernel::ProductCentered { mu: 0.25 },
        ] {
            assert_relative_eq!(v_plugin(&e, &g), v_statistic(&e, &g), max_relative = 1e-10);
        }
    }

    #[test]
    fn v_exact_values() {
        assert_relative_eq!(
            v_functional_exact(&DistributionModel::StdNormal, &VKernel::HalfSquaredDiff, 1e-10)
                .unwrap(),
            1.0,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            v_functional_exact(&DistributionModel::Uniform01, &VKernel::Product, 1e-10).unwrap(),
            0.25,
            max_relative = 1e-12
        );
        let heavy = DistributionModel::pareto(1.5, 1.0, 0.25, 0.25).unwrap();
        assert!(v_functional_exact(&heavy, &VKernel::HalfSquaredDiff, 1e-9).is_err());
    }

    #[test]
    fn risk_examples() {
        let p1 = RiskParams::new(1.0, 1.0).unwrap();
        assert_relative_eq!(risk_one_sided(&[0.0, 2.0], &p1).unwrap(), 1.5, max_relative = 1e-14);
        let p2 = RiskParams::new(2.0, 1.0).unwrap();
        assert_relative_eq!(
            risk_one_sided(&[0.0, 2.0], &p2).unwrap(),
            1.0 + 0.5f64.sqrt(),
            max_relative = 1e-14
        );
        let a0 = RiskParams::new(3.0, 0.0).unwrap();
        assert_relative_eq!(
            risk_one_sided(&[1.0, 2.0, 4.0], &a0).unwrap(),
            7.0 / 3.0,
            max_relative = 1e-14
        );
        assert!(risk_one_sided(&[], &p1).is_err());
        assert!(RiskParams::new(0.5, 0.2).is_err());
        assert!(RiskParams::new(2.0, 1.5).is_err());
    }

    #[test]
    fn risk_equivariance_and_homogeneity() {
        let params = RiskParams::new(2.0, 0.7).unwrap();
        let xs = DistributionModel::StdNormal.sample_iid(500, 31).unwrap();
        let base = risk_one_sided(&xs, &params).unwrap();
        let shifted: Vec<f64> = xs.iter().map(|x| x + 3.25).collect();
        assert_relative_eq!(
            risk_one_sided(&shifted, &params).unwrap(),
            base + 3.25,
            max_relative = 1e-12
        );
        let scaled: Vec<f64> = xs.iter().map(|x| 2.5 * x).collect();
        assert_relative_eq!(
            risk_one_sided(&scaled, &params).unwrap(),
            2.5 * base,
            max_relative = 1e-12
        );
    }

    #[test]
    fn risk_exact_std_normal() {
        let params = RiskParams::new(2.0, 1.0).unwrap();
        let v = risk_exact(&DistributionModel::StdNormal, &params, 1e-11).unwrap();
        assert_relative_eq!(v, 0.5f64.sqrt(), max_relative = 1e-9);
    }

    #[test]
    fn chain_check_examples() {
        let params = RiskParams::new(2.0, 1.0).unwrap();
        let c = bernoulli_chain_check(0.5, &params);
        assert!(c.holds);
        assert_relative_eq!(c.lhs, 0.5 + 0.125f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(c.rhs, 2.0 * 0.5f64.sqrt(), max_relative = 1e-14);
        let edge1 = bernoulli_chain_check(1.0, &params);
        assert!(edge1.holds && edge1.lhs == 0.0 && edge1.rhs == 0.0);
        let edge0 = bernoulli_chain_check(0.0, &params);
        assert!(edge0.holds && edge0.lhs == 1.0 && edge0.rhs == 2.0);
    }
}
