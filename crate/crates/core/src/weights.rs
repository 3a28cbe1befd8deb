//! Weight functions and the moment/integrability condition for weighted
//! almost-sure convergence of the empirical process.
//!
//! A weight function is u-shaped, continuous, and bounded away from zero:
//! nonincreasing left of a trough x_phi and nondecreasing right of it. Three
//! families are provided: the constant weight, polynomial weights
//! (1+|x|)^lambda, and the data-adaptive weight
//!     phi_{gamma,F}(x) = F(x)^(-gamma)  for x < 0,
//!                        (1-F(x))^(-gamma) for x >= 0,
//! extended constantly where F leaves (0,1).

use serde::{Deserialize, Serialize};

use crate::distributions::DistributionModel;
use crate::error::{Error, Result};
use crate::quad;

/// Divergence cap: quadrature values above this are reported as "fails".
pub const DEFAULT_DIVERGENCE_CAP: f64 = 1e8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeightFunction {
    Uniform,
    Poly { lambda: f64 },
    AdaptiveGammaF { gamma: f64, base: DistributionModel },
}

impl WeightFunction {
    pub fn poly(lambda: f64) -> Result<Self> {
        if !(lambda >= 0.0) {
            return Err(Error::InvalidParameter("poly weight requires lambda >= 0".into()));
        }
        Ok(WeightFunction::Poly { lambda })
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            WeightFunction::Uniform => Ok(()),
            WeightFunction::Poly { lambda } => {
                if *lambda >= 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter("poly weight requires lambda >= 0".into()))
                }
            }
            WeightFunction::AdaptiveGammaF { gamma, base } => {
                base.validate()?;
                if *gamma > 0.0 && *gamma <= 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(
                        "adaptive weight requires gamma in (0, 1]".into(),
                    ))
                }
            }
        }
    }

    /// phi(x). Total; +inf only past the upper support edge of a
    /// bounded-support adaptive base (where deviations are identically zero).
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            WeightFunction::Uniform => 1.0,
            WeightFunction::Poly { lambda } => (1.0 + x.abs()).powf(*lambda),
            WeightFunction::AdaptiveGammaF { gamma, base } => {
                let (lo, hi) = base.support();
                let xe = x.clamp(lo, hi);
                if xe < 0.0 {
                    base.cdf(xe).powf(-gamma)
                } else {
                    base.sf(xe).powf(-gamma)
                }
            }
        }
    }

    /// Trough of the u-shape. All shipped families split at the origin.
    pub fn x_phi(&self) -> f64 {
        0.0
    }

    /// Lower bound epsilon with phi >= epsilon everywhere.
    pub fn eps_lower(&self) -> f64 {
        1.0
    }

    pub fn name(&self) -> String {
        match self {
            WeightFunction::Uniform => "uniform".into(),
            WeightFunction::Poly { lambda } => format!("poly(lambda={lambda})"),
            WeightFunction::AdaptiveGammaF { gamma, base } => {
                format!("adaptive(gamma={gamma},F={})", base.name())
            }
        }
    }
}

/// The weight of Lemma-style plug-in bounds: phi_{gamma,F} for the given
/// model. Requires gamma in (0, 1].
pub fn make_adaptive_weight(model: &DistributionModel, gamma: f64) -> Result<WeightFunction> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "adaptive weight requires gamma in (0, 1], got {gamma}"
        )));
    }
    model.validate()?;
    Ok(WeightFunction::AdaptiveGammaF { gamma, base: model.clone() })
}

/// How an integrability verdict was reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegrabilityMethod {
    ClosedForm,
    AnalyticTailTest,
    Quadrature,
}

/// Verdict for the integral condition int phi(x)^{1/(1-r)} dF(x) < inf.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntegrabilityReport {
    pub holds: bool,
    /// Value of the integral when it is finite and was computed.
    pub integral: Option<f64>,
    pub method: IntegrabilityMethod,
    pub detail: String,
}

/// Checks int phi^{1/(1-r)} dF < inf for r in [0, 1/2).
///
/// The integral is evaluated in quantile space as
/// int_0^1 w(s)^{1/(1-r)} ds with w(s) = phi(max{F^{<-}(s), F^{->}(s)});
/// for the shipped models the two inverses coincide on (0,1). Pareto/Poly
/// pairs are decided by the closed-form tail test lambda/(1-r) < alpha and
/// adaptive weights over their own base model by the closed-form exponent
/// test gamma/(1-r) < 1; everything else falls back to quadrature with a
/// divergence cap.
pub fn theorem1_integrability(
    model: &DistributionModel,
    weight: &WeightFunction,
    r: f64,
) -> Result<IntegrabilityReport> {
    theorem1_integrability_with_cap(model, weight, r, DEFAULT_DIVERGENCE_CAP)
}

pub fn theorem1_integrability_with_cap(
    model: &DistributionModel,
    weight: &WeightFunction,
    r: f64,
    cap: f64,
) -> Result<IntegrabilityReport> {
    if !(0.0..0.5).contains(&r) {
        return Err(Error::InvalidParameter(format!(
            "integrability exponent requires r in [0, 1/2), got {r}"
        )));
    }
    let q = 1.0 / (1.0 - r);
    match weight {
        WeightFunction::Uniform => Ok(IntegrabilityReport {
            holds: true,
            integral: Some(1.0),
            method: IntegrabilityMethod::ClosedForm,
            detail: "constant weight integrates to 1 against any law".into(),
        }),
        WeightFunction::AdaptiveGammaF { gamma, base } if base == model => {
            let exponent = gamma * q;
            if exponent >= 1.0 {
                return Ok(IntegrabilityReport {
                    holds: false,
                    integral: None,
                    method: IntegrabilityMethod::ClosedForm,
                    detail: format!(
                        "w(s) = s^-gamma / (1-s)^-gamma needs gamma/(1-r) < 1; got {exponent}"
                    ),
                });
            }
            let tau = model.cdf(0.0);
            let value =
                (tau.powf(1.0 - exponent) + (1.0 - tau).powf(1.0 - exponent)) / (1.0 - exponent);
            Ok(IntegrabilityReport {
                holds: true,
                integral: Some(value),
                method: IntegrabilityMethod::ClosedForm,
                detail: format!("gamma/(1-r) = {exponent} < 1"),
            })
        }
        WeightFunction::Poly { lambda } => {
            if let DistributionModel::ParetoTwoSided { alpha, .. } = model {
                let tail_exp = lambda * q;
                if tail_exp >= *alpha {
                    return Ok(IntegrabilityReport {
                        holds: false,
                        integral: None,
                        method: IntegrabilityMethod::AnalyticTailTest,
                        detail: format!(
                            "lambda/(1-r) = {tail_exp} >= alpha = {alpha}: tail integral diverges"
                        ),
                    });
                }
                let mut rep = quadrature_report(model, weight, q, cap);
                rep.method = IntegrabilityMethod::AnalyticTailTest;
                rep.holds = true;
                rep.detail = format!("lambda/(1-r) = {tail_exp} < alpha = {alpha}");
                return Ok(rep);
            }
            Ok(quadrature_report(model, weight, q, cap))
        }
        _ => Ok(quadrature_report(model, weight, q, cap)),
    }
}

fn quadrature_report(
    model: &DistributionModel,
    weight: &WeightFunction,
    q: f64,
    cap: f64,
) -> IntegrabilityReport {
    // split where the integrand has kinks: the quantile's bridge seams and
    // the probability level of the weight trough
    let mut breaks = model.quantile_kinks();
    if !matches!(weight, WeightFunction::Uniform) {
        breaks.push(model.cdf(weight.x_phi()));
    }
    let res = quad::integrate_unit_split(
        |u, omu| weight.eval(model.quantile_parts(u, omu)).powf(q),
        &breaks,
        1e-9,
    );
    if !res.value.is_finite() || res.value > cap || !res.converged {
        IntegrabilityReport {
            holds: false,
            integral: None,
            method: IntegrabilityMethod::Quadrature,
            detail: format!(
                "quadrature exceeded the divergence cap {cap} or failed to converge (value {})",
                res.value
            ),
        }
    } else {
        IntegrabilityReport {
            holds: true,
            integral: Some(res.value),
            method: IntegrabilityMethod::Quadrature,
            detail: format!("quadrature converged, error estimate {:.2e}", res.error_estimate),
        }
    }
}
