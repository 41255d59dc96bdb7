//! Constant degradation under a single α-divergence budget, the quantile
//! shift bound, and the regret-bound evaluators for LinTS and LinBUCB.

use serde::{Deserialize, Serialize};

use crate::algorithms::Inference;
use crate::error::{invalid, Error, Result};
use crate::linalg::{beta, ConfidenceParams};
use crate::special::norm_isf;

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon >= 0.0 && epsilon.is_finite()) {
        return Err(invalid(format!("epsilon must be non-negative, got {epsilon}")));
    }
    Ok(())
}

/// `ε·α(α−1) + 1`, the base shared by every transformed constant.
fn budget_base(epsilon: f64, alpha: f64) -> Result<f64> {
    let base = epsilon * alpha * (alpha - 1.0) + 1.0;
    if base <= 0.0 {
        return Err(Error::Regime {
            regime: "unbounded",
            detail: format!("epsilon*alpha*(alpha-1)+1 = {base} <= 0 for alpha = {alpha}, epsilon = {epsilon}"),
        });
    }
    Ok(base)
}

/// `κ₂ = (εα₁(α₁−1)+1)^{1/(1−α₁)} κ₁^{α₁/(α₁−1)}`.
pub fn degrade_anti_concentration(kappa1: f64, epsilon: f64, alpha1: f64) -> Result<f64> {
    if !(alpha1 > 1.0 && alpha1.is_finite()) {
        return Err(invalid(format!("alpha1 must exceed 1, got {alpha1}")));
    }
    if !(kappa1 > 0.0 && kappa1 < 1.0) {
        return Err(invalid(format!("kappa1 must lie in (0, 1), got {kappa1}")));
    }
    check_epsilon(epsilon)?;
    let base = budget_base(epsilon, alpha1)?;
    Ok(base.powf(1.0 / (1.0 - alpha1)) * kappa1.powf(alpha1 / (alpha1 - 1.0)))
}

fn check_alpha2(alpha2: f64) -> Result<()> {
    if !(alpha2 < 0.0 && alpha2.is_finite()) {
        return Err(invalid(format!("alpha2 must be negative, got {alpha2}")));
    }
    Ok(())
}

/// `(c₂, c₂′) = (c₁ + (α₂−1)/α₂, c₁′ / (εα₂(α₂−1)+1)^{α₂})`.
pub fn degrade_concentration_type1(c1: f64, c1p: f64, epsilon: f64, alpha2: f64) -> Result<(f64, f64)> {
    check_alpha2(alpha2)?;
    check_epsilon(epsilon)?;
    if !(c1 > 0.0 && c1p > 0.0) {
        return Err(invalid("c1 and c1' must be positive"));
    }
    let base = budget_base(epsilon, alpha2)?;
    Ok((c1 + (alpha2 - 1.0) / alpha2, c1p / base.powf(alpha2)))
}

/// A directional concentration function `δ ↦ ĉ(δ)`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CHat {
    /// `Φ⁻¹(1−δ)`, exact for Gaussian posteriors.
    #[default]
    NormalQuantile,
    /// `(δ, ĉ)` points, interpolated linearly in `log δ`.
    Table { points: Vec<(f64, f64)> },
}

impl CHat {
    pub fn eval(&self, delta: f64) -> Result<f64> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(invalid(format!("delta must lie in (0, 1), got {delta}")));
        }
        match self {
            Self::NormalQuantile => Ok(norm_isf(delta)),
            Self::Table { points } => {
                let mut pts = points.clone();
                pts.sort_by(|a, b| a.0.total_cmp(&b.0));
                let (first, last) = match (pts.first(), pts.last()) {
                    (Some(f), Some(l)) => (*f, *l),
                    _ => return Err(invalid("empty c-hat table")),
                };
                if delta < first.0 || delta > last.0 {
                    return Err(invalid(format!(
                        "delta {delta} outside the tabulated range [{}, {}]",
                        first.0, last.0
                    )));
                }
                let k = pts.partition_point(|p| p.0 < delta);
                if pts[k].0 == delta || k == 0 {
                    return Ok(pts[k].1);
                }
                let (a, b) = (pts[k - 1], pts[k]);
                let t = (delta.ln() - a.0.ln()) / (b.0.ln() - a.0.ln());
                Ok(a.1 + t * (b.1 - a.1))
            }
        }
    }
}

/// `ĉ₂(δ) = ĉ₁(δ^{(α₂−1)/α₂} (εα₂(α₂−1)+1)^{α₂})`.
pub fn degrade_concentration_type2(c_hat1: &CHat, epsilon: f64, alpha2: f64, delta: f64) -> Result<f64> {
    check_alpha2(alpha2)?;
    check_epsilon(epsilon)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!("delta must lie in (0, 1), got {delta}")));
    }
    let base = budget_base(epsilon, alpha2)?;
    let arg = delta.powf((alpha2 - 1.0) / alpha2) * base.powf(alpha2);
    if !(arg > 0.0 && arg < 1.0) {
        return Err(invalid(format!(
            "transformed level {arg} for delta = {delta} is outside (0, 1); the budget is too large"
        )));
    }
    c_hat1.eval(arg)
}

/// `1−γ − (εα(α−1)+1)^{1/(1−α)} (1−γ)^{α/(α−1)}`: an upper bound on the
/// quantile shift for `α > 1`, a lower bound for `α < 0`.
pub fn quantile_shift_bound(gamma: f64, epsilon: f64, alpha: f64) -> Result<f64> {
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(invalid(format!("gamma must lie in (0, 1), got {gamma}")));
    }
    if (0.0..=1.0).contains(&alpha) || !alpha.is_finite() {
        return Err(Error::Regime {
            regime: "no-control",
            detail: format!("alpha = {alpha} in [0, 1] gives no control over the quantile shift"),
        });
    }
    check_epsilon(epsilon)?;
    let base = budget_base(epsilon, alpha)?;
    let tail = 1.0 - gamma;
    Ok(tail - base.powf(1.0 / (1.0 - alpha)) * tail.powf(alpha / (alpha - 1.0)))
}

/// Every constant entering the regret bounds, before and after degradation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundConstants {
    pub epsilon: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub c1: f64,
    pub c1p: f64,
    pub c2: f64,
    pub c2p: f64,
    pub c_hat1: CHat,
}

impl BoundConstants {
    pub fn new(epsilon: f64, alpha1: f64, alpha2: f64, kappa1: f64, c1: f64, c1p: f64, c_hat1: CHat) -> Result<Self> {
        let kappa2 = degrade_anti_concentration(kappa1, epsilon, alpha1)?;
        let (c2, c2p) = degrade_concentration_type1(c1, c1p, epsilon, alpha2)?;
        Ok(Self {
            epsilon,
            alpha1,
            alpha2,
            kappa1,
            kappa2,
            c1,
            c1p,
            c2,
            c2p,
            c_hat1,
        })
    }

    /// Gaussian base constants: `κ₁ = 1 − Φ(1)`, `(c₁, c₁′) = (4, 8)`,
    /// `ĉ₁ = Φ⁻¹(1−·)`.
    pub fn gaussian(epsilon: f64, alpha1: f64, alpha2: f64) -> Result<Self> {
        Self::new(
            epsilon,
            alpha1,
            alpha2,
            crate::posterior::gaussian_kappa1(),
            4.0,
            8.0,
            CHat::NormalQuantile,
        )
    }

    pub fn c_hat2(&self, delta: f64) -> Result<f64> {
        degrade_concentration_type2(&self.c_hat1, self.epsilon, self.alpha2, delta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ConcentrationType {
    TypeI,
    TypeII,
}

fn check_sizes(horizon: usize, dim: usize) -> Result<()> {
    if horizon == 0 || dim == 0 {
        return Err(invalid("horizon and dimension must be positive"));
    }
    Ok(())
}

/// `√(2Td log(1+T/λ))`, the elliptic-potential factor.
fn potential_factor(horizon: usize, dim: usize, lambda: f64) -> f64 {
    let t = horizon as f64;
    (2.0 * t * dim as f64 * (1.0 + t / lambda).ln()).sqrt()
}

/// High-probability regret bound for LinTS with approximate inference.
pub fn lints_regret_bound(
    params: &ConfidenceParams,
    constants: &BoundConstants,
    horizon: usize,
    dim: usize,
) -> Result<f64> {
    params.validate()?;
    check_sizes(horizon, dim)?;
    let t = horizon as f64;
    let d = dim as f64;
    let delta_p = params.delta / (4.0 * t);
    let beta_t = beta(&params.with_delta(delta_p), horizon, dim)?;
    let log_arg = constants.c2p * d / delta_p;
    let gamma_hat = beta_t * (constants.c2 * d * log_arg.ln()).max(0.0).sqrt();
    let k2 = constants.kappa2;
    Ok(
        (beta_t + gamma_hat * (1.0 + 4.0 / k2)) * potential_factor(horizon, dim, params.lambda)
            + (4.0 * gamma_hat / k2) * ((8.0 * t / params.lambda) * (4.0 / params.delta).ln()).sqrt(),
    )
}

/// High-probability regret bound for LinBUCB at quantile level `γ`.
pub fn linbucb_regret_bound(
    params: &ConfidenceParams,
    constants: &BoundConstants,
    gamma: f64,
    horizon: usize,
    dim: usize,
    assumption: ConcentrationType,
    inference: Inference,
) -> Result<f64> {
    params.validate()?;
    check_sizes(horizon, dim)?;
    if !(gamma > 0.0 && gamma < 1.0) {
        return Err(invalid(format!("gamma must lie in (0, 1), got {gamma}")));
    }
    let (kappa, name) = match inference {
        Inference::Exact => (constants.kappa1, "1 - kappa1"),
        Inference::Approximate => (constants.kappa2, "1 - kappa2"),
    };
    let threshold = 1.0 - kappa;
    if gamma < threshold {
        return Err(Error::Regime {
            regime: "inadmissible-gamma",
            detail: format!("gamma = {gamma} is below {name} = {threshold}"),
        });
    }
    let d = dim as f64;
    let tail = 1.0 - gamma;
    let width = match (assumption, inference) {
        (ConcentrationType::TypeI, Inference::Exact) => {
            (constants.c1 * d * (constants.c1p * d / tail).ln()).max(0.0).sqrt()
        }
        (ConcentrationType::TypeI, Inference::Approximate) => {
            (constants.c2 * d * (constants.c2p * d / tail).ln()).max(0.0).sqrt()
        }
        (ConcentrationType::TypeII, Inference::Exact) => constants.c_hat1.eval(tail)?,
        (ConcentrationType::TypeII, Inference::Approximate) => constants.c_hat2(tail)?,
    };
    let beta_t = beta(params, horizon, dim)?;
    Ok(beta_t * (width + 1.0) * potential_factor(horizon, dim, params.lambda))
}
