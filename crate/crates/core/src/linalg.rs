//! Regularized least-squares state for linear bandits.
//!
//! `RlsState` keeps `V = λI + Σ x xᵀ` together with `V⁻¹`, updated by the
//! Sherman–Morrison identity and re-inverted from scratch every
//! [`REFRESH_PERIOD`] updates. `DiagonalApproxState` keeps only `diag(V)`.

use serde::{Deserialize, Serialize};

use crate::dense::{dot, Cholesky, Matrix};
use crate::error::{ensure_dim, ensure_finite, invalid, Result};

/// Number of rank-1 updates between full re-inversions of the design matrix.
pub const REFRESH_PERIOD: usize = 256;

// Arms are required to lie in the unit ball; allow for rounding in callers
// that normalize.
const ARM_NORM_SLACK: f64 = 1e-9;

fn check_arm(dim: usize, arm: &[f64], reward: f64) -> Result<()> {
    ensure_dim(dim, arm.len())?;
    ensure_finite(arm, "arm")?;
    if !reward.is_finite() {
        return Err(invalid(format!("reward is not finite ({reward})")));
    }
    let n2 = dot(arm, arm);
    if n2 > (1.0 + ARM_NORM_SLACK).powi(2) {
        return Err(invalid(format!("arm norm {} exceeds 1", n2.sqrt())));
    }
    Ok(())
}

fn check_lambda(dim: usize, lambda: f64) -> Result<()> {
    if dim == 0 {
        return Err(invalid("dimension must be positive"));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(invalid(format!("lambda must be positive, got {lambda}")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RlsState {
    dim: usize,
    lambda: f64,
    step: usize,
    design: Matrix,
    design_inv: Matrix,
    moment: Vec<f64>,
    estimate: Vec<f64>,
}

impl RlsState {
    pub fn new(dim: usize, lambda: f64) -> Result<Self> {
        check_lambda(dim, lambda)?;
        Ok(Self {
            dim,
            lambda,
            step: 0,
            design: Matrix::scaled_identity(dim, lambda),
            design_inv: Matrix::scaled_identity(dim, 1.0 / lambda),
            moment: vec![0.0; dim],
            estimate: vec![0.0; dim],
        })
    }

    /// Absorb one `(arm, reward)` pair.
    pub fn update(&mut self, arm: &[f64], reward: f64) -> Result<()> {
        check_arm(self.dim, arm, reward)?;
        self.design.add_outer(arm, 1.0);
        for (b, x) in self.moment.iter_mut().zip(arm) {
            *b += x * reward;
        }
        self.step += 1;

        if self.step.is_multiple_of(REFRESH_PERIOD) {
            self.refresh_inverse()?;
        } else {
            let vx = self.design_inv.mul_vec(arm);
            let denom = 1.0 + dot(arm, &vx);
            self.design_inv.add_outer(&vx, -1.0 / denom);
        }
        self.estimate = self.design_inv.mul_vec(&self.moment);
        Ok(())
    }

    /// Recompute `V⁻¹` from `V` by a dense Cholesky inversion.
    pub fn refresh_inverse(&mut self) -> Result<()> {
        self.design_inv = Cholesky::new(&self.design)?.inverse();
        self.estimate = self.design_inv.mul_vec(&self.moment);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn design(&self) -> &Matrix {
        &self.design
    }

    pub fn design_inv(&self) -> &Matrix {
        &self.design_inv
    }

    pub fn moment(&self) -> &[f64] {
        &self.moment
    }

    pub fn estimate(&self) -> &[f64] {
        &self.estimate
    }
}

/// Whether the diagonal approximation also replaces `V⁻¹` in the mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimateMode {
    /// `θ̂ = D⁻¹ b` and covariance shape `D⁻¹`.
    #[default]
    ApproxMeanAndCov,
    /// `θ̂ = V⁻¹ b` (exact) and covariance shape `D⁻¹`.
    ApproxCovOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalApproxState {
    dim: usize,
    lambda: f64,
    step: usize,
    diag: Vec<f64>,
    diag_inv: Vec<f64>,
    moment: Vec<f64>,
    estimate: Vec<f64>,
    mode: EstimateMode,
    // Exact state, kept only when the mean is computed exactly.
    exact: Option<Box<RlsState>>,
}

impl DiagonalApproxState {
    pub fn new(dim: usize, lambda: f64, mode: EstimateMode) -> Result<Self> {
        check_lambda(dim, lambda)?;
        let exact = match mode {
            EstimateMode::ApproxMeanAndCov => None,
            EstimateMode::ApproxCovOnly => Some(Box::new(RlsState::new(dim, lambda)?)),
        };
        Ok(Self {
            dim,
            lambda,
            step: 0,
            diag: vec![lambda; dim],
            diag_inv: vec![1.0 / lambda; dim],
            moment: vec![0.0; dim],
            estimate: vec![0.0; dim],
            mode,
            exact,
        })
    }

    pub fn update(&mut self, arm: &[f64], reward: f64) -> Result<()> {
        check_arm(self.dim, arm, reward)?;
        for i in 0..self.dim {
            self.diag[i] += arm[i] * arm[i];
            self.diag_inv[i] = 1.0 / self.diag[i];
            self.moment[i] += arm[i] * reward;
        }
        self.step += 1;
        match &mut self.exact {
            Some(exact) => {
                exact.update(arm, reward)?;
                self.estimate.copy_from_slice(exact.estimate());
            }
            None => {
                for i in 0..self.dim {
                    self.estimate[i] = self.diag_inv[i] * self.moment[i];
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn diag_inv(&self) -> &[f64] {
        &self.diag_inv
    }

    pub fn moment(&self) -> &[f64] {
        &self.moment
    }

    pub fn estimate(&self) -> &[f64] {
        &self.estimate
    }

    pub fn mode(&self) -> EstimateMode {
        self.mode
    }
}

/// Parameters of the self-normalized confidence radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceParams {
    pub nu: f64,
    pub lambda: f64,
    pub s_bound: f64,
    pub delta: f64,
}

impl ConfidenceParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.nu >= 0.0 && self.nu.is_finite()) {
            return Err(invalid(format!("nu must be non-negative, got {}", self.nu)));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(invalid(format!("lambda must be positive, got {}", self.lambda)));
        }
        if !(self.s_bound > 0.0 && self.s_bound.is_finite()) {
            return Err(invalid(format!("S must be positive, got {}", self.s_bound)));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(invalid(format!("delta must lie in (0, 1), got {}", self.delta)));
        }
        Ok(())
    }

    pub fn with_delta(self, delta: f64) -> Self {
        Self { delta, ..self }
    }
}

/// `β_t(δ) = ν √(2 log((λ+t)^{d/2} λ^{-d/2} / δ)) + √λ S`.
pub fn beta(params: &ConfidenceParams, step: usize, dim: usize) -> Result<f64> {
    params.validate()?;
    if dim == 0 {
        return Err(invalid("dimension must be positive"));
    }
    let lambda = params.lambda;
    let log_arg = 0.5 * dim as f64 * (1.0 + step as f64 / lambda).ln() - params.delta.ln();
    Ok(params.nu * (2.0 * log_arg).sqrt() + lambda.sqrt() * params.s_bound)
}

/// `√(xᵀ M x)` for a dense symmetric positive-definite `M`.
///
/// Pass the inverse design matrix to get `‖x‖_{V⁻¹}`.
pub fn weighted_norm(m: &Matrix, x: &[f64]) -> Result<f64> {
    ensure_dim(m.dim(), x.len())?;
    Ok(m.quad_form(x).max(0.0).sqrt())
}

/// `√(Σ m_i x_i²)` for a positive diagonal `m`.
pub fn weighted_norm_diag(m: &[f64], x: &[f64]) -> Result<f64> {
    ensure_dim(m.len(), x.len())?;
    if let Some(i) = m.iter().position(|v| !(*v > 0.0)) {
        return Err(invalid(format!("diagonal entry {i} is not positive ({})", m[i])));
    }
    Ok(m.iter().zip(x).map(|(m, x)| m * x * x).sum::<f64>().sqrt())
}

/// `Σ_s ‖x_s‖²_{V_s⁻¹}` over a replayed arm sequence, where `V_s` is the
/// design before absorbing `x_s`.
pub fn elliptic_potential(arms: &[Vec<f64>], dim: usize, lambda: f64) -> Result<f64> {
    let mut state = RlsState::new(dim, lambda)?;
    let mut total = 0.0;
    for arm in arms {
        total += state.design_inv().quad_form(arm);
        state.update(arm, 0.0)?;
    }
    Ok(total)
}

/// `2 d log(1 + t/λ)`, the cap on [`elliptic_potential`] for `λ ≥ 1`.
pub fn elliptic_potential_cap(steps: usize, dim: usize, lambda: f64) -> f64 {
    2.0 * dim as f64 * (1.0 + steps as f64 / lambda).ln()
}
