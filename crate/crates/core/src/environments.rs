//! Problem instances, per-step arm sets, noisy rewards and regret accounting.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::dense::{dot, norm};
use crate::error::{ensure_dim, ensure_finite, invalid, Result};
use crate::rng::{fill_standard_normal, standard_normal, stream, substream, Rng};

/// Ground-truth parameter families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Family {
    /// `θ*[i] = (−1)^i`.
    P1,
    /// `θ*[i] = sin(i + 1)`, radians.
    P2,
    /// `θ*[i] ~ Uniform(0, 1)`, drawn once under `seed`.
    P3 {
        seed: u64,
    },
    Custom {
        theta: Vec<f64>,
    },
}

impl Family {
    pub fn theta_star(&self, dim: usize) -> Result<Vec<f64>> {
        if dim == 0 {
            return Err(invalid("dimension must be positive"));
        }
        Ok(match self {
            Family::P1 => (0..dim).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect(),
            Family::P2 => (0..dim).map(|i| ((i + 1) as f64).sin()).collect(),
            Family::P3 { seed } => {
                let mut rng = substream(*seed, stream::THETA);
                (0..dim).map(|_| rng.random::<f64>()).collect()
            }
            Family::Custom { theta } => {
                ensure_dim(dim, theta.len())?;
                ensure_finite(theta, "theta")?;
                theta.clone()
            }
        })
    }

    pub fn label(&self) -> String {
        match self {
            Family::P1 => "P1".into(),
            Family::P2 => "P2".into(),
            Family::P3 { seed } => format!("P3(seed={seed})"),
            Family::Custom { .. } => "custom".into(),
        }
    }
}

/// How a standard-normal draw is mapped into the unit ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArmScaling {
    /// `x / max(1, ‖x‖)`.
    #[default]
    Project,
    /// `x / ‖x‖`.
    Sphere,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BanditInstance {
    pub theta_star: Vec<f64>,
    pub dim: usize,
    pub n_arms: usize,
    pub noise_sd: f64,
    pub family: Family,
    pub scaling: ArmScaling,
}

impl BanditInstance {
    pub fn new(family: Family, dim: usize, n_arms: usize, noise_sd: f64) -> Result<Self> {
        if n_arms == 0 {
            return Err(invalid("need at least one arm"));
        }
        if !(noise_sd >= 0.0 && noise_sd.is_finite()) {
            return Err(invalid(format!("noise_sd must be non-negative, got {noise_sd}")));
        }
        Ok(Self {
            theta_star: family.theta_star(dim)?,
            dim,
            n_arms,
            noise_sd,
            family,
            scaling: ArmScaling::Project,
        })
    }

    pub fn with_scaling(mut self, scaling: ArmScaling) -> Self {
        self.scaling = scaling;
        self
    }

    /// `‖θ*‖`, the smallest admissible `S`.
    pub fn theta_norm(&self) -> f64 {
        norm(&self.theta_star)
    }

    pub fn mean_reward(&self, arm: &[f64]) -> f64 {
        dot(arm, &self.theta_star)
    }

    /// `xᵀθ* + ξ`, `ξ ~ N(0, noise_sd²)`. Always consumes one normal draw.
    pub fn reward(&self, arm: &[f64], rng: &mut Rng) -> f64 {
        self.mean_reward(arm) + self.noise_sd * standard_normal(rng)
    }

    pub fn sample_arm_set(&self, rng: &mut Rng) -> Vec<Vec<f64>> {
        sample_arm_set(self.dim, self.n_arms, self.scaling, rng)
    }

    /// `max_x xᵀθ* − x_chosenᵀθ*`.
    pub fn step_regret(&self, arms: &[Vec<f64>], chosen: usize) -> Result<f64> {
        step_regret(&self.theta_star, arms, chosen)
    }
}

pub fn sample_arm_set(dim: usize, n_arms: usize, scaling: ArmScaling, rng: &mut Rng) -> Vec<Vec<f64>> {
    (0..n_arms)
        .map(|_| {
            let mut x = vec![0.0; dim];
            fill_standard_normal(rng, &mut x);
            let n = norm(&x);
            let div = match scaling {
                ArmScaling::Project => n.max(1.0),
                ArmScaling::Sphere => {
                    if n > 0.0 {
                        n
                    } else {
                        1.0
                    }
                }
            };
            for v in x.iter_mut() {
                *v /= div;
            }
            x
        })
        .collect()
}

pub fn step_regret(theta_star: &[f64], arms: &[Vec<f64>], chosen: usize) -> Result<f64> {
    if chosen >= arms.len() {
        return Err(invalid(format!(
            "arm index {chosen} out of range ({} arms)",
            arms.len()
        )));
    }
    let best = arms
        .iter()
        .map(|a| dot(a, theta_star))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok((best - dot(&arms[chosen], theta_star)).max(0.0))
}

/// Per-step regret of one run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RegretTrace {
    pub instantaneous: Vec<f64>,
    pub cumulative: Vec<f64>,
}

impl RegretTrace {
    pub fn with_capacity(n: usize) -> Self {
        Self {
            instantaneous: Vec::with_capacity(n),
            cumulative: Vec::with_capacity(n),
        }
    }

    pub fn push(&mut self, regret: f64) {
        let prev = self.cumulative.last().copied().unwrap_or(0.0);
        self.instantaneous.push(regret);
        self.cumulative.push(prev + regret);
    }

    pub fn len(&self) -> usize {
        self.instantaneous.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instantaneous.is_empty()
    }

    pub fn final_regret(&self) -> f64 {
        self.cumulative.last().copied().unwrap_or(0.0)
    }

    /// `R(t)` for a 1-based step count `t`.
    pub fn at(&self, t: usize) -> f64 {
        if t == 0 {
            0.0
        } else {
            self.cumulative[t - 1]
        }
    }
}
