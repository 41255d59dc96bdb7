//! Single-divergence adversarial posteriors on the two-arm instance
//! `{(1,0), (0,1)}`: reweightings of the exact posterior that keep one
//! α-divergence within budget yet steer LinTS or LinBUCB to the worse arm.

use serde::{Deserialize, Serialize};

use crate::algorithms::{argmax, Inference, Policy, PolicyConfig, PolicyKind};
use crate::environments::RegretTrace;
use crate::error::{invalid, Error, Result};
use crate::linalg::ConfidenceParams;
use crate::posterior::GaussianPosterior;
use crate::quadrature::{find_root, Quadrature};
use crate::rng::{open_unit, standard_normal, stream, substream, truncated_standard_normal, Rng};
use crate::special::{norm_cdf, norm_log_cdf, norm_log_pdf, norm_log_sf, norm_ppf, norm_sf};

/// `r` returned when the feasible interval is unbounded above.
pub const DEFAULT_R_CAP: f64 = 10.0;

/// Region probability below which restricted draws switch from rejection
/// to exact truncated sampling.
pub const REJECTION_FLOOR: f64 = 1e-3;

/// Proposals allowed before rejection sampling gives up.
pub const MAX_PROPOSALS: usize = 1_000_000;

const CERT_TOL: f64 = 1e-12;
const SIGMAS: f64 = 12.0;

fn check_alpha_eps(alpha: f64, epsilon: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(invalid(format!("alpha must be positive, got {alpha}")));
    }
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    Ok(())
}

/// Largest `r` whose worst-case divergence `(r^{α−1}−1)/(α(α−1))`, or
/// `log r` at `α = 1`, stays within `ε`. `None` when unbounded.
pub fn r_upper(alpha: f64, epsilon: f64) -> Result<Option<f64>> {
    check_alpha_eps(alpha, epsilon)?;
    if alpha == 1.0 {
        return Ok(Some(epsilon.exp()));
    }
    let base = epsilon * alpha * (alpha - 1.0) + 1.0;
    if base <= 0.0 {
        return Ok(None);
    }
    Ok(Some(base.powf(1.0 / (alpha - 1.0))))
}

/// Worst-case divergence of either construction at factor `r`.
pub fn analytic_budget(alpha: f64, r: f64) -> f64 {
    if alpha == 1.0 {
        r.ln()
    } else {
        (r.powf(alpha - 1.0) - 1.0) / (alpha * (alpha - 1.0))
    }
}

/// Smallest budget admitting the conditional construction at level `γ`.
pub fn bucb_epsilon_threshold(alpha: f64, gamma: f64) -> f64 {
    if alpha == 1.0 {
        -gamma.ln()
    } else {
        (gamma.powf(1.0 - alpha) - 1.0) / (alpha * (alpha - 1.0))
    }
}

/// Reweighting factor strictly inside the feasible interval. Without `γ` the
/// interval is `(1, r_max)`; with `γ` it is `(1/γ, r_max)`. Unbounded
/// intervals return `cap`.
pub fn choose_r_capped(alpha: f64, epsilon: f64, gamma: Option<f64>, cap: f64) -> Result<f64> {
    let lower = match gamma {
        None => 1.0,
        Some(g) if g > 0.0 && g < 1.0 => 1.0 / g,
        Some(g) => return Err(invalid(format!("gamma must lie in (0, 1), got {g}"))),
    };
    match r_upper(alpha, epsilon)? {
        Some(upper) if upper > lower => Ok(0.5 * (lower + upper)),
        Some(_) => {
            let g = gamma.expect("lower bound above one needs gamma");
            Err(Error::Regime {
                regime: "infeasible-budget",
                detail: format!(
                    "epsilon = {epsilon} must exceed {} for alpha = {alpha}, gamma = {g}",
                    bucb_epsilon_threshold(alpha, g)
                ),
            })
        }
        None if cap > lower => Ok(cap),
        None => Err(invalid(format!("cap {cap} must exceed the lower endpoint {lower}"))),
    }
}

pub fn choose_r(alpha: f64, epsilon: f64, gamma: Option<f64>) -> Result<f64> {
    choose_r_capped(alpha, epsilon, gamma, DEFAULT_R_CAP)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Construction {
    /// Weight `1/r` on `{x₁ ≥ x₂}`, the remainder on `{x₁ < x₂}`.
    TsRegionReweight { r: f64 },
    /// Weight `1/r` on `{x₂ < b}`, compensated per `x₁` on `{x₂ ≥ b}`,
    /// with `b` the `γ`-quantile of the `x₁` marginal.
    BucbConditionalReweight { r: f64, gamma: f64 },
}

impl Construction {
    pub fn r(&self) -> f64 {
        match *self {
            Self::TsRegionReweight { r } | Self::BucbConditionalReweight { r, .. } => r,
        }
    }
}

/// A 2-D exact posterior together with its adversarial reweighting.
#[derive(Debug, Clone, PartialEq)]
pub struct AdversarialPosteriorPair {
    mean: [f64; 2],
    var: [f64; 2],
    cov12: f64,
    pub construction: Construction,
    /// `P_Π(x₁ < x₂)`.
    pub f_t: f64,
    log_f_t: f64,
    /// `γ`-quantile of the `x₁` marginal, for the conditional construction.
    pub b_t: Option<f64>,
}

impl AdversarialPosteriorPair {
    pub fn new(mean: [f64; 2], cov: [[f64; 2]; 2], construction: Construction) -> Result<Self> {
        let (v1, v2, c) = (cov[0][0], cov[1][1], cov[0][1]);
        if !(v1 > 0.0 && v2 > 0.0) || (c - cov[1][0]).abs() > 1e-12 * (v1 + v2) || v1 * v2 - c * c <= 0.0 {
            return Err(Error::Degenerate(format!(
                "covariance {cov:?} is not positive definite"
            )));
        }
        if !(mean[0].is_finite() && mean[1].is_finite()) {
            return Err(invalid("posterior mean must be finite"));
        }
        let r = construction.r();
        if !(r >= 1.0 && r.is_finite()) {
            return Err(invalid(format!("r must be at least 1, got {r}")));
        }
        let (ms, ss) = (mean[0] - mean[1], (v1 + v2 - 2.0 * c).sqrt());
        let z = -ms / ss;
        let b_t = match construction {
            Construction::BucbConditionalReweight { gamma, .. } => {
                if !(gamma > 0.0 && gamma < 1.0) {
                    return Err(invalid(format!("gamma must lie in (0, 1), got {gamma}")));
                }
                Some(mean[0] + v1.sqrt() * norm_ppf(gamma))
            }
            Construction::TsRegionReweight { .. } => None,
        };
        Ok(Self {
            mean,
            var: [v1, v2],
            cov12: c,
            construction,
            f_t: norm_cdf(z),
            log_f_t: norm_log_cdf(z),
            b_t,
        })
    }

    /// Reads mean and covariance off a 2-D posterior.
    pub fn from_posterior(post: &GaussianPosterior, construction: Construction) -> Result<Self> {
        if post.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                actual: post.dim(),
            });
        }
        let s2 = post.scale() * post.scale();
        let q = |x: [f64; 2]| s2 * post.shape().quad_form(&x);
        let (v1, v2) = (q([1.0, 0.0]), q([0.0, 1.0]));
        let c = 0.5 * (q([1.0, 1.0]) - v1 - v2);
        let m = post.mean();
        Self::new([m[0], m[1]], [[v1, c], [c, v2]], construction)
    }

    pub fn r(&self) -> f64 {
        self.construction.r()
    }

    pub fn mean(&self) -> [f64; 2] {
        self.mean
    }

    fn sd_s(&self) -> f64 {
        (self.var[0] + self.var[1] - 2.0 * self.cov12).sqrt()
    }

    // x₂ | x₁ is N(m, s²).
    fn conditional(&self, x1: f64) -> (f64, f64) {
        let k = self.cov12 / self.var[0];
        let m = self.mean[1] + k * (x1 - self.mean[0]);
        let v = (self.var[1] - k * self.cov12).max(0.0);
        (m, v.sqrt())
    }

    fn x1_log_pdf(&self, x1: f64) -> f64 {
        let s = self.var[0].sqrt();
        norm_log_pdf((x1 - self.mean[0]) / s) - s.ln()
    }

    fn x1_window(&self) -> (f64, f64) {
        let s = self.var[0].sqrt();
        (self.mean[0] - SIGMAS * s, self.mean[0] + SIGMAS * s)
    }

    /// Log of the weight on `{x₁ < x₂}`: `(1 − (1−F)/r)/F`.
    fn ts_log_w_low(&self) -> f64 {
        let r = self.r();
        let one_minus_f = norm_sf(-(self.mean[0] - self.mean[1]) / self.sd_s());
        (1.0 - one_minus_f / r).ln() - self.log_f_t
    }

    /// Region probabilities `(P_Q(x₁ ≥ x₂), P_Q(x₁ < x₂))` for the TS
    /// construction.
    pub fn ts_region_probabilities(&self) -> (f64, f64) {
        let upper = (1.0 - self.f_t) / self.r();
        (upper, 1.0 - upper)
    }

    /// Draw from `Q`. For the conditional construction the draw takes `x₁`
    /// from the preserved marginal and `x₂` from the reweighted conditional.
    pub fn sample(&self, rng: &mut Rng) -> Result<[f64; 2]> {
        match self.construction {
            Construction::TsRegionReweight { r } => {
                let p_hi = (1.0 - self.f_t) / r;
                let upper_region = open_unit(rng) < p_hi;
                self.sample_region(upper_region, rng)
            }
            Construction::BucbConditionalReweight { r, .. } => {
                let b = self.b_t.expect("set for this construction");
                let x1 = self.mean[0] + self.var[0].sqrt() * standard_normal(rng);
                let (m, s) = self.conditional(x1);
                let zb = (b - m) / s;
                let f21 = norm_cdf(zb);
                // Q(x₂ < b | x₁) = F/r.
                let below = open_unit(rng) < f21 / r;
                let z = if below {
                    truncated_standard_normal(rng, f64::NEG_INFINITY, zb)
                } else {
                    truncated_standard_normal(rng, zb, f64::INFINITY)
                };
                Ok([x1, m + s * z])
            }
        }
    }

    // Π restricted to {x₁ ≥ x₂} (`upper`) or {x₁ < x₂}.
    fn sample_region(&self, upper: bool, rng: &mut Rng) -> Result<[f64; 2]> {
        let p_region = if upper { 1.0 - self.f_t } else { self.f_t };
        if p_region >= REJECTION_FLOOR {
            for _ in 0..MAX_PROPOSALS {
                let x = self.sample_pi(rng);
                if (x[0] >= x[1]) == upper {
                    return Ok(x);
                }
            }
            return Err(Error::Degenerate(format!(
                "region sampling stalled after {MAX_PROPOSALS} proposals (F = {})",
                self.f_t
            )));
        }
        // Exact: draw s = x₁ − x₂ from its truncated law, then condition the
        // joint draw on it.
        let ms = self.mean[0] - self.mean[1];
        let ss = self.sd_s();
        let z0 = -ms / ss;
        let zs = if upper {
            truncated_standard_normal(rng, z0, f64::INFINITY)
        } else {
            truncated_standard_normal(rng, f64::NEG_INFINITY, z0)
        };
        let s_target = ms + ss * zs;
        let x = self.sample_pi(rng);
        let s_now = x[0] - x[1];
        let var_s = ss * ss;
        let c1 = self.var[0] - self.cov12;
        let c2 = self.cov12 - self.var[1];
        let k = (s_target - s_now) / var_s;
        let mut y = [x[0] + c1 * k, x[1] + c2 * k];
        // Guard the boundary against rounding.
        if upper && y[0] < y[1] {
            y[1] = y[0];
        } else if !upper && y[0] >= y[1] {
            y[1] = y[0] + f64::EPSILON * y[0].abs().max(1.0);
        }
        Ok(y)
    }

    fn sample_pi(&self, rng: &mut Rng) -> [f64; 2] {
        let l11 = self.var[0].sqrt();
        let l21 = self.cov12 / l11;
        let l22 = (self.var[1] - l21 * l21).max(0.0).sqrt();
        let (z1, z2) = (standard_normal(rng), standard_normal(rng));
        [self.mean[0] + l11 * z1, self.mean[1] + l21 * z1 + l22 * z2]
    }

    /// `γ`-quantiles of the two arm values under `Q` for the conditional
    /// construction. The first is `b_t` by marginal preservation.
    pub fn bucb_quantiles(&self) -> Result<(f64, f64)> {
        let (gamma, b) = match (self.construction, self.b_t) {
            (Construction::BucbConditionalReweight { gamma, .. }, Some(b)) => (gamma, b),
            _ => return Err(invalid("quantiles need the conditional construction")),
        };
        let cdf_b = self.q_x2_cdf(b)?;
        if cdf_b >= gamma {
            // Only reachable at r = 1 with the x₂ quantile below b.
            return Ok((b, self.x2_quantile_pi(gamma)));
        }
        let sd2 = self.var[1].sqrt();
        let mut hi = b.max(self.mean[1]) + sd2;
        let mut tries = 0;
        while self.q_x2_cdf(hi)? < gamma {
            hi += (hi - b).max(sd2);
            tries += 1;
            if tries > 60 {
                return Err(Error::Degenerate("could not bracket the arm-2 quantile".into()));
            }
        }
        let tol = 1e-12 * (1.0 + hi.abs());
        let q2 = find_root(|y| Ok(self.q_x2_cdf(y)? - gamma), b, hi, tol)?;
        Ok((b, q2))
    }

    fn x2_quantile_pi(&self, gamma: f64) -> f64 {
        self.mean[1] + self.var[1].sqrt() * norm_ppf(gamma)
    }

    /// `P_Q(x₂ ≤ y)` for the conditional construction, by quadrature over `x₁`.
    pub fn q_x2_cdf(&self, y: f64) -> Result<f64> {
        let (r, b) = match (self.construction, self.b_t) {
            (Construction::BucbConditionalReweight { r, .. }, Some(b)) => (r, b),
            _ => return Err(invalid("the x2 law is only tracked for the conditional construction")),
        };
        let (lo, hi) = self.x1_window();
        let quad = Quadrature::with_abs_tol(CERT_TOL);
        let integrand = |x1: f64| {
            let (m, s) = self.conditional(x1);
            let dens = self.x1_log_pdf(x1).exp();
            let zb = (b - m) / s;
            let f21 = norm_cdf(zb);
            if y < b {
                dens * norm_cdf((y - m) / s) / r
            } else {
                // F/r + (1 − F/r)(1 − S(y)/S(b)), with the survival ratio in logs.
                let ratio = (norm_log_sf((y - m) / s) - norm_log_sf(zb)).exp();
                dens * (f21 / r + (1.0 - f21 / r) * (1.0 - ratio))
            }
        };
        Ok(quad.integrate(integrand, lo, hi)?.value)
    }

    /// `∫ q(x₁, x₂) dx₂` at a fixed `x₁`, by quadrature over `x₂`; equals the
    /// `x₁` marginal density of `Π` for the conditional construction.
    pub fn q_x1_density(&self, x1: f64) -> Result<f64> {
        let (r, b) = match (self.construction, self.b_t) {
            (Construction::BucbConditionalReweight { r, .. }, Some(b)) => (r, b),
            _ => return Err(invalid("marginal check applies to the conditional construction")),
        };
        let (m, s) = self.conditional(x1);
        let zb = (b - m) / s;
        let log_s_b = norm_log_sf(zb);
        let log_w_hi = (1.0 - norm_cdf(zb) / r).ln() - log_s_b;
        let base = self.x1_log_pdf(x1);
        let quad = Quadrature::with_abs_tol(CERT_TOL);
        let f = |x2: f64| {
            let lw = if x2 < b { -r.ln() } else { log_w_hi };
            (base + lw + norm_log_pdf((x2 - m) / s) - s.ln()).exp()
        };
        let lo = (m - SIGMAS * s).min(b - s);
        let hi = (m + SIGMAS * s).max(b + s);
        Ok(quad.integrate_with_breaks(f, &[lo, b, hi])?.value)
    }

    /// `x₁` marginal density of `Π`.
    pub fn pi_x1_density(&self, x1: f64) -> f64 {
        self.x1_log_pdf(x1).exp()
    }

    /// Closed-form `D_α(Π, Q)` for the region construction.
    pub fn ts_divergence_analytic(&self, alpha: f64) -> Result<f64> {
        if !matches!(self.construction, Construction::TsRegionReweight { .. }) {
            return Err(invalid("analytic value is for the region construction"));
        }
        let r = self.r();
        let lw = self.ts_log_w_low();
        let one_minus_f = 1.0 - self.f_t;
        if alpha == 1.0 {
            // Region {x₁ < x₂} contributes F·log(1/w).
            let low = if self.f_t > 0.0 { -self.f_t * lw } else { 0.0 };
            return Ok((low + one_minus_f * r.ln()).max(0.0));
        }
        let low = ((1.0 - alpha) * lw + self.log_f_t).exp();
        let high = r.powf(alpha - 1.0) * one_minus_f;
        Ok(((low + high - 1.0) / (alpha * (alpha - 1.0))).max(0.0))
    }

    /// `(D_α(Π, Q), ∫ q)` by quadrature over `x₁`, with the `x₂` integral
    /// carried analytically through the Gaussian conditional.
    pub fn divergence_by_quadrature(&self, alpha: f64) -> Result<(f64, f64)> {
        let r = self.r();
        let (lo, hi) = self.x1_window();
        let quad = Quadrature::with_abs_tol(CERT_TOL);
        let kl = alpha == 1.0;
        // For each x₁: (mass of the 1/r region, log weight on its complement).
        let split = |x1: f64| -> (f64, f64, f64) {
            let (m, s) = self.conditional(x1);
            match self.construction {
                Construction::TsRegionReweight { .. } => {
                    // {x₁ ≥ x₂} given x₁ is x₂ ≤ x₁.
                    let z = (x1 - m) / s;
                    (norm_cdf(z), norm_log_sf(z), self.ts_log_w_low())
                }
                Construction::BucbConditionalReweight { .. } => {
                    let b = self.b_t.expect("set");
                    let z = (b - m) / s;
                    let f = norm_cdf(z);
                    let ls = norm_log_sf(z);
                    (f, ls, (1.0 - f / r).ln() - ls)
                }
            }
        };
        let mut div = |x1: f64| {
            let (g, log_rest, lw) = split(x1);
            let dens = self.x1_log_pdf(x1).exp();
            if kl {
                let rest = if log_rest == f64::NEG_INFINITY {
                    0.0
                } else {
                    -log_rest.exp() * lw
                };
                dens * (g * r.ln() + rest)
            } else {
                dens * (g * r.powf(alpha - 1.0) + ((1.0 - alpha) * lw + log_rest).exp())
            }
        };
        let value = quad.integrate(&mut div, lo, hi)?.value;
        let mass = quad
            .integrate(
                |x1| {
                    let (g, log_rest, lw) = split(x1);
                    self.x1_log_pdf(x1).exp() * (g / r + (lw + log_rest).exp())
                },
                lo,
                hi,
            )?
            .value;
        let d = if kl {
            value.max(0.0)
        } else {
            ((value - 1.0) / (alpha * (alpha - 1.0))).max(0.0)
        };
        Ok((d, mass))
    }
}

/// Per-step budget check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepCertificate {
    pub step: usize,
    /// `F_t` for the region construction, `b_t` for the conditional one.
    pub statistic: f64,
    pub divergence: f64,
    pub analytic_bound: f64,
    pub total_mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdversarialConfig {
    pub policy: PolicyKind,
    pub mu: [f64; 2],
    pub alpha: f64,
    pub epsilon: f64,
    pub horizon: usize,
    /// Quantile level of LinBUCB and of the conditional construction.
    pub gamma: f64,
    /// Overrides `choose_r`; `Some(1.0)` gives the unperturbed control.
    pub r: Option<f64>,
    pub noise_sd: f64,
    pub confidence: ConfidenceParams,
    /// Certify the budget at every step by quadrature.
    pub certify: bool,
}

impl AdversarialConfig {
    pub fn new(policy: PolicyKind, alpha: f64, epsilon: f64, horizon: usize) -> Self {
        Self {
            policy,
            mu: [1.0, 0.0],
            alpha,
            epsilon,
            horizon,
            gamma: 0.9,
            r: None,
            noise_sd: 0.5,
            confidence: ConfidenceParams {
                nu: 0.5,
                lambda: 1.0,
                s_bound: 1.0,
                delta: 0.05,
            },
            certify: true,
        }
    }

    pub fn resolve_r(&self) -> Result<f64> {
        if let Some(r) = self.r {
            if !(r >= 1.0 && r.is_finite()) {
                return Err(invalid(format!("r must be at least 1, got {r}")));
            }
            return Ok(r);
        }
        match self.policy {
            PolicyKind::LinTS => choose_r(self.alpha, self.epsilon, None),
            PolicyKind::LinBUCB => choose_r(self.alpha, self.epsilon, Some(self.gamma)),
        }
    }

    fn construction(&self, r: f64) -> Construction {
        match self.policy {
            PolicyKind::LinTS => Construction::TsRegionReweight { r },
            PolicyKind::LinBUCB => Construction::BucbConditionalReweight { r, gamma: self.gamma },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeResult {
    pub trace: RegretTrace,
    pub r: f64,
    pub certificates: Vec<StepCertificate>,
    /// Largest certified divergence over the episode.
    pub max_divergence: f64,
    /// Every step's divergence is within `ε` and below the analytic bound.
    pub budget_held: bool,
}

/// One adversarial episode on arms `{(1,0), (0,1)}` with `θ* = μ`.
pub fn run_adversarial_episode(config: &AdversarialConfig, seed: u64) -> Result<EpisodeResult> {
    if !(config.mu[0] > config.mu[1]) {
        return Err(invalid("the first arm must be strictly better: mu1 > mu2"));
    }
    let r = config.resolve_r()?;
    let construction = config.construction(r);
    let mut pcfg = PolicyConfig::new(config.policy, Inference::Exact, config.confidence, config.horizon);
    if config.policy == PolicyKind::LinBUCB {
        pcfg = pcfg.with_gamma(config.gamma);
    }
    let mut policy = Policy::new(pcfg, 2)?;
    let arms = [vec![1.0, 0.0], vec![0.0, 1.0]];
    let gap = config.mu[0] - config.mu[1];
    let mut adv_rng = substream(seed, stream::ADVERSARY);
    let mut noise_rng = substream(seed, stream::NOISE);
    let mut trace = RegretTrace::with_capacity(config.horizon);
    let mut certificates = Vec::with_capacity(if config.certify { config.horizon } else { 0 });
    let bound = analytic_budget(config.alpha, r);
    let mut max_divergence: f64 = 0.0;
    let mut budget_held = true;
    for t in 0..config.horizon {
        let wrap = |e: Error| Error::Run {
            seed,
            policy: format!("adversarial {}", config.policy_label()),
            step: t,
            source: Box::new(e),
        };
        let post = policy.posterior().map_err(wrap)?;
        let pair = AdversarialPosteriorPair::from_posterior(&post, construction).map_err(wrap)?;
        let scores = match construction {
            Construction::TsRegionReweight { .. } => {
                let x = pair.sample(&mut adv_rng).map_err(wrap)?;
                vec![x[0], x[1]]
            }
            Construction::BucbConditionalReweight { .. } => {
                let (a, b) = pair.bucb_quantiles().map_err(wrap)?;
                vec![a, b]
            }
        };
        let chosen = argmax(&scores).expect("two arms");
        if config.certify {
            let (d, mass) = pair.divergence_by_quadrature(config.alpha).map_err(wrap)?;
            max_divergence = max_divergence.max(d);
            if d > config.epsilon || d > bound + 1e-6 || (mass - 1.0).abs() > 1e-9 {
                budget_held = false;
            }
            certificates.push(StepCertificate {
                step: t + 1,
                statistic: pair.b_t.unwrap_or(pair.f_t),
                divergence: d,
                analytic_bound: bound,
                total_mass: mass,
            });
        }
        let reward = config.mu[chosen] + config.noise_sd * standard_normal(&mut noise_rng);
        trace.push(if chosen == 0 { 0.0 } else { gap });
        policy.update(&arms[chosen], reward).map_err(wrap)?;
    }
    Ok(EpisodeResult {
        trace,
        r,
        certificates,
        max_divergence,
        budget_held,
    })
}

impl AdversarialConfig {
    fn policy_label(&self) -> &'static str {
        match self.policy {
            PolicyKind::LinTS => "LinTS",
            PolicyKind::LinBUCB => "LinBUCB",
        }
    }
}
