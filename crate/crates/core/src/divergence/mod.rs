//! Tsallis α-divergence between continuous distributions,
//! `D_α(P₁, P₂) = (∫ p₁^α p₂^{1−α} − 1) / (α(α−1))`, with the KL limits
//! `D_1 = KL(P₁‖P₂)` and `D_0 = KL(P₂‖P₁)`.

pub mod bounds;
pub mod verify;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dense::{dot, Cholesky, Matrix};
use crate::error::{ensure_dim, ensure_finite, invalid, Error, Result};
use crate::quadrature::Quadrature;
use crate::rng::{fill_standard_normal, open_unit, substream, truncated_standard_normal, Rng};
use crate::special::{norm_cdf, norm_log_pdf, norm_ppf, norm_sf};

/// Half-width, in standard deviations, of the window integrated numerically.
pub const TAIL_SIGMAS: f64 = 12.0;

/// Default absolute tolerance of the numeric integrator.
pub const QUADRATURE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MethodKind {
    ClosedFormGaussian,
    Quadrature1D,
    MonteCarlo,
}

impl fmt::Display for MethodKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::ClosedFormGaussian => "closed-form",
            Self::Quadrature1D => "quadrature",
            Self::MonteCarlo => "monte-carlo",
        })
    }
}

/// How to evaluate a divergence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    /// Exact formula; available for Gaussian pairs and for piecewise
    /// reweightings of a common Gaussian base.
    ClosedFormGaussian,
    /// Adaptive Gauss–Kronrod on a 1-D window.
    Quadrature1D { tolerance: f64 },
    /// Importance estimate with draws from `P₁` (from `P₂` when `α = 0`).
    MonteCarlo { samples: usize, seed: u64 },
}

impl Method {
    pub fn quadrature() -> Self {
        Self::Quadrature1D {
            tolerance: QUADRATURE_TOL,
        }
    }

    pub fn kind(&self) -> MethodKind {
        match self {
            Self::ClosedFormGaussian => MethodKind::ClosedFormGaussian,
            Self::Quadrature1D { .. } => MethodKind::Quadrature1D,
            Self::MonteCarlo { .. } => MethodKind::MonteCarlo,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceResult {
    pub alpha: f64,
    /// `+∞` when the defining integral diverges.
    pub value: f64,
    pub method: MethodKind,
    /// Quadrature error bound or Monte-Carlo standard error.
    pub error_estimate: f64,
}

impl DivergenceResult {
    pub fn is_infinite(&self) -> bool {
        self.value == f64::INFINITY
    }

    fn infinite(alpha: f64, method: MethodKind) -> Self {
        Self {
            alpha,
            value: f64::INFINITY,
            method,
            error_estimate: 0.0,
        }
    }
}

/// Multivariate normal `N(mean, cov)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Gaussian {
    mean: Vec<f64>,
    cov: Matrix,
    chol: Cholesky,
    precision: Matrix,
}

impl Gaussian {
    pub fn new(mean: Vec<f64>, cov: Matrix) -> Result<Self> {
        ensure_dim(cov.dim(), mean.len())?;
        ensure_finite(&mean, "mean")?;
        let chol = Cholesky::new(&cov)?;
        let precision = chol.inverse();
        Ok(Self {
            mean,
            cov,
            chol,
            precision,
        })
    }

    pub fn univariate(mean: f64, sd: f64) -> Result<Self> {
        if !(sd > 0.0 && sd.is_finite()) {
            return Err(invalid(format!("standard deviation must be positive, got {sd}")));
        }
        Self::new(vec![mean], Matrix::from_diagonal(&[sd * sd]))
    }

    pub fn standard(dim: usize) -> Self {
        Self::new(vec![0.0; dim], Matrix::identity(dim)).expect("identity is SPD")
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn cov(&self) -> &Matrix {
        &self.cov
    }

    pub fn precision(&self) -> &Matrix {
        &self.precision
    }

    pub fn log_det_cov(&self) -> f64 {
        self.chol.log_det()
    }

    pub fn ln_pdf(&self, x: &[f64]) -> f64 {
        let diff: Vec<f64> = x.iter().zip(&self.mean).map(|(a, b)| a - b).collect();
        let d = self.dim() as f64;
        -0.5 * (self.precision.quad_form(&diff) + self.log_det_cov() + d * (2.0 * std::f64::consts::PI).ln())
    }

    pub fn sample(&self, rng: &mut Rng) -> Vec<f64> {
        let mut z = vec![0.0; self.dim()];
        fill_standard_normal(rng, &mut z);
        let lz = self.chol.mul_lower(&z);
        self.mean.iter().zip(lz).map(|(m, v)| m + v).collect()
    }

    /// Law of `a + B X`.
    pub fn affine(&self, a: &[f64], b: &Matrix) -> Result<Self> {
        ensure_dim(self.dim(), a.len())?;
        ensure_dim(self.dim(), b.dim())?;
        let mean: Vec<f64> = b.mul_vec(&self.mean).iter().zip(a).map(|(m, a)| m + a).collect();
        let mut bt = Matrix::zeros(b.dim());
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                bt.set(i, j, b.get(j, i));
            }
        }
        let mut cov = b.mul(&self.cov).mul(&bt);
        cov.symmetrize();
        Self::new(mean, cov)
    }

    /// Law of `uᵀX`.
    pub fn project(&self, u: &[f64]) -> Result<Self> {
        ensure_dim(self.dim(), u.len())?;
        let var = self.cov.quad_form(u);
        Self::univariate(dot(u, &self.mean), var.sqrt())
    }

    fn sd_1d(&self) -> f64 {
        self.cov.get(0, 0).sqrt()
    }
}

/// A 1-D Gaussian `N(mean, sd²)` whose density is multiplied by a constant
/// weight on each interval between consecutive breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseGaussian {
    mean: f64,
    sd: f64,
    breaks: Vec<f64>,
    weights: Vec<f64>,
    // Base-law mass of each piece.
    masses: Vec<f64>,
}

impl PiecewiseGaussian {
    /// `raw_weights` has one more entry than `breaks`; it is rescaled so the
    /// density integrates to one.
    pub fn new(mean: f64, sd: f64, breaks: Vec<f64>, raw_weights: Vec<f64>) -> Result<Self> {
        if !(sd > 0.0 && sd.is_finite()) || !mean.is_finite() {
            return Err(invalid(format!("invalid base N({mean}, {sd}²)")));
        }
        if raw_weights.len() != breaks.len() + 1 {
            return Err(invalid("need exactly one weight per piece"));
        }
        if breaks.windows(2).any(|w| !(w[0] < w[1])) || breaks.iter().any(|b| !b.is_finite()) {
            return Err(invalid("breakpoints must be finite and strictly increasing"));
        }
        if raw_weights.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(invalid("weights must be positive and finite"));
        }
        let masses = piece_masses(mean, sd, &breaks);
        let total: f64 = raw_weights.iter().zip(&masses).map(|(w, m)| w * m).sum();
        if !(total > 0.0) {
            return Err(Error::Degenerate("reweighted density has no mass".into()));
        }
        let weights = raw_weights.iter().map(|w| w / total).collect();
        Ok(Self {
            mean,
            sd,
            breaks,
            weights,
            masses,
        })
    }

    /// Plain `N(mean, sd²)` as a single piece.
    pub fn base_only(mean: f64, sd: f64) -> Result<Self> {
        Self::new(mean, sd, Vec::new(), vec![1.0])
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn sd(&self) -> f64 {
        self.sd
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Probability of each piece under this law.
    pub fn piece_probabilities(&self) -> Vec<f64> {
        self.weights.iter().zip(&self.masses).map(|(w, m)| w * m).collect()
    }

    fn piece_of(&self, x: f64) -> usize {
        self.breaks.partition_point(|&b| b <= x)
    }

    pub fn ln_pdf(&self, x: f64) -> f64 {
        self.weights[self.piece_of(x)].ln() + norm_log_pdf((x - self.mean) / self.sd) - self.sd.ln()
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let k = self.piece_of(x);
        let below: f64 = (0..k).map(|i| self.weights[i] * self.masses[i]).sum();
        let lo = if k == 0 { f64::NEG_INFINITY } else { self.breaks[k - 1] };
        below + self.weights[k] * base_mass(self.mean, self.sd, lo, x)
    }

    /// `p`-quantile, exact up to the normal quantile function.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(invalid(format!("quantile level must lie in (0, 1), got {p}")));
        }
        let probs = self.piece_probabilities();
        let mut acc = 0.0;
        for (k, &pk) in probs.iter().enumerate() {
            if acc + pk >= p || k + 1 == probs.len() {
                // Remaining base mass to cover inside piece k.
                let need = ((p - acc) / self.weights[k]).max(0.0);
                let lo = if k == 0 { f64::NEG_INFINITY } else { self.breaks[k - 1] };
                let z_lo = (lo - self.mean) / self.sd;
                let z = if z_lo > 0.0 {
                    -norm_ppf((norm_sf(z_lo) - need).max(f64::MIN_POSITIVE))
                } else {
                    norm_ppf((norm_cdf(z_lo) + need).min(1.0))
                };
                let hi = if k < self.breaks.len() {
                    self.breaks[k]
                } else {
                    f64::INFINITY
                };
                return Ok((self.mean + self.sd * z).clamp(lo, hi));
            }
            acc += pk;
        }
        unreachable!("probabilities sum to one")
    }

    pub fn sample(&self, rng: &mut Rng) -> f64 {
        let probs = self.piece_probabilities();
        let u = open_unit(rng);
        let mut acc = 0.0;
        let mut k = probs.len() - 1;
        for (i, p) in probs.iter().enumerate() {
            acc += p;
            if u < acc {
                k = i;
                break;
            }
        }
        let lo = if k == 0 {
            f64::NEG_INFINITY
        } else {
            (self.breaks[k - 1] - self.mean) / self.sd
        };
        let hi = if k < self.breaks.len() {
            (self.breaks[k] - self.mean) / self.sd
        } else {
            f64::INFINITY
        };
        self.mean + self.sd * truncated_standard_normal(rng, lo, hi)
    }

    /// Law of `a + b X` for `b ≠ 0`.
    pub fn affine(&self, a: f64, b: f64) -> Result<Self> {
        if b == 0.0 || !b.is_finite() {
            return Err(invalid("affine scale must be non-zero"));
        }
        let mut breaks: Vec<f64> = self.breaks.iter().map(|x| a + b * x).collect();
        let mut weights = self.weights.clone();
        if b < 0.0 {
            breaks.reverse();
            weights.reverse();
        }
        Self::new(a + b * self.mean, b.abs() * self.sd, breaks, weights)
    }

    fn same_base(&self, other: &Self) -> bool {
        self.mean == other.mean && self.sd == other.sd
    }
}

fn base_mass(mean: f64, sd: f64, lo: f64, hi: f64) -> f64 {
    let (a, b) = ((lo - mean) / sd, (hi - mean) / sd);
    if a >= 0.0 {
        norm_sf(a) - norm_sf(b)
    } else {
        norm_cdf(b) - norm_cdf(a)
    }
}

fn piece_masses(mean: f64, sd: f64, breaks: &[f64]) -> Vec<f64> {
    let mut edges = Vec::with_capacity(breaks.len() + 2);
    edges.push(f64::NEG_INFINITY);
    edges.extend_from_slice(breaks);
    edges.push(f64::INFINITY);
    edges.windows(2).map(|w| base_mass(mean, sd, w[0], w[1])).collect()
}

/// A distribution known only through its sampler and log-density.
pub trait BlackBox: Send + Sync {
    fn dim(&self) -> usize;
    fn ln_pdf(&self, x: &[f64]) -> f64;
    fn sample(&self, rng: &mut Rng) -> Vec<f64>;
    /// Finite window holding essentially all mass, for 1-D quadrature.
    fn window(&self) -> Option<(f64, f64)> {
        None
    }
    /// Points where the density is discontinuous.
    fn breaks(&self) -> Vec<f64> {
        Vec::new()
    }
}

#[derive(Clone)]
pub enum Distribution {
    Gaussian(Gaussian),
    Piecewise(PiecewiseGaussian),
    Custom(Arc<dyn BlackBox>),
}

impl fmt::Debug for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Gaussian(g) => f.debug_tuple("Gaussian").field(g).finish(),
            Self::Piecewise(p) => f.debug_tuple("Piecewise").field(p).finish(),
            Self::Custom(c) => write!(f, "Custom(dim = {})", c.dim()),
        }
    }
}

impl From<Gaussian> for Distribution {
    fn from(g: Gaussian) -> Self {
        Self::Gaussian(g)
    }
}

impl From<PiecewiseGaussian> for Distribution {
    fn from(p: PiecewiseGaussian) -> Self {
        Self::Piecewise(p)
    }
}

impl Distribution {
    pub fn dim(&self) -> usize {
        match self {
            Self::Gaussian(g) => g.dim(),
            Self::Piecewise(_) => 1,
            Self::Custom(c) => c.dim(),
        }
    }

    pub fn ln_pdf(&self, x: &[f64]) -> f64 {
        match self {
            Self::Gaussian(g) => g.ln_pdf(x),
            Self::Piecewise(p) => p.ln_pdf(x[0]),
            Self::Custom(c) => c.ln_pdf(x),
        }
    }

    pub fn sample(&self, rng: &mut Rng) -> Vec<f64> {
        match self {
            Self::Gaussian(g) => g.sample(rng),
            Self::Piecewise(p) => vec![p.sample(rng)],
            Self::Custom(c) => c.sample(rng),
        }
    }

    // (mean, sd) of the Gaussian base of a 1-D law, when there is one.
    fn base_1d(&self) -> Option<(f64, f64)> {
        match self {
            Self::Gaussian(g) if g.dim() == 1 => Some((g.mean[0], g.sd_1d())),
            Self::Piecewise(p) => Some((p.mean, p.sd)),
            _ => None,
        }
    }

    fn as_piecewise(&self) -> Option<PiecewiseGaussian> {
        match self {
            Self::Gaussian(g) if g.dim() == 1 => PiecewiseGaussian::base_only(g.mean[0], g.sd_1d()).ok(),
            Self::Piecewise(p) => Some(p.clone()),
            _ => None,
        }
    }

    fn window_1d(&self) -> Option<(f64, f64)> {
        match self {
            Self::Custom(c) => c.window(),
            _ => self.base_1d().map(|(m, s)| (m - TAIL_SIGMAS * s, m + TAIL_SIGMAS * s)),
        }
    }

    fn breaks_1d(&self) -> Vec<f64> {
        match self {
            Self::Gaussian(_) => Vec::new(),
            Self::Piecewise(p) => p.breaks.clone(),
            Self::Custom(c) => c.breaks(),
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() {
        return Err(invalid(format!("alpha must be finite, got {alpha}")));
    }
    Ok(())
}

fn is_kl(alpha: f64) -> bool {
    alpha == 0.0 || alpha == 1.0
}

/// `(exp(log_integral) − 1) / (α(α−1))`, accurate when the integral is near 1.
pub fn from_log_integral(alpha: f64, log_integral: f64) -> f64 {
    (log_integral.exp_m1() / (alpha * (alpha - 1.0))).max(0.0)
}

/// Evaluate `D_α(P₁, P₂)`.
pub fn alpha_divergence(p1: &Distribution, p2: &Distribution, alpha: f64, method: Method) -> Result<DivergenceResult> {
    check_alpha(alpha)?;
    ensure_dim(p1.dim(), p2.dim())?;
    match method {
        Method::ClosedFormGaussian => closed_form(p1, p2, alpha),
        Method::Quadrature1D { tolerance } => quadrature_1d(p1, p2, alpha, tolerance),
        Method::MonteCarlo { samples, seed } => monte_carlo(p1, p2, alpha, samples, seed),
    }
}

fn closed_form(p1: &Distribution, p2: &Distribution, alpha: f64) -> Result<DivergenceResult> {
    if let (Distribution::Gaussian(g1), Distribution::Gaussian(g2)) = (p1, p2) {
        return Ok(gaussian_closed_form(g1, g2, alpha));
    }
    if let (Some(a), Some(b)) = (p1.as_piecewise(), p2.as_piecewise()) {
        if a.same_base(&b) {
            return Ok(piecewise_closed_form(&a, &b, alpha));
        }
    }
    Err(invalid(
        "closed form needs two Gaussians or two reweightings of one Gaussian base",
    ))
}

/// Closed-form `D_α` between Gaussians. Returns an infinite result when the
/// blended precision `αΣ₁⁻¹ + (1−α)Σ₂⁻¹` is not positive definite.
pub fn gaussian_closed_form(g1: &Gaussian, g2: &Gaussian, alpha: f64) -> DivergenceResult {
    let method = MethodKind::ClosedFormGaussian;
    if alpha == 1.0 || alpha == 0.0 {
        let (a, b) = if alpha == 1.0 { (g1, g2) } else { (g2, g1) };
        return DivergenceResult {
            alpha,
            value: gaussian_kl(a, b).max(0.0),
            method,
            error_estimate: 0.0,
        };
    }
    let d = g1.dim();
    let mut blend = Matrix::zeros(d);
    for i in 0..d {
        for j in 0..d {
            blend.set(
                i,
                j,
                alpha * g1.precision.get(i, j) + (1.0 - alpha) * g2.precision.get(i, j),
            );
        }
    }
    let chol = match Cholesky::new(&blend) {
        Ok(c) => c,
        Err(_) => return DivergenceResult::infinite(alpha, method),
    };
    let delta: Vec<f64> = g1.mean.iter().zip(&g2.mean).map(|(a, b)| a - b).collect();
    let p2d = g2.precision.mul_vec(&delta);
    let y = chol.solve(&p2d);
    let p1y = g1.precision.mul_vec(&y);
    let mahal = dot(&delta, &p1y);
    let log_integral = -0.5 * chol.log_det()
        - 0.5 * alpha * g1.log_det_cov()
        - 0.5 * (1.0 - alpha) * g2.log_det_cov()
        - 0.5 * alpha * (1.0 - alpha) * mahal;
    DivergenceResult {
        alpha,
        value: from_log_integral(alpha, log_integral),
        method,
        error_estimate: 0.0,
    }
}

/// `KL(N₁ ‖ N₂)`.
pub fn gaussian_kl(g1: &Gaussian, g2: &Gaussian) -> f64 {
    let d = g1.dim();
    let trace: f64 = (0..d).map(|i| dot(g2.precision.row(i), &column(&g1.cov, i))).sum();
    let delta: Vec<f64> = g1.mean.iter().zip(&g2.mean).map(|(a, b)| a - b).collect();
    0.5 * (trace + g2.precision.quad_form(&delta) - d as f64 + g2.log_det_cov() - g1.log_det_cov())
}

fn column(m: &Matrix, j: usize) -> Vec<f64> {
    (0..m.dim()).map(|i| m.get(i, j)).collect()
}

fn piecewise_closed_form(a: &PiecewiseGaussian, b: &PiecewiseGaussian, alpha: f64) -> DivergenceResult {
    let mut edges: Vec<f64> = a.breaks.iter().chain(&b.breaks).copied().collect();
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    let mut value = 0.0;
    let mut lo = f64::NEG_INFINITY;
    for k in 0..=edges.len() {
        let hi = if k < edges.len() { edges[k] } else { f64::INFINITY };
        let mid = midpoint(lo, hi);
        let (wa, wb) = (a.weights[a.piece_of(mid)], b.weights[b.piece_of(mid)]);
        let mass = base_mass(a.mean, a.sd, lo, hi);
        value += mass
            * if alpha == 1.0 {
                wa * (wa / wb).ln()
            } else if alpha == 0.0 {
                wb * (wb / wa).ln()
            } else {
                wa.powf(alpha) * wb.powf(1.0 - alpha)
            };
        lo = hi;
    }
    let value = if is_kl(alpha) {
        value.max(0.0)
    } else {
        ((value - 1.0) / (alpha * (alpha - 1.0))).max(0.0)
    };
    DivergenceResult {
        alpha,
        value,
        method: MethodKind::ClosedFormGaussian,
        error_estimate: 1e-15 * (1.0 + value),
    }
}

fn midpoint(lo: f64, hi: f64) -> f64 {
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi),
        (true, false) => lo + 1.0,
        (false, true) => hi - 1.0,
        (false, false) => 0.0,
    }
}

fn quadrature_1d(p1: &Distribution, p2: &Distribution, alpha: f64, tol: f64) -> Result<DivergenceResult> {
    let method = MethodKind::Quadrature1D;
    if p1.dim() != 1 {
        return Err(invalid("quadrature is only available in one dimension"));
    }
    let (w1, w2) = match (p1.window_1d(), p2.window_1d()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(invalid("quadrature needs an integration window for both laws")),
    };
    let mut lo = w1.0.min(w2.0);
    let mut hi = w1.1.max(w2.1);
    if !is_kl(alpha) {
        if let (Some((m1, s1)), Some((m2, s2))) = (p1.base_1d(), p2.base_1d()) {
            // The integrand's tails follow the blended Gaussian.
            let prec = alpha / (s1 * s1) + (1.0 - alpha) / (s2 * s2);
            if prec <= 0.0 {
                return Ok(DivergenceResult::infinite(alpha, method));
            }
            let m = (alpha * m1 / (s1 * s1) + (1.0 - alpha) * m2 / (s2 * s2)) / prec;
            let s = prec.sqrt().recip();
            lo = lo.min(m - TAIL_SIGMAS * s);
            hi = hi.max(m + TAIL_SIGMAS * s);
        }
    }
    let mut points = vec![lo];
    let mut inner: Vec<f64> = p1
        .breaks_1d()
        .into_iter()
        .chain(p2.breaks_1d())
        .filter(|b| *b > lo && *b < hi)
        .collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    points.extend(inner);
    points.push(hi);

    let quad = Quadrature::with_abs_tol(tol);
    let integrand = |x: f64| {
        let (l1, l2) = (p1.ln_pdf(&[x]), p2.ln_pdf(&[x]));
        if alpha == 1.0 {
            if l1 == f64::NEG_INFINITY {
                0.0
            } else {
                l1.exp() * (l1 - l2)
            }
        } else if alpha == 0.0 {
            if l2 == f64::NEG_INFINITY {
                0.0
            } else {
                l2.exp() * (l2 - l1)
            }
        } else {
            let e = alpha * l1 + (1.0 - alpha) * l2;
            if e.is_nan() {
                0.0
            } else {
                e.exp()
            }
        }
    };
    let r = quad.integrate_with_breaks(integrand, &points)?;
    if is_kl(alpha) {
        return Ok(DivergenceResult {
            alpha,
            value: r.value.max(0.0),
            method,
            error_estimate: r.abs_error,
        });
    }
    let denom = alpha * (alpha - 1.0);
    Ok(DivergenceResult {
        alpha,
        value: ((r.value - 1.0) / denom).max(0.0),
        method,
        error_estimate: r.abs_error / denom.abs(),
    })
}

fn monte_carlo(
    p1: &Distribution,
    p2: &Distribution,
    alpha: f64,
    samples: usize,
    seed: u64,
) -> Result<DivergenceResult> {
    if samples < 2 {
        return Err(invalid("Monte Carlo needs at least two samples"));
    }
    let mut rng = substream(seed, crate::rng::stream::VERIFY);
    // Draw from P₂ for the α = 0 limit, from P₁ otherwise.
    let (src, other) = if alpha == 0.0 { (p2, p1) } else { (p1, p2) };
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..samples {
        let x = src.sample(&mut rng);
        let log_ratio = src.ln_pdf(&x) - other.ln_pdf(&x);
        let v = if is_kl(alpha) {
            log_ratio
        } else {
            ((alpha - 1.0) * log_ratio).exp()
        };
        sum += v;
        sum_sq += v * v;
    }
    let n = samples as f64;
    let mean = sum / n;
    let var = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
    let se = (var / n).sqrt();
    let (value, error_estimate) = if is_kl(alpha) {
        (mean, se)
    } else {
        let denom = alpha * (alpha - 1.0);
        ((mean - 1.0) / denom, se / denom.abs())
    };
    Ok(DivergenceResult {
        alpha,
        value,
        method: MethodKind::MonteCarlo,
        error_estimate,
    })
}
