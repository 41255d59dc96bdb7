//! Gaussian posterior over θ and Monte-Carlo certificates for the
//! anti-concentration and concentration properties of its standardized law.

use crate::dense::{dot, Cholesky, Matrix};
use crate::error::{ensure_dim, ensure_finite, invalid, Result};
use crate::rng::{fill_standard_normal, unit_vector, Rng};
use crate::special::{norm_ppf, norm_sf};

/// Covariance shape of the posterior, before scaling by `scale²`.
#[derive(Debug, Clone, PartialEq)]
pub enum CovarianceShape {
    /// Dense `V⁻¹`.
    FullInverse(Matrix),
    /// Diagonal `D⁻¹`.
    DiagonalInverse(Vec<f64>),
}

impl CovarianceShape {
    pub fn dim(&self) -> usize {
        match self {
            Self::FullInverse(m) => m.dim(),
            Self::DiagonalInverse(d) => d.len(),
        }
    }

    /// `xᵀ C x`.
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        match self {
            Self::FullInverse(m) => m.quad_form(x),
            Self::DiagonalInverse(d) => d.iter().zip(x).map(|(c, x)| c * x * x).sum(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Factor {
    Full(Cholesky),
    Diag(Vec<f64>),
}

/// `N(mean, scale² · C)` with the Cholesky factor of `C` cached.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPosterior {
    mean: Vec<f64>,
    scale: f64,
    shape: CovarianceShape,
    factor: Factor,
}

impl GaussianPosterior {
    pub fn new(mean: Vec<f64>, scale: f64, shape: CovarianceShape) -> Result<Self> {
        ensure_dim(shape.dim(), mean.len())?;
        ensure_finite(&mean, "mean")?;
        if !(scale >= 0.0 && scale.is_finite()) {
            return Err(invalid(format!("scale must be non-negative, got {scale}")));
        }
        let factor = match &shape {
            CovarianceShape::FullInverse(m) => Factor::Full(Cholesky::new(m)?),
            CovarianceShape::DiagonalInverse(d) => {
                if let Some(i) = d.iter().position(|v| !(*v > 0.0 && v.is_finite())) {
                    return Err(invalid(format!("diagonal covariance entry {i} is {}", d[i])));
                }
                Factor::Diag(d.iter().map(|v| v.sqrt()).collect())
            }
        };
        Ok(Self {
            mean,
            scale,
            shape,
            factor,
        })
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn shape(&self) -> &CovarianceShape {
        &self.shape
    }

    /// Map a standard-normal vector `z` to `mean + scale · L z`.
    pub fn transform(&self, z: &[f64]) -> Vec<f64> {
        if self.scale == 0.0 {
            return self.mean.clone();
        }
        let lz = match &self.factor {
            Factor::Full(c) => c.mul_lower(z),
            Factor::Diag(s) => s.iter().zip(z).map(|(s, z)| s * z).collect(),
        };
        self.mean.iter().zip(lz).map(|(m, v)| m + self.scale * v).collect()
    }

    /// One posterior draw. Consumes exactly `dim` normals from `rng`.
    pub fn sample(&self, rng: &mut Rng) -> Vec<f64> {
        let mut z = vec![0.0; self.dim()];
        fill_standard_normal(rng, &mut z);
        self.transform(&z)
    }

    /// `‖x‖_C = √(xᵀ C x)`.
    pub fn arm_norm(&self, arm: &[f64]) -> f64 {
        self.shape.quad_form(arm).max(0.0).sqrt()
    }

    /// Closed-form `γ`-quantile of `xᵀθ`.
    pub fn arm_value_quantile(&self, arm: &[f64], gamma: f64) -> Result<f64> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(invalid(format!("gamma must lie in (0, 1), got {gamma}")));
        }
        ensure_dim(self.dim(), arm.len())?;
        Ok(self.arm_value_quantile_z(arm, norm_ppf(gamma)))
    }

    /// `xᵀ mean + z · scale · ‖x‖_C` for a precomputed normal quantile `z`.
    pub fn arm_value_quantile_z(&self, arm: &[f64], z: f64) -> f64 {
        let centre = dot(arm, &self.mean);
        if z == 0.0 {
            return centre;
        }
        centre + z * self.scale * self.arm_norm(arm)
    }
}

/// A sampler of the standardized variable `η = scale⁻¹ V^{1/2}(θ̃ − mean)`.
pub trait StandardizedSampler: Sync {
    fn dim(&self) -> usize;
    fn sample_into(&self, rng: &mut Rng, out: &mut [f64]);
}

/// `η ~ N(0, I)`, the law of every exact Gaussian posterior.
#[derive(Debug, Clone, Copy)]
pub struct StandardNormal {
    pub dim: usize,
}

impl StandardizedSampler for StandardNormal {
    fn dim(&self) -> usize {
        self.dim
    }

    fn sample_into(&self, rng: &mut Rng, out: &mut [f64]) {
        fill_standard_normal(rng, out);
    }
}

/// `a + s · η` for an inner sampler `η`.
pub struct Affine<S> {
    pub inner: S,
    pub shift: Vec<f64>,
    pub factor: f64,
}

impl<S: StandardizedSampler> StandardizedSampler for Affine<S> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn sample_into(&self, rng: &mut Rng, out: &mut [f64]) {
        self.inner.sample_into(rng, out);
        for (o, a) in out.iter_mut().zip(&self.shift) {
            *o = a + self.factor * *o;
        }
    }
}

/// Minimum sample count accepted by the certificates.
pub const MIN_CERT_SAMPLES: usize = 1_000;

// Two-sided 99% normal quantile.
fn z99() -> f64 {
    norm_ppf(0.995)
}

/// Empirical `q`-quantile of `values` (reorders the slice).
pub fn empirical_quantile(values: &mut [f64], q: f64) -> f64 {
    assert!(!values.is_empty());
    let n = values.len();
    let k = ((q * n as f64).ceil() as usize).clamp(1, n) - 1;
    let (_, v, _) = values.select_nth_unstable_by(k, f64::total_cmp);
    *v
}

/// Asymptotic standard error of an empirical `q`-quantile, given the density
/// of the law at that quantile.
pub fn quantile_std_error(q: f64, n: usize, density: f64) -> f64 {
    (q * (1.0 - q) / n as f64).sqrt() / density
}

/// Monte-Carlo evidence that a standardized law is well behaved.
#[derive(Debug, Clone, PartialEq)]
pub struct WellBehavedCertificate {
    /// Smallest estimated `P(uᵀη ≥ 1)` over the sampled directions.
    pub kappa1_hat: f64,
    /// 99% binomial half-width of `kappa1_hat`.
    pub ci_halfwidth: f64,
    /// Type-I constants found feasible on the candidate grid, if any.
    pub concentration1: Option<(f64, f64)>,
    /// `(δ, ĉ₁(δ))` estimates.
    pub c_hat1: Vec<(f64, f64)>,
    pub samples: usize,
    pub directions: usize,
}

fn check_budget(samples: usize, directions: usize) -> Result<()> {
    if samples < MIN_CERT_SAMPLES {
        return Err(invalid(format!(
            "at least {MIN_CERT_SAMPLES} samples are needed, got {samples}"
        )));
    }
    if directions == 0 {
        return Err(invalid("at least one direction is needed"));
    }
    Ok(())
}

fn projections(
    sampler: &dyn StandardizedSampler,
    directions: &[Vec<f64>],
    samples: usize,
    rng: &mut Rng,
) -> Vec<Vec<f64>> {
    let mut eta = vec![0.0; sampler.dim()];
    let mut out = vec![Vec::with_capacity(samples); directions.len()];
    for _ in 0..samples {
        sampler.sample_into(rng, &mut eta);
        for (u, col) in directions.iter().zip(out.iter_mut()) {
            col.push(dot(u, &eta));
        }
    }
    out
}

/// Estimate `κ₁ = min_u P(uᵀη ≥ 1)` over `directions` random unit vectors.
///
/// Finitely many directions certify only a sampled minimum; for
/// rotation-invariant laws one direction is exact.
pub fn certify_anti_concentration(
    sampler: &dyn StandardizedSampler,
    directions: usize,
    samples: usize,
    rng: &mut Rng,
) -> Result<WellBehavedCertificate> {
    check_budget(samples, directions)?;
    let dirs: Vec<Vec<f64>> = (0..directions).map(|_| unit_vector(rng, sampler.dim())).collect();
    certify_anti_concentration_along(sampler, &dirs, samples, rng)
}

/// As [`certify_anti_concentration`], along caller-chosen unit directions.
pub fn certify_anti_concentration_along(
    sampler: &dyn StandardizedSampler,
    dirs: &[Vec<f64>],
    samples: usize,
    rng: &mut Rng,
) -> Result<WellBehavedCertificate> {
    check_budget(samples, dirs.len())?;
    for u in dirs {
        ensure_dim(sampler.dim(), u.len())?;
    }
    let directions = dirs.len();
    let proj = projections(sampler, dirs, samples, rng);
    let kappa1_hat = proj
        .iter()
        .map(|col| col.iter().filter(|&&v| v >= 1.0).count() as f64 / samples as f64)
        .fold(f64::INFINITY, f64::min);
    let ci_halfwidth = z99() * (kappa1_hat * (1.0 - kappa1_hat) / samples as f64).sqrt();
    Ok(WellBehavedCertificate {
        kappa1_hat,
        ci_halfwidth,
        concentration1: None,
        c_hat1: Vec::new(),
        samples,
        directions,
    })
}

/// Estimate `ĉ₁(δ)` as the largest empirical `(1−δ)`-quantile of `uᵀη`
/// over random directions.
pub fn certify_concentration_type2(
    sampler: &dyn StandardizedSampler,
    delta: f64,
    directions: usize,
    samples: usize,
    rng: &mut Rng,
) -> Result<f64> {
    check_budget(samples, directions)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(invalid(format!("delta must lie in (0, 1), got {delta}")));
    }
    let dirs: Vec<Vec<f64>> = (0..directions).map(|_| unit_vector(rng, sampler.dim())).collect();
    let mut proj = projections(sampler, &dirs, samples, rng);
    Ok(proj
        .iter_mut()
        .map(|col| empirical_quantile(col, 1.0 - delta))
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Candidate grids searched by [`certify_concentration_type1`].
pub const TYPE1_C_GRID: [f64; 9] = [0.01, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0];
pub const TYPE1_CP_GRID: [f64; 5] = [1.0, 2.0, 4.0, 8.0, 16.0];

/// `√(c d log(c′ d / δ))`, or 0 where the logarithm is not positive.
pub fn type1_radius(c: f64, cp: f64, dim: usize, delta: f64) -> f64 {
    let d = dim as f64;
    let l = (cp * d / delta).ln();
    if l <= 0.0 {
        0.0
    } else {
        (c * d * l).sqrt()
    }
}

/// Empirical `(1−δ)`-quantiles of `‖η‖` on a δ grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Type1Report {
    pub dim: usize,
    pub samples: usize,
    /// `(δ, empirical (1−δ)-quantile of ‖η‖)`.
    pub norm_quantiles: Vec<(f64, f64)>,
    /// Smallest feasible `(c₁, c₁′)` on the candidate grid.
    pub feasible: Option<(f64, f64)>,
}

impl Type1Report {
    /// Whether `(c, c′)` bounds every measured quantile.
    pub fn is_feasible(&self, c: f64, cp: f64) -> bool {
        self.norm_quantiles
            .iter()
            .all(|&(delta, q)| q <= type1_radius(c, cp, self.dim, delta))
    }
}

pub fn certify_concentration_type1(
    sampler: &dyn StandardizedSampler,
    delta_grid: &[f64],
    samples: usize,
    rng: &mut Rng,
) -> Result<Type1Report> {
    check_budget(samples, 1)?;
    if delta_grid.is_empty() || delta_grid.iter().any(|d| !(*d > 0.0 && *d < 1.0)) {
        return Err(invalid("delta grid must be non-empty with entries in (0, 1)"));
    }
    let dim = sampler.dim();
    let mut eta = vec![0.0; dim];
    let mut norms: Vec<f64> = (0..samples)
        .map(|_| {
            sampler.sample_into(rng, &mut eta);
            dot(&eta, &eta).sqrt()
        })
        .collect();
    let norm_quantiles = delta_grid
        .iter()
        .map(|&d| (d, empirical_quantile(&mut norms, 1.0 - d)))
        .collect();
    let mut report = Type1Report {
        dim,
        samples,
        norm_quantiles,
        feasible: None,
    };
    'search: for &c in &TYPE1_C_GRID {
        for &cp in &TYPE1_CP_GRID {
            if report.is_feasible(c, cp) {
                report.feasible = Some((c, cp));
                break 'search;
            }
        }
    }
    Ok(report)
}

/// Anti-concentration, Type-I and Type-II checks in one certificate.
pub fn certify_well_behaved(
    sampler: &dyn StandardizedSampler,
    delta_grid: &[f64],
    directions: usize,
    samples: usize,
    rng: &mut Rng,
) -> Result<WellBehavedCertificate> {
    let mut cert = certify_anti_concentration(sampler, directions, samples, rng)?;
    cert.concentration1 = certify_concentration_type1(sampler, delta_grid, samples, rng)?.feasible;
    cert.c_hat1 = delta_grid
        .iter()
        .map(|&d| Ok((d, certify_concentration_type2(sampler, d, directions, samples, rng)?)))
        .collect::<Result<_>>()?;
    Ok(cert)
}

/// `1 − Φ(1)`, the anti-concentration constant of the standard normal.
pub fn gaussian_kappa1() -> f64 {
    norm_sf(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    #[test]
    fn zero_scale_returns_mean() {
        let p =
            GaussianPosterior::new(vec![1.0, -2.0], 0.0, CovarianceShape::FullInverse(Matrix::identity(2))).unwrap();
        let mut rng = substream(0, 0);
        assert_eq!(p.sample(&mut rng), vec![1.0, -2.0]);
    }

    #[test]
    fn standard_moments() {
        let p = GaussianPosterior::new(vec![0.0; 2], 1.0, CovarianceShape::FullInverse(Matrix::identity(2))).unwrap();
        let mut rng = substream(1, 0);
        let n = 100_000;
        let (mut m, mut c) = ([0.0; 2], [[0.0; 2]; 2]);
        for _ in 0..n {
            let s = p.sample(&mut rng);
            for i in 0..2 {
                m[i] += s[i];
                for j in 0..2 {
                    c[i][j] += s[i] * s[j];
                }
            }
        }
        for i in 0..2 {
            assert!((m[i] / n as f64).abs() < 0.02);
            for j in 0..2 {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((c[i][j] / n as f64 - expected).abs() < 0.05);
            }
        }
    }

    #[test]
    fn diagonal_coordinate_sds() {
        let p = GaussianPosterior::new(vec![0.0; 2], 2.0, CovarianceShape::DiagonalInverse(vec![0.25, 1.0])).unwrap();
        let mut rng = substream(2, 0);
        let n = 100_000;
        let mut ss = [0.0; 2];
        for _ in 0..n {
            let s = p.sample(&mut rng);
            ss[0] += s[0] * s[0];
            ss[1] += s[1] * s[1];
        }
        let sd0 = (ss[0] / n as f64).sqrt();
        let sd1 = (ss[1] / n as f64).sqrt();
        assert!((sd0 - 1.0).abs() < 0.02 * 1.0);
        assert!((sd1 - 2.0).abs() < 0.02 * 2.0);
    }

    #[test]
    fn quantile_examples() {
        let p = GaussianPosterior::new(vec![1.0, 0.0], 1.0, CovarianceShape::FullInverse(Matrix::identity(2))).unwrap();
        assert_eq!(p.arm_value_quantile(&[0.3, 0.7], 0.5).unwrap(), 0.3);
        let q = p.arm_value_quantile(&[1.0, 0.0], 0.9).unwrap();
        assert!((q - 2.281_551_565_544_6).abs() < 1e-9);
        assert_eq!(p.arm_value_quantile(&[0.0, 0.0], 0.99).unwrap(), 0.0);
        assert!(p.arm_value_quantile(&[1.0, 0.0], 1.0).is_err());
        assert!(p.arm_value_quantile(&[1.0, 0.0], 0.0).is_err());
    }

    #[test]
    fn construction_rejects_non_spd() {
        let bad = Matrix::from_row_major(2, vec![1.0, 2.0, 2.0, 1.0]).unwrap();
        assert!(GaussianPosterior::new(vec![0.0; 2], 1.0, CovarianceShape::FullInverse(bad)).is_err());
        assert!(GaussianPosterior::new(vec![0.0; 2], 1.0, CovarianceShape::DiagonalInverse(vec![1.0, 0.0])).is_err());
        assert!(GaussianPosterior::new(vec![0.0; 2], -1.0, CovarianceShape::DiagonalInverse(vec![1.0, 1.0])).is_err());
    }

    #[test]
    fn anti_concentration_of_standard_normal() {
        let mut rng = substream(3, 0);
        let cert = certify_anti_concentration(&StandardNormal { dim: 3 }, 1, 100_000, &mut rng).unwrap();
        assert!((cert.kappa1_hat - gaussian_kappa1()).abs() <= cert.ci_halfwidth);
        let shifted = Affine {
            inner: StandardNormal { dim: 2 },
            shift: vec![10.0, 0.0],
            factor: 1.0,
        };
        let c = certify_anti_concentration_along(&shifted, &[vec![1.0, 0.0]], 10_000, &mut rng).unwrap();
        assert!(c.kappa1_hat > 0.999);
        let narrow = Affine {
            inner: StandardNormal { dim: 2 },
            shift: vec![0.0, 0.0],
            factor: 0.01,
        };
        let c = certify_anti_concentration(&narrow, 4, 10_000, &mut rng).unwrap();
        assert_eq!(c.kappa1_hat, 0.0);
        assert!(certify_anti_concentration(&narrow, 4, 999, &mut rng).is_err());
    }

    #[test]
    fn type2_examples() {
        let mut rng = substream(4, 0);
        let sn = StandardNormal { dim: 5 };
        let c = certify_concentration_type2(&sn, 0.05, 1, 200_000, &mut rng).unwrap();
        assert!((c - 1.644_853_626_951_472_2).abs() < 0.03, "{c}");
        let c = certify_concentration_type2(&sn, 0.5, 1, 200_000, &mut rng).unwrap();
        assert!(c.abs() < 0.02);
        let c = certify_concentration_type2(&sn, 0.1587, 1, 200_000, &mut rng).unwrap();
        assert!((c - 1.0).abs() < 0.02);
    }

    #[test]
    fn type1_examples() {
        let mut rng = substream(5, 0);
        let report = certify_concentration_type1(&StandardNormal { dim: 2 }, &[0.1], 100_000, &mut rng).unwrap();
        // Chi distribution with 2 degrees of freedom: (1−δ)-quantile √(−2 ln δ).
        let (_, q) = report.norm_quantiles[0];
        assert!((q - (-2.0 * 0.1f64.ln()).sqrt()).abs() < 0.03);
        assert!(report.is_feasible(4.0, 8.0));
        assert!((type1_radius(4.0, 8.0, 2, 0.1) - (8.0 * 160f64.ln()).sqrt()).abs() < 1e-12);
        let tight = certify_concentration_type1(&StandardNormal { dim: 2 }, &[0.001], 100_000, &mut rng).unwrap();
        assert!(!tight.is_feasible(0.01, 1.0));
        // δ near one keeps the radius positive when c′d > 1.
        assert!(type1_radius(4.0, 8.0, 2, 1.0 - 1e-12) > 0.0);
    }
}
