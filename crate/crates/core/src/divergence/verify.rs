//! Numeric verifiers for the divergence tooling: oracle agreement, affine
//! invariance with data processing, the quantile-shift bound and the
//! preservation of anti-concentration and concentration constants.

use std::fmt;

use rand::Rng as _;

use super::bounds::{quantile_shift_bound, BoundConstants};
use super::{alpha_divergence, gaussian_closed_form, Distribution, Gaussian, Method, PiecewiseGaussian};
use crate::dense::{dot, norm, Cholesky, Matrix};
use crate::error::{invalid, Result};
use crate::posterior::{empirical_quantile, MIN_CERT_SAMPLES};
use crate::rng::{fill_standard_normal, stream, substream, unit_vector, Rng};

/// One-sided 99% normal critical value.
pub const Z99: f64 = 2.326_347_874_040_841;

/// A single pass/fail line.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub label: String,
    /// The measured quantity.
    pub value: f64,
    /// What it was compared against.
    pub limit: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SuiteReport {
    pub name: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            checks: Vec::new(),
        }
    }

    fn push(&mut self, label: impl Into<String>, value: f64, limit: f64, passed: bool) {
        self.checks.push(Check {
            label: label.into(),
            value,
            limit,
            passed,
        });
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn extend(&mut self, other: SuiteReport) {
        for mut c in other.checks {
            c.label = format!("{}/{}", other.name, c.label);
            self.checks.push(c);
        }
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let failed = self.failures().count();
        writeln!(
            f,
            "{}: {} ({} checks, {} failed)",
            self.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks.len(),
            failed
        )?;
        for c in self.failures().take(20) {
            writeln!(
                f,
                "  FAIL {:<48} value {:>14.6e}  limit {:>14.6e}",
                c.label, c.value, c.limit
            )?;
        }
        Ok(())
    }
}

/// An invertible affine map `x ↦ a + Bx`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap {
    pub shift: Vec<f64>,
    pub matrix: Matrix,
}

impl AffineMap {
    pub fn identity(dim: usize) -> Self {
        Self {
            shift: vec![0.0; dim],
            matrix: Matrix::identity(dim),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    pub before: f64,
    pub after: f64,
    pub residual: f64,
    /// Residual allowed: the fixed tolerance, or three combined standard
    /// errors for Monte Carlo.
    pub allowed: f64,
    pub passed: bool,
}

fn transform(p: &Distribution, map: &AffineMap) -> Result<Distribution> {
    match p {
        Distribution::Gaussian(g) => Ok(g.affine(&map.shift, &map.matrix)?.into()),
        Distribution::Piecewise(pw) => {
            if map.shift.len() != 1 {
                return Err(invalid("a 1-D law needs a 1-D map"));
            }
            Ok(pw.affine(map.shift[0], map.matrix.get(0, 0))?.into())
        }
        Distribution::Custom(_) => Err(invalid("black-box laws cannot be transformed")),
    }
}

fn project(p: &Distribution, u: &[f64]) -> Result<Distribution> {
    match p {
        Distribution::Gaussian(g) => Ok(g.project(u)?.into()),
        Distribution::Piecewise(pw) => Ok(pw.affine(0.0, u[0])?.into()),
        Distribution::Custom(_) => Err(invalid("black-box laws cannot be projected")),
    }
}

// Second evaluation gets an independent Monte-Carlo stream.
fn reseed(method: Method) -> Method {
    match method {
        Method::MonteCarlo { samples, seed } => Method::MonteCarlo {
            samples,
            seed: seed ^ 0x9e37_79b9_7f4a_7c15,
        },
        m => m,
    }
}

fn compare(before: f64, after: f64, se: f64, method: Method, tolerance: f64) -> (f64, f64) {
    let residual = if before == after { 0.0 } else { (before - after).abs() };
    let allowed = match method {
        Method::MonteCarlo { .. } => 3.0 * se,
        _ => tolerance,
    };
    (residual, allowed)
}

/// Checks `D_α(X₁, X₂) = D_α(a + BX₁, a + BX₂)`.
pub fn verify_invariance(
    p1: &Distribution,
    p2: &Distribution,
    map: &AffineMap,
    alpha: f64,
    method: Method,
    tolerance: f64,
) -> Result<InvarianceReport> {
    let before = alpha_divergence(p1, p2, alpha, method)?;
    let after = alpha_divergence(&transform(p1, map)?, &transform(p2, map)?, alpha, reseed(method))?;
    let se = before.error_estimate.hypot(after.error_estimate);
    let (residual, allowed) = compare(before.value, after.value, se, method, tolerance);
    Ok(InvarianceReport {
        before: before.value,
        after: after.value,
        residual,
        allowed,
        passed: residual <= allowed,
    })
}

/// Checks `D_α(uᵀX₁, uᵀX₂) ≤ D_α(X₁, X₂)`; `residual` is the excess of the
/// projected value over the joint one, clamped at zero.
pub fn verify_data_processing(
    p1: &Distribution,
    p2: &Distribution,
    u: &[f64],
    alpha: f64,
    method: Method,
    tolerance: f64,
) -> Result<InvarianceReport> {
    let joint = alpha_divergence(p1, p2, alpha, method)?;
    let projected = alpha_divergence(&project(p1, u)?, &project(p2, u)?, alpha, reseed(method))?;
    let se = joint.error_estimate.hypot(projected.error_estimate);
    let excess = if joint.is_infinite() {
        0.0
    } else {
        (projected.value - joint.value).max(0.0)
    };
    let (_, allowed) = compare(0.0, 0.0, se, method, tolerance);
    Ok(InvarianceReport {
        before: joint.value,
        after: projected.value,
        residual: excess,
        allowed,
        passed: excess <= allowed,
    })
}

/// A 1-D Gaussian pair used by the oracle-agreement suite: both laws stay
/// close enough that every order in `{−1, 2, 3}` is finite and the
/// importance weights have finite variance.
pub fn random_gaussian_pair(rng: &mut Rng) -> (Gaussian, Gaussian) {
    let s1 = rng.random_range(0.5f64.ln()..2f64.ln()).exp();
    let s2 = s1 * rng.random_range(-0.1..0.1f64).exp();
    let m1 = rng.random_range(-2.0..2.0);
    let m2 = m1 + s1 * rng.random_range(-0.5..0.5);
    (
        Gaussian::univariate(m1, s1).expect("positive sd"),
        Gaussian::univariate(m2, s2).expect("positive sd"),
    )
}

/// Closed form against quadrature (`quad_tol`), Monte Carlo (three standard
/// errors) and the `α ↔ 1−α` symmetry (`sym_tol`).
pub fn oracle_agreement_suite(
    pairs: usize,
    alphas: &[f64],
    mc_samples: usize,
    quad_tol: f64,
    sym_tol: f64,
    seed: u64,
) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("oracle-agreement");
    let mut rng = substream(seed, stream::VERIFY);
    for i in 0..pairs {
        let (g1, g2) = random_gaussian_pair(&mut rng);
        let (p1, p2): (Distribution, Distribution) = (g1.into(), g2.into());
        for (j, &alpha) in alphas.iter().enumerate() {
            let exact = alpha_divergence(&p1, &p2, alpha, Method::ClosedFormGaussian)?;
            let quad = alpha_divergence(&p1, &p2, alpha, Method::quadrature())?;
            let mc_seed = seed.wrapping_mul(1_000_003).wrapping_add((i * alphas.len() + j) as u64);
            let mc = alpha_divergence(
                &p1,
                &p2,
                alpha,
                Method::MonteCarlo {
                    samples: mc_samples,
                    seed: mc_seed,
                },
            )?;
            let mirror = alpha_divergence(&p2, &p1, 1.0 - alpha, Method::ClosedFormGaussian)?;
            let tag = format!("pair {i} alpha {alpha}");
            let dq = (exact.value - quad.value).abs();
            report.push(format!("{tag} quadrature"), dq, quad_tol, dq <= quad_tol);
            let dm = (exact.value - mc.value).abs();
            let lim = 3.0 * mc.error_estimate;
            report.push(format!("{tag} monte-carlo"), dm, lim, dm <= lim);
            let ds = (exact.value - mirror.value).abs();
            report.push(format!("{tag} symmetry"), ds, sym_tol, ds <= sym_tol);
        }
    }
    Ok(report)
}

fn random_spd(rng: &mut Rng, dim: usize) -> Matrix {
    let mut a = vec![0.0; dim * dim];
    fill_standard_normal(rng, &mut a);
    let a = Matrix::from_row_major(dim, a).expect("square");
    let mut m = Matrix::scaled_identity(dim, 0.3);
    for i in 0..dim {
        for j in 0..dim {
            let v: f64 = (0..dim).map(|k| a.get(i, k) * a.get(j, k)).sum();
            m.set(i, j, m.get(i, j) + v);
        }
    }
    m
}

fn random_invertible(rng: &mut Rng, dim: usize) -> Matrix {
    loop {
        let mut data = vec![0.0; dim * dim];
        fill_standard_normal(rng, &mut data);
        let b = Matrix::from_row_major(dim, data).expect("square");
        // Gram determinant via Cholesky of BᵀB.
        let mut g = Matrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                g.set(i, j, (0..dim).map(|k| b.get(k, i) * b.get(k, j)).sum());
            }
        }
        if let Ok(c) = Cholesky::new(&g) {
            if c.log_det() > 2.0 * 0.2f64.ln() {
                return b;
            }
        }
    }
}

/// A 2-D Gaussian pair with nearby shape, so divergences and Monte-Carlo
/// weight variances stay finite for orders in `[−1, 3]`.
pub fn random_gaussian_pair_2d(rng: &mut Rng) -> Result<(Gaussian, Gaussian)> {
    let cov1 = random_spd(rng, 2);
    let mut m = Matrix::identity(2);
    for i in 0..2 {
        for j in 0..2 {
            m.set(i, j, m.get(i, j) + 0.1 * crate::rng::standard_normal(rng));
        }
    }
    let mut mt = Matrix::zeros(2);
    for i in 0..2 {
        for j in 0..2 {
            mt.set(i, j, m.get(j, i));
        }
    }
    let mut cov2 = m.mul(&cov1).mul(&mt);
    cov2.symmetrize();
    let mean1 = vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
    let chol = Cholesky::new(&cov1)?;
    let mut z = vec![0.0; 2];
    fill_standard_normal(rng, &mut z);
    let step = chol.mul_lower(&z);
    let mean2 = vec![mean1[0] + 0.3 * step[0], mean1[1] + 0.3 * step[1]];
    Ok((Gaussian::new(mean1, cov1)?, Gaussian::new(mean2, cov2)?))
}

// Importance weights p₂/p₁ raised to α−1 have finite variance iff the
// (2α−1)-blend of precisions is positive definite.
fn mc_variance_finite(g1: &Gaussian, g2: &Gaussian, alpha: f64) -> bool {
    if alpha == 0.0 || alpha == 1.0 {
        return true;
    }
    !gaussian_closed_form(g1, g2, 2.0 * alpha - 1.0).is_infinite()
}

/// Affine invariance and data processing on `cases` random 2-D Gaussian
/// pairs, maps and projections; closed-form and Monte-Carlo variants, plus
/// 1-D piecewise pairs evaluated in closed form and by quadrature.
pub fn invariance_suite(cases: usize, mc_samples: usize, tolerance: f64, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("invariance");
    let mut rng = substream(seed, stream::VERIFY);
    let alphas = [2.0, 3.0, -1.0, 0.5, 1.0, 0.0];
    for i in 0..cases {
        let alpha = alphas[i % alphas.len()];
        let (g1, g2) = random_gaussian_pair_2d(&mut rng)?;
        let map = AffineMap {
            shift: vec![rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)],
            matrix: random_invertible(&mut rng, 2),
        };
        let u = unit_vector(&mut rng, 2);
        let (p1, p2): (Distribution, Distribution) = (g1.clone().into(), g2.clone().into());
        let tag = format!("case {i} alpha {alpha}");

        let r = verify_invariance(&p1, &p2, &map, alpha, Method::ClosedFormGaussian, tolerance)?;
        report.push(format!("{tag} affine closed-form"), r.residual, r.allowed, r.passed);
        let r = verify_data_processing(&p1, &p2, &u, alpha, Method::ClosedFormGaussian, tolerance)?;
        report.push(format!("{tag} projection closed-form"), r.residual, r.allowed, r.passed);

        if mc_variance_finite(&g1, &g2, alpha) && mc_variance_finite(&g1.project(&u)?, &g2.project(&u)?, alpha) {
            let mc = Method::MonteCarlo {
                samples: mc_samples,
                seed: seed.wrapping_add(i as u64),
            };
            let r = verify_invariance(&p1, &p2, &map, alpha, mc, tolerance)?;
            report.push(format!("{tag} affine monte-carlo"), r.residual, r.allowed, r.passed);
            let r = verify_data_processing(&p1, &p2, &u, alpha, mc, tolerance)?;
            report.push(format!("{tag} projection monte-carlo"), r.residual, r.allowed, r.passed);
        }

        // 1-D piecewise reweightings of one base under a random 1-D map.
        let (a, b) = random_piecewise_pair(&mut rng)?;
        let scale = rng.random_range(0.2..3.0) * if rng.random::<bool>() { 1.0 } else { -1.0 };
        let map1 = AffineMap {
            shift: vec![rng.random_range(-3.0..3.0)],
            matrix: Matrix::from_diagonal(&[scale]),
        };
        let (q1, q2): (Distribution, Distribution) = (a.into(), b.into());
        for method in [Method::ClosedFormGaussian, Method::quadrature()] {
            let r = verify_invariance(&q1, &q2, &map1, alpha, method, tolerance)?;
            report.push(
                format!("{tag} piecewise affine {}", method.kind()),
                r.residual,
                r.allowed,
                r.passed,
            );
        }
    }
    Ok(report)
}

fn random_piecewise_pair(rng: &mut Rng) -> Result<(PiecewiseGaussian, PiecewiseGaussian)> {
    let mean = rng.random_range(-1.0..1.0);
    let sd = rng.random_range(0.5f64.ln()..2f64.ln()).exp();
    let make = |rng: &mut Rng| -> Result<PiecewiseGaussian> {
        let k = rng.random_range(1..=3usize);
        let mut breaks: Vec<f64> = (0..k).map(|_| mean + sd * rng.random_range(-2.0..2.0)).collect();
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let weights = (0..=breaks.len())
            .map(|_| rng.random_range(-1.0..1.0f64).exp())
            .collect();
        PiecewiseGaussian::new(mean, sd, breaks, weights)
    };
    Ok((make(rng)?, make(rng)?))
}

/// Measured shift `δ` with `Q(γ, Π) = Q(γ + δ, Q)`.
pub fn measured_quantile_shift(pi: &PiecewiseGaussian, q: &PiecewiseGaussian, gamma: f64) -> Result<f64> {
    Ok(q.cdf(pi.quantile(gamma)?) - gamma)
}

/// The quantile-shift bound on `pairs` constructed `(Π, Q)` pairs whose
/// budget is certified by the closed form. Upper-bound branch at every `α`
/// in `alphas` (> 1); the lower-bound branch at `α = −1` is checked too.
pub fn quantile_shift_suite(
    pairs: usize,
    gammas: &[f64],
    alphas: &[f64],
    tolerance: f64,
    seed: u64,
) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("quantile-shift");
    let mut rng = substream(seed, stream::VERIFY);
    for i in 0..pairs {
        let alpha = alphas[i % alphas.len()];
        let mean = rng.random_range(-1.0..1.0);
        let sd = rng.random_range(0.5f64.ln()..2f64.ln()).exp();
        let pi = PiecewiseGaussian::base_only(mean, sd)?;
        // Every third pair pushes mass below a target quantile of Π, the
        // direction that stresses the bound; the rest are random.
        let q = if i % 3 == 0 {
            let g = gammas[(i / 3) % gammas.len()];
            let at = pi.quantile(g)?;
            let w_hi = rng.random_range(0.2..0.9);
            PiecewiseGaussian::new(mean, sd, vec![at], vec![1.0, w_hi])?
        } else {
            let k = rng.random_range(1..=4usize);
            let mut breaks: Vec<f64> = (0..k).map(|_| mean + sd * rng.random_range(-2.5..2.5)).collect();
            breaks.sort_by(f64::total_cmp);
            breaks.dedup();
            let weights = (0..=breaks.len())
                .map(|_| rng.random_range(-1.2..1.2f64).exp())
                .collect();
            PiecewiseGaussian::new(mean, sd, breaks, weights)?
        };
        let (dp, dq): (Distribution, Distribution) = (pi.clone().into(), q.clone().into());
        let eps_upper = alpha_divergence(&dp, &dq, alpha, Method::ClosedFormGaussian)?.value;
        let eps_lower = alpha_divergence(&dp, &dq, -1.0, Method::ClosedFormGaussian)?.value;
        for &gamma in gammas {
            let shift = measured_quantile_shift(&pi, &q, gamma)?;
            let upper = quantile_shift_bound(gamma, eps_upper, alpha)?;
            report.push(
                format!("pair {i} alpha {alpha} gamma {gamma} upper"),
                shift,
                upper,
                shift <= upper + tolerance,
            );
            let lower = quantile_shift_bound(gamma, eps_lower, -1.0)?;
            report.push(
                format!("pair {i} alpha -1 gamma {gamma} lower"),
                shift,
                lower,
                shift >= lower - tolerance,
            );
        }
    }
    Ok(report)
}

/// `d`-dimensional law whose standard-normal density is reweighted by a
/// piecewise-constant function of `vᵀx`.
#[derive(Debug, Clone)]
pub struct ReweightedNormal {
    pub direction: Vec<f64>,
    pub profile: PiecewiseGaussian,
}

impl ReweightedNormal {
    pub fn new(direction: Vec<f64>, breaks: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let n = norm(&direction);
        if !(n > 0.0) {
            return Err(invalid("direction must be non-zero"));
        }
        Ok(Self {
            direction: direction.iter().map(|v| v / n).collect(),
            profile: PiecewiseGaussian::new(0.0, 1.0, breaks, weights)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.direction.len()
    }

    pub fn sample_into(&self, rng: &mut Rng, out: &mut [f64]) {
        fill_standard_normal(rng, out);
        let along = dot(out, &self.direction);
        let s = self.profile.sample(rng);
        for (o, v) in out.iter_mut().zip(&self.direction) {
            *o += (s - along) * v;
        }
    }

    /// `D_α` from the standard normal: the reweighting acts only along the
    /// direction, so it equals the 1-D value.
    pub fn divergence_from_standard(&self, alpha: f64) -> Result<f64> {
        let base: Distribution = PiecewiseGaussian::base_only(0.0, 1.0)?.into();
        Ok(alpha_divergence(&base, &self.profile.clone().into(), alpha, Method::ClosedFormGaussian)?.value)
    }
}

fn binomial_slack(p: f64, n: usize) -> f64 {
    Z99 * (p * (1.0 - p) / n as f64).sqrt()
}

/// Reweightings of `N(0, I_d)` that attack each property: mass pulled out
/// of the unit tail, mass pushed into the tail, radial stretch along one
/// axis, and random profiles.
pub fn concentration_constructions(dim: usize, rng: &mut Rng) -> Result<Vec<(String, ReweightedNormal)>> {
    let v = unit_vector(rng, dim);
    let mut out = Vec::new();
    for r in [1.1, 1.5, 3.0] {
        out.push((
            format!("tail-cut r={r}"),
            ReweightedNormal::new(v.clone(), vec![1.0], vec![1.0, 1.0 / r])?,
        ));
    }
    for w in [1.5, 3.0] {
        out.push((
            format!("tail-boost w={w}"),
            ReweightedNormal::new(v.clone(), vec![1.645], vec![1.0, w])?,
        ));
    }
    out.push((
        "two-sided stretch".into(),
        ReweightedNormal::new(v.clone(), vec![-2.0, 2.0], vec![2.0, 1.0, 2.0])?,
    ));
    for k in 0..2 {
        let u = unit_vector(rng, dim);
        let breaks = vec![-1.0 + 0.3 * k as f64, 0.4, 1.7];
        let weights = (0..4).map(|_| rng.random_range(-1.0..1.0f64).exp()).collect();
        out.push((
            format!("random profile {k}"),
            ReweightedNormal::new(u, breaks, weights)?,
        ));
    }
    Ok(out)
}

/// Degraded constants `κ₂, c₂, c₂′, ĉ₂` checked against each construction's
/// own certified budget `ε = max(D_{α₁}, D_{α₂})`, with `samples` draws and
/// `directions` random unit directions plus `±v`, at 99% binomial slack.
pub fn concentration_suite(
    dim: usize,
    alpha1: f64,
    alpha2: f64,
    samples: usize,
    directions: usize,
    seed: u64,
) -> Result<SuiteReport> {
    if samples < MIN_CERT_SAMPLES {
        return Err(invalid(format!("need at least {MIN_CERT_SAMPLES} samples")));
    }
    let mut report = SuiteReport::new("concentration");
    let mut rng = substream(seed, stream::VERIFY);
    let deltas = [0.01, 0.05, 0.1, 0.2, 0.5];
    for (name, law) in concentration_constructions(dim, &mut rng)? {
        let eps = law
            .divergence_from_standard(alpha1)?
            .max(law.divergence_from_standard(alpha2)?);
        let k = BoundConstants::gaussian(eps, alpha1, alpha2)?;

        let mut dirs = vec![
            law.direction.clone(),
            law.direction.iter().map(|x| -x).collect::<Vec<_>>(),
        ];
        dirs.extend((0..directions).map(|_| unit_vector(&mut rng, dim)));

        let mut draws = vec![vec![0.0; dim]; samples];
        for d in draws.iter_mut() {
            law.sample_into(&mut rng, d);
        }
        let n = samples as f64;

        // Exact anti-concentration along the reweighted axis.
        let exact = 1.0 - law.profile.cdf(1.0);
        report.push(
            format!("{name} kappa2 exact along v"),
            exact,
            k.kappa2,
            exact >= k.kappa2,
        );

        let mut proj = vec![0.0; samples];
        for (j, u) in dirs.iter().enumerate() {
            for (p, x) in proj.iter_mut().zip(&draws) {
                *p = dot(u, x);
            }
            let above = proj.iter().filter(|&&p| p >= 1.0).count() as f64 / n;
            let lim = k.kappa2 - binomial_slack(k.kappa2, samples);
            report.push(format!("{name} kappa2 dir {j}"), above, lim, above >= lim);
            for &delta in &deltas {
                let c = k.c_hat2(delta)?;
                let below = proj.iter().filter(|&&p| p <= c).count() as f64 / n;
                let lim = 1.0 - delta - binomial_slack(1.0 - delta, samples);
                report.push(format!("{name} c_hat2({delta}) dir {j}"), below, lim, below >= lim);
            }
        }

        let mut norms: Vec<f64> = draws.iter().map(|x| norm(x)).collect();
        for &delta in &deltas {
            let radius = (k.c2 * dim as f64 * (k.c2p * dim as f64 / delta).ln()).sqrt();
            let inside = norms.iter().filter(|&&r| r <= radius).count() as f64 / n;
            let lim = 1.0 - delta - binomial_slack(1.0 - delta, samples);
            report.push(format!("{name} type1({delta})"), inside, lim, inside >= lim);
        }
        // Record how much room the type-I radius leaves at δ = 0.01.
        let q99 = empirical_quantile(&mut norms, 0.99);
        let radius = (k.c2 * dim as f64 * (k.c2p * dim as f64 / 0.01).ln()).sqrt();
        report.push(
            format!("{name} type1 quantile(0.99) vs radius"),
            q99,
            radius,
            q99 <= radius,
        );
        // ĉ₂ dominates the exact directional quantile along v.
        for &delta in &deltas {
            let exact_q = law.profile.quantile(1.0 - delta)?;
            let c = k.c_hat2(delta)?;
            report.push(
                format!("{name} c_hat2({delta}) exact along v"),
                exact_q,
                c,
                exact_q <= c,
            );
        }
    }
    Ok(report)
}
