//! Independent checks against nalgebra and brute-force numerics.

use nalgebra::{DMatrix, DVector};

use linbandit::algorithms::{Inference, Policy, PolicyConfig, PolicyKind};
use linbandit::dense::Matrix;
use linbandit::divergence::{gaussian_closed_form, gaussian_kl, Gaussian};
use linbandit::linalg::{ConfidenceParams, DiagonalApproxState, EstimateMode, RlsState};
use linbandit::posterior::{
    certify_anti_concentration, certify_concentration_type2, empirical_quantile, gaussian_kappa1, quantile_std_error,
    CovarianceShape, GaussianPosterior, StandardNormal,
};
use linbandit::rng::{standard_normal_vec, substream};
use linbandit::special::{norm_cdf, norm_pdf, norm_ppf};

fn to_na(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.dim(), m.dim(), m.as_slice())
}

fn random_arms(dim: usize, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = substream(seed, 1);
    (0..n)
        .map(|_| {
            let mut x = standard_normal_vec(&mut rng, dim);
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt().max(1.0);
            x.iter_mut().for_each(|v| *v /= norm);
            x
        })
        .collect()
}

#[test]
fn rls_matches_nalgebra_solution() {
    let dim = 7;
    let arms = random_arms(dim, 500, 3);
    let mut s = RlsState::new(dim, 1.5).unwrap();
    let mut v = DMatrix::<f64>::identity(dim, dim) * 1.5;
    let mut b = DVector::<f64>::zeros(dim);
    for (i, a) in arms.iter().enumerate() {
        let x = DVector::from_column_slice(a);
        let r = (i as f64 * 0.37).sin();
        s.update(a, r).unwrap();
        v += &x * x.transpose();
        b += x * r;
    }
    let inv = v.clone().try_inverse().unwrap();
    let theta = v.lu().solve(&b).unwrap();
    assert!((to_na(s.design_inv()) - inv).amax() < 1e-10);
    for (a, e) in s.estimate().iter().zip(theta.iter()) {
        assert!((a - e).abs() < 1e-10);
    }
}

#[test]
fn diagonal_state_matches_nalgebra_diagonal() {
    let dim = 5;
    let arms = random_arms(dim, 200, 4);
    for mode in [EstimateMode::ApproxMeanAndCov, EstimateMode::ApproxCovOnly] {
        let mut s = DiagonalApproxState::new(dim, 1.0, mode).unwrap();
        let mut v = DMatrix::<f64>::identity(dim, dim);
        let mut b = DVector::<f64>::zeros(dim);
        for a in &arms {
            let x = DVector::from_column_slice(a);
            s.update(a, 1.0).unwrap();
            v += &x * x.transpose();
            b += x;
        }
        let expected: Vec<f64> = match mode {
            EstimateMode::ApproxMeanAndCov => (0..dim).map(|i| b[i] / v[(i, i)]).collect(),
            EstimateMode::ApproxCovOnly => v.clone().lu().solve(&b).unwrap().iter().copied().collect(),
        };
        for i in 0..dim {
            assert_eq!(s.diag()[i], v[(i, i)]);
            assert!((s.estimate()[i] - expected[i]).abs() < 1e-10);
        }
    }
}

#[test]
fn multivariate_kl_matches_nalgebra_formula() {
    // KL(N1 ‖ N2) = ½[tr(Σ2⁻¹Σ1) + (m2−m1)ᵀΣ2⁻¹(m2−m1) − d + ln det Σ2 − ln det Σ1].
    let a1 = DMatrix::<f64>::from_row_slice(3, 3, &[1.0, 0.2, 0.0, 0.0, 0.8, 0.1, 0.3, 0.0, 1.2]);
    let a2 = DMatrix::<f64>::from_row_slice(3, 3, &[0.9, 0.0, 0.1, 0.2, 1.1, 0.0, 0.0, 0.1, 0.7]);
    let s1 = &a1 * a1.transpose();
    let s2 = &a2 * a2.transpose();
    let m1 = DVector::from_column_slice(&[0.1, -0.3, 0.5]);
    let m2 = DVector::from_column_slice(&[0.4, 0.0, -0.2]);
    let s2inv = s2.clone().try_inverse().unwrap();
    let dm = &m2 - &m1;
    let expected = 0.5
        * ((&s2inv * &s1).trace() + (dm.transpose() * &s2inv * &dm)[0] - 3.0 + s2.determinant().ln()
            - s1.determinant().ln());
    let g = |m: &DVector<f64>, s: &DMatrix<f64>| {
        let rows: Vec<f64> = (0..3).flat_map(|i| (0..3).map(move |j| s[(i, j)])).collect();
        Gaussian::new(m.iter().copied().collect(), Matrix::from_row_major(3, rows).unwrap()).unwrap()
    };
    let (g1, g2) = (g(&m1, &s1), g(&m2, &s2));
    assert!((gaussian_kl(&g1, &g2) - expected).abs() < 1e-10);
    assert!((gaussian_closed_form(&g1, &g2, 1.0).value - expected).abs() < 1e-10);
}

#[test]
fn bucb_quantile_matches_empirical_quantile() {
    let post = GaussianPosterior::new(
        vec![0.4, -0.2],
        1.7,
        CovarianceShape::FullInverse(Matrix::from_row_major(2, vec![0.5, 0.1, 0.1, 0.3]).unwrap()),
    )
    .unwrap();
    let arm = [0.6, 0.8];
    let mut rng = substream(12, 6);
    let n = 1_000_000;
    let mut vals: Vec<f64> = (0..n)
        .map(|_| {
            let th = post.sample(&mut rng);
            arm[0] * th[0] + arm[1] * th[1]
        })
        .collect();
    let sd = post.scale() * post.arm_norm(&arm);
    for g in [0.6, 0.9, 0.99] {
        let exact = post.arm_value_quantile(&arm, g).unwrap();
        let emp = empirical_quantile(&mut vals, g);
        let se = quantile_std_error(g, n, norm_pdf(norm_ppf(g)) / sd);
        assert!((emp - exact).abs() < 3.0 * se, "gamma {g}: {emp} vs {exact} (se {se})");
    }
    // Anti-concentration linked to the quantile: Q(1−κ₁) = mean + scale·‖x‖.
    let q = empirical_quantile(&mut vals, 1.0 - gaussian_kappa1());
    let target = arm[0] * 0.4 + arm[1] * -0.2 + sd;
    let se = quantile_std_error(1.0 - gaussian_kappa1(), n, norm_pdf(1.0) / sd);
    assert!(q >= target - 3.0 * se);
}

#[test]
fn lints_selection_frequencies_match_integration() {
    // A policy with a fixed posterior (no further updates) on two arms in
    // d = 2; P(arm 0) is computed by dense integration of that posterior.
    let cfg = PolicyConfig {
        scale_override: Some(1.0),
        ..PolicyConfig::new(
            PolicyKind::LinTS,
            Inference::Exact,
            ConfidenceParams {
                nu: 0.5,
                lambda: 1.0,
                s_bound: 1.0,
                delta: 0.05,
            },
            10,
        )
    };
    let mut policy = Policy::new(cfg, 2).unwrap();
    for (a, r) in [([0.8, 0.1], 0.4), ([0.2, -0.9], -0.1), ([0.5, 0.5], 0.3)] {
        policy.update(&a, r).unwrap();
    }
    let post = policy.posterior().unwrap();
    let mean = post.mean().to_vec();
    let CovarianceShape::FullInverse(c) = post.shape() else {
        unreachable!()
    };
    let cov = [[c.get(0, 0), c.get(0, 1)], [c.get(1, 0), c.get(1, 1)]];
    let arms = [vec![1.0, 0.2], vec![0.1, 0.9]];
    let d = [arms[0][0] - arms[1][0], arms[0][1] - arms[1][1]];

    let det = cov[0][0] * cov[1][1] - cov[0][1] * cov[1][0];
    let prec = [[cov[1][1] / det, -cov[0][1] / det], [-cov[1][0] / det, cov[0][0] / det]];
    let (n, half) = (1200usize, 8.0 * cov[0][0].max(cov[1][1]).sqrt());
    let h = 2.0 * half / n as f64;
    let mut p0 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let a = -half + (i as f64 + 0.5) * h;
            let b = -half + (j as f64 + 0.5) * h;
            if d[0] * (mean[0] + a) + d[1] * (mean[1] + b) > 0.0 {
                let q = prec[0][0] * a * a + 2.0 * prec[0][1] * a * b + prec[1][1] * b * b;
                p0 += (-0.5 * q).exp() / (2.0 * std::f64::consts::PI * det.sqrt()) * h * h;
            }
        }
    }
    // The projected normal gives the same probability.
    let var = d[0] * d[0] * cov[0][0] + 2.0 * d[0] * d[1] * cov[0][1] + d[1] * d[1] * cov[1][1];
    let closed = norm_cdf((d[0] * mean[0] + d[1] * mean[1]) / var.sqrt());
    assert!((p0 - closed).abs() < 2e-3, "{p0} vs {closed}");

    let mut rng = substream(5, 3);
    let draws = 100_000;
    let hits = (0..draws)
        .filter(|_| policy.select_arm(&arms, &mut rng).unwrap() == 0)
        .count();
    let freq = hits as f64 / draws as f64;
    let se = (p0 * (1.0 - p0) / draws as f64).sqrt();
    assert!((freq - p0).abs() < 3.0 * se + 2e-3, "{freq} vs {p0} (se {se})");
}

#[test]
fn standard_normal_certificates() {
    let mut rng = substream(21, 6);
    let cert = certify_anti_concentration(&StandardNormal { dim: 6 }, 16, 50_000, &mut rng).unwrap();
    assert!((cert.kappa1_hat - gaussian_kappa1()).abs() < 4.0 * cert.ci_halfwidth + 0.01);

    // Directional quantiles do not depend on the dimension.
    let n = 40_000;
    let delta = 0.05;
    let se = quantile_std_error(1.0 - delta, n, norm_pdf(norm_ppf(1.0 - delta)));
    let est: Vec<f64> = [2usize, 20, 200]
        .iter()
        .map(|&d| certify_concentration_type2(&StandardNormal { dim: d }, delta, 1, n, &mut rng).unwrap())
        .collect();
    for w in est.windows(2) {
        assert!((w[0] - w[1]).abs() < 3.0 * (2.0f64).sqrt() * se, "{est:?}");
    }
}
