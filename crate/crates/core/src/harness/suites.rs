//! Numeric verifier suites and regret-bound presets for the CLI.

use std::fmt;
use std::str::FromStr;

use crate::algorithms::Inference;
use crate::divergence::bounds::{linbucb_regret_bound, lints_regret_bound, BoundConstants, ConcentrationType};
use crate::divergence::verify::{
    concentration_suite, invariance_suite, oracle_agreement_suite, quantile_shift_suite, SuiteReport,
};
use crate::error::{Error, Result};
use crate::linalg::ConfidenceParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifySuite {
    Divergence,
    Concentration,
    QuantileShift,
}

impl FromStr for VerifySuite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "divergence" => Ok(Self::Divergence),
            "concentration" => Ok(Self::Concentration),
            "quantile-shift" => Ok(Self::QuantileShift),
            other => Err(Error::Config(format!(
                "unknown suite {other:?}; expected divergence, concentration or quantile-shift"
            ))),
        }
    }
}

/// Sizes of the verifier runs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteSizes {
    pub oracle_pairs: usize,
    pub oracle_mc_samples: usize,
    pub invariance_cases: usize,
    pub invariance_mc_samples: usize,
    pub quantile_pairs: usize,
    pub concentration_dim: usize,
    pub concentration_samples: usize,
    pub concentration_directions: usize,
}

impl SuiteSizes {
    pub const FULL: Self = Self {
        oracle_pairs: 100,
        oracle_mc_samples: 100_000,
        invariance_cases: 50,
        invariance_mc_samples: 100_000,
        quantile_pairs: 50,
        concentration_dim: 5,
        concentration_samples: 200_000,
        concentration_directions: 64,
    };

    pub const QUICK: Self = Self {
        oracle_pairs: 10,
        oracle_mc_samples: 20_000,
        invariance_cases: 8,
        invariance_mc_samples: 20_000,
        quantile_pairs: 8,
        concentration_dim: 3,
        concentration_samples: 20_000,
        concentration_directions: 8,
    };
}

pub const ORACLE_ALPHAS: [f64; 3] = [-1.0, 2.0, 3.0];
pub const QUANTILE_GAMMAS: [f64; 4] = [0.5, 0.8, 0.9, 0.95];
pub const QUANTILE_ALPHAS: [f64; 3] = [2.0, 3.0, 1.5];
pub const QUADRATURE_AGREEMENT: f64 = 1e-6;
pub const SYMMETRY_AGREEMENT: f64 = 1e-9;
pub const INVARIANCE_RESIDUAL: f64 = 1e-6;
pub const QUANTILE_SHIFT_SLACK: f64 = 1e-9;

pub fn run_suite(suite: VerifySuite, sizes: SuiteSizes, seed: u64) -> Result<SuiteReport> {
    match suite {
        VerifySuite::Divergence => {
            let mut report = SuiteReport::new("divergence");
            report.extend(oracle_agreement_suite(
                sizes.oracle_pairs,
                &ORACLE_ALPHAS,
                sizes.oracle_mc_samples,
                QUADRATURE_AGREEMENT,
                SYMMETRY_AGREEMENT,
                seed,
            )?);
            report.extend(invariance_suite(
                sizes.invariance_cases,
                sizes.invariance_mc_samples,
                INVARIANCE_RESIDUAL,
                seed,
            )?);
            Ok(report)
        }
        VerifySuite::QuantileShift => quantile_shift_suite(
            sizes.quantile_pairs,
            &QUANTILE_GAMMAS,
            &QUANTILE_ALPHAS,
            QUANTILE_SHIFT_SLACK,
            seed,
        ),
        VerifySuite::Concentration => concentration_suite(
            sizes.concentration_dim,
            2.0,
            -1.0,
            sizes.concentration_samples,
            sizes.concentration_directions,
            seed,
        ),
    }
}

/// Inputs for one table of regret-bound values.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundPreset {
    pub name: &'static str,
    pub horizon: usize,
    pub dim: usize,
    pub confidence: ConfidenceParams,
    pub epsilon: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub gamma_exact: f64,
    pub gamma_approx: f64,
}

pub const PRESET_NAMES: [&str; 3] = ["default", "small", "large"];

impl BoundPreset {
    pub fn named(name: &str) -> Result<Self> {
        let make = |name, horizon, dim: usize| Self {
            name,
            horizon,
            dim,
            confidence: ConfidenceParams {
                nu: 0.5,
                lambda: 1.0,
                s_bound: (dim as f64).sqrt(),
                delta: 0.05,
            },
            epsilon: 0.1,
            alpha1: 2.0,
            alpha2: -1.0,
            gamma_exact: 0.85,
            gamma_approx: 0.98,
        };
        match name {
            "default" => Ok(make("default", 1000, 20)),
            "small" => Ok(make("small", 500, 5)),
            "large" => Ok(make("large", 100_000, 50)),
            other => Err(Error::Config(format!(
                "unknown preset {other:?}; expected one of {}",
                PRESET_NAMES.join(", ")
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundRow {
    pub label: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundTable {
    pub preset: BoundPreset,
    pub constants: BoundConstants,
    pub rows: Vec<BoundRow>,
}

impl BoundTable {
    pub fn value(&self, label: &str) -> Option<f64> {
        self.rows.iter().find(|r| r.label == label).map(|r| r.value)
    }
}

pub fn bound_table(preset: &BoundPreset) -> Result<BoundTable> {
    let k = BoundConstants::gaussian(preset.epsilon, preset.alpha1, preset.alpha2)?;
    // The exact posterior keeps its own constants.
    let exact = BoundConstants {
        epsilon: 0.0,
        kappa2: k.kappa1,
        c2: k.c1,
        c2p: k.c1p,
        ..k.clone()
    };
    let (t, d, p) = (preset.horizon, preset.dim, &preset.confidence);
    let mut rows = vec![
        BoundRow {
            label: "LinTS".into(),
            value: lints_regret_bound(p, &exact, t, d)?,
        },
        BoundRow {
            label: "LinTS_Approximate".into(),
            value: lints_regret_bound(p, &k, t, d)?,
        },
    ];
    for (ty, tag) in [
        (ConcentrationType::TypeI, "TypeI"),
        (ConcentrationType::TypeII, "TypeII"),
    ] {
        for (inf, g, suffix) in [
            (Inference::Exact, preset.gamma_exact, ""),
            (Inference::Approximate, preset.gamma_approx, "_Approximate"),
        ] {
            rows.push(BoundRow {
                label: format!("LinBUCB{suffix} {tag} (gamma={g})"),
                value: linbucb_regret_bound(p, &k, g, t, d, ty, inf)?,
            });
        }
    }
    Ok(BoundTable {
        preset: preset.clone(),
        constants: k,
        rows,
    })
}

impl fmt::Display for BoundTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.preset;
        writeln!(
            f,
            "preset {}: T={} d={} nu={} lambda={} S={:.4} delta={}",
            p.name, p.horizon, p.dim, p.confidence.nu, p.confidence.lambda, p.confidence.s_bound, p.confidence.delta
        )?;
        let k = &self.constants;
        writeln!(
            f,
            "epsilon={} alpha1={} alpha2={}  kappa1={:.6} kappa2={:.6}  c1={} c1'={} c2={:.6} c2'={:.6}",
            k.epsilon, k.alpha1, k.alpha2, k.kappa1, k.kappa2, k.c1, k.c1p, k.c2, k.c2p
        )?;
        for r in &self.rows {
            writeln!(f, "  {:<40} {:>16.6e}", r.label, r.value)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_parse() {
        assert_eq!(
            "quantile-shift".parse::<VerifySuite>().unwrap(),
            VerifySuite::QuantileShift
        );
        assert!("nope".parse::<VerifySuite>().is_err());
    }

    #[test]
    fn quick_suites_pass() {
        for s in [
            VerifySuite::Divergence,
            VerifySuite::QuantileShift,
            VerifySuite::Concentration,
        ] {
            let r = run_suite(s, SuiteSizes::QUICK, 11).unwrap();
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn presets_give_ordered_finite_bounds() {
        for name in PRESET_NAMES {
            let t = bound_table(&BoundPreset::named(name).unwrap()).unwrap();
            assert_eq!(t.rows.len(), 6);
            assert!(t.rows.iter().all(|r| r.value.is_finite() && r.value > 0.0));
            // Degrading the constants can only loosen the bound.
            assert!(t.value("LinTS_Approximate").unwrap() >= t.value("LinTS").unwrap());
        }
        assert!(BoundPreset::named("huge").is_err());
    }
}
