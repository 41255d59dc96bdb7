//! Standard normal distribution functions.
//!
//! The quantile function uses Acklam's rational approximation followed by a
//! single Halley correction against `erfc`, which brings the absolute error
//! well below `1e-9` across `(0, 1)`.

use std::f64::consts::{PI, SQRT_2};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

pub fn norm_pdf(z: f64) -> f64 {
    (-0.5 * z * z - LN_SQRT_2PI).exp()
}

pub fn norm_log_pdf(z: f64) -> f64 {
    -0.5 * z * z - LN_SQRT_2PI
}

/// `P(Z <= z)`.
pub fn norm_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / SQRT_2)
}

/// `P(Z > z)`, accurate in the upper tail.
pub fn norm_sf(z: f64) -> f64 {
    0.5 * libm::erfc(z / SQRT_2)
}

/// `ln P(Z > z)`, finite for every finite `z`.
pub fn norm_log_sf(z: f64) -> f64 {
    if z < 30.0 {
        norm_sf(z).ln()
    } else {
        // Asymptotic Mills-ratio expansion; erfc underflows past here.
        let z2 = z * z;
        let series = 1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2);
        -0.5 * z2 - z.ln() - LN_SQRT_2PI + series.ln()
    }
}

/// `ln P(Z <= z)`.
pub fn norm_log_cdf(z: f64) -> f64 {
    norm_log_sf(-z)
}

/// Standard normal quantile `Φ⁻¹(p)`. Returns `±∞` at the endpoints and NaN
/// outside `[0, 1]`.
pub fn norm_ppf(p: f64) -> f64 {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return f64::NAN;
    }
    if p == 0.0 {
        return f64::NEG_INFINITY;
    }
    if p == 1.0 {
        return f64::INFINITY;
    }

    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_69e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.024_25;

    let x = if p < P_LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = (-2.0 * (1.0 - p).ln()).sqrt();
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };

    // Halley step. In the upper tail refine against the survival function
    // so that 1 - p does not lose precision.
    let e = if x > 0.0 {
        (1.0 - p) - norm_sf(x)
    } else {
        norm_cdf(x) - p
    };
    let u = e * (2.0 * PI).sqrt() * (0.5 * x * x).exp();
    if !u.is_finite() {
        return x;
    }
    x - u / (1.0 + 0.5 * x * u)
}

/// Quantile of the upper tail: the `z` with `P(Z > z) = q`. Stable for tiny `q`.
pub fn norm_isf(q: f64) -> f64 {
    -norm_ppf(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ppf_reference_values() {
        // Reference quantiles computed with mpmath at 30 digits.
        let cases = [
            (0.5, 0.0),
            (0.9, 1.281_551_565_544_600_4),
            (0.95, 1.644_853_626_951_472_2),
            (0.975, 1.959_963_984_540_054),
            (0.841_344_746_068_542_9, 1.0),
            (1e-10, -6.361_340_902_404_056),
            (0.999_999, 4.753_424_308_817_088),
            (0.002_083_333_333_333_333_7, -2.865_260_238_532_133),
        ];
        for (p, z) in cases {
            assert!((norm_ppf(p) - z).abs() < 1e-9, "p={p}: {} vs {z}", norm_ppf(p));
        }
    }

    #[test]
    fn ppf_inverts_cdf_on_a_grid() {
        for i in 1..2000 {
            let p = i as f64 / 2000.0;
            let z = norm_ppf(p);
            assert!((norm_cdf(z) - p).abs() < 1e-12, "p={p}");
        }
    }

    #[test]
    fn ppf_endpoints() {
        assert_eq!(norm_ppf(0.0), f64::NEG_INFINITY);
        assert_eq!(norm_ppf(1.0), f64::INFINITY);
        assert!(norm_ppf(1.5).is_nan());
        assert!(norm_ppf(-0.1).is_nan());
    }

    #[test]
    fn log_sf_matches_direct_and_asymptotic() {
        for z in [-3.0, 0.0, 1.0, 5.0, 10.0, 20.0] {
            assert!((norm_log_sf(z) - norm_sf(z).ln()).abs() < 1e-12);
        }
        // Continuity across the switch point.
        let below = norm_log_sf(29.999_999);
        let above = norm_log_sf(30.0);
        assert!((below - above).abs() < 1e-4);
        assert!(norm_log_sf(100.0).is_finite());
    }

    #[test]
    fn cdf_and_sf_are_complementary() {
        for z in [-4.0, -1.0, 0.3, 2.2] {
            assert!((norm_cdf(z) + norm_sf(z) - 1.0).abs() < 1e-15);
        }
        assert!((norm_cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-15);
    }
}
