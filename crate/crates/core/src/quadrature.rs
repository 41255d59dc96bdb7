//! Globally adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.
//!
//! Intervals are bisected in order of largest local error estimate until the
//! summed error drops below `max(abs_tol, rel_tol * |I|)`. Breakpoints let
//! callers split at known discontinuities so each piece is smooth.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-12,
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Piece {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Piece {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut res_abs = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let error = rescale_error((kronrod - gauss) * half, res_abs * half.abs(), res_asc * half.abs());
    Piece { a, b, value, error }
}

impl Quadrature {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            ..Self::default()
        }
    }

    /// Integrate `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<Integral> {
        self.integrate_with_breaks(f, &[a, b])
    }

    /// Integrate over `[points[0], points[last]]`, never straddling an
    /// interior point. `points` must be nondecreasing.
    pub fn integrate_with_breaks<F: FnMut(f64) -> f64>(&self, mut f: F, points: &[f64]) -> Result<Integral> {
        if points.len() < 2 {
            return Err(Error::InvalidInput("need at least two integration limits".into()));
        }
        if points.windows(2).any(|w| !(w[0] <= w[1])) || points.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "integration limits must be finite and nondecreasing: {points:?}"
            )));
        }

        let mut heap = BinaryHeap::new();
        let mut evaluations = 0;
        for w in points.windows(2) {
            if w[1] > w[0] {
                heap.push(gk15(&mut f, w[0], w[1]));
                evaluations += 15;
            }
        }

        loop {
            let total: f64 = heap.iter().map(|p| p.value).sum();
            let error: f64 = heap.iter().map(|p| p.error).sum();
            let target = self.abs_tol.max(self.rel_tol * total.abs());
            if error <= target || heap.is_empty() {
                return Ok(Integral {
                    value: total,
                    abs_error: error,
                    evaluations,
                });
            }
            if !total.is_finite() {
                return Err(Error::Quadrature {
                    value: total,
                    abs_error: error,
                    intervals: heap.len(),
                });
            }
            if heap.len() >= self.max_intervals {
                return Err(Error::Quadrature {
                    value: total,
                    abs_error: error,
                    intervals: heap.len(),
                });
            }
            let worst = heap.pop().expect("heap is non-empty");
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                // Interval cannot be split further in floating point.
                return Err(Error::Quadrature {
                    value: total,
                    abs_error: error,
                    intervals: heap.len() + 1,
                });
            }
            heap.push(gk15(&mut f, worst.a, mid));
            heap.push(gk15(&mut f, mid, worst.b));
            evaluations += 30;
        }
    }
}

/// Find `x` in `[lo, hi]` with `f(x) = 0` by bracketed bisection.
/// `f(lo)` and `f(hi)` must differ in sign.
pub fn find_root<F: FnMut(f64) -> Result<f64>>(mut f: F, mut lo: f64, mut hi: f64, x_tol: f64) -> Result<f64> {
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Degenerate(format!(
            "root not bracketed: f({lo}) = {f_lo}, f({hi}) = {f_hi}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= x_tol || mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::norm_pdf;

    #[test]
    fn polynomial_is_exact() {
        let q = Quadrature::default();
        let r = q.integrate(|x| 3.0 * x * x, 0.0, 2.0).unwrap();
        assert!((r.value - 8.0).abs() < 1e-13);
    }

    #[test]
    fn gaussian_over_twelve_sigma() {
        let q = Quadrature::default();
        let r = q.integrate(norm_pdf, -12.0, 12.0).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12, "{}", r.value);
        assert!(r.abs_error <= 1e-10);
    }

    #[test]
    fn breakpoints_handle_jumps() {
        let q = Quadrature::default();
        let step = |x: f64| if x < 0.3 { 1.0 } else { 5.0 };
        let r = q.integrate_with_breaks(step, &[0.0, 0.3, 1.0]).unwrap();
        assert!((r.value - (0.3 + 3.5)).abs() < 1e-13);
    }

    #[test]
    fn bad_limits_rejected() {
        let q = Quadrature::default();
        assert!(q.integrate_with_breaks(|x| x, &[1.0, 0.0]).is_err());
        assert!(q.integrate_with_breaks(|x| x, &[0.0]).is_err());
        assert!(q.integrate(|x| x, 0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn root_of_cubic() {
        let r = find_root(|x| Ok(x * x * x - 2.0), 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-12);
        assert!(find_root(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-12).is_err());
    }
}
