//! Seeded random streams and small sampling helpers.

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::special::{norm_cdf, norm_isf, norm_ppf, norm_sf};

pub type Rng = ChaCha8Rng;

/// Substream identifiers. Every stream of a run is derived from the run
/// seed plus one of these, so consumers never share state.
pub mod stream {
    pub const ARMS: u64 = 1;
    pub const NOISE: u64 = 2;
    pub const POLICY: u64 = 3;
    pub const THETA: u64 = 4;
    pub const ADVERSARY: u64 = 5;
    pub const VERIFY: u64 = 6;
}

/// Independent substream `id` of `seed`.
pub fn substream(seed: u64, id: u64) -> Rng {
    let mut rng = Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

pub fn standard_normal(rng: &mut Rng) -> f64 {
    StandardNormal.sample(rng)
}

pub fn fill_standard_normal(rng: &mut Rng, out: &mut [f64]) {
    for v in out.iter_mut() {
        *v = StandardNormal.sample(rng);
    }
}

pub fn standard_normal_vec(rng: &mut Rng, dim: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    fill_standard_normal(rng, &mut v);
    v
}

/// Uniform on the open interval (0, 1).
pub fn open_unit(rng: &mut Rng) -> f64 {
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}

/// Uniformly random unit vector.
pub fn unit_vector(rng: &mut Rng, dim: usize) -> Vec<f64> {
    loop {
        let v = standard_normal_vec(rng, dim);
        let n = crate::dense::norm(&v);
        if n > 1e-12 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
}

/// Draw from N(0, 1) restricted to `[lo, hi]` by inverting the CDF on the
/// side of zero with more precision. Far tails use exponential rejection.
pub fn truncated_standard_normal(rng: &mut Rng, lo: f64, hi: f64) -> f64 {
    debug_assert!(lo < hi);
    if lo >= 0.0 {
        upper_tail(rng, lo, hi)
    } else if hi <= 0.0 {
        -upper_tail(rng, -hi, -lo)
    } else {
        let (p_lo, p_hi) = (norm_cdf(lo), norm_cdf(hi));
        let u = open_unit(rng);
        norm_ppf(p_lo + u * (p_hi - p_lo)).clamp(lo, hi)
    }
}

// Sample from N(0,1) on [a, b] with 0 <= a < b.
fn upper_tail(rng: &mut Rng, a: f64, b: f64) -> f64 {
    let (s_a, s_b) = (norm_sf(a), norm_sf(b));
    if s_a > 1e-250 && s_a - s_b > s_a * 1e-12 {
        let u = open_unit(rng);
        return norm_isf(s_a - u * (s_a - s_b)).clamp(a, b);
    }
    // Exponential proposal with the optimal rate for the left endpoint.
    let rate = 0.5 * (a + (a * a + 4.0).sqrt());
    loop {
        let z = a - open_unit(rng).ln() / rate;
        if z > b {
            continue;
        }
        let accept = (-(z - rate).powi(2) / 2.0).exp();
        if open_unit(rng) <= accept {
            return z;
        }
    }
}
