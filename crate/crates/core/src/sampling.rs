//! Seeded sampling of group elements and configuration points.
//!
//! The generator is xorshift64* (Vigna, 2016) seeded through one round of
//! SplitMix64, so that every seed (including 0) gives a non-zero state:
//!
//! ```text
//! state ← splitmix64(seed)            (replaced by 0x9E3779B97F4A7C15 if zero)
//! next:  x ^= x >> 12; x ^= x << 25; x ^= x >> 27; state = x
//!        output = x · 0x2545F4914F6CDD1D (wrapping)
//! uniform in [0, 1):  (output >> 11) · 2⁻⁵³
//! ```
//!
//! The exact sequence is part of the report format: the same seed reproduces
//! the same sample points in any implementation following these rules.

use crate::error::{Error, Result};
use crate::group::{one_param, GroupElement, Subgroup};
use crate::scalar::{circle_distance, Real};

/// The xorshift64* generator described in the module documentation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Xorshift64Star {
    state: u64,
}

/// One SplitMix64 step, used only for seeding.
pub fn splitmix64(seed: u64) -> u64 {
    let mut z = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl Xorshift64Star {
    /// Seeds the generator.
    pub fn new(seed: u64) -> Self {
        let s = splitmix64(seed);
        Self { state: if s == 0 { 0x9E37_79B9_7F4A_7C15 } else { s } }
    }

    /// Next raw 64-bit output.
    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform double in `[0, 1)` built from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform value in `[lo, hi)`.
    pub fn uniform<T: Real>(&mut self, lo: T, hi: T) -> T {
        lo + (hi - lo) * T::lit(self.next_f64())
    }

    /// Uniform angle in `[0, 2π)`.
    pub fn angle<T: Real>(&mut self) -> T {
        self.uniform(T::zero(), T::two_pi())
    }
}

/// Random element `k_u · a_v · n_w` with `u ~ U[0, 2π)`, `v, w ~ U[−3, 3)`.
pub fn random_element<T: Real>(rng: &mut Xorshift64Star) -> GroupElement<T> {
    let u = rng.angle::<T>();
    let v = rng.uniform(T::lit(-3.0), T::lit(3.0));
    let w = rng.uniform(T::lit(-3.0), T::lit(3.0));
    one_param(Subgroup::K, u) * one_param(Subgroup::A, v) * one_param(Subgroup::N, w)
}

/// Smallest pairwise circle distance of a configuration (`π` for fewer than two points).
pub fn min_separation<T: Real>(z: &[T]) -> T {
    let mut best = T::PI();
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            best = best.min(circle_distance(z[i], z[j]));
        }
    }
    best
}

/// Maximum number of rejection rounds in [`random_configuration`].
pub const MAX_REJECTIONS: usize = 100_000;

/// Uniform random configuration of `arity` angles with pairwise separation `≥ margin`,
/// by rejection sampling.
pub fn random_configuration<T: Real>(rng: &mut Xorshift64Star, arity: usize, margin: T) -> Result<Vec<T>> {
    for _ in 0..MAX_REJECTIONS {
        let z: Vec<T> = (0..arity).map(|_| rng.angle()).collect();
        if min_separation(&z) >= margin {
            return Ok(z);
        }
    }
    Err(Error::SamplingFailed { arity, margin: margin.as_f64() })
}

/// `count` seeded configuration points drawn in sequence from one generator.
pub fn configuration_points<T: Real>(seed: u64, count: usize, arity: usize, margin: T) -> Result<Vec<Vec<T>>> {
    let mut rng = Xorshift64Star::new(seed);
    (0..count).map(|_| random_configuration(&mut rng, arity, margin)).collect()
}
