//! Seeded sampling of admissible parameter points with resonance guards.
//!
//! Domains: |p| <= 0.2, 0.2 <= |q|,|t| <= 0.8, arguments placed in the
//! annuli the bilateral expansions require. Draws that land too close to a
//! pole are rejected and retried a bounded number of times.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::scalars::C64;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn complex_in_annulus(&mut self, lo: f64, hi: f64) -> C64 {
        let r = lo + (hi - lo) * self.rng.gen::<f64>();
        let phi = 2.0 * std::f64::consts::PI * self.rng.gen::<f64>();
        C64::new(r * phi.cos(), r * phi.sin())
    }

    pub fn nome(&mut self) -> C64 {
        self.complex_in_annulus(0.02, 0.2)
    }

    pub fn base(&mut self) -> C64 {
        self.complex_in_annulus(0.2, 0.8)
    }

    /// Retry `draw` until `admissible` accepts, up to a bounded number of
    /// attempts.
    pub fn admissible<T>(
        &mut self,
        mut draw: impl FnMut(&mut Self) -> T,
        admissible: impl Fn(&T) -> bool,
    ) -> Result<T> {
        for _ in 0..64 {
            let v = draw(self);
            if admissible(&v) {
                return Ok(v);
            }
        }
        Err(Error::SamplingFailed(64))
    }
}

/// Distance guard: |1 - a p^n| stays above the resonance threshold for all
/// |n| <= window.
pub fn resonance_clear(a: C64, p: C64, window: i64) -> bool {
    (-window..=window).all(|n| {
        let apn = a * p.powi(n as i32);
        (C64::new(1.0, 0.0) - apn).norm() > 1e-6
    })
}
