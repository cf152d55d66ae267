//! Reproducible random streams for the Monte Carlo oracles.
//!
//! Each worker owns a ChaCha8 stream derived from (seed, worker index) via
//! the cipher's independent-stream API, so results are bit-identical for a
//! fixed (seed, workers) pair no matter how the work is scheduled.
//!
//! Normal variates use the Marsaglia polar method, fixed here as part of the
//! reproducibility contract: pairs of uniforms in [-1, 1)^2 are rejected
//! until they land inside the unit disc, producing two variates of which the
//! second is cached.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub struct GaussianStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        GaussianStream { rng, spare: None }
    }

    /// Uniform double in [0, 1).
    pub fn next_uniform(&mut self) -> f64 {
        self.rng.gen::<f64>()
    }

    /// Standard normal variate (polar method).
    pub fn next_normal(&mut self) -> f64 {
        if let Some(v) = self.spare.take() {
            return v;
        }
        loop {
            let u = 2.0 * self.next_uniform() - 1.0;
            let v = 2.0 * self.next_uniform() - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let m = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * m);
                return u * m;
            }
        }
    }

    /// Poisson count by the product-of-uniforms method, split into chunks of
    /// rate <= 500 so e^{-rate} never underflows. Exact and deterministic.
    pub fn next_poisson(&mut self, rate: f64) -> u64 {
        debug_assert!(rate >= 0.0);
        let mut remaining = rate;
        let mut total = 0u64;
        while remaining > 0.0 {
            let chunk = remaining.min(500.0);
            remaining -= chunk;
            let limit = (-chunk).exp();
            let mut product = self.next_uniform();
            while product > limit {
                total += 1;
                product *= self.next_uniform();
            }
        }
        total
    }
}
