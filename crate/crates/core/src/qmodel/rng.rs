use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Standard normal draws from one ChaCha8 stream.
///
/// The generator is `ChaCha8Rng::seed_from_u64(seed)` with its stream id set
/// to `stream`, so each author gets an independent sequence that does not
/// depend on how many authors precede it. Uniforms take the top 53 bits of a
/// `u64`; normals come in pairs from the basic Box-Muller transform
/// `sqrt(-2 ln u1) * (cos 2 pi u2, sin 2 pi u2)` with `u1` in (0, 1].
pub struct NormalStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

const TWO_POW_NEG_53: f64 = 1.0 / 9_007_199_254_740_992.0;

impl NormalStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng, spare: None }
    }

    /// Uniform on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * TWO_POW_NEG_53
    }

    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = std::f64::consts::TAU * u2;
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }

    pub fn normal(&mut self, mean: f64, sd: f64) -> f64 {
        mean + sd * self.standard_normal()
    }
}
