use crate::numerics::RealVector;

/// Deterministic random generator: SplitMix64 over an incrementing counter.
///
/// Each draw advances a 64-bit counter by the odd constant `0x9E3779B97F4A7C15`
/// and returns the mix
///
/// ```text
/// z ^= z >> 30; z *= 0xBF58476D1CE4E5B9;
/// z ^= z >> 27; z *= 0x94D049BB133111EB;
/// z ^= z >> 31;
/// ```
///
/// (Steele, Lea & Flood's SplitMix64 finalizer.) The generator is a pure
/// function of `(seed, draw index)`, so identical seeds give identical
/// streams on every platform. Substreams for distinct purposes (data
/// generation, mini-batch sampling, initialization) are derived by mixing a
/// tag into the seed, keeping the streams independent of each other and of
/// how many draws the parent has made.
#[derive(Debug, Clone)]
pub struct SeededRng {
    seed: u64,
    state: u64,
    /// Second normal from the last Box–Muller pair, if unused.
    cached_normal: Option<f64>,
}

const GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix64(mut z: u64) -> u64 {
    z ^= z >> 30;
    z = z.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    z
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            state: seed,
            cached_normal: None,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Derives an independent substream; the same `(seed, tag)` always yields
    /// the same substream regardless of draws made from `self`.
    pub fn substream(&self, tag: u64) -> SeededRng {
        SeededRng::new(mix64(self.seed ^ mix64(tag.wrapping_add(GAMMA))))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GAMMA);
        mix64(self.state)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform index in `[0, n)` by 128-bit multiply-shift.
    pub fn next_index(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// Standard normal via Box–Muller; pairs are cached so consecutive draws
    /// cost one pair of uniforms per two normals.
    pub fn next_normal(&mut self) -> f64 {
        if let Some(z) = self.cached_normal.take() {
            return z;
        }
        // u ∈ (0, 1] so the log is finite.
        let u = 1.0 - self.next_f64();
        let v = self.next_f64();
        let r = (-2.0 * u.ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * v;
        self.cached_normal = Some(r * theta.sin());
        r * theta.cos()
    }
}

/// Draws `n` i.i.d. standard normals from `rng`.
pub fn standard_normals(rng: &mut SeededRng, n: usize) -> RealVector {
    RealVector::from_vec_unchecked((0..n).map(|_| rng.next_normal()).collect())
}
