//! Seeded, stream-indexed random number generation.
//!
//! Every random draw in the crate flows through [`RngStream`], a ChaCha8
//! generator addressed by a `(seed, stream)` pair.  Identical pairs produce
//! identical sequences on every platform, and distinct streams under one
//! seed are statistically independent, so parallel work can hand stream
//! `k` to task `k` with no coordination and no order dependence.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::Scalar;

/// SplitMix64 finalizer; good avalanche behavior for deriving stream ids.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A deterministic random stream identified by `(seed, stream)`.
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    inner: ChaCha8Rng,
}

impl RngStream {
    /// Generator algorithm identifier.
    pub const ALGORITHM: &'static str = "chacha8";

    /// Opens the stream `stream` of the generator seeded with `seed`.
    pub fn new(seed: u64, stream: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream);
        RngStream {
            seed,
            stream,
            inner,
        }
    }

    /// The seed this stream was opened with.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The stream index this stream was opened with.
    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Derives an independent child stream.  The child's stream id mixes
    /// this stream's id with `index`, so different parents and different
    /// indices give distinct, reproducible streams.
    pub fn substream(&self, index: u64) -> RngStream {
        let child = splitmix64(self.stream ^ splitmix64(index.wrapping_add(1)));
        RngStream::new(self.seed, child)
    }

    /// Uniform draw from `[0, 1)` with 53-bit precision.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    /// Uniform integer in `0..bound`.
    #[inline]
    pub fn below(&mut self, bound: usize) -> usize {
        self.inner.gen_range(0..bound)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.inner.fill_bytes(dest)
    }
    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.inner.try_fill_bytes(dest)
    }
}

/// One pair of independent standard normals via the trigonometric
/// Box–Muller transform: `r = sqrt(-2 ln u1)`, angle `2π u2`, with
/// `u1 ∈ (0, 1]` so the logarithm is always finite.
pub fn standard_normal_pair(rng: &mut RngStream) -> (f64, f64) {
    let u1 = 1.0 - rng.uniform();
    let u2 = rng.uniform();
    let r = (-2.0 * u1.ln()).sqrt();
    let theta = std::f64::consts::TAU * u2;
    (r * theta.cos(), r * theta.sin())
}

/// A standard complex normal `(g1 + i g2)/√2`: mean 0, `E|z|² = 1`.
pub fn gaussian_complex(rng: &mut RngStream) -> Scalar {
    let (g1, g2) = standard_normal_pair(rng);
    Scalar::new(
        g1 * std::f64::consts::FRAC_1_SQRT_2,
        g2 * std::f64::consts::FRAC_1_SQRT_2,
    )
}
