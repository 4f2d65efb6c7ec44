//! Fixed inputs shared by the benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rbgs::poly::Polynomial;
use rbgs::sample::{random_polynomial, Bounds};

/// `count` reproducible polynomials over `n` generator pairs.
pub fn polynomials(n: usize, max_deg: usize, max_deg_r: u32, count: usize, seed: u64) -> Vec<Polynomial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = Bounds { n, max_deg, max_deg_r };
    (0..count).map(|_| random_polynomial(&mut rng, b, 4, 2)).collect()
}
