//! Seeded random inputs for property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bform::{make_bform, BForm};
use crate::linalg::CMat;
use crate::scalar::C64;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries with real and imaginary parts uniform in `[-1, 1)`.
pub fn random_matrix<R: Rng>(n: usize, rng: &mut R) -> CMat {
    CMat::from_fn(n, n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

/// A random valid form; redraws on the (measure-zero) degenerate cases.
pub fn random_bform<R: Rng>(n: usize, rng: &mut R) -> BForm {
    loop {
        if let Ok(f) = make_bform(random_matrix(n, rng)) {
            return f;
        }
    }
}

/// Modulus in `[0.5, 2)`, uniform phase.
pub fn random_spectral<R: Rng>(rng: &mut R) -> C64 {
    C64::from_polar(rng.random_range(0.5..2.0), rng.random_range(0.0..std::f64::consts::TAU))
}

pub fn random_unit<R: Rng>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

/// Seeded `(u, v)` pairs for Yang–Baxter checks.
pub fn spectral_pairs(seed: u64, count: usize) -> Vec<(C64, C64)> {
    let mut r = rng(seed);
    (0..count).map(|_| (random_spectral(&mut r), random_spectral(&mut r))).collect()
}
