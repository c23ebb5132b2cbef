//! Deterministic pseudo-random vectors for verification sweeps.

use num_complex::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::doubled::DoubledVector;
use crate::error::{Error, Result};
use crate::shift_ops::ScaledVector;

/// Sample vectors draw their indices from `[-SAMPLE_INDEX_RADIUS, SAMPLE_INDEX_RADIUS]`.
pub const SAMPLE_INDEX_RADIUS: i64 = 30;
/// Sample vectors have between 1 and this many nonzero coefficients.
pub const SAMPLE_MAX_SUPPORT: usize = 8;

/// The generator used by every seeded sweep.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A vector with `size` distinct indices in `[lo, hi]` and coefficient
/// magnitudes uniform in `[1/2, 2]`. Real vectors get a random sign,
/// complex ones a uniform phase.
pub fn random_vector<R: Rng + ?Sized>(
    rng: &mut R,
    size: usize,
    lo: i64,
    hi: i64,
    complex: bool,
) -> Result<ScaledVector> {
    if lo > hi {
        return Err(Error::Argument(format!("empty index range [{lo}, {hi}]")));
    }
    let span = usize::try_from(hi.abs_diff(lo))
        .ok()
        .and_then(|s| s.checked_add(1))
        .ok_or_else(|| Error::Range(format!("index range [{lo}, {hi}] too wide")))?;
    if size == 0 || size > span {
        return Err(Error::Argument(format!("cannot draw {size} distinct indices from [{lo}, {hi}]")));
    }
    let picks = sample(rng, span, size);
    let entries: Vec<(i64, Complex64)> = picks
        .into_iter()
        .map(|offset| {
            let magnitude = rng.gen_range(0.5..=2.0);
            let coeff = if complex {
                Complex64::from_polar(magnitude, rng.gen_range(0.0..std::f64::consts::TAU))
            } else if rng.gen_bool(0.5) {
                Complex64::new(magnitude, 0.0)
            } else {
                Complex64::new(-magnitude, 0.0)
            };
            (lo + offset as i64, coeff)
        })
        .collect();
    ScaledVector::from_entries(entries)
}

/// A vector with support size uniform in `[1, 8]` and indices in `[-30, 30]`.
pub fn sample_vector<R: Rng + ?Sized>(rng: &mut R, complex: bool) -> ScaledVector {
    let size = rng.gen_range(1..=SAMPLE_MAX_SUPPORT);
    random_vector(rng, size, -SAMPLE_INDEX_RADIUS, SAMPLE_INDEX_RADIUS, complex).expect("sample parameters are valid")
}

/// A doubled vector with both components drawn by [`sample_vector`].
pub fn sample_doubled<R: Rng + ?Sized>(rng: &mut R, complex: bool) -> DoubledVector {
    let x = sample_vector(rng, complex);
    let y = sample_vector(rng, complex);
    DoubledVector::new(x, y)
}
