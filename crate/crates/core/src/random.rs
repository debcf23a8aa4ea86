//! Seeded generators for test corpora and benchmarks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::hypermatrix::Hypermatrix;
use crate::scalar::Scalar;

/// The crate's reproducible RNG; identical seeds give identical streams
/// on every platform.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Entries drawn uniformly from `lo..=hi`.
pub fn random_hypermatrix<S: Scalar, R: Rng + ?Sized>(
    dims: &[usize],
    lo: i64,
    hi: i64,
    ctx: S::Context,
    rng: &mut R,
) -> Hypermatrix<S> {
    let c = ctx.clone();
    Hypermatrix::from_fn(dims.to_vec(), ctx, |_| S::from_i64(rng.gen_range(lo..=hi), &c))
        .expect("caller passes positive dims")
}

/// 0/1 entries, each 1 with probability `density`.
pub fn random_binary<S: Scalar, R: Rng + ?Sized>(
    dims: &[usize],
    density: f64,
    ctx: S::Context,
    rng: &mut R,
) -> Hypermatrix<S> {
    let c = ctx.clone();
    Hypermatrix::from_fn(dims.to_vec(), ctx, |_| S::from_i64(i64::from(rng.gen_bool(density)), &c))
        .expect("caller passes positive dims")
}
