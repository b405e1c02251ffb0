use gpb_core::random::synthetic;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::format::InstanceFile;

/// Benchmark instance of length `n` with span weights on `[0, c)`, drawn
/// from ChaCha8 seeded by `seed`.
pub fn gen_synthetic(n: usize, c: f64, seed: u64) -> InstanceFile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    InstanceFile::from_instance(&synthetic(&mut rng, n, c))
}
