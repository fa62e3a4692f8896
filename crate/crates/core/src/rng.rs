use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// ChaCha8 keyed by `seed`, on an independent `stream`. The generator is
/// counter based, so draws are identical on every platform.
pub(crate) fn seeded(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
