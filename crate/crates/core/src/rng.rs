//! Named random streams derived from the single experiment seed.
//!
//! Each stream is a ChaCha8 generator keyed by the seed and selected by a
//! fixed stream id, so drawing more or fewer values from one process never
//! shifts the values another process sees.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    InitialAoi = 1,
    UvArrivals = 2,
    Requests = 3,
    ContentGeneration = 4,
}

pub fn stream(seed: u64, which: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(which as u64);
    rng
}

#[derive(Debug, Clone)]
pub struct RngStreams {
    pub initial_aoi: ChaCha8Rng,
    pub uv_arrivals: ChaCha8Rng,
    pub requests: ChaCha8Rng,
    pub content_generation: ChaCha8Rng,
}

impl RngStreams {
    pub fn new(seed: u64) -> Self {
        Self {
            initial_aoi: stream(seed, Stream::InitialAoi),
            uv_arrivals: stream(seed, Stream::UvArrivals),
            requests: stream(seed, Stream::Requests),
            content_generation: stream(seed, Stream::ContentGeneration),
        }
    }
}
