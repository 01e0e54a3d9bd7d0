//! Deterministic, thread-count-invariant Monte Carlo sample streams.
//!
//! Every stochastic routine in this crate draws its points through
//! [`run_blocks`]. The sample index space is cut into fixed-size chunks, each
//! backed by its own ChaCha stream (`set_stream(chunk_index)` on a generator
//! seeded from the user seed). Chunks are processed in parallel and their
//! outputs merged in chunk order, so a run depends only on `(seed, samples)`
//! and never on the rayon worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Samples handled per RNG stream. Fixed: changing it changes the draw.
pub const CHUNK_SAMPLES: u64 = 1 << 14;

/// Accumulator granularity inside a chunk; jackknife error estimates are
/// built over these blocks. Must divide [`CHUNK_SAMPLES`].
pub const BLOCK_SAMPLES: u64 = 1 << 12;

/// Generator for chunk `chunk` of the stream family identified by `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Runs `job` once per block of at most [`BLOCK_SAMPLES`] samples and returns
/// the per-block outputs in global block order.
///
/// The closure receives the chunk's generator (already advanced past earlier
/// blocks of the same chunk) and the number of samples it must draw.
pub fn run_blocks<T, F>(samples: u64, seed: u64, job: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, u64) -> T + Sync,
{
    let n_chunks = samples.div_ceil(CHUNK_SAMPLES);
    let per_chunk: Vec<Vec<T>> = (0..n_chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = chunk_rng(seed, chunk);
            let chunk_len = CHUNK_SAMPLES.min(samples - chunk * CHUNK_SAMPLES);
            let mut outs = Vec::with_capacity(chunk_len.div_ceil(BLOCK_SAMPLES) as usize);
            let mut done = 0;
            while done < chunk_len {
                let n = BLOCK_SAMPLES.min(chunk_len - done);
                outs.push(job(&mut rng, n));
                done += n;
            }
            outs
        })
        .collect();
    per_chunk.into_iter().flatten().collect()
}
