//! Seeded random streams.
//!
//! Every randomized routine in the crate draws from ChaCha8 (`rand_chacha`),
//! keyed by `ChaCha8Rng::seed_from_u64(master_seed)` and split into
//! independent streams with `set_stream(stream_id)`. Work items (samples or
//! fixed-size chunks of samples) own a stream id derived from their index, so
//! results never depend on the number of worker threads.
//!
//! Uniform states are drawn by rejection on `next_u32`: values at or above
//! `floor(2^32 / n) * n` are discarded and the remainder is reduced mod `n`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Identifier recorded in experiment reports.
pub const PRNG_ID: &str = "chacha8/seed_from_u64/set_stream";

/// Generator for stream `stream` of the master seed.
pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform integer in `0..n` (`n >= 1`).
pub fn below<R: RngCore + ?Sized>(rng: &mut R, n: u32) -> u32 {
    debug_assert!(n > 0);
    let zone = (u32::MAX / n) * n;
    loop {
        let v = rng.next_u32();
        if v < zone {
            return v % n;
        }
    }
}

/// Samples per random stream in [`count_hits`].
pub const CHUNK: u64 = 4096;

/// Runs `trial` `samples` times in parallel and counts the `true` outcomes.
///
/// Sample `k` belongs to chunk `k / CHUNK`, and chunk `c` draws from stream
/// `c` of `seed`, so the count is a function of `(seed, samples)` alone.
pub fn count_hits<F>(seed: u64, samples: u64, trial: F) -> u64
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    use rayon::prelude::*;
    let chunks = samples.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream(seed, c);
            let len = CHUNK.min(samples - c * CHUNK);
            (0..len).filter(|_| trial(&mut rng)).count() as u64
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_distinct_and_reproducible() {
        let a: Vec<u32> = (0..8).map(|_| 0).scan(stream(7, 0), |r, _| Some(r.next_u32())).collect();
        let b: Vec<u32> = (0..8).map(|_| 0).scan(stream(7, 0), |r, _| Some(r.next_u32())).collect();
        let c: Vec<u32> = (0..8).map(|_| 0).scan(stream(7, 1), |r, _| Some(r.next_u32())).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn below_stays_in_range() {
        let mut rng = stream(1, 0);
        for n in 1..20 {
            for _ in 0..200 {
                assert!(below(&mut rng, n) < n);
            }
        }
    }

    #[test]
    fn hit_counts_do_not_depend_on_thread_count() {
        let trial = |r: &mut ChaCha8Rng| below(r, 7) == 0;
        let a = count_hits(5, 50_000, trial);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| count_hits(5, 50_000, trial));
        assert_eq!(a, b);
        assert_eq!(count_hits(5, 0, trial), 0);
    }
}
