//! Corpus generators shared by the benchmarks.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Uniformly random bytes from a seeded generator.
pub fn random_corpus(len: usize, seed: u64) -> Vec<u8> {
    let mut buf = vec![0u8; len];
    ChaCha8Rng::seed_from_u64(seed).fill_bytes(&mut buf);
    buf
}

/// Repeated English text, closer to the byte distribution of a .TXT file.
pub fn text_corpus(len: usize) -> Vec<u8> {
    b"The quick brown fox jumps over the lazy dog.\n"
        .iter()
        .copied()
        .cycle()
        .take(len)
        .collect()
}
