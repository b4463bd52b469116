#![allow(dead_code)]

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const GOLDEN_TABLE: &str = include_str!("../golden/substitution_table.csv");

/// One parsed row of the frozen substitution table.
pub struct GoldenRow {
    pub plain: u8,
    pub cipher: u8,
    pub key_value: u32,
}

pub fn golden_rows() -> Vec<GoldenRow> {
    let mut lines = GOLDEN_TABLE.lines();
    assert_eq!(lines.next(), Some("plain,cipher,keyvalue"));
    lines
        .map(|line| {
            let mut it = line.split(',').map(|f| f.parse::<u32>().unwrap());
            let (p, c, k) = (it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
            GoldenRow {
                plain: p as u8,
                cipher: c as u8,
                key_value: k,
            }
        })
        .collect()
}

pub fn random_bytes(len: usize, seed: u64) -> Vec<u8> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut buf = vec![0u8; len];
    rng.fill_bytes(&mut buf);
    buf
}
