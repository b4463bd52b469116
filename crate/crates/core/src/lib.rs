//! A bit-level stream cipher whose per-byte keystream is the XOR-folded GCD
//! of two parity-sequence terms selected by the byte's own bit weights.
//!
//! The crate is split into:
//!
//! - [`cipher`]: per-byte arithmetic (sums, term walk, GCD, fold).
//! - [`keycodec`]: the packed 32-bit key record and the `SKC1` key file.
//! - [`stream`]: chunked, atomic whole-file encryption and decryption.
//! - [`analysis`]: histograms, chi-square, avalanche and key-leak recovery.
//!
//! This is not a secure cipher. The keystream depends only on the plaintext
//! byte, and the key file alone reveals the plaintext.

pub mod analysis;
pub mod cipher;
pub mod error;
pub mod keycodec;
pub mod stream;

pub use analysis::{
    avalanche, avalanche_bytes, chi_square, histogram, recover_from_keys, AvalancheReport,
    ChiSquareReport, FlipBit, Histogram,
};
pub use cipher::{
    decrypt_byte, derive_key_record, encrypt_byte, fold_keystream, gcd, key_value,
    key_value_for_byte, nth_term_after, positional_sums, substitution_table, BitSums, KeyRecord,
    KeyValue, Parity, TableEntry,
};
pub use error::{Error, RecordDefect, Result};
pub use keycodec::{pack_record, read_keyfile, unpack_record, write_keyfile};
pub use stream::{decrypt_file, encrypt_file, JobReport};
