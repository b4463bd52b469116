//! Per-byte cipher arithmetic.
//!
//! Every plaintext byte is split into the weight sums of its odd and even bit
//! positions. Those sums select two terms of an odd or even integer sequence
//! that starts just past the byte value, and the GCD of the two terms is the
//! key value. The key value, zero-padded to whole bytes and XOR-folded, is the
//! keystream byte for that position.
//!
//! The keystream byte depends only on the plaintext byte, so the whole cipher
//! is a fixed (and non-injective) substitution; [`substitution_table`]
//! enumerates it. The per-byte [`KeyRecord`] is required for decryption, and
//! it also discloses the plaintext outright since `s_op + s_ep` is the byte.
//!
//! Conventions for degenerate inputs: the 0th term of either sequence is 0,
//! and `gcd(x, 0) = x`. Byte `0x00` therefore has key value 0 and encrypts to
//! itself.

use crate::error::RecordDefect;

/// Bits at positions 1, 3, 5, 7.
pub const ODD_POSITION_MASK: u8 = 0b1010_1010;
/// Bits at positions 0, 2, 4, 6.
pub const EVEN_POSITION_MASK: u8 = 0b0101_0101;

/// Positional weight sums of one byte.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BitSums {
    /// Sum of `2^p` over set bits at odd positions, in `0..=170`.
    pub s_op: u8,
    /// Sum of `2^p` over set bits at even positions, in `0..=85`.
    pub s_ep: u8,
}

impl BitSums {
    /// The byte these sums came from.
    pub fn byte(self) -> u8 {
        self.s_op | self.s_ep
    }
}

/// Parity of an integer sequence walked by [`nth_term_after`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

/// The five-block, 32-bit symmetric key for a single plaintext byte.
///
/// Fields are private so that every instance satisfies the block invariants:
/// `cond` is set iff `s_op > s_ep`, and `major`/`minor` hold the sums in the
/// order the condition selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct KeyRecord {
    s_op: u8,
    s_ep: u8,
    cond: bool,
    major: u8,
    minor: u8,
}

impl KeyRecord {
    /// Builds a record from raw block values, rejecting inconsistent ones.
    pub fn from_parts(
        s_op: u8,
        s_ep: u8,
        cond: bool,
        major: u8,
        minor: u8,
    ) -> Result<Self, RecordDefect> {
        if s_op & !ODD_POSITION_MASK != 0 {
            return Err(RecordDefect::OddSum(s_op));
        }
        if s_ep & !EVEN_POSITION_MASK != 0 {
            return Err(RecordDefect::EvenSum(s_ep));
        }
        if cond != (s_op > s_ep) {
            return Err(RecordDefect::Condition);
        }
        let expected = if cond { (s_op, s_ep) } else { (s_ep, s_op) };
        if (major, minor) != expected {
            return Err(RecordDefect::Ordering);
        }
        Ok(KeyRecord {
            s_op,
            s_ep,
            cond,
            major,
            minor,
        })
    }

    pub fn s_op(&self) -> u8 {
        self.s_op
    }

    pub fn s_ep(&self) -> u8 {
        self.s_ep
    }

    /// Block 3: whether `s_op > s_ep`.
    pub fn cond(&self) -> bool {
        self.cond
    }

    /// Block 4: `s_op` when the condition holds, otherwise `s_ep`.
    pub fn major(&self) -> u8 {
        self.major
    }

    /// Block 5: `s_ep` when the condition holds, otherwise `s_op`.
    pub fn minor(&self) -> u8 {
        self.minor
    }

    pub fn sums(&self) -> BitSums {
        BitSums {
            s_op: self.s_op,
            s_ep: self.s_ep,
        }
    }

    /// The plaintext byte the record was derived from.
    pub fn plaintext(&self) -> u8 {
        self.s_op + self.s_ep
    }
}

/// GCD-derived key value. Every reachable value is below 1024.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct KeyValue(pub u32);

pub fn positional_sums(b: u8) -> BitSums {
    BitSums {
        s_op: b & ODD_POSITION_MASK,
        s_ep: b & EVEN_POSITION_MASK,
    }
}

pub fn derive_key_record(b: u8) -> KeyRecord {
    let BitSums { s_op, s_ep } = positional_sums(b);
    let cond = s_op > s_ep;
    let (major, minor) = if cond { (s_op, s_ep) } else { (s_ep, s_op) };
    KeyRecord {
        s_op,
        s_ep,
        cond,
        major,
        minor,
    }
}

/// The `n`th integer of the given parity strictly greater than `start`.
///
/// `n = 0` yields 0.
pub fn nth_term_after(start: u32, n: u32, parity: Parity) -> u32 {
    if n == 0 {
        return 0;
    }
    let wanted = match parity {
        Parity::Even => 0,
        Parity::Odd => 1,
    };
    let first = if (start + 1) % 2 == wanted {
        start + 1
    } else {
        start + 2
    };
    first + 2 * (n - 1)
}

/// Euclid's algorithm; `gcd(a, 0) = a` and `gcd(0, 0) = 0`.
pub fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn key_value_from(start: u32, s_op: u32, s_ep: u32) -> KeyValue {
    let (first, second) = if s_op > s_ep {
        (
            nth_term_after(start, s_op, Parity::Even),
            nth_term_after(start, s_ep, Parity::Even),
        )
    } else {
        (
            nth_term_after(start, s_ep, Parity::Odd),
            nth_term_after(start, s_op, Parity::Odd),
        )
    };
    KeyValue(gcd(first, second))
}

/// Key value reconstructed from a record alone; the sequence start is
/// `s_op + s_ep`.
pub fn key_value(rec: &KeyRecord) -> KeyValue {
    let start = u32::from(rec.s_op) + u32::from(rec.s_ep);
    key_value_from(start, rec.s_op.into(), rec.s_ep.into())
}

/// Key value computed on the sender side, directly from the plaintext byte.
pub fn key_value_for_byte(b: u8) -> KeyValue {
    let BitSums { s_op, s_ep } = positional_sums(b);
    key_value_from(b.into(), s_op.into(), s_ep.into())
}

/// Left-pads `kv` to a whole number of bytes (at least one), splits it into
/// 8-bit blocks from the MSB and XORs the blocks together.
pub fn fold_keystream(kv: KeyValue) -> u8 {
    let mut rest = kv.0;
    let mut folded = 0u8;
    loop {
        folded ^= (rest & 0xff) as u8;
        rest >>= 8;
        if rest == 0 {
            return folded;
        }
    }
}

pub fn encrypt_byte(p: u8) -> (u8, KeyRecord) {
    let rec = derive_key_record(p);
    (p ^ fold_keystream(key_value(&rec)), rec)
}

pub fn decrypt_byte(c: u8, rec: &KeyRecord) -> u8 {
    c ^ fold_keystream(key_value(rec))
}

/// One row of the substitution table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableEntry {
    pub plain: u8,
    pub cipher: u8,
    pub record: KeyRecord,
}

impl TableEntry {
    pub fn key_value(&self) -> KeyValue {
        key_value(&self.record)
    }
}

/// `encrypt_byte` evaluated for every byte value, indexed by plaintext.
pub fn substitution_table() -> [TableEntry; 256] {
    std::array::from_fn(|i| {
        let plain = i as u8;
        let (cipher, record) = encrypt_byte(plain);
        TableEntry {
            plain,
            cipher,
            record,
        }
    })
}
