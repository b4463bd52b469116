//! Evaluation instruments: byte histograms, Pearson chi-square between a
//! source and its ciphertext, single-bit avalanche, and plaintext recovery
//! from a key file.

use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;

use crate::cipher::encrypt_byte;
use crate::error::{Error, Result};
use crate::keycodec::KeyFileReader;
use crate::stream::CHUNK_LEN;

/// Byte frequencies of a file, indexed by byte value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    counts: [u64; 256],
}

impl Default for Histogram {
    fn default() -> Self {
        Histogram { counts: [0; 256] }
    }
}

impl Histogram {
    pub fn from_counts(counts: [u64; 256]) -> Self {
        Histogram { counts }
    }

    pub fn from_bytes(data: &[u8]) -> Self {
        let mut h = Histogram::default();
        h.add(data);
        h
    }

    pub fn from_reader<R: Read>(mut source: R) -> std::io::Result<Self> {
        let mut h = Histogram::default();
        let mut buf = vec![0u8; CHUNK_LEN];
        loop {
            match source.read(&mut buf) {
                Ok(0) => return Ok(h),
                Ok(n) => h.add(&buf[..n]),
                Err(e) if e.kind() == std::io::ErrorKind::Interrupted => {}
                Err(e) => return Err(e),
            }
        }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Histogram::from_reader(file).map_err(|e| Error::io(path, e))
    }

    pub fn add(&mut self, data: &[u8]) {
        for &b in data {
            self.counts[b as usize] += 1;
        }
    }

    pub fn counts(&self) -> &[u64; 256] {
        &self.counts
    }

    pub fn get(&self, byte: u8) -> u64 {
        self.counts[byte as usize]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Number of byte values that occur at least once.
    pub fn classes(&self) -> usize {
        self.counts.iter().filter(|&&c| c > 0).count()
    }
}

/// Byte histogram of the file at `path`.
pub fn histogram(path: &Path) -> Result<Histogram> {
    Histogram::from_file(path)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiSquareReport {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    /// Bins where the source frequency is nonzero.
    pub classes_used: usize,
}

/// Pearson's statistic `sum((f_o - f_e)^2 / f_e)` with the source file
/// supplying the expected frequencies `f_e` and the encrypted file the
/// observed `f_o`.
///
/// Bins absent from the source are skipped, and the degrees of freedom are
/// the number of remaining bins minus one.
pub fn chi_square(src: &Histogram, enc: &Histogram) -> Result<ChiSquareReport> {
    let (source_total, encrypted_total) = (src.total(), enc.total());
    if source_total != encrypted_total {
        return Err(Error::HistogramMismatch {
            source_total,
            encrypted_total,
        });
    }
    let mut statistic = 0.0;
    let mut classes_used = 0usize;
    for (&expected, &observed) in src.counts.iter().zip(enc.counts.iter()) {
        if expected == 0 {
            continue;
        }
        classes_used += 1;
        let diff = observed as f64 - expected as f64;
        statistic += diff * diff / expected as f64;
    }
    Ok(ChiSquareReport {
        statistic,
        degrees_of_freedom: classes_used.saturating_sub(1),
        classes_used,
    })
}

/// Index of the plaintext bit flipped for avalanche measurement, 0 being the
/// least significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlipBit(u8);

impl FlipBit {
    pub const DEFAULT: FlipBit = FlipBit(3);

    pub fn new(index: u8) -> Result<Self> {
        if index < 8 {
            Ok(FlipBit(index))
        } else {
            Err(Error::InvalidFlipBit(index))
        }
    }

    pub fn index(self) -> u8 {
        self.0
    }

    pub fn mask(self) -> u8 {
        1 << self.0
    }
}

impl Default for FlipBit {
    fn default() -> Self {
        FlipBit::DEFAULT
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AvalancheReport {
    pub flipped_bit: FlipBit,
    pub total_bits: u64,
    pub differing_bits: u64,
    pub percentage: f64,
}

#[derive(Default)]
struct AvalancheTally {
    bytes: u64,
    differing: u64,
}

impl AvalancheTally {
    fn add(&mut self, data: &[u8], mask: u8) {
        for &b in data {
            let (c, _) = encrypt_byte(b);
            let (flipped, _) = encrypt_byte(b ^ mask);
            self.differing += u64::from((c ^ flipped).count_ones());
        }
        self.bytes += data.len() as u64;
    }

    fn report(self, flip: FlipBit) -> Result<AvalancheReport> {
        if self.bytes == 0 {
            return Err(Error::EmptyInput);
        }
        let total_bits = 8 * self.bytes;
        Ok(AvalancheReport {
            flipped_bit: flip,
            total_bits,
            differing_bits: self.differing,
            percentage: 100.0 * self.differing as f64 / total_bits as f64,
        })
    }
}

/// Flips `flip` in every plaintext byte, re-encrypts (each byte derives a
/// fresh key record) and counts the ciphertext bits that changed.
pub fn avalanche_bytes(data: &[u8], flip: FlipBit) -> Result<AvalancheReport> {
    let mut tally = AvalancheTally::default();
    tally.add(data, flip.mask());
    tally.report(flip)
}

/// [`avalanche_bytes`] over a file, read in chunks.
pub fn avalanche(path: &Path, flip: FlipBit) -> Result<AvalancheReport> {
    let mut file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut tally = AvalancheTally::default();
    let mut buf = vec![0u8; CHUNK_LEN];
    loop {
        let n = match file.read(&mut buf) {
            Ok(0) => break,
            Ok(n) => n,
            Err(e) if e.kind() == std::io::ErrorKind::Interrupted => continue,
            Err(e) => return Err(Error::io(path, e)),
        };
        tally.add(&buf[..n], flip.mask());
    }
    tally.report(flip)
}

/// Rebuilds the plaintext from a key file alone: each record's two sums add
/// up to its plaintext byte. No ciphertext is needed.
pub fn recover_from_keys(key_in: &Path) -> Result<Vec<u8>> {
    let file = File::open(key_in).map_err(|e| Error::io(key_in, e))?;
    recover_from_reader(BufReader::new(file)).map_err(|e| e.at(key_in))
}

pub fn recover_from_reader<R: Read>(source: R) -> Result<Vec<u8>> {
    let mut reader = KeyFileReader::new(source)?;
    let mut out = Vec::with_capacity(reader.count().min(1 << 24) as usize);
    while let Some(rec) = reader.next_record()? {
        out.push(rec.plaintext());
    }
    reader.finish()?;
    Ok(out)
}
